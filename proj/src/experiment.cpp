#include "singularlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include "singularlab/parallel.hpp"

namespace singlab {

namespace {

struct Draw {
  std::vector<Scalar> parameters;
  ScalarVector point;
  std::string error;
};

class ParameterStream {
 public:
  ParameterStream(const UniformSampler& s, std::mt19937_64& rng) : s_(s), rng_(rng) {
    if (s.bits < 1 || s.bits > 30) throw Error(Errc::InvalidInput, "sampler bits must be in 1..30");
    if (!(s.lo < s.hi)) throw Error(Errc::InvalidInput, "sampler needs lo < hi");
    if (s.offset_radicand < 0) throw Error(Errc::InvalidInput, "offset radicand must be nonnegative");
    if (s.offset_radicand > 0) {
      Scalar root = Scalar::sqrt(Rational(s.offset_radicand));
      if (root.is_rational()) throw Error(Errc::InvalidInput, "offset radicand must not be a perfect square");
      frac_ = root - Scalar(root.floor());
    }
  }

  Scalar next() {
    const Integer scale = Integer(1) << s_.bits;
    Integer u = bits();
    Scalar t(Rational(u, scale));
    if (frac_) {
      Integer v = bits() + 1;
      t += *frac_ * Scalar(Rational(v, scale * scale));
    }
    return Scalar(s_.lo) + Scalar(Rational(s_.hi - s_.lo)) * t;
  }

 private:
  Integer bits() { return Integer(static_cast<unsigned long>(rng_() >> (64 - s_.bits))); }

  const UniformSampler& s_;
  std::mt19937_64& rng_;
  std::optional<Scalar> frac_;
};

Scalar eval_poly(const std::vector<Scalar>& coeffs, const Scalar& t) {
  Scalar acc(0);
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * t + coeffs[i];
  return acc;
}

// Coefficients of y_{s+m} - a_0m - sum_i y_i A_{i+1,m} as a polynomial in t.
std::vector<std::vector<Scalar>> curve_residual(const SubspaceParam& P, const CurveSampler& c) {
  const int n = P.n(), s = P.s();
  if (static_cast<int>(c.coordinates.size()) != n) {
    throw Error(Errc::InvalidInput, "curve needs one polynomial per coordinate");
  }
  std::size_t degree = 1;
  for (const auto& f : c.coordinates) degree = std::max(degree, f.size());
  auto coeff = [&](int i, std::size_t e) { return e < c.coordinates[i].size() ? c.coordinates[i][e] : Scalar(0); };
  std::vector<std::vector<Scalar>> out;
  for (int m = 0; m < n - s; ++m) {
    std::vector<Scalar> r(degree, Scalar(0));
    for (std::size_t e = 0; e < degree; ++e) {
      Scalar v = coeff(s + m, e);
      if (e == 0) v -= P.A()(0, m);
      for (int i = 0; i < s; ++i) v -= coeff(i, e) * P.A()(i + 1, m);
      r[e] = v;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Draw> draw_all(const SurveySpec& spec) {
  std::mt19937_64 rng(spec.seed);
  const SubspaceParam& P = spec.subspace;
  std::vector<Draw> draws(spec.sample_count);
  if (const auto* u = std::get_if<UniformSampler>(&spec.sampler)) {
    ParameterStream stream(*u, rng);
    for (auto& d : draws) {
      ScalarVector x(P.s());
      for (int i = 0; i < P.s(); ++i) {
        d.parameters.push_back(stream.next());
        x(i) = d.parameters.back();
      }
      d.point = embed_point(P, x);
      bool exact = std::all_of(d.point.data(), d.point.data() + d.point.size(), [](const Scalar& v) { return v.is_exact(); });
      if (!exact) continue;
      for (const Scalar& r : subspace_residual(P, d.point))
        if (!r.is_exact_zero()) d.error = "NOT_ON_SUBSPACE: sampled point leaves L_A";
    }
    return draws;
  }
  const auto& curve = std::get<CurveSampler>(spec.sampler);
  auto residual = curve_residual(P, curve);
  ParameterStream stream(curve.parameter, rng);
  for (auto& d : draws) {
    Scalar t = stream.next();
    d.parameters.push_back(t);
    d.point = ScalarVector(P.n());
    for (int i = 0; i < P.n(); ++i) d.point(i) = eval_poly(curve.coordinates[static_cast<std::size_t>(i)], t);
    try {
      for (const auto& r : residual)
        if (eval_poly(r, t) != Scalar(0)) d.error = "NOT_ON_SUBSPACE: curve point leaves L_A";
    } catch (const Error& e) {
      d.error = e.what();
    }
  }
  return draws;
}

std::string sampler_name(const SurveySpec& spec) {
  return std::holds_alternative<UniformSampler>(spec.sampler) ? "uniform" : "curve";
}

std::string join(const std::vector<Scalar>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + v[i].to_string();
  return out;
}

std::string join(const ScalarVector& v) {
  return join(std::vector<Scalar>(v.data(), v.data() + v.size()));
}

std::string join(const std::vector<Integer>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + v[i].get_str();
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

std::string rule_name(BoxRule r) { return r == BoxRule::LeqQ ? "leq_Q" : "strict_cQ"; }

}  // namespace

CurveSampler graph_curve(const SubspaceParam& P, UniformSampler parameter) {
  if (P.s() != 1) throw Error(Errc::InvalidInput, "graph curve needs a hyperplane parametrized by one coordinate");
  CurveSampler c;
  c.parameter = std::move(parameter);
  c.coordinates.push_back({Scalar(0), Scalar(1)});
  for (int m = 0; m < P.n() - 1; ++m) c.coordinates.push_back({P.A()(0, m), P.A()(1, m)});
  return c;
}

std::vector<Scalar> subspace_residual(const SubspaceParam& P, const ScalarVector& y) {
  if (y.size() != P.n()) throw Error(Errc::InvalidInput, "point has the wrong dimension");
  std::vector<Scalar> out;
  for (int m = 0; m < P.n() - P.s(); ++m) {
    Scalar v = y(P.s() + m) - P.A()(0, m);
    for (int i = 0; i < P.s(); ++i) v -= y(i) * P.A()(i + 1, m);
    out.push_back(v);
  }
  return out;
}

double SurveyReport::fraction(VerdictStatus s) const {
  const double total = static_cast<double>(samples.size());
  if (total == 0) return 0;
  switch (s) {
    case VerdictStatus::Witnessed: return static_cast<double>(witnessed) / total;
    case VerdictStatus::Refuted: return static_cast<double>(refuted) / total;
    case VerdictStatus::Inconclusive: return static_cast<double>(inconclusive) / total;
  }
  return 0;
}

SurveyReport run_survey(const SurveySpec& spec) {
  if (spec.sample_count < 1) throw Error(Errc::InvalidInput, "survey needs at least one sample");
  validate_schedule(spec.schedule);
  if (!(Scalar(0) < spec.c)) throw Error(Errc::InvalidInput, "c must be positive");

  SurveyReport report;
  report.seed = spec.seed;
  report.sampler = sampler_name(spec);
  report.horizon = {spec.schedule, spec.c, spec.omega.value_or(Rational(spec.subspace.n())),
                    resolve_onset(spec.schedule, spec.onset), spec.rule};

  std::vector<Draw> draws = draw_all(spec);
  report.samples = parallel_map(draws.size(), spec.threads, [&](std::size_t i) {
    SampleResult r;
    r.index = i;
    r.parameters = draws[i].parameters;
    r.point = draws[i].point;
    if (!draws[i].error.empty()) {
      r.verdict.status = VerdictStatus::Inconclusive;
      r.verdict.reason = draws[i].error;
      return r;
    }
    try {
      r.verdict = singular_test({row_matrix(r.point), spec.c, report.horizon.omega, spec.schedule, spec.onset, spec.rule},
                                spec.search);
    } catch (const Error& e) {
      r.verdict = HorizonVerdict{};
      r.verdict.status = VerdictStatus::Inconclusive;
      r.verdict.reason = e.what();
    }
    return r;
  });
  for (const auto& s : report.samples) {
    switch (s.verdict.status) {
      case VerdictStatus::Witnessed: ++report.witnessed; break;
      case VerdictStatus::Refuted: ++report.refuted; break;
      case VerdictStatus::Inconclusive: ++report.inconclusive; break;
    }
  }
  return report;
}

SurveyDiff compare_surveys(const SurveyReport& a, const SurveyReport& b, double tolerance) {
  if (!(a.horizon == b.horizon)) throw Error(Errc::HorizonMismatch, "surveys were run on different horizons");
  SurveyDiff d;
  d.witnessed = b.fraction(VerdictStatus::Witnessed) - a.fraction(VerdictStatus::Witnessed);
  d.refuted = b.fraction(VerdictStatus::Refuted) - a.fraction(VerdictStatus::Refuted);
  d.inconclusive = b.fraction(VerdictStatus::Inconclusive) - a.fraction(VerdictStatus::Inconclusive);
  d.max_abs = std::max({std::fabs(d.witnessed), std::fabs(d.refuted), std::fabs(d.inconclusive)});
  d.tolerance = tolerance;
  d.exceeds = d.max_abs > tolerance;
  return d;
}

void write_survey_csv(const SurveyReport& report, std::ostream& out) {
  out << "index,parameters,point,verdict,refuting_Q,witness_q,witness_err,reason\n";
  for (const auto& s : report.samples) {
    std::string refuting = s.verdict.refuting_Q ? std::to_string(*s.verdict.refuting_Q) : "";
    std::string wq, werr;
    if (s.verdict.status == VerdictStatus::Witnessed && !s.verdict.records.empty() && s.verdict.records.back().best) {
      const auto& best = *s.verdict.records.back().best;
      wq = join(best.q);
      std::ostringstream e;
      e.precision(6);
      e << best.err.to_double();
      werr = e.str();
    }
    out << s.index << ',' << csv_field(join(s.parameters)) << ',' << csv_field(join(s.point)) << ','
        << status_name(s.verdict.status) << ',' << refuting << ',' << csv_field(wq) << ',' << werr << ','
        << csv_field(s.verdict.reason) << '\n';
  }
}

nlohmann::json survey_json(const SurveyReport& report) {
  nlohmann::json j;
  j["sampler"] = report.sampler;
  j["seed"] = report.seed;
  j["samples"] = report.samples.size();
  j["counts"] = {{"WITNESSED", report.witnessed}, {"REFUTED", report.refuted}, {"INCONCLUSIVE", report.inconclusive}};
  j["fractions"] = {{"WITNESSED", report.fraction(VerdictStatus::Witnessed)},
                    {"REFUTED", report.fraction(VerdictStatus::Refuted)},
                    {"INCONCLUSIVE", report.fraction(VerdictStatus::Inconclusive)}};
  j["horizon"] = {{"schedule", report.horizon.schedule},
                  {"c", report.horizon.c.to_string()},
                  {"omega", rational_to_string(report.horizon.omega)},
                  {"onset_index", report.horizon.onset},
                  {"onset_Q", report.horizon.schedule.at(report.horizon.onset)},
                  {"box_rule", rule_name(report.horizon.rule)}};
  return j;
}

nlohmann::json diff_json(const SurveyDiff& d) {
  return {{"delta", {{"WITNESSED", d.witnessed}, {"REFUTED", d.refuted}, {"INCONCLUSIVE", d.inconclusive}}},
          {"max_abs", d.max_abs},
          {"tolerance", d.tolerance},
          {"exceeds", d.exceeds}};
}

}  // namespace singlab
