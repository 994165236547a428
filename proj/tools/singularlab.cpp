#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "selftest.hpp"
#include "singularlab/experiment.hpp"
#include "singularlab/flow.hpp"
#include "singularlab/io.hpp"
#include "singularlab/subspace.hpp"

using namespace singlab;
using nlohmann::json;

namespace {

struct Globals {
  std::optional<std::string> config_path;
  std::optional<int> threads;
  Config config;
};

struct Run {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

std::string out_path(const Globals& g, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute() || g.config.output_dir == ".") return path;
  return (std::filesystem::path(g.config.output_dir) / p).string();
}

json meta(const Globals& g, const std::string& command, json horizon) {
  return {{"version", version_string()}, {"command", command}, {"config", config_json(g.config)}, {"horizon", horizon}};
}

// Deterministic payload goes to `path`; timing goes to a sidecar so repeated
// runs leave byte-identical primary outputs.
void emit(const Globals& g, const Run& run, const std::optional<std::string>& path, const std::string& text,
          const std::string& command) {
  if (!path) {
    std::cout << text;
    return;
  }
  const std::string target = out_path(g, *path);
  write_text_file(target, text);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - run.start).count();
  write_text_file(target + ".run.json",
                  json{{"version", version_string()}, {"command", command}, {"wall_clock_seconds", secs}}.dump(2) + "\n");
  std::cerr << "wrote " << target << '\n';
}

std::vector<long> schedule_from(const Globals& g, const std::optional<std::string>& text, std::optional<long> qmax,
                                int points, const std::vector<long>& fallback) {
  if (text) return parse_schedule(*text);
  if (qmax) {
    if (*qmax < 1) throw Error(Errc::InvalidInput, "--qmax must be positive");
    if (points < 1) throw Error(Errc::InvalidInput, "--qpoints must be positive");
    std::vector<long> out;
    for (int i = points - 1; i >= 0; --i) {
      long Q = std::max(1L, *qmax >> i);
      if (out.empty() || Q > out.back()) out.push_back(Q);
    }
    return out;
  }
  if (!g.config.schedule.empty()) return g.config.schedule;
  return fallback;
}

ScalarMatrix point_or_matrix(const std::optional<std::string>& x, const std::optional<std::string>& matrix) {
  if (x && matrix) throw Error(Errc::InvalidInput, "give either --x or --matrix, not both");
  if (x) {
    auto v = parse_scalar_list(*x);
    ScalarVector vec(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) vec(static_cast<Eigen::Index>(i)) = v[i];
    return row_matrix(vec);
  }
  if (matrix) return parse_matrix(*matrix);
  throw Error(Errc::InvalidInput, "one of --x or --matrix is required");
}

SubspaceParam subspace_from(const std::string& text) {
  ScalarMatrix A = parse_matrix(text);
  const int s = static_cast<int>(A.rows()) - 1;
  return SubspaceParam(static_cast<int>(A.cols()) + s, s, A);
}

BoxRule rule_from(const std::string& name) {
  if (name == "leq") return BoxRule::LeqQ;
  if (name == "strict") return BoxRule::StrictCQ;
  throw Error(Errc::InvalidInput, "--rule must be leq or strict");
}

std::string rule_text(BoxRule r) { return r == BoxRule::LeqQ ? "leq" : "strict"; }

json horizon_json(const std::vector<long>& schedule, const Scalar& c, const Rational& omega, std::size_t onset) {
  return {{"schedule", schedule}, {"c", c.to_string()}, {"omega", rational_to_string(omega)}, {"onset_index", onset}};
}

int budget_exit(const Error& e) {
  return e.code() == Errc::BoxOverflow || e.code() == Errc::DimensionTooLarge ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  // Accept the module-prefixed spelling "singularlab flow delta-profile ...".
  std::vector<char*> args(argv, argv + argc);
  if (args.size() > 2) {
    std::string first = args[1];
    if (first == "flow" || first == "dioph" || first == "subspace" || first == "experiment") args.erase(args.begin() + 1);
  }

  CLI::App app{"Exact and horizon-bounded computations for singular vectors on affine subspaces", "singularlab"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "key = value config file (default: $SINGULARLAB_CONFIG)");
  app.add_option("--threads", g.threads, "worker threads for module-level parallel maps")->check(CLI::PositiveNumber);

  // delta-profile
  auto* dp = app.add_subcommand("delta-profile", "shortest vector of g_k u_x Z^{n+1} for k = 0..kmax");
  std::string dp_x;
  std::optional<int> dp_n;
  std::optional<std::string> dp_base, dp_eps, dp_out;
  long dp_kmax = 20;
  dp->add_option("--x", dp_x, "point, comma separated scalars")->required();
  dp->add_option("--n", dp_n, "dimension (checked against --x)");
  dp->add_option("--base", dp_base, "flow base (default from config)");
  dp->add_option("--kmax", dp_kmax, "last flow time")->check(CLI::NonNegativeNumber);
  dp->add_option("--eps", dp_eps, "classify the profile with this threshold");
  dp->add_option("--out", dp_out, "CSV path (default stdout)");

  // singular-test
  auto* st = app.add_subcommand("singular-test", "horizon verdict for |Aq + p| < c/Q^omega, |q| in the box");
  std::optional<std::string> st_x, st_matrix, st_omega, st_qs, st_out;
  std::string st_c = "1/10", st_rule = "leq";
  std::optional<long> st_qmax;
  std::optional<std::size_t> st_onset;
  int st_points = 8;
  st->add_option("--x", st_x, "point (one row q.x + q_0)");
  st->add_option("--matrix", st_matrix, "matrix, inline a,b;c,d or JSON file");
  st->add_option("--omega", st_omega, "exponent (default l/k, so n for a point)");
  st->add_option("--c", st_c, "constant c");
  st->add_option("--qmax", st_qmax, "largest Q; the schedule halves down from it");
  st->add_option("--qpoints", st_points, "schedule length with --qmax");
  st->add_option("--qschedule", st_qs, "explicit schedule, comma separated");
  st->add_option("--onset", st_onset, "first schedule index that must be solved");
  st->add_option("--rule", st_rule, "box rule: leq (|q| <= Q) or strict (|q| < cQ)");
  st->add_option("--out", st_out, "JSON path (default stdout)");

  // omega-hat
  auto* oh = app.add_subcommand("omega-hat", "horizon estimate of the uniform exponent");
  std::optional<std::string> oh_x, oh_matrix, oh_qs, oh_out;
  std::optional<long> oh_qmax;
  int oh_points = 12;
  oh->add_option("--x", oh_x, "point");
  oh->add_option("--matrix", oh_matrix, "matrix, inline or JSON file");
  oh->add_option("--qmax", oh_qmax, "largest Q");
  oh->add_option("--qpoints", oh_points, "schedule length with --qmax");
  oh->add_option("--qschedule", oh_qs, "explicit schedule");
  oh->add_option("--out", oh_out, "JSON path (default stdout)");

  // check2star
  auto* cs = app.add_subcommand("check2star", "search for small solutions of the subspace condition");
  std::string cs_A, cs_c = "1/10", cs_mode = "two_star", cs_proj = "pi_bullet";
  std::optional<std::string> cs_qs, cs_j, cs_omega, cs_out;
  std::optional<std::size_t> cs_onset;
  std::optional<std::uint64_t> cs_budget;
  std::size_t cs_cap = 16;
  cs->add_option("--A", cs_A, "parametrizing matrix, (s+1) x (n-s)")->required();
  cs->add_option("--c", cs_c, "constant c");
  cs->add_option("--qschedule", cs_qs, "schedule, comma separated");
  cs->add_option("--mode", cs_mode, "two_star or omega_j");
  cs->add_option("--omega", cs_omega, "exponent for omega_j");
  cs->add_option("--j", cs_j, "grades, comma separated (default 1..n-s)");
  cs->add_option("--projection", cs_proj, "pi_bullet or pi");
  cs->add_option("--onset", cs_onset, "first schedule index that matters");
  cs->add_option("--budget", cs_budget, "node budget per (Q, j)");
  cs->add_option("--certificates", cs_cap, "certificates kept per (Q, j)");
  cs->add_option("--out", cs_out, "JSON path (default stdout)");

  // main3
  auto* m3 = app.add_subcommand("main3", "n-singularity vs the subspace condition for multiple rows or columns");
  std::string m3_A, m3_c = "1/10";
  std::optional<std::string> m3_qs, m3_out;
  std::optional<std::uint64_t> m3_budget;
  m3->add_option("--A", m3_A, "parametrizing matrix")->required();
  m3->add_option("--c", m3_c, "constant c");
  m3->add_option("--qschedule", m3_qs, "schedule");
  m3->add_option("--budget", m3_budget, "node budget");
  m3->add_option("--out", m3_out, "JSON path (default stdout)");

  // survey
  auto* sv = app.add_subcommand("survey", "Monte Carlo horizon verdicts for points of L_A");
  std::string sv_A, sv_c = "1/20", sv_sampler = "uniform", sv_lo = "0", sv_hi = "1", sv_rule = "leq";
  std::optional<std::string> sv_qs, sv_omega, sv_out;
  std::size_t sv_samples = 100;
  std::optional<std::uint64_t> sv_seed;
  int sv_bits = 20;
  long sv_radicand = 5;
  sv->add_option("--A", sv_A, "parametrizing matrix")->required();
  sv->add_option("--samples", sv_samples, "sample count");
  sv->add_option("--seed", sv_seed, "seed (default from config)");
  sv->add_option("--sampler", sv_sampler, "uniform or curve (hyperplanes only)");
  sv->add_option("--lo", sv_lo, "parameter range start");
  sv->add_option("--hi", sv_hi, "parameter range end");
  sv->add_option("--bits", sv_bits, "dyadic resolution");
  sv->add_option("--offset-radicand", sv_radicand, "irrational offset radicand, 0 for none");
  sv->add_option("--c", sv_c, "constant c");
  sv->add_option("--omega", sv_omega, "exponent (default n)");
  sv->add_option("--qschedule", sv_qs, "schedule");
  sv->add_option("--rule", sv_rule, "leq or strict");
  sv->add_option("--out", sv_out, "output prefix: writes PREFIX.csv and PREFIX.json (default: JSON to stdout)");

  auto* self = app.add_subcommand("selftest", "run the small exhaustive oracle suites");

  try {
    app.parse(static_cast<int>(args.size()), args.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  Run run;
  try {
    g.config = resolve_config(g.config_path);
    if (g.threads) g.config.threads = *g.threads;
    set_default_precision(g.config.precision_bits);
    const int threads = g.config.threads;

    if (*dp) {
      auto xs = parse_scalar_list(dp_x);
      if (dp_n && *dp_n != static_cast<int>(xs.size())) throw Error(Errc::InvalidInput, "--n does not match --x");
      ScalarVector x(static_cast<Eigen::Index>(xs.size()));
      for (std::size_t i = 0; i < xs.size(); ++i) x(static_cast<Eigen::Index>(i)) = xs[i];
      FlowParams p{static_cast<int>(xs.size()), dp_base ? Scalar::parse(*dp_base) : g.config.base, dp_kmax};
      DeltaProfile prof = dp_eps ? delta_profile(x, p, Scalar::parse(*dp_eps), svp_options(g.config), threads)
                                 : delta_profile(x, p, svp_options(g.config), threads);
      std::ostringstream csv;
      csv << "k,delta_num,delta_den\n";
      for (const auto& e : prof.values) {
        auto [num, den] = fraction_form(e.delta);
        csv << e.k << ',' << num << ',' << den << '\n';
      }
      json h = {{"n", p.n}, {"base", p.base.to_string()}, {"k_max", p.k_max}, {"x", vector_json(x)}};
      if (prof.classification) {
        h["classification"] = {{"kind", divergence_name(prof.classification->kind)},
                               {"floor", prof.classification->floor.to_string()},
                               {"eps", prof.classification->eps.to_string()}};
        std::cerr << "classification: " << divergence_name(prof.classification->kind) << '\n';
      }
      if (dp_out) write_text_file(out_path(g, *dp_out) + ".meta.json", meta(g, "delta-profile", h).dump(2) + "\n");
      emit(g, run, dp_out, csv.str(), "delta-profile");
      return 0;
    }

    if (*st) {
      ScalarMatrix A = point_or_matrix(st_x, st_matrix);
      SingularityQuery q;
      q.A = A;
      q.c = Scalar::parse(st_c);
      q.omega = st_omega ? parse_rational(*st_omega) : Rational(A.cols(), A.rows());
      q.schedule = schedule_from(g, st_qs, st_qmax, st_points, {10, 100, 1000, 10000});
      q.onset = st_onset;
      q.rule = rule_from(st_rule);
      HorizonVerdict v = singular_test(q, search_options(g.config));
      json out = {{"meta", meta(g, "singular-test", horizon_json(q.schedule, q.c, q.omega, v.onset))},
                  {"box_rule", rule_text(q.rule)},
                  {"matrix", matrix_json(A)},
                  {"verdict", verdict_json(v)}};
      std::cerr << "verdict: " << status_name(v.status);
      if (v.refuting_Q) std::cerr << " (no solution at Q = " << *v.refuting_Q << ")";
      if (!v.reason.empty()) std::cerr << " (" << v.reason << ")";
      std::cerr << '\n';
      emit(g, run, st_out, out.dump(2) + "\n", "singular-test");
      return 0;
    }

    if (*oh) {
      ScalarMatrix A = point_or_matrix(oh_x, oh_matrix);
      auto schedule = schedule_from(g, oh_qs, oh_qmax, oh_points, {16, 64, 256, 1024, 4096, 16384, 65536});
      OmegaHatEstimate est = omega_hat_estimate(A, schedule, search_options(g.config));
      json per = json::array();
      for (const auto& [Q, w] : est.per_Q) per.push_back({{"Q", Q}, {"omega", std::isinf(w) ? json("inf") : json(w)}});
      json out = {{"meta", meta(g, "omega-hat", {{"schedule", schedule}})},
                  {"matrix", matrix_json(A)},
                  {"per_Q", per},
                  {"degenerate", est.degenerate},
                  {"summary", est.summary_text}};
      out["degenerate_from"] = est.degenerate_from ? json(*est.degenerate_from) : json();
      std::cerr << "omega-hat: " << est.summary_text << '\n';
      emit(g, run, oh_out, out.dump(2) + "\n", "omega-hat");
      return 0;
    }

    if (*cs) {
      ConditionQuery q(subspace_from(cs_A));
      q.c = Scalar::parse(cs_c);
      q.schedule = schedule_from(g, cs_qs, std::nullopt, 0, {10, 100, 1000});
      if (cs_mode == "two_star") {
        q.mode = ExponentMode::TwoStar;
      } else if (cs_mode == "omega_j") {
        q.mode = ExponentMode::OmegaJ;
        if (!cs_omega) throw Error(Errc::InvalidInput, "--mode omega_j needs --omega");
      } else {
        throw Error(Errc::InvalidInput, "--mode must be two_star or omega_j");
      }
      if (cs_omega) q.omega = parse_rational(*cs_omega);
      if (cs_proj == "pi_bullet") {
        q.projection = ProjectionMode::PiBullet;
      } else if (cs_proj == "pi") {
        q.projection = ProjectionMode::Pi;
      } else {
        throw Error(Errc::InvalidInput, "--projection must be pi_bullet or pi");
      }
      if (cs_j)
        for (long j : parse_schedule(*cs_j)) q.j_range.push_back(static_cast<int>(j));
      q.onset = cs_onset;
      q.budget = cs_budget.value_or(g.config.condition_budget);
      q.certificate_cap = cs_cap;
      q.threads = threads;
      ConditionReport rep = condition_check(q);
      json records = json::array();
      for (const auto& r : rep.records) {
        json certs = json::array();
        for (const auto& w : r.certificates) certs.push_back(multivector_json(w));
        records.push_back({{"Q", r.Q},
                           {"j", r.j},
                           {"solvable", r.solvable},
                           {"solution_count", r.solution_count},
                           {"nodes", r.nodes},
                           {"first_threshold", r.first_threshold},
                           {"second_threshold", r.second_threshold},
                           {"certificates", certs}});
      }
      json h = horizon_json(q.schedule, q.c, q.omega, rep.onset);
      h["mode"] = cs_mode;
      h["projection"] = cs_proj;
      json out = {{"meta", meta(g, "check2star", h)},
                  {"A", matrix_json(q.P.A())},
                  {"n", q.P.n()},
                  {"s", q.P.s()},
                  {"status", condition_status_name(rep.status)},
                  {"records", records}};
      out["holding_Q"] = rep.holding_Q ? json(*rep.holding_Q) : json();
      if (!rep.reason.empty()) out["reason"] = rep.reason;
      std::cerr << "condition: " << condition_status_name(rep.status) << '\n';
      emit(g, run, cs_out, out.dump(2) + "\n", "check2star");
      return 0;
    }

    if (*m3) {
      SubspaceParam P = subspace_from(m3_A);
      Main3Options o;
      o.c = Scalar::parse(m3_c);
      if (m3_qs) o.schedule = parse_schedule(*m3_qs);
      o.budget = m3_budget.value_or(g.config.condition_budget);
      o.threads = threads;
      Main3Report r = theorem_main3_pipeline(P, o);
      json steps = json::array();
      for (const auto& s : r.steps) steps.push_back({{"name", s.name}, {"status", s.status}, {"detail", s.detail}});
      const char* shape = r.shape == Main3Shape::Rows ? "rows" : (r.shape == Main3Shape::Columns ? "columns" : "none");
      json out = {{"meta", meta(g, "main3", horizon_json(o.schedule, o.c, Rational(P.n()), 0))},
                  {"A", matrix_json(P.A())},
                  {"shape", shape},
                  {"applicable", r.applicable},
                  {"n_singular_at_horizon", r.n_singular_at_horizon},
                  {"condition_holds_at_horizon", r.condition_holds_at_horizon},
                  {"consistent", r.consistent},
                  {"steps", steps}};
      std::cerr << "main3: " << (r.applicable ? (r.consistent ? "consistent" : "INCONSISTENT") : "not applicable")
                << '\n';
      emit(g, run, m3_out, out.dump(2) + "\n", "main3");
      return 0;
    }

    if (*sv) {
      SurveySpec spec(subspace_from(sv_A));
      UniformSampler u{parse_rational(sv_lo), parse_rational(sv_hi), sv_bits, sv_radicand};
      if (sv_sampler == "uniform") {
        spec.sampler = u;
      } else if (sv_sampler == "curve") {
        spec.sampler = graph_curve(spec.subspace, u);
      } else {
        throw Error(Errc::InvalidInput, "--sampler must be uniform or curve");
      }
      spec.sample_count = sv_samples;
      spec.seed = sv_seed.value_or(g.config.seed);
      spec.c = Scalar::parse(sv_c);
      if (sv_omega) spec.omega = parse_rational(*sv_omega);
      spec.schedule = schedule_from(g, sv_qs, std::nullopt, 0, spec.schedule);
      spec.rule = rule_from(sv_rule);
      spec.search = search_options(g.config);
      spec.threads = threads;
      SurveyReport rep = run_survey(spec);
      json agg = survey_json(rep);
      json h = agg["horizon"];
      json out = {{"meta", meta(g, "survey", h)}, {"A", matrix_json(spec.subspace.A())}, {"survey", agg}};
      std::cerr << "survey: " << rep.witnessed << " WITNESSED, " << rep.refuted << " REFUTED, " << rep.inconclusive
                << " INCONCLUSIVE\n";
      if (sv_out) {
        std::ostringstream csv;
        write_survey_csv(rep, csv);
        emit(g, run, *sv_out + ".csv", csv.str(), "survey");
        emit(g, run, *sv_out + ".json", out.dump(2) + "\n", "survey");
      } else {
        std::cout << out.dump(2) << '\n';
      }
      return 0;
    }

    if (*self) {
      int failed = tool::run_selftest(std::cout, threads);
      return failed == 0 ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return budget_exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
