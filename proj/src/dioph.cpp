#include "singularlab/dioph.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace singlab {

namespace {

constexpr double kUlp = 0x1p-52;

struct DoubleMatrix {
  int rows = 0, cols = 0;
  std::vector<DoubleBound> v;
  const DoubleBound& at(int i, int j) const { return v[static_cast<std::size_t>(i * cols + j)]; }
};

DoubleMatrix double_bounds(const ScalarMatrix& A) {
  DoubleMatrix d;
  d.rows = static_cast<int>(A.rows());
  d.cols = static_cast<int>(A.cols());
  for (int i = 0; i < d.rows; ++i)
    for (int j = 0; j < d.cols; ++j) d.v.push_back(to_double_bound(A(i, j)));
  return d;
}

// Lower bound on |Aq + p| (nearest p) from doubles; -1 when no information.
double lower_bound_err(const DoubleMatrix& d, const std::vector<long>& q) {
  double lower = -1;
  for (int i = 0; i < d.rows; ++i) {
    double s = 0, mag = 0, err = 0;
    for (int j = 0; j < d.cols; ++j) {
      const DoubleBound& b = d.at(i, j);
      double qj = static_cast<double>(q[static_cast<std::size_t>(j)]);
      s += b.value * qj;
      mag += std::fabs(b.value * qj);
      err += b.error * std::fabs(qj);
    }
    err += mag * kUlp * (d.cols + 2) + 1e-300;
    double dist = std::fabs(s - std::nearbyint(s));
    lower = std::max(lower, dist - err);
  }
  return lower;
}

double upper_of(const Scalar& x) {
  DoubleBound b = to_double_bound(x);
  return std::fabs(b.value) + b.error;
}

struct Candidate {
  Approximation a;
  // Row attaining the sup norm and the sign of its residual.
  Eigen::Index row = 0;
  int sign = 0;
};

Candidate exact_approx(const ScalarMatrix& A, std::vector<Integer> q) {
  Candidate c;
  c.a.err = Scalar(0);
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    Scalar v(0);
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      if (q[static_cast<std::size_t>(j)] != 0) v += A(i, j) * Scalar(q[static_cast<std::size_t>(j)]);
    Integer p = -v.round();
    Scalar r = v + Scalar(p);
    int sign = r.sign();
    Scalar e = sign < 0 ? -r : r;
    c.a.p.push_back(p);
    if (i == 0 || c.a.err < e) {
      c.a.err = e;
      c.row = i;
      c.sign = sign;
    }
  }
  c.a.q = std::move(q);
  return c;
}

// Orders two errors. When both maxima sit on the same row the difference is
// formed from the integer combination first, so equal errors cancel exactly
// even when the entries are only known to finite precision.
int compare_err(const ScalarMatrix& A, const Candidate& x, const Candidate& y) {
  if (x.row != y.row || (x.a.err.is_rational() && y.a.err.is_rational())) {
    auto c = x.a.err <=> y.a.err;
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  const Eigen::Index i = x.row;
  const int sx = x.sign == 0 ? 1 : x.sign;
  const int sy = y.sign == 0 ? 1 : y.sign;
  Scalar d(0);
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    Integer coeff = sx * x.a.q[static_cast<std::size_t>(j)] - sy * y.a.q[static_cast<std::size_t>(j)];
    if (coeff != 0) d += A(i, j) * Scalar(coeff);
  }
  d += Scalar(Integer(sx * x.a.p[static_cast<std::size_t>(i)] - sy * y.a.p[static_cast<std::size_t>(i)]));
  return d.sign();
}

// Keeps the running minimizer; candidates need not arrive in any order.
struct Best {
  const ScalarMatrix& A;
  std::optional<Candidate> best;
  double upper = std::numeric_limits<double>::infinity();

  explicit Best(const ScalarMatrix& m) : A(m) {}

  void offer(std::vector<Integer> q) {
    normalize_last_positive(q);
    if (best && q == best->a.q) return;
    Candidate cand = exact_approx(A, std::move(q));
    int c = best ? compare_err(A, cand, *best) : -1;
    if (c < 0 || (c == 0 && colex_less(cand.a.q, best->a.q))) {
      upper = upper_of(cand.a.err);
      best = std::move(cand);
    }
  }

  std::optional<Approximation> result() const {
    if (!best) return std::nullopt;
    return best->a;
  }
};

std::vector<Integer> to_integers(const std::vector<long>& q) {
  std::vector<Integer> out;
  out.reserve(q.size());
  for (long v : q) out.emplace_back(v);
  return out;
}

double box_points(int l, long bound) {
  return std::pow(2.0 * static_cast<double>(bound) + 1, l - 1) * (static_cast<double>(bound) + 1);
}

// Scans sign-normalized q in colex order (coordinate 0 varies fastest).
std::optional<Approximation> scan_box(const ScalarMatrix& A, const DoubleMatrix& d, long bound) {
  const int l = static_cast<int>(A.cols());
  Best best(A);
  std::vector<long> q(static_cast<std::size_t>(l), -bound);
  q.back() = 0;
  for (;;) {
    int last = l - 1;
    while (last >= 0 && q[static_cast<std::size_t>(last)] == 0) --last;
    if (last >= 0 && q[static_cast<std::size_t>(last)] > 0) {
      double lower = lower_bound_err(d, q);
      if (!best.best || lower <= best.upper) best.offer(to_integers(q));
    }
    int i = 0;
    while (i < l && q[static_cast<std::size_t>(i)] == bound) {
      q[static_cast<std::size_t>(i)] = (i == l - 1) ? 0 : -bound;
      ++i;
    }
    if (i == l) break;
    ++q[static_cast<std::size_t>(i)];
  }
  return best.result();
}

// Every (q, p) with |Aq + p| <= 1/root and |q| <= bound is a lattice vector of
// Euclidean length <= sqrt(k + l) in the scaled embedding; root^k <= bound^l
// makes that box contain a solution by Minkowski's theorem.
std::optional<Approximation> lattice_search(const ScalarMatrix& A, long bound, const Integer& root,
                                            const SearchOptions& opts) {
  const int k = static_cast<int>(A.rows());
  const int l = static_cast<int>(A.cols());
  const int dim = k + l;
  ScalarMatrix B = ScalarMatrix::Constant(dim, dim, Scalar(0));
  Scalar scale(root);
  Scalar qscale(Rational(1, bound));
  for (int j = 0; j < l; ++j) {
    for (int i = 0; i < k; ++i) B(i, j) = A(i, j) * scale;
    B(k + j, j) = qscale;
  }
  for (int i = 0; i < k; ++i) B(i, l + i) = scale;
  LllResult red = lll_reduce(LatticeBasis(B));
  std::vector<std::vector<double>> cols(static_cast<std::size_t>(dim), std::vector<double>(static_cast<std::size_t>(dim)));
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) cols[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)] = red.basis(r, c).to_double();
  Best best(A);
  std::set<std::vector<Integer>> seen;
  const double radius = std::sqrt(static_cast<double>(dim)) * (1 + 1e-6);
  enumerate_short(
      cols, radius,
      [&](const std::vector<long>& a) {
        std::vector<Integer> q(static_cast<std::size_t>(l), Integer(0));
        bool inside = true, nonzero = false;
        for (int j = 0; j < l; ++j) {
          Integer v = 0;
          for (int t = 0; t < dim; ++t)
            if (a[static_cast<std::size_t>(t)] != 0) v += red.transform[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)] * a[static_cast<std::size_t>(t)];
          if (abs(v) > bound) inside = false;
          if (v != 0) nonzero = true;
          q[static_cast<std::size_t>(j)] = std::move(v);
        }
        if (!inside || !nonzero) return;
        normalize_last_positive(q);
        if (seen.insert(q).second) best.offer(std::move(q));
      },
      opts.enumeration_budget);
  return best.result();
}

Integer integer_root_floor(long bound, int l, int k) {
  Integer power = pow_integer(Integer(bound), static_cast<unsigned long>(l));
  Integer r;
  mpz_root(r.get_mpz_t(), power.get_mpz_t(), static_cast<unsigned long>(k));
  return r;
}

std::optional<Approximation> search(const ScalarMatrix& A, const DoubleMatrix& d, long bound,
                                    const SearchOptions& opts) {
  if (bound < 1) return std::nullopt;
  const int l = static_cast<int>(A.cols());
  if (box_points(l, bound) <= static_cast<double>(opts.exhaustive_limit)) return scan_box(A, d, bound);
  Integer root = integer_root_floor(bound, l, static_cast<int>(A.rows()));
  if (root < 2) return scan_box(A, d, bound);
  return lattice_search(A, bound, root, opts);
}

void check_matrix(const ScalarMatrix& A) {
  if (A.rows() < 1 || A.cols() < 1) throw Error(Errc::InvalidInput, "matrix must be nonempty");
}

}  // namespace

long box_bound(BoxRule rule, const Scalar& c, long Q) {
  if (rule == BoxRule::LeqQ) return Q;
  Integer top = (c * Scalar(Q)).ceil() - 1;
  return top.fits_slong_p() ? top.get_si() : std::numeric_limits<long>::max();
}

std::optional<Approximation> best_in_box(const ScalarMatrix& A, long bound, const SearchOptions& opts) {
  check_matrix(A);
  return search(A, double_bounds(A), bound, opts);
}

Approximation best_affine_approx(const ScalarMatrix& A, long Q, const SearchOptions& opts) {
  if (Q < 1) throw Error(Errc::InvalidInput, "Q must be at least 1");
  return *best_in_box(A, Q, opts);
}

std::vector<std::optional<Approximation>> best_in_boxes(const ScalarMatrix& A, const std::vector<long>& bounds,
                                                       const SearchOptions& opts) {
  check_matrix(A);
  for (std::size_t i = 1; i < bounds.size(); ++i)
    if (bounds[i] < bounds[i - 1]) throw Error(Errc::InvalidInput, "bounds must be nondecreasing");
  DoubleMatrix d = double_bounds(A);
  std::vector<std::optional<Approximation>> out;
  if (A.cols() != 1) {
    for (long b : bounds) out.push_back(search(A, d, b, opts));
    return out;
  }
  Best best(A);
  long q = 0;
  std::vector<long> qv(1);
  for (long b : bounds) {
    while (q < b) {
      qv[0] = ++q;
      double lower = lower_bound_err(d, qv);
      if (!best.best || lower <= best.upper) best.offer({Integer(q)});
    }
    out.push_back(best.result());
  }
  return out;
}

ScalarMatrix row_matrix(const ScalarVector& x) {
  ScalarMatrix m(1, x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) m(0, i) = x(i);
  return m;
}

std::string status_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Witnessed: return "WITNESSED";
    case VerdictStatus::Refuted: return "REFUTED";
    case VerdictStatus::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

void validate_schedule(const std::vector<long>& schedule) {
  if (schedule.empty()) throw Error(Errc::InvalidInput, "empty Q schedule");
  if (schedule.front() < 1) throw Error(Errc::InvalidInput, "schedule entries must be positive");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1]) throw Error(Errc::InvalidInput, "schedule must be strictly increasing");
}

std::size_t resolve_onset(const std::vector<long>& schedule, const std::optional<std::size_t>& onset) {
  std::size_t o = onset ? *onset : schedule.size() / 2;
  if (o >= schedule.size()) throw Error(Errc::InvalidInput, "onset index beyond the schedule");
  return o;
}

HorizonVerdict singular_test(const SingularityQuery& query, const SearchOptions& opts) {
  check_matrix(query.A);
  validate_schedule(query.schedule);
  if (!(query.c > Scalar(0))) throw Error(Errc::InvalidInput, "c must be positive");
  if (query.omega < 0) throw Error(Errc::InvalidInput, "omega must be nonnegative");
  HorizonVerdict v;
  v.onset = resolve_onset(query.schedule, query.onset);
  std::vector<long> bounds;
  for (long Q : query.schedule) bounds.push_back(box_bound(query.rule, query.c, Q));
  const bool integral = query.omega.get_den() == 1;
  try {
    auto found = best_in_boxes(query.A, bounds, opts);
    for (std::size_t i = 0; i < bounds.size(); ++i) {
      QRecord r;
      r.Q = query.schedule[i];
      r.bound = bounds[i];
      r.best = found[i];
      if (integral) r.threshold = query.c / pow_base(Scalar(r.Q), query.omega.get_num().get_si());
      r.threshold_approx = query.c.to_double() / std::pow(static_cast<double>(r.Q), query.omega.get_d());
      r.solved = r.best && below_power_threshold(r.best->err, query.c, r.Q, query.omega);
      v.records.push_back(std::move(r));
    }
  } catch (const Error& e) {
    if (e.code() != Errc::UndecidableComparison) throw;
    v.status = VerdictStatus::Inconclusive;
    v.reason = e.what();
    v.records.clear();
    return v;
  }
  v.status = VerdictStatus::Witnessed;
  for (std::size_t i = v.onset; i < v.records.size(); ++i) {
    if (!v.records[i].solved) {
      v.status = VerdictStatus::Refuted;
      v.refuting_Q = v.records[i].Q;
      break;
    }
  }
  return v;
}

OmegaHatEstimate omega_hat_estimate(const ScalarMatrix& A, const std::vector<long>& schedule,
                                    const SearchOptions& opts) {
  validate_schedule(schedule);
  std::vector<long> used;
  for (long Q : schedule)
    if (Q >= 2) used.push_back(Q);
  if (used.empty()) throw Error(Errc::InvalidInput, "schedule needs some Q >= 2");
  OmegaHatEstimate est;
  auto found = best_in_boxes(A, used, opts);
  for (std::size_t i = 0; i < used.size(); ++i) {
    const Scalar& err = found[i]->err;
    double w = std::numeric_limits<double>::infinity();
    if (err.is_exact_zero()) {
      if (!est.degenerate) est.degenerate_from = used[i];
      est.degenerate = true;
    } else {
      w = -err.log_abs() / std::log(static_cast<double>(used[i]));
    }
    est.per_Q.emplace_back(used[i], w);
  }
  const std::size_t tail = used.size() / 2;
  est.summary = std::numeric_limits<double>::infinity();
  for (std::size_t i = tail; i < used.size(); ++i) est.summary = std::min(est.summary, est.per_Q[i].second);
  std::ostringstream os;
  if (est.degenerate) {
    os << "RATIONAL_DEGENERATE: omega_hat = inf at horizon from Q = " << *est.degenerate_from
       << ", A rational-commensurable";
  } else {
    os.precision(6);
    os << std::fixed << "omega_hat ~ " << est.summary << " at horizon Q <= " << used.back();
  }
  est.summary_text = os.str();
  return est;
}

CfApprox cf_oracle(const Scalar& alpha, long Q) {
  if (Q < 1) throw Error(Errc::InvalidInput, "Q must be at least 1");
  Integer p2 = 0, q2 = 1, p1 = 1, q1 = 0;
  Integer p = 0, q = 1;
  Scalar x = alpha;
  for (;;) {
    Integer a = x.floor();
    Integer pn = a * p1 + p2, qn = a * q1 + q2;
    if (qn > Q) break;
    p = pn;
    q = qn;
    Scalar frac = x - Scalar(a);
    if (frac.is_exact_zero()) break;
    x = Scalar(1) / frac;
    p2 = p1;
    q2 = q1;
    p1 = pn;
    q1 = qn;
  }
  return {p, q, abs(alpha * Scalar(q) - Scalar(p))};
}

}  // namespace singlab
