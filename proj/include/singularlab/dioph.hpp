#pragma once

// Direct Diophantine searches: min |Aq + p| over nonzero integer q in a box,
// horizon verdicts for (omega-)singularity, uniform-exponent estimates and a
// continued-fraction oracle for the one-dimensional case.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "singularlab/lattice.hpp"

namespace singlab {

/// q in Z^l, p in Z^k (k x l matrix A), err = |Aq + p| in the sup norm.
struct Approximation {
  std::vector<Integer> q;
  std::vector<Integer> p;
  Scalar err;
};

/// LeqQ: |q| <= Q. StrictCQ: |q| < cQ, the box of the j = 1 condition.
enum class BoxRule { LeqQ, StrictCQ };

struct SearchOptions {
  /// Boxes with at most this many (sign-normalized) points are scanned
  /// directly; larger ones go through the lattice pre-filter.
  std::uint64_t exhaustive_limit = 1'000'000;
  std::uint64_t enumeration_budget = 50'000'000;
};

/// Largest admissible |q| for Q under the rule (may be 0).
long box_bound(BoxRule rule, const Scalar& c, long Q);

/// Minimizer over 0 < |q| <= bound; p is the componentwise nearest integer
/// to -Aq. Among ties, q is normalized to a positive last nonzero entry and
/// the colexicographically smallest one wins. Empty when bound < 1.
std::optional<Approximation> best_in_box(const ScalarMatrix& A, long bound, const SearchOptions& opts = {});
Approximation best_affine_approx(const ScalarMatrix& A, long Q, const SearchOptions& opts = {});
/// best_in_box for each bound of a nondecreasing list; one pass when l = 1.
std::vector<std::optional<Approximation>> best_in_boxes(const ScalarMatrix& A, const std::vector<long>& bounds,
                                                       const SearchOptions& opts = {});

/// The 1 x n matrix of a point x (so q.x + q_0 is the single row).
ScalarMatrix row_matrix(const ScalarVector& x);

struct SingularityQuery {
  ScalarMatrix A;
  Scalar c = Scalar(Rational(1, 10));
  Rational omega = 1;
  std::vector<long> schedule;
  /// First schedule index that must be solved; default is the second half.
  std::optional<std::size_t> onset;
  BoxRule rule = BoxRule::LeqQ;
};

enum class VerdictStatus { Witnessed, Refuted, Inconclusive };
std::string status_name(VerdictStatus s);

struct QRecord {
  long Q = 0;
  long bound = 0;
  std::optional<Approximation> best;
  bool solved = false;
  /// c / Q^omega, exact when omega is an integer.
  std::optional<Scalar> threshold;
  double threshold_approx = 0;
};

struct HorizonVerdict {
  VerdictStatus status = VerdictStatus::Inconclusive;
  std::vector<QRecord> records;
  std::optional<long> refuting_Q;
  std::size_t onset = 0;
  std::string reason;
};

void validate_schedule(const std::vector<long>& schedule);
std::size_t resolve_onset(const std::vector<long>& schedule, const std::optional<std::size_t>& onset);

/// WITNESSED when every Q from the onset on has a solution of
/// |Aq + p| < c/Q^omega in the box, REFUTED when some such Q has none.
/// Undecidable comparisons give INCONCLUSIVE with the reason.
HorizonVerdict singular_test(const SingularityQuery& query, const SearchOptions& opts = {});

struct OmegaHatEstimate {
  /// (Q, -log err / log Q); +infinity once err = 0.
  std::vector<std::pair<long, double>> per_Q;
  bool degenerate = false;
  std::optional<long> degenerate_from;
  /// Infimum over the tail (second half of the schedule).
  double summary = 0;
  std::string summary_text;
};

OmegaHatEstimate omega_hat_estimate(const ScalarMatrix& A, const std::vector<long>& schedule,
                                    const SearchOptions& opts = {});

struct CfApprox {
  Integer p;
  Integer q;
  Scalar err;
};

/// Last continued-fraction convergent p/q of alpha with q <= Q.
CfApprox cf_oracle(const Scalar& alpha, long Q);

}  // namespace singlab
