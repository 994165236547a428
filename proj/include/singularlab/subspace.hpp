#pragma once

// Affine subspaces L_A = {(x, x~A)} of R^n, the matrix R_A = [I | A], the
// no-small-solution conditions on integer multivectors and the reductions
// between parametrizing matrices.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "singularlab/dioph.hpp"
#include "singularlab/exterior.hpp"

namespace singlab {

using MV = MultiVector<Scalar>;

/// A is (s+1) x (n-s): row 0 is a_0, rows 1..s form A_0.
class SubspaceParam {
 public:
  SubspaceParam(int n, int s, ScalarMatrix A);

  int n() const { return n_; }
  int s() const { return s_; }
  const ScalarMatrix& A() const { return A_; }
  /// [I_{s+1} | A].
  ScalarMatrix r_matrix() const;

 private:
  int n_;
  int s_;
  ScalarMatrix A_;
};

/// (x, x~A) with x~ = (1, x).
ScalarVector embed_point(const SubspaceParam& P, const ScalarVector& x);

/// Entry i is parts[offset+i] + sum_m A(i, m) parts[offset+rows+m].
std::vector<MV> apply_R(const ScalarMatrix& A, const std::vector<MV>& parts, int offset = 0);
std::vector<MV> apply_RA(const SubspaceParam& P, const CDecomposition<Scalar>& c);
/// Max of the sup norms of the entries.
Scalar tuple_norm(const std::vector<MV>& parts);

enum class ProjectionMode { PiBullet, Pi };
enum class ExponentMode { TwoStar, OmegaJ };

struct ConditionQuery {
  explicit ConditionQuery(SubspaceParam param) : P(std::move(param)) {}

  SubspaceParam P;
  Scalar c = Scalar(Rational(1, 10));
  std::vector<long> schedule;
  /// Empty means 1..n-s.
  std::vector<int> j_range;
  ProjectionMode projection = ProjectionMode::PiBullet;
  ExponentMode mode = ExponentMode::TwoStar;
  /// Used by OmegaJ.
  Rational omega = 1;
  std::optional<std::size_t> onset;
  std::uint64_t budget = 50'000'000;
  std::size_t certificate_cap = 16;
  int threads = 1;
};

struct ConditionRecord {
  long Q = 0;
  int j = 0;
  bool solvable = false;
  std::uint64_t solution_count = 0;
  /// Sorted lexicographically by coefficients, at most certificate_cap.
  std::vector<MV> certificates;
  std::uint64_t nodes = 0;
  double first_threshold = 0;
  double second_threshold = 0;
};

/// status: WITNESSED when every Q from the onset on has a solution for some
/// j (the condition fails at horizon); REFUTED when some such Q has none for
/// every j (the condition holds there).
struct ConditionReport {
  VerdictStatus status = VerdictStatus::Inconclusive;
  std::vector<ConditionRecord> records;
  std::optional<long> holding_Q;
  std::size_t onset = 0;
  std::string reason;

  bool condition_holds() const { return status == VerdictStatus::Refuted; }
  /// Solvability per Q (any j in range), in schedule order.
  std::vector<bool> solvable_by_Q() const;
};

std::string condition_status_name(VerdictStatus s);

ConditionReport condition_check(const ConditionQuery& query);

/// Exact test of one multivector against the system at (Q, j).
bool is_condition_solution(const ConditionQuery& query, const MV& w, long Q);

/// Row r of the result is row sigma[r] of A.
SubspaceParam permute_rows(const SubspaceParam& P, const std::vector<int>& sigma);

SubspaceParam left_multiply(const SubspaceParam& P, const ScalarMatrix& B);
/// C = D * max(|B|_inf, 1), D the common denominator of B.
Scalar transport_constant(const ScalarMatrix& B);
/// Grade-one solution for A mapped to one for BA: (D B q_0, D q).
MV transport_solution(const SubspaceParam& P, const ScalarMatrix& B, const MV& w);

struct RowRemoval {
  /// Same dimensions as the input, the removed row zeroed and moved to 0.
  SubspaceParam normalized;
  /// The remaining s rows as a parameter in dimension n-1.
  SubspaceParam reduced;
  ScalarMatrix B;
  std::vector<int> permutation;
};

/// certificate[r] is the coefficient of row r (ignored at `row`); the
/// removed row must equal the combination exactly.
RowRemoval remove_row(const SubspaceParam& P, int row, const std::vector<Rational>& certificate);

struct EverythingWitness {
  Integer p0;
  std::vector<Integer> p_prime;
  std::vector<Integer> q;
  /// |p0 + y . (p', q)| for the embedded point y.
  Scalar error;
  /// c |x~|_1 / Q^n.
  Scalar bound;
  /// max(|p'|, |q|).
  Integer height;
  bool certified = false;
};

std::optional<EverythingWitness> everything_witness(const SubspaceParam& P, const ScalarVector& x, long Q,
                                                    const Scalar& c, const SearchOptions& opts = {});

enum class Main3Shape { Columns, Rows, None };

struct Main3Step {
  std::string name;
  std::string status;
  std::string detail;
};

struct Main3Report {
  Main3Shape shape = Main3Shape::None;
  bool applicable = false;
  bool n_singular_at_horizon = false;
  bool condition_holds_at_horizon = false;
  bool consistent = false;
  std::vector<Main3Step> steps;
};

struct Main3Options {
  Scalar c = Scalar(Rational(1, 10));
  std::vector<long> schedule{16, 32, 64, 128, 256, 512, 1024};
  std::uint64_t budget = 50'000'000;
  int threads = 1;
};

Main3Shape main3_shape(const ScalarMatrix& A);
Main3Report theorem_main3_pipeline(const SubspaceParam& P, const Main3Options& opts = {});

}  // namespace singlab
