#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "singularlab/exterior.hpp"
#include "singularlab/numeric.hpp"

namespace singlab {

/// Row-major big-integer matrix used for unimodular transforms.
using BigMatrix = std::vector<std::vector<Integer>>;
using RationalMatrix = std::vector<std::vector<Rational>>;

BigMatrix big_identity(int n);

// Colexicographic comparison: the last coordinate is most significant.
inline bool colex_less(const std::vector<Integer>& a, const std::vector<Integer>& b) {
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

/// Flips the sign so the last nonzero entry is positive; true if flipped.
inline bool normalize_last_positive(std::vector<Integer>& c) {
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    if (c[i] < 0) {
      for (auto& v : c) v = -v;
      return true;
    }
    return false;
  }
  return false;
}

/// Exact rank; HPFloat entries may raise UndecidableComparison.
int scalar_rank(const ScalarMatrix& m);

/// Columns are the basis vectors.
class LatticeBasis {
 public:
  explicit LatticeBasis(ScalarMatrix columns);

  int dim() const { return static_cast<int>(cols_.rows()); }
  int rank() const { return static_cast<int>(cols_.cols()); }
  const ScalarMatrix& matrix() const { return cols_; }

 private:
  ScalarMatrix cols_;
};

/// Integer submodule of Z^m spanned by independent columns.
class Submodule {
 public:
  explicit Submodule(IntMatrix generators);

  int dim() const { return static_cast<int>(gens_.rows()); }
  int rank() const { return static_cast<int>(gens_.cols()); }
  const IntMatrix& generators() const { return gens_; }
  MultiVector<Scalar> wedge() const;

  friend bool operator==(const Submodule& a, const Submodule& b);

 private:
  IntMatrix gens_;
};

Scalar covolume(const Submodule& d);
/// Sup norm of the wedge of the columns.
Scalar covolume(const ScalarMatrix& columns);

struct LllResult {
  ScalarMatrix basis;
  BigMatrix transform;  // basis = input * transform
};

/// LLL (delta = 99/100) driven by rational approximations of the entries;
/// the transform is applied to the exact basis, so the result spans the
/// same lattice exactly.
LllResult lll_reduce(const LatticeBasis& basis);

/// Exact rational LLL on columns; returns the unimodular transform.
BigMatrix lll_transform(const RationalMatrix& columns_rowmajor, int rows, int cols);

struct SvpOptions {
  int dim_cap = 8;
  /// Multiplies the enumeration box; results must not depend on it.
  int box_scale = 1;
  std::uint64_t budget = 200'000'000;
};

struct ShortestVector {
  ScalarVector vector;
  Scalar norm;
  /// Coefficients with respect to the input basis.
  std::vector<Integer> coefficients;
};

/// Shortest nonzero vector in the sup norm. Among minimal vectors the
/// coefficient vector is normalized to have a positive last nonzero entry
/// and the colexicographically smallest one is returned.
ShortestVector shortest_vector(const LatticeBasis& basis, const SvpOptions& options = {});

/// Column Hermite normal form: pivots on increasing rows, positive, with
/// entries left of each pivot reduced into [0, pivot). Zero columns dropped.
IntMatrix hnf(const IntMatrix& generators);

struct SmithForm {
  std::vector<Integer> divisors;
  BigMatrix left;          // P with P * G * Q = diag(divisors)
  BigMatrix left_inverse;  // P^{-1}
};

SmithForm smith(const IntMatrix& generators);

bool is_primitive(const Submodule& d);
/// R d intersected with Z^m, in Hermite normal form.
Submodule saturate(const Submodule& d);

/// Visits every primitive rank-r submodule of Z^m whose Hermite normal form
/// has entries of absolute value <= bound, once each. Return false from the
/// callback to stop early.
void for_each_primitive(int m, int r, long bound, const std::function<bool(const Submodule&)>& visit);
std::vector<Submodule> enumerate_primitive(int m, int r, long bound);

/// delta(g Z^m) <= 2 cov(g d)^{1/rank d}, decided exactly.
bool minkowski_check(const LatticeBasis& g, const Submodule& d, const SvpOptions& options = {});

/// Fincke-Pohst: every nonzero integer a with |B a|_2 <= radius, for a
/// double-precision basis given column by column. The radius should already
/// include any safety margin the caller needs.
void enumerate_short(const std::vector<std::vector<double>>& columns, double radius,
                     const std::function<void(const std::vector<long>&)>& visit, std::uint64_t budget);

/// Double value with an absolute error bound.
struct DoubleBound {
  double value;
  double error;
};
DoubleBound to_double_bound(const Scalar& x);

}  // namespace singlab
