#pragma once

// Sparse multivectors in the exterior algebra of R^{n+1}, basis e_0..e_n.
//
// An index set I = {i_1 < ... < i_j} is stored as a bitmask; the basis
// element e_I is e_{i_1} ^ ... ^ e_{i_j}. Coefficients equal to zero are
// never stored.

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "singularlab/numeric.hpp"

namespace singlab {

using IndexSet = std::uint32_t;

inline constexpr int kMaxAmbient = 31;

inline int set_size(IndexSet s) { return std::popcount(s); }
inline bool contains(IndexSet s, int i) { return (s >> i) & 1U; }
inline IndexSet singleton(int i) { return IndexSet{1} << i; }
/// {lo, ..., hi}; empty when hi < lo.
inline IndexSet index_range(int lo, int hi) {
  if (hi < lo) return 0;
  IndexSet upper = hi >= 31 ? ~IndexSet{0} : (singleton(hi + 1) - 1);
  return upper & ~(singleton(lo) - 1);
}

IndexSet make_set(const std::vector<int>& indices);
std::vector<int> set_elements(IndexSet s);
/// "0,2,3"; the empty set prints as "".
std::string set_to_string(IndexSet s);
IndexSet set_from_string(const std::string& text);

/// Sign of e_i ^ e_J relative to e_{J+i}: (-1)^{#{k in J : k < i}}.
inline int shuffle_sign(int i, IndexSet J) { return (std::popcount(J & (singleton(i) - 1)) & 1) ? -1 : 1; }

/// Sign of e_I ^ e_J relative to e_{I+J} for disjoint I, J.
int merge_sign(IndexSet I, IndexSet J);

/// Lexicographic order of the sorted element lists (for sets of equal size).
struct SetLess {
  bool operator()(IndexSet a, IndexSet b) const {
    if (a == b) return false;
    IndexSet diff = a ^ b;
    return (a & diff & (~diff + 1)) != 0;
  }
};

inline bool coeff_is_zero(const Scalar& x) { return x.is_exact_zero(); }
inline bool coeff_is_zero(std::int64_t x) { return x == 0; }
inline Scalar coeff_abs(const Scalar& x) { return x.abs(); }
inline std::int64_t coeff_abs(std::int64_t x) { return x < 0 ? -x : x; }

template <class T>
class MultiVector {
 public:
  using Map = std::map<IndexSet, T, SetLess>;

  MultiVector() = default;
  MultiVector(int dim, int grade) : dim_(dim), grade_(grade) {
    if (dim < 1 || dim > kMaxAmbient) throw Error(Errc::InvalidInput, "ambient dimension out of range");
    if (grade < 0 || grade > dim) throw Error(Errc::GradeOverflow, "grade exceeds ambient dimension");
  }

  static MultiVector basis(int dim, IndexSet I, T value = T(1)) {
    MultiVector w(dim, set_size(I));
    w.set(I, std::move(value));
    return w;
  }

  /// Grade-1 element sum_i v_i e_i.
  template <class Vec>
  static MultiVector from_vector(const Vec& v) {
    MultiVector w(static_cast<int>(v.size()), 1);
    for (int i = 0; i < static_cast<int>(v.size()); ++i) w.set(singleton(i), T(v[i]));
    return w;
  }

  static MultiVector scalar(int dim, T value) { return basis(dim, 0, std::move(value)); }

  int dim() const { return dim_; }
  int grade() const { return grade_; }
  const Map& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  std::size_t size() const { return coeffs_.size(); }

  T get(IndexSet I) const {
    auto it = coeffs_.find(I);
    return it == coeffs_.end() ? T(0) : it->second;
  }

  void set(IndexSet I, T value) {
    check_set(I);
    if (coeff_is_zero(value)) {
      coeffs_.erase(I);
    } else {
      coeffs_[I] = std::move(value);
    }
  }

  void add(IndexSet I, const T& value) {
    if (coeff_is_zero(value)) return;
    check_set(I);
    auto it = coeffs_.find(I);
    if (it == coeffs_.end()) {
      coeffs_.emplace(I, value);
      return;
    }
    it->second = it->second + value;
    if (coeff_is_zero(it->second)) coeffs_.erase(it);
  }

  MultiVector& operator+=(const MultiVector& o) {
    check_compatible(o);
    for (const auto& [I, v] : o.coeffs_) add(I, v);
    return *this;
  }
  MultiVector& operator-=(const MultiVector& o) {
    check_compatible(o);
    for (const auto& [I, v] : o.coeffs_) add(I, T(0) - v);
    return *this;
  }
  MultiVector& operator*=(const T& s) {
    if (coeff_is_zero(s)) {
      coeffs_.clear();
      return *this;
    }
    for (auto& [I, v] : coeffs_) v = v * s;
    return *this;
  }

  friend MultiVector operator+(MultiVector a, const MultiVector& b) { return a += b; }
  friend MultiVector operator-(MultiVector a, const MultiVector& b) { return a -= b; }
  friend MultiVector operator*(MultiVector a, const T& s) { return a *= s; }
  friend MultiVector operator*(const T& s, MultiVector a) { return a *= s; }
  friend MultiVector operator-(MultiVector a) { return a *= T(-1); }

  friend bool operator==(const MultiVector& a, const MultiVector& b) {
    if (a.dim_ != b.dim_ || a.grade_ != b.grade_ || a.coeffs_.size() != b.coeffs_.size()) return false;
    auto it = b.coeffs_.begin();
    for (const auto& [I, v] : a.coeffs_) {
      if (I != it->first || !(v == it->second)) return false;
      ++it;
    }
    return true;
  }

  std::string to_string() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    for (const auto& [I, v] : coeffs_) {
      if (!out.empty()) out += " + ";
      out += "(" + value_string(v) + ")e{" + set_to_string(I) + "}";
    }
    return out;
  }

 private:
  static std::string value_string(const Scalar& v) { return v.to_string(); }
  static std::string value_string(std::int64_t v) { return std::to_string(v); }

  void check_set(IndexSet I) const {
    if (set_size(I) != grade_ || (I >> dim_) != 0) {
      throw Error(Errc::InvalidInput, "index set {" + set_to_string(I) + "} does not fit grade " +
                                          std::to_string(grade_) + " in dimension " + std::to_string(dim_));
    }
  }
  void check_compatible(const MultiVector& o) const {
    if (o.dim_ != dim_ || o.grade_ != grade_) throw Error(Errc::InvalidInput, "multivector shapes differ");
  }

  int dim_ = 1;
  int grade_ = 0;
  Map coeffs_;
};

template <class T>
MultiVector<T> wedge(const MultiVector<T>& u, const MultiVector<T>& v) {
  if (u.dim() != v.dim()) throw Error(Errc::InvalidInput, "wedge of multivectors in different dimensions");
  if (u.grade() + v.grade() > u.dim()) {
    throw Error(Errc::GradeOverflow, "grade " + std::to_string(u.grade() + v.grade()) + " exceeds ambient dimension " +
                                         std::to_string(u.dim()));
  }
  MultiVector<T> out(u.dim(), u.grade() + v.grade());
  for (const auto& [I, a] : u.coeffs()) {
    for (const auto& [J, b] : v.coeffs()) {
      if (I & J) continue;
      T prod = a * b;
      out.add(I | J, merge_sign(I, J) < 0 ? T(0) - prod : prod);
    }
  }
  return out;
}

/// w_1 ^ ... ^ w_r for the columns of a matrix.
template <class Derived>
MultiVector<typename Derived::Scalar> wedge_columns(const Eigen::MatrixBase<Derived>& m) {
  using T = typename Derived::Scalar;
  const int dim = static_cast<int>(m.rows());
  MultiVector<T> acc = MultiVector<T>::scalar(dim, T(1));
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    MultiVector<T> col(dim, 1);
    for (int i = 0; i < dim; ++i) col.set(singleton(i), m(i, c));
    acc = wedge(acc, col);
  }
  return acc;
}

template <class T>
T sup_norm(const MultiVector<T>& w) {
  T best(0);
  for (const auto& [I, v] : w.coeffs()) {
    T a = coeff_abs(v);
    if (best < a) best = a;
  }
  return best;
}

/// Keeps the coefficients whose index set lies in `allowed`.
template <class T>
MultiVector<T> restrict_to(const MultiVector<T>& w, IndexSet allowed) {
  MultiVector<T> out(w.dim(), w.grade());
  for (const auto& [I, v] : w.coeffs())
    if ((I & ~allowed) == 0) out.set(I, v);
  return out;
}

/// Drops every coefficient whose index set contains 0.
template <class T>
MultiVector<T> project_pi(const MultiVector<T>& w) {
  return restrict_to(w, index_range(1, w.dim() - 1));
}

/// Keeps only index sets inside {s+1, ..., n}.
template <class T>
MultiVector<T> project_pi_bullet(const MultiVector<T>& w, int s) {
  const int n = w.dim() - 1;
  if (w.grade() > n - s) {
    throw Error(Errc::GradeOverflow, "grade " + std::to_string(w.grade()) + " exceeds n - s = " + std::to_string(n - s));
  }
  return restrict_to(w, index_range(s + 1, n));
}

/// parts[i] has coefficient sign(i, J) * w_{J+i} on e_J for J inside {1..n}.
template <class T>
struct CDecomposition {
  std::vector<MultiVector<T>> parts;

  int dim() const { return parts.empty() ? 0 : parts.front().dim(); }
};

template <class T>
CDecomposition<T> c_decompose(const MultiVector<T>& w) {
  if (w.grade() < 1) throw Error(Errc::InvalidInput, "c(w) needs grade at least 1");
  const int dim = w.dim();
  CDecomposition<T> c;
  c.parts.assign(dim, MultiVector<T>(dim, w.grade() - 1));
  for (const auto& [I, v] : w.coeffs()) {
    for (int i : set_elements(I)) {
      IndexSet J = I & ~singleton(i);
      if (contains(J, 0)) continue;
      c.parts[i].add(J, shuffle_sign(i, J) < 0 ? T(0) - v : v);
    }
  }
  return c;
}

/// sum_i xtilde_i c(w)_i.
template <class T, class Vec>
MultiVector<T> contract(const Vec& xtilde, const CDecomposition<T>& c) {
  if (static_cast<int>(xtilde.size()) != static_cast<int>(c.parts.size())) {
    throw Error(Errc::InvalidInput, "contraction length does not match the decomposition");
  }
  MultiVector<T> out = c.parts.front();
  out *= T(xtilde[0]);
  for (std::size_t i = 1; i < c.parts.size(); ++i) out += c.parts[i] * T(xtilde[i]);
  return out;
}

/// g_k u_x w in closed form: b^{(n-j+1)k} e_0 ^ (x~ . c(w)) + b^{-jk} pi(w).
MultiVector<Scalar> flow_action(const MultiVector<Scalar>& w, const ScalarVector& x, long k, const Scalar& base);

/// Functorial action of a square matrix: sum_I w_I (M e_{i_1}) ^ ... ^ (M e_{i_j}).
template <class T, class Mat>
MultiVector<T> apply_matrix(const Mat& m, const MultiVector<T>& w) {
  const int dim = w.dim();
  if (m.rows() != dim || m.cols() != dim) throw Error(Errc::InvalidInput, "matrix size does not match multivector");
  MultiVector<T> out(dim, w.grade());
  for (const auto& [I, v] : w.coeffs()) {
    MultiVector<T> acc = MultiVector<T>::scalar(dim, v);
    for (int i : set_elements(I)) {
      MultiVector<T> col(dim, 1);
      for (int r = 0; r < dim; ++r) col.set(singleton(r), T(m(r, i)));
      acc = wedge(acc, col);
    }
    out += acc;
  }
  return out;
}

/// All index sets of the given size inside `universe`, in lexicographic order.
std::vector<IndexSet> subsets_of_size(IndexSet universe, int size);

}  // namespace singlab
