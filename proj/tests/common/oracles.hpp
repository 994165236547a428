#pragma once

// Independent reference computations used by the unit and acceptance
// suites. Nothing here calls into the code paths it is used to check.

#include <algorithm>
#include <vector>

#include "singularlab/exterior.hpp"
#include "singularlab/numeric.hpp"

namespace oracle {

using singlab::IndexSet;
using singlab::MultiVector;
using singlab::Scalar;
using singlab::ScalarMatrix;
using singlab::ScalarVector;

/// Leibniz determinant of the submatrix with the given rows and columns.
inline Scalar minor_det(const ScalarMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  const std::size_t n = rows.size();
  if (n == 0) return Scalar(1);
  std::vector<int> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<int>(i);
  Scalar total(0);
  do {
    int inversions = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (perm[a] > perm[b]) ++inversions;
    Scalar term(inversions % 2 ? -1 : 1);
    for (std::size_t i = 0; i < n; ++i) term *= m(rows[i], cols[perm[i]]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// (M w)_K = sum_I det M[K, I] w_I.
inline MultiVector<Scalar> minor_action(const ScalarMatrix& m, const MultiVector<Scalar>& w) {
  const int dim = w.dim();
  MultiVector<Scalar> out(dim, w.grade());
  for (IndexSet K : singlab::subsets_of_size(singlab::index_range(0, dim - 1), w.grade())) {
    Scalar acc(0);
    for (const auto& [I, v] : w.coeffs()) acc += minor_det(m, singlab::set_elements(K), singlab::set_elements(I)) * v;
    out.set(K, acc);
  }
  return out;
}

/// diag(b^{nk}, b^{-k}, ..., b^{-k}) times the unipotent matrix with x in row 0.
inline ScalarMatrix flow_times_unipotent(const ScalarVector& x, long k, const Scalar& b) {
  const int n = static_cast<int>(x.size());
  ScalarMatrix u = ScalarMatrix::Identity(n + 1, n + 1);
  for (int i = 0; i < n; ++i) u(0, i + 1) = x(i);
  ScalarMatrix g = ScalarMatrix::Zero(n + 1, n + 1);
  g(0, 0) = singlab::pow_base(b, n * k);
  for (int i = 1; i <= n; ++i) g(i, i) = singlab::pow_base(b, -k);
  return g * u;
}

}  // namespace oracle

namespace oracle {

/// (R c(w))_i as grade j-1 multivectors, with c(w)_m[J] read off from
/// e_m ^ e_J = sign * e_{J+m}, skipping J that contain 0.
inline std::vector<MultiVector<Scalar>> r_times_c(const ScalarMatrix& R, const MultiVector<Scalar>& w) {
  const int dim = w.dim();
  std::vector<MultiVector<Scalar>> out;
  std::vector<IndexSet> Js = singlab::subsets_of_size(singlab::index_range(1, dim - 1), w.grade() - 1);
  for (Eigen::Index i = 0; i < R.rows(); ++i) {
    MultiVector<Scalar> entry(dim, w.grade() - 1);
    for (IndexSet J : Js) {
      Scalar acc(0);
      for (int m = 0; m < dim; ++m) {
        if (singlab::contains(J, m)) continue;
        auto em = MultiVector<Scalar>::basis(dim, singlab::singleton(m));
        auto eJ = MultiVector<Scalar>::basis(dim, J);
        Scalar sign = singlab::wedge(em, eJ).get(J | singlab::singleton(m));
        acc += R(i, m) * sign * w.get(J | singlab::singleton(m));
      }
      entry.set(J, acc);
    }
    out.push_back(std::move(entry));
  }
  return out;
}

inline Scalar max_norm(const std::vector<MultiVector<Scalar>>& parts) {
  Scalar best(0);
  for (const auto& p : parts) best = singlab::max(best, singlab::sup_norm(p));
  return best;
}

/// Every integer multivector of the given grade with coefficients in [-K, K].
template <class Fn>
void for_each_multivector(int dim, int grade, long K, Fn fn) {
  std::vector<IndexSet> sets = singlab::subsets_of_size(singlab::index_range(0, dim - 1), grade);
  std::vector<long> v(sets.size(), -K);
  for (;;) {
    MultiVector<Scalar> w(dim, grade);
    for (std::size_t i = 0; i < sets.size(); ++i)
      if (v[i] != 0) w.set(sets[i], Scalar(v[i]));
    fn(w);
    std::size_t i = 0;
    while (i < v.size() && v[i] == K) v[i++] = -K;
    if (i == v.size()) break;
    ++v[i];
  }
}

}  // namespace oracle
