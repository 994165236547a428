#include "singularlab/exterior.hpp"

#include <sstream>

namespace singlab {

IndexSet make_set(const std::vector<int>& indices) {
  IndexSet s = 0;
  for (int i : indices) {
    if (i < 0 || i >= kMaxAmbient) throw Error(Errc::InvalidInput, "index " + std::to_string(i) + " out of range");
    if (contains(s, i)) throw Error(Errc::InvalidInput, "repeated index " + std::to_string(i));
    s |= singleton(i);
  }
  return s;
}

std::vector<int> set_elements(IndexSet s) {
  std::vector<int> out;
  while (s) {
    out.push_back(std::countr_zero(s));
    s &= s - 1;
  }
  return out;
}

std::string set_to_string(IndexSet s) {
  std::string out;
  for (int i : set_elements(s)) {
    if (!out.empty()) out += ',';
    out += std::to_string(i);
  }
  return out;
}

IndexSet set_from_string(const std::string& text) {
  std::vector<int> indices;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      indices.push_back(v);
    } catch (const std::exception&) {
      throw Error(Errc::InvalidInput, "bad index set '" + text + "'");
    }
  }
  return make_set(indices);
}

int merge_sign(IndexSet I, IndexSet J) {
  int inversions = 0;
  for (int b : set_elements(J)) inversions += std::popcount(I & ~index_range(0, b));
  return inversions & 1 ? -1 : 1;
}

std::vector<IndexSet> subsets_of_size(IndexSet universe, int size) {
  std::vector<int> elems = set_elements(universe);
  std::vector<IndexSet> out;
  if (size < 0 || size > static_cast<int>(elems.size())) return out;
  std::vector<int> pick(size);
  for (int i = 0; i < size; ++i) pick[i] = i;
  for (;;) {
    IndexSet s = 0;
    for (int p : pick) s |= singleton(elems[p]);
    out.push_back(s);
    int i = size - 1;
    while (i >= 0 && pick[i] == static_cast<int>(elems.size()) - size + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int t = i + 1; t < size; ++t) pick[t] = pick[t - 1] + 1;
  }
  return out;
}

MultiVector<Scalar> flow_action(const MultiVector<Scalar>& w, const ScalarVector& x, long k, const Scalar& base) {
  const int dim = w.dim();
  const int n = dim - 1;
  const int j = w.grade();
  if (x.size() != n) throw Error(Errc::InvalidInput, "point has the wrong length for this multivector");
  if (j == 0) return w;
  std::vector<Scalar> xtilde(dim);
  xtilde[0] = Scalar(1);
  for (int i = 0; i < n; ++i) xtilde[i + 1] = x(i);
  MultiVector<Scalar> expanding = wedge(MultiVector<Scalar>::basis(dim, singleton(0)), contract(xtilde, c_decompose(w)));
  expanding *= pow_base(base, static_cast<long>(n - j + 1) * k);
  MultiVector<Scalar> contracting = project_pi(w);
  contracting *= pow_base(base, -static_cast<long>(j) * k);
  return expanding + contracting;
}

}  // namespace singlab
