#include "singularlab/flow.hpp"

#include <cmath>

#include "singularlab/parallel.hpp"

namespace singlab {

ScalarMatrix flow_matrix(int n, long k, const Scalar& base) {
  if (!(base > Scalar(1))) throw Error(Errc::InvalidInput, "flow base must exceed 1");
  ScalarMatrix g = ScalarMatrix::Zero(n + 1, n + 1);
  g(0, 0) = pow_base(base, static_cast<long>(n) * k);
  Scalar contract = pow_base(base, -k);
  for (int i = 1; i <= n; ++i) g(i, i) = contract;
  return g;
}

ScalarMatrix unipotent_matrix(const ScalarVector& x) {
  const int n = static_cast<int>(x.size());
  ScalarMatrix u = ScalarMatrix::Identity(n + 1, n + 1);
  for (int i = 0; i < n; ++i) u(0, i + 1) = x(i);
  return u;
}

LatticeBasis unipotent_lattice(const ScalarVector& x) { return LatticeBasis(unipotent_matrix(x)); }

LatticeBasis flowed_lattice(const ScalarVector& x, long k, const Scalar& base) {
  const int n = static_cast<int>(x.size());
  ScalarMatrix m = unipotent_matrix(x);
  Scalar expand = pow_base(base, static_cast<long>(n) * k);
  Scalar contract = pow_base(base, -k);
  for (int c = 0; c <= n; ++c) {
    m(0, c) *= expand;
    for (int i = 1; i <= n; ++i) m(i, c) *= contract;
  }
  return LatticeBasis(std::move(m));
}

DeltaProfile delta_profile(const ScalarVector& x, const FlowParams& p, const SvpOptions& svp, int threads) {
  if (x.size() != p.n) throw Error(Errc::InvalidInput, "point length differs from n");
  if (p.k_max < 1) throw Error(Errc::InvalidInput, "k_max must be at least 1");
  if (p.n + 1 > svp.dim_cap) {
    throw Error(Errc::DimensionTooLarge, "lattice rank " + std::to_string(p.n + 1) + " exceeds the SVP cap");
  }
  auto entries = parallel_map(static_cast<std::size_t>(p.k_max + 1), threads, [&](std::size_t k) {
    ShortestVector sv = shortest_vector(flowed_lattice(x, static_cast<long>(k), p.base), svp);
    return DeltaEntry{static_cast<long>(k), sv.norm, sv.vector, sv.coefficients};
  });
  return DeltaProfile{std::move(entries), std::nullopt};
}

DeltaProfile delta_profile(const ScalarVector& x, const FlowParams& p, const Scalar& eps, const SvpOptions& svp,
                           int threads) {
  DeltaProfile out = delta_profile(x, p, svp, threads);
  out.classification = classify_divergence(out, eps);
  return out;
}

std::string divergence_name(Divergence d) {
  switch (d) {
    case Divergence::DecaysToZero: return "DECAYS_TO_ZERO_AT_HORIZON";
    case Divergence::BoundedBelow: return "BOUNDED_BELOW_AT_HORIZON";
    case Divergence::Mixed: return "MIXED";
  }
  return "MIXED";
}

Classification classify_divergence(const DeltaProfile& profile, const Scalar& eps, double tail_fraction) {
  if (!(eps > Scalar(0))) throw Error(Errc::InvalidInput, "eps must be positive");
  if (profile.values.empty()) throw Error(Errc::InvalidInput, "empty delta profile");
  Classification c;
  c.eps = eps;
  c.k_max = profile.values.back().k;
  c.floor = profile.values.front().delta;
  for (const auto& e : profile.values) c.floor = min(c.floor, e.delta);
  const long onset = static_cast<long>(std::ceil((1.0 - tail_fraction) * static_cast<double>(c.k_max)));
  bool tail_small = true;
  for (const auto& e : profile.values)
    if (e.k >= onset && !(e.delta < eps)) tail_small = false;
  if (tail_small) {
    c.kind = Divergence::DecaysToZero;
  } else if (c.floor >= eps) {
    c.kind = Divergence::BoundedBelow;
  } else {
    c.kind = Divergence::Mixed;
  }
  return c;
}

QndReport qnd_hypothesis_check(const std::vector<ScalarVector>& samples, long k, const FlowParams& p, const Scalar& rho,
                               long coeff_bound) {
  if (samples.empty()) throw Error(Errc::InvalidInput, "need at least one sample point");
  QndReport report;
  report.k = k;
  report.rho = rho;
  const int dim = p.n + 1;
  for (int r = 1; r <= dim; ++r) {
    Scalar threshold = pow_base(rho, r);
    for_each_primitive(dim, r, coeff_bound, [&](const Submodule& gamma) {
      MultiVector<Scalar> w = gamma.wedge();
      Scalar best(0);
      for (const auto& x : samples) best = max(best, sup_norm(flow_action(w, x, k, p.base)));
      ++report.checked;
      if (best < threshold) report.violations.push_back({gamma, best, threshold});
      return true;
    });
  }
  return report;
}

}  // namespace singlab
