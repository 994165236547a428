#pragma once

// The diagonal flow g_k = diag(b^{nk}, b^{-k}, ..., b^{-k}) and the unipotent
// u_x acting on Z^{n+1}, with delta-profiles of the orbit g_k u_x Z^{n+1}.

#include <optional>
#include <string>
#include <vector>

#include "singularlab/lattice.hpp"

namespace singlab {

struct FlowParams {
  int n = 1;
  Scalar base = Scalar(2);
  long k_max = 20;
};

ScalarMatrix flow_matrix(int n, long k, const Scalar& base);
ScalarMatrix unipotent_matrix(const ScalarVector& x);
LatticeBasis unipotent_lattice(const ScalarVector& x);
/// Basis of g_k u_x Z^{n+1}.
LatticeBasis flowed_lattice(const ScalarVector& x, long k, const Scalar& base);

struct DeltaEntry {
  long k = 0;
  Scalar delta;
  ScalarVector vector;
  std::vector<Integer> coefficients;
};

enum class Divergence { DecaysToZero, BoundedBelow, Mixed };

struct Classification {
  Divergence kind = Divergence::Mixed;
  /// min_k delta_k; meaningful for every kind, reported for BoundedBelow.
  Scalar floor;
  long k_max = 0;
  Scalar eps;
};

std::string divergence_name(Divergence d);

struct DeltaProfile {
  std::vector<DeltaEntry> values;
  std::optional<Classification> classification;
};

/// DECAYS: delta_k < eps on the top `tail_fraction` of the horizon.
/// BOUNDED_BELOW: min delta_k >= eps. MIXED otherwise.
Classification classify_divergence(const DeltaProfile& profile, const Scalar& eps, double tail_fraction = 0.25);

DeltaProfile delta_profile(const ScalarVector& x, const FlowParams& p, const SvpOptions& svp = {}, int threads = 1);
/// Same, with the classification attached.
DeltaProfile delta_profile(const ScalarVector& x, const FlowParams& p, const Scalar& eps, const SvpOptions& svp = {},
                           int threads = 1);

struct QndViolation {
  Submodule gamma;
  Scalar max_cov;
  Scalar threshold;
};

struct QndReport {
  long k = 0;
  Scalar rho;
  std::size_t checked = 0;
  std::vector<QndViolation> violations;
  bool holds() const { return violations.empty(); }
};

/// For every primitive Gamma from the bounded enumeration (all ranks), tests
/// max over samples of cov(g_k u_x Gamma) >= rho^{rank Gamma}.
QndReport qnd_hypothesis_check(const std::vector<ScalarVector>& samples, long k, const FlowParams& p, const Scalar& rho,
                               long coeff_bound);

}  // namespace singlab
