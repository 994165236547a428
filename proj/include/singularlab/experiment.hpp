#pragma once

// Seeded Monte Carlo surveys: sample exact points on L_A (directly or along a
// polynomial curve), run the horizon singularity test on each, aggregate.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "singularlab/subspace.hpp"

namespace singlab {

/// Each parameter is lo + (hi - lo)(u + v frac(sqrt r) / 2^bits) / 2^bits with
/// u, v uniform integers; offset_radicand = 0 leaves dyadic rationals.
/// A rational coordinate is hit exactly once Q reaches its denominator, so
/// the irrational offset keeps rational samples from looking singular.
struct UniformSampler {
  Rational lo = 0;
  Rational hi = 1;
  int bits = 20;
  long offset_radicand = 5;
};

/// t -> (f_1(t), ..., f_n(t)) with coordinates[i][e] the coefficient of t^e;
/// t is drawn like a single uniform parameter.
struct CurveSampler {
  std::vector<std::vector<Scalar>> coordinates;
  UniformSampler parameter;
};

/// The line t -> (t, a_0 + t A_0) inside a hyperplane (s = 1).
CurveSampler graph_curve(const SubspaceParam& P, UniformSampler parameter = {});

struct SurveySpec {
  explicit SurveySpec(SubspaceParam param) : subspace(std::move(param)) {}

  SubspaceParam subspace;
  std::variant<UniformSampler, CurveSampler> sampler = UniformSampler{};
  std::size_t sample_count = 100;
  Scalar c = Scalar(Rational(1, 20));
  /// Defaults to n.
  std::optional<Rational> omega;
  std::vector<long> schedule{16, 64, 256, 1024, 4096, 16384};
  std::optional<std::size_t> onset;
  BoxRule rule = BoxRule::LeqQ;
  SearchOptions search;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct SampleResult {
  std::size_t index = 0;
  std::vector<Scalar> parameters;
  ScalarVector point;
  HorizonVerdict verdict;
};

struct SurveyHorizon {
  std::vector<long> schedule;
  Scalar c;
  Rational omega;
  std::size_t onset = 0;
  BoxRule rule = BoxRule::LeqQ;

  friend bool operator==(const SurveyHorizon&, const SurveyHorizon&) = default;
};

struct SurveyReport {
  std::vector<SampleResult> samples;
  std::size_t witnessed = 0;
  std::size_t refuted = 0;
  std::size_t inconclusive = 0;
  SurveyHorizon horizon;
  std::uint64_t seed = 0;
  std::string sampler;

  double fraction(VerdictStatus s) const;
};

/// Parameters are drawn sequentially from the seed before any sample is
/// tested, so the report does not depend on the thread count.
SurveyReport run_survey(const SurveySpec& spec);

/// Zero when y lies on L_A; exact for exact inputs.
std::vector<Scalar> subspace_residual(const SubspaceParam& P, const ScalarVector& y);

struct SurveyDiff {
  /// b - a for WITNESSED, REFUTED, INCONCLUSIVE.
  double witnessed = 0;
  double refuted = 0;
  double inconclusive = 0;
  double max_abs = 0;
  double tolerance = 0;
  bool exceeds = false;
};

/// Throws HORIZON_MISMATCH unless both surveys used the same horizon.
SurveyDiff compare_surveys(const SurveyReport& a, const SurveyReport& b, double tolerance = 0.05);

/// One row per sample.
void write_survey_csv(const SurveyReport& report, std::ostream& out);
nlohmann::json survey_json(const SurveyReport& report);
nlohmann::json diff_json(const SurveyDiff& diff);

}  // namespace singlab
