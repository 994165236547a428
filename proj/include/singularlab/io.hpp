#pragma once

// Text and JSON forms of the library's values, and the run configuration.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "singularlab/dioph.hpp"
#include "singularlab/exterior.hpp"
#include "singularlab/flow.hpp"
#include "singularlab/lattice.hpp"

namespace singlab {

inline constexpr const char* kVersion = "0.1.0";
std::string version_string();

/// Splits on commas outside parentheses.
std::vector<Scalar> parse_scalar_list(const std::string& text);
std::vector<long> parse_schedule(const std::string& text);

/// Inline "a,b;c,d" (rows split by ';'), or a path to a JSON file holding an
/// array of rows of scalar strings or numbers.
ScalarMatrix parse_matrix(const std::string& text_or_path);
ScalarMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_json(const ScalarMatrix& m);
nlohmann::json vector_json(const ScalarVector& v);
nlohmann::json integers_json(const std::vector<Integer>& v);

/// {"dim": m, "grade": j, "coeffs": {"0,1": "1", ...}}.
nlohmann::json multivector_json(const MultiVector<Scalar>& w);
MultiVector<Scalar> multivector_from_json(const nlohmann::json& j);
/// Row-major integer arrays.
nlohmann::json submodule_json(const Submodule& d);

/// k,delta_num,delta_den with delta = num/den; num may carry a sqrt term
/// or an error bound when delta is not rational.
std::pair<std::string, std::string> fraction_form(const Scalar& x);

struct Config {
  Scalar base = Scalar(2);
  int precision_bits = 192;
  int svp_dim_cap = 8;
  std::uint64_t svp_budget = 200'000'000;
  /// Largest Diophantine box scanned point by point.
  std::uint64_t box_cap = 1'000'000;
  std::uint64_t enumeration_budget = 50'000'000;
  std::uint64_t condition_budget = 50'000'000;
  std::vector<long> schedule;
  std::string output_dir = ".";
  std::uint64_t seed = 1;
  int threads = 1;
};

/// key = value lines, '#' comments. Unknown keys are input errors.
Config parse_config(const std::string& text, Config base = {});
Config load_config_file(const std::string& path, Config base = {});
/// --config path if given, else $SINGULARLAB_CONFIG if set, else defaults.
Config resolve_config(const std::optional<std::string>& path);
nlohmann::json config_json(const Config& c);

SvpOptions svp_options(const Config& c);
SearchOptions search_options(const Config& c);

nlohmann::json approximation_json(const Approximation& a);
nlohmann::json verdict_json(const HorizonVerdict& v);

/// Writes text to path, creating parent directories.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace singlab
