#include "singularlab/io.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace singlab {

namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string> split_top(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : text) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(Errc::InvalidInput, "config key '" + key + "' expects an integer, got '" + value + "'");
  }
  return out;
}

Scalar scalar_from_json(const nlohmann::json& v) {
  if (v.is_string()) return Scalar::parse(v.get<std::string>());
  if (v.is_number_integer()) return Scalar(Rational(v.get<long>()));
  if (v.is_number_float()) {
    // go through the shortest decimal text so 0.1 means 1/10
    std::ostringstream s;
    s << v;
    return Scalar::parse(s.str());
  }
  throw Error(Errc::InvalidInput, "matrix entries must be strings or numbers");
}

}  // namespace

std::string version_string() { return std::string("singularlab ") + kVersion; }

std::vector<Scalar> parse_scalar_list(const std::string& text) {
  std::vector<Scalar> out;
  for (const auto& item : split_top(text, ',')) {
    if (item.empty()) throw Error(Errc::InvalidInput, "empty entry in list '" + text + "'");
    out.push_back(Scalar::parse(item));
  }
  return out;
}

std::vector<long> parse_schedule(const std::string& text) {
  std::vector<long> out;
  for (const auto& item : split_top(text, ',')) out.push_back(parse_number<long>("schedule", item));
  validate_schedule(out);
  return out;
}

ScalarMatrix matrix_from_json(const nlohmann::json& j) {
  const nlohmann::json& rows = j.is_object() && j.contains("rows") ? j.at("rows") : j;
  if (!rows.is_array() || rows.empty()) throw Error(Errc::InvalidInput, "matrix JSON must be a nonempty array of rows");
  const bool flat = !rows.front().is_array();
  const std::size_t r = flat ? 1 : rows.size();
  const std::size_t c = flat ? rows.size() : rows.front().size();
  if (c == 0) throw Error(Errc::InvalidInput, "matrix rows must be nonempty");
  ScalarMatrix m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  for (std::size_t i = 0; i < r; ++i) {
    const nlohmann::json& row = flat ? rows : rows[i];
    if (!row.is_array() || row.size() != c) throw Error(Errc::InvalidInput, "matrix rows must have equal length");
    for (std::size_t k = 0; k < c; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = scalar_from_json(row[k]);
  }
  return m;
}

ScalarMatrix parse_matrix(const std::string& text_or_path) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(text_or_path, ec)) {
    std::ifstream in(text_or_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::InvalidInput, "cannot read matrix JSON '" + text_or_path + "': " + e.what());
    }
    return matrix_from_json(j);
  }
  std::vector<std::vector<Scalar>> rows;
  for (const auto& row : split_top(text_or_path, ';')) rows.push_back(parse_scalar_list(row));
  if (rows.empty() || rows.front().empty()) throw Error(Errc::InvalidInput, "empty matrix");
  ScalarMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw Error(Errc::InvalidInput, "matrix rows must have equal length");
    for (std::size_t k = 0; k < rows[i].size(); ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }
  return m;
}

nlohmann::json matrix_json(const ScalarMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k).to_string());
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json vector_json(const ScalarVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i).to_string());
  return out;
}

nlohmann::json integers_json(const std::vector<Integer>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : v) out.push_back(x.fits_slong_p() ? nlohmann::json(x.get_si()) : nlohmann::json(x.get_str()));
  return out;
}

nlohmann::json multivector_json(const MultiVector<Scalar>& w) {
  nlohmann::json coeffs = nlohmann::json::object();
  for (const auto& [I, v] : w.coeffs()) coeffs[set_to_string(I)] = v.to_string();
  return {{"dim", w.dim()}, {"grade", w.grade()}, {"coeffs", coeffs}};
}

MultiVector<Scalar> multivector_from_json(const nlohmann::json& j) {
  try {
    MultiVector<Scalar> w(j.at("dim").get<int>(), j.at("grade").get<int>());
    for (const auto& [key, value] : j.at("coeffs").items()) {
      w.set(key.empty() ? IndexSet{0} : set_from_string(key), scalar_from_json(value));
    }
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidInput, std::string("malformed multivector JSON: ") + e.what());
  }
}

nlohmann::json submodule_json(const Submodule& d) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < d.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < d.rank(); ++k) row.push_back(d.generators()(i, k));
    rows.push_back(row);
  }
  return rows;
}

std::pair<std::string, std::string> fraction_form(const Scalar& x) {
  if (x.is_rational()) return {x.rational().get_num().get_str(), x.rational().get_den().get_str()};
  if (x.is_quadratic()) {
    const QuadIrr& q = x.quadratic();
    Integer den = lcm(q.a.get_den(), q.b.get_den());
    Scalar num(QuadIrr{Rational(q.a * den), Rational(q.b * den), q.d});
    return {num.to_string(), den.get_str()};
  }
  return {x.to_string(), "1"};
}

Config parse_config(const std::string& text, Config c) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::InvalidInput, "config line " + std::to_string(lineno) + " is not key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "base") {
      c.base = Scalar::parse(value);
    } else if (key == "precision_bits") {
      c.precision_bits = parse_number<int>(key, value);
    } else if (key == "svp_dim_cap") {
      c.svp_dim_cap = parse_number<int>(key, value);
    } else if (key == "svp_budget") {
      c.svp_budget = parse_number<std::uint64_t>(key, value);
    } else if (key == "box_cap") {
      c.box_cap = parse_number<std::uint64_t>(key, value);
    } else if (key == "enumeration_budget") {
      c.enumeration_budget = parse_number<std::uint64_t>(key, value);
    } else if (key == "condition_budget") {
      c.condition_budget = parse_number<std::uint64_t>(key, value);
    } else if (key == "schedule") {
      c.schedule = parse_schedule(value);
    } else if (key == "output_dir") {
      c.output_dir = value;
    } else if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "threads") {
      c.threads = parse_number<int>(key, value);
    } else {
      throw Error(Errc::InvalidInput, "unknown config key '" + key + "' on line " + std::to_string(lineno));
    }
  }
  if (!(Scalar(1) < c.base)) throw Error(Errc::InvalidInput, "config base must exceed 1");
  if (c.precision_bits < 128) throw Error(Errc::InvalidInput, "precision_bits must be at least 128");
  if (c.svp_dim_cap < 1) throw Error(Errc::InvalidInput, "svp_dim_cap must be positive");
  if (c.threads < 1) throw Error(Errc::InvalidInput, "threads must be positive");
  return c;
}

Config load_config_file(const std::string& path, Config base) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidInput, "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

Config resolve_config(const std::optional<std::string>& path) {
  if (path) return load_config_file(*path);
  if (const char* env = std::getenv("SINGULARLAB_CONFIG"); env && *env) return load_config_file(env);
  return Config{};
}

nlohmann::json config_json(const Config& c) {
  return {{"base", c.base.to_string()},
          {"precision_bits", c.precision_bits},
          {"svp_dim_cap", c.svp_dim_cap},
          {"svp_budget", c.svp_budget},
          {"box_cap", c.box_cap},
          {"enumeration_budget", c.enumeration_budget},
          {"condition_budget", c.condition_budget},
          {"schedule", c.schedule},
          {"output_dir", c.output_dir},
          {"seed", c.seed},
          {"threads", c.threads}};
}

SvpOptions svp_options(const Config& c) { return SvpOptions{c.svp_dim_cap, 1, c.svp_budget}; }

SearchOptions search_options(const Config& c) { return SearchOptions{c.box_cap, c.enumeration_budget}; }

nlohmann::json approximation_json(const Approximation& a) {
  return {{"q", integers_json(a.q)}, {"p", integers_json(a.p)}, {"err", a.err.to_string()}};
}

nlohmann::json verdict_json(const HorizonVerdict& v) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : v.records) {
    nlohmann::json rec = {{"Q", r.Q}, {"bound", r.bound}, {"solved", r.solved}};
    rec["best"] = r.best ? approximation_json(*r.best) : nlohmann::json();
    rec["threshold"] = r.threshold ? nlohmann::json(r.threshold->to_string()) : nlohmann::json();
    rec["threshold_approx"] = r.threshold_approx;
    records.push_back(rec);
  }
  nlohmann::json out = {{"status", status_name(v.status)}, {"onset_index", v.onset}, {"records", records}};
  out["refuting_Q"] = v.refuting_Q ? nlohmann::json(*v.refuting_Q) : nlohmann::json();
  if (!v.reason.empty()) out["reason"] = v.reason;
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(Errc::InvalidInput, "cannot write '" + path + "'");
  out << text;
}

}  // namespace singlab
