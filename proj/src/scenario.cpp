#include "cgvf/scenario.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cgvf/errors.hpp"
#include "cgvf/manifold.hpp"

namespace cgvf::scenario {

namespace {

using nlohmann::json;

#ifndef CGVF_SCENARIO_DIR
#define CGVF_SCENARIO_DIR "scenarios"
#endif

// Bare override keys and the section they live in.
const std::map<std::string, std::string> kLeafAliases = {
    {"count", "robots"},    {"seed", "robots"},       {"k", "gains"},        {"c", "gains"},
    {"r", "radii"},         {"R", "radii"},           {"dt", "integrator"},  {"t_end", "integrator"},
    {"dt_min", "integrator"}, {"omega0", "target"},   {"csv", "outputs"},    {"json", "outputs"},
    {"decimation", "outputs"}, {"phi", "tolerances"}, {"omega_dot", "tolerances"}, {"centroid", "tolerances"},
};

// Maps problems back to the original text. Keys are located by their first
// quoted occurrence, which is exact for the flat schema used here.
class Locator {
 public:
  explicit Locator(std::string_view text) : text_(text) {}

  std::pair<int, int> position(std::size_t offset) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  [[noreturn]] void fail(const std::string& path, const std::string& key, const std::string& what) const {
    const std::size_t at = key.empty() ? std::string_view::npos : text_.find("\"" + key + "\"");
    if (at == std::string_view::npos) throw ParseError(path + ": " + what);
    const auto [line, col] = position(at);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + path + ": " + what,
                     line, col);
  }

 private:
  std::string_view text_;
};

class Reader {
 public:
  Reader(const Locator& loc) : loc_(loc) {}

  void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) const {
    if (!obj.is_object()) loc_.fail(path, last_segment(path), "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items()) {
      if (!ok.count(key)) {
        std::string list;
        for (const auto& k : ok) list += (list.empty() ? "" : ", ") + k;
        loc_.fail(path + "/" + key, key, "unknown key '" + key + "' (allowed: " + list + ")");
      }
    }
  }

  double number(const json& obj, const std::string& path, const char* key, double fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) loc_.fail(path + "/" + key, key, "expected a number");
    return v.get<double>();
  }

  double required_number(const json& obj, const std::string& path, const char* key) const {
    if (!obj.contains(key)) loc_.fail(path, last_segment(path), std::string("missing key '") + key + "'");
    return number(obj, path, key, 0.0);
  }

  std::size_t count(const json& obj, const std::string& path, const char* key) const {
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
      loc_.fail(path + "/" + key, key, "expected a non-negative integer");
    return v.get<std::size_t>();
  }

  Vector vector(const json& v, const std::string& path, const std::string& key, std::size_t dim) const {
    if (!v.is_array()) loc_.fail(path, key, "expected an array of numbers");
    if (dim != 0 && v.size() != dim)
      loc_.fail(path, key, "expected " + std::to_string(dim) + " entries, got " + std::to_string(v.size()));
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) loc_.fail(path, key, "expected an array of numbers");
      out[i] = v[i].get<double>();
    }
    return out;
  }

  std::pair<double, double> range(const json& obj, const std::string& path, const char* key,
                                  std::pair<double, double> fallback) const {
    if (!obj.contains(key)) return fallback;
    const Vector v = vector(obj.at(key), path + "/" + key, key, 2);
    if (!(v[1] > v[0])) loc_.fail(path + "/" + key, key, "range must satisfy lo < hi");
    return {v[0], v[1]};
  }

  std::string string(const json& obj, const std::string& path, const char* key) const {
    const json& v = obj.at(key);
    if (!v.is_string()) loc_.fail(path + "/" + key, key, "expected a string");
    return v.get<std::string>();
  }

  [[noreturn]] void fail(const std::string& path, const std::string& key, const std::string& what) const {
    loc_.fail(path, key, what);
  }

 private:
  static std::string last_segment(const std::string& path) {
    const auto slash = path.rfind('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
  }

  const Locator& loc_;
};

std::shared_ptr<const ManifoldSpec> read_manifold(const json& doc, const Reader& rd) {
  if (!doc.contains("manifold")) rd.fail("", "", "missing required section 'manifold'");
  const json& mf = doc.at("manifold");
  if (mf.is_string()) {
    try {
      return builtin(mf.get<std::string>());
    } catch (const NotFoundError& e) {
      rd.fail("/manifold", "manifold", e.what());
    }
  }
  rd.only_keys(mf, "/manifold", {"name", "m", "expressions"});
  if (!mf.contains("m") || !mf.contains("expressions"))
    rd.fail("/manifold", "manifold", "expression manifolds need 'm' and 'expressions'");
  const std::size_t m = rd.count(mf, "/manifold", "m");
  const json& exprs = mf.at("expressions");
  if (!exprs.is_array() || exprs.empty())
    rd.fail("/manifold/expressions", "expressions", "expected a non-empty array of formulas");
  std::vector<std::string> formulas;
  for (const auto& e : exprs) {
    if (!e.is_string()) rd.fail("/manifold/expressions", "expressions", "formulas must be strings");
    formulas.push_back(e.get<std::string>());
  }
  const std::string name = mf.contains("name") ? rd.string(mf, "/manifold", "name") : "custom";
  try {
    return std::make_shared<const ManifoldSpec>(ManifoldSpec::from_expressions(name, m, formulas));
  } catch (const ConfigError& e) {
    rd.fail("/manifold/expressions", "expressions", e.what());
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ParseError("override '" + assignment + "': expected key=value");
  std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  if (key.find('.') == std::string::npos) {
    const auto alias = kLeafAliases.find(key);
    if (alias == kLeafAliases.end()) throw ParseError("override '" + assignment + "': unknown key '" + key + "'");
    key = alias->second + "." + key;
  }
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  const auto parts = split(key, '.');
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].empty()) throw ParseError("override '" + assignment + "': empty path segment");
    if (!node->is_object()) {
      if (!node->is_null()) throw ParseError("override '" + assignment + "': '" + parts[i - 1] + "' is not a section");
      *node = json::object();
    }
    node = &(*node)[parts[i]];
  }
  *node = std::move(value);
}

Scenario parse(std::string_view text, const std::string& fallback_name, const std::vector<std::string>& overrides) {
  const Locator loc(text);
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = loc.position(e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                         ": malformed JSON: " + e.what(),
                     line, col);
  }
  if (!doc.is_object()) throw ParseError("line 1, column 1: scenario must be a JSON object", 1, 1);
  for (const auto& o : overrides) apply_override(doc, o);

  const Reader rd(loc);
  rd.only_keys(doc, "", {"name", "manifold", "robots", "gains", "radii", "integrator", "target", "breakdowns",
                         "outputs", "tolerances"});

  Scenario sc;
  sc.document = doc;
  sc.name = doc.contains("name") ? rd.string(doc, "", "name") : fallback_name;
  auto& cfg = sc.config;
  cfg.manifold = read_manifold(doc, rd);
  const std::size_t n = cfg.manifold->n();
  const std::size_t m = cfg.manifold->m();

  const json empty = json::object();
  const json& radii = doc.value("radii", empty);
  rd.only_keys(radii, "/radii", {"r", "R"});
  cfg.safe_radius = rd.number(radii, "/radii", "r", 0.4);
  cfg.sensing_radius = rd.number(radii, "/radii", "R", 1.6);

  if (!doc.contains("robots")) rd.fail("", "", "missing required section 'robots'");
  const json& robots = doc.at("robots");
  rd.only_keys(robots, "/robots", {"count", "seed", "box", "initial"});
  if (robots.contains("initial")) {
    const json& list = robots.at("initial");
    if (!list.is_array() || list.empty()) rd.fail("/robots/initial", "initial", "expected a non-empty array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string path = "/robots/initial/" + std::to_string(i);
      rd.only_keys(list[i], path, {"id", "x", "omega"});
      if (!list[i].contains("x") || !list[i].contains("omega")) rd.fail(path, "initial", "each robot needs x and omega");
      sim::RobotState s;
      s.id = list[i].contains("id") ? static_cast<int>(rd.count(list[i], path, "id")) : static_cast<int>(i + 1);
      s.x = rd.vector(list[i].at("x"), path + "/x", "x", n);
      s.omega = rd.vector(list[i].at("omega"), path + "/omega", "omega", m);
      cfg.initial.push_back(std::move(s));
    }
    if (robots.contains("count") && rd.count(robots, "/robots", "count") != cfg.initial.size())
      rd.fail("/robots/count", "count", "count disagrees with the number of initial states");
  } else {
    if (!robots.contains("count")) rd.fail("/robots", "robots", "give either 'initial' or 'count' with 'seed'");
    const std::size_t count = rd.count(robots, "/robots", "count");
    if (count == 0) rd.fail("/robots/count", "count", "at least one robot is required");
    const std::uint64_t seed = robots.contains("seed") ? rd.count(robots, "/robots", "seed") : 0;
    sim::SamplingBox box;
    const json& bx = robots.value("box", empty);
    rd.only_keys(bx, "/robots/box", {"x", "omega"});
    std::tie(box.x_lo, box.x_hi) = rd.range(bx, "/robots/box", "x", {box.x_lo, box.x_hi});
    std::tie(box.omega_lo, box.omega_hi) = rd.range(bx, "/robots/box", "omega", {box.omega_lo, box.omega_hi});
    cfg.initial = sim::sample_initial_states(*cfg.manifold, count, seed, box, cfg.safe_radius);
  }

  const json& gains = doc.value("gains", empty);
  rd.only_keys(gains, "/gains", {"k", "c"});
  Vector k(n, 0.7);
  if (gains.contains("k")) {
    const json& kv = gains.at("k");
    if (kv.is_number()) k = Vector(n, kv.get<double>());
    else k = rd.vector(kv, "/gains/k", "k", n);
  }
  const double c = rd.number(gains, "/gains", "c", 20.0);
  cfg.gains.assign(cfg.initial.size(), k);
  cfg.attraction.assign(cfg.initial.size(), c);

  const json& integ = doc.value("integrator", empty);
  rd.only_keys(integ, "/integrator", {"dt", "t_end", "dt_min"});
  cfg.dt = rd.number(integ, "/integrator", "dt", 1e-3);
  cfg.t_end = rd.number(integ, "/integrator", "t_end", 30.0);
  cfg.dt_min = rd.number(integ, "/integrator", "dt_min", 1e-6);

  const json& target = doc.value("target", empty);
  rd.only_keys(target, "/target", {"omega0"});
  cfg.target_omega0 = target.contains("omega0") ? rd.vector(target.at("omega0"), "/target/omega0", "omega0", m)
                                                : Vector(m);

  if (doc.contains("breakdowns")) {
    const json& list = doc.at("breakdowns");
    if (!list.is_array()) rd.fail("/breakdowns", "breakdowns", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string path = "/breakdowns/" + std::to_string(i);
      rd.only_keys(list[i], path, {"robot", "time"});
      if (!list[i].contains("robot")) rd.fail(path, "breakdowns", "missing key 'robot'");
      cfg.breakdowns.push_back(
          {static_cast<int>(rd.count(list[i], path, "robot")), rd.required_number(list[i], path, "time")});
    }
  }

  const json& outputs = doc.value("outputs", empty);
  rd.only_keys(outputs, "/outputs", {"csv", "json", "decimation"});
  if (outputs.contains("csv")) sc.csv_path = rd.string(outputs, "/outputs", "csv");
  if (outputs.contains("json")) sc.json_path = rd.string(outputs, "/outputs", "json");
  if (outputs.contains("decimation")) cfg.decimation = rd.count(outputs, "/outputs", "decimation");

  const json& tol = doc.value("tolerances", empty);
  rd.only_keys(tol, "/tolerances", {"phi", "omega_dot", "centroid"});
  sc.tolerances.phi = rd.number(tol, "/tolerances", "phi", 1e-2);
  sc.tolerances.omega_dot = rd.number(tol, "/tolerances", "omega_dot", 1e-2);
  sc.tolerances.centroid = rd.number(tol, "/tolerances", "centroid", 1e-2);

  cfg.validate();
  return sc;
}

std::string resolve_path(const std::string& path_or_name) {
  namespace fs = std::filesystem;
  if (fs::exists(path_or_name)) return path_or_name;
  if (fs::path(path_or_name).has_extension() || path_or_name.find('/') != std::string::npos) return path_or_name;
  std::vector<fs::path> dirs;
  if (const char* env = std::getenv("CGVF_SCENARIO_DIR")) dirs.emplace_back(env);
  dirs.emplace_back(CGVF_SCENARIO_DIR);
  for (const auto& d : dirs) {
    const fs::path candidate = d / (path_or_name + ".json");
    if (fs::exists(candidate)) return candidate.string();
  }
  return path_or_name;
}

Scenario load(const std::string& path_or_name, const std::vector<std::string>& overrides) {
  const std::string path = resolve_path(path_or_name);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read scenario '" + path_or_name + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string stem = std::filesystem::path(path).stem().string();
  return parse(buf.str(), stem, overrides);
}

std::vector<std::string> bundled_names() {
  return {"helicoid_case1", "helicoid_case2", "torus4d_case1", "torus4d_case2", "breakdown_case1", "breakdown_case2"};
}

}  // namespace cgvf::scenario
