#include "bandflow/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "bandflow/io.hpp"

namespace bandflow {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string strip_quotes(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': '" + v + "' is not a number");
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d)
    throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
  return i;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + v +
                    "'");
}

std::vector<double> to_double_list(const std::string& key,
                                   const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

std::vector<std::string> to_string_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

using Section = std::map<std::string, std::string>;

}  // namespace

bool RunConfig::has_section(const std::string& name) const {
  return std::find(sections_present.begin(), sections_present.end(), name) !=
         sections_present.end();
}

CoefficientPair CoefficientConfig::build() const {
  if (family == "constant")
    return CoefficientPair::constant(alpha, beta, degenerate);
  if (family == "rational-bump")
    return CoefficientPair::rational_bump(alpha, eps, beta, delta);
  if (family == "tabulated") {
    if (table.empty())
      throw ConfigError("tabulated family needs 'table = \"file.csv\"'");
    std::vector<double> omega, a, b;
    read_coefficient_table(table, omega, a, b);
    return CoefficientPair::tabulated(std::move(omega), std::move(a),
                                      std::move(b), symmetric);
  }
  throw ConfigError("unknown coefficient family '" + family +
                    "' (constant | rational-bump | tabulated)");
}

Grid PdeConfig::build_grid() const {
  if (grid == "uniform") return Grid::uniform(n);
  if (grid == "clustered") return Grid::clustered(n);
  throw ConfigError("unknown grid kind '" + grid +
                    "' (uniform | clustered)");
}

EvolveControls PdeConfig::build_controls(const std::string& datum_kind,
                                         bool symmetric) const {
  EvolveControls c;
  c.t_end = t_end;
  c.snapshot_dt = snapshot_dt;
  c.scheme = scheme_from_name(scheme);
  c.dt_init = dt_init;
  c.dt_max = dt_max;
  c.adaptive = adaptive;
  c.cfl = cfl;
  c.du_cap_rel = du_cap;
  c.slope_cap = slope_cap;
  c.datum_kind = datum_kind;
  c.symmetric = symmetric;
  return c;
}

RunConfig parse_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config_text(ss.str(), path);
}

RunConfig parse_run_config_text(const std::string& text,
                                const std::string& origin) {
  std::map<std::string, Section> sections;
  std::vector<std::string> order;
  {
    std::stringstream ss(text);
    std::string line, current;
    int lineno = 0;
    while (std::getline(ss, line)) {
      ++lineno;
      const size_t hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigError(origin + ":" + std::to_string(lineno) +
                            ": malformed section header");
        current = trim(line.substr(1, line.size() - 2));
        if (current.empty())
          throw ConfigError(origin + ":" + std::to_string(lineno) +
                            ": empty section name");
        if (!sections.count(current)) order.push_back(current);
        sections[current];
        continue;
      }
      const size_t eq = line.find('=');
      if (eq == std::string::npos || current.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": expected 'key = value' inside a section");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = strip_quotes(trim(line.substr(eq + 1)));
      if (key.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": empty key");
      if (sections[current].count(key))
        throw ConfigError(origin + ": duplicate key '" + current + "." + key +
                          "'");
      sections[current][key] = value;
    }
  }

  RunConfig cfg;
  cfg.sections_present = order;

  const auto take = [&](Section& sec, const std::string& name) {
    return [&sec, name](const std::string& key) -> std::optional<std::string> {
      auto it = sec.find(key);
      if (it == sec.end()) return std::nullopt;
      std::string v = it->second;
      sec.erase(it);
      return v;
    };
  };
  const auto reject_leftovers = [&](const Section& sec,
                                    const std::string& name) {
    if (!sec.empty())
      throw ConfigError(origin + ": unknown key '" + name + "." +
                        sec.begin()->first + "'");
  };

  for (auto& [name, sec] : sections) {
    auto get = take(sec, name);
    if (name == "coefficients") {
      if (auto v = get("family")) cfg.coefficients.family = *v;
      if (auto v = get("alpha")) cfg.coefficients.alpha = to_double("alpha", *v);
      if (auto v = get("eps")) cfg.coefficients.eps = to_double("eps", *v);
      if (auto v = get("beta")) cfg.coefficients.beta = to_double("beta", *v);
      if (auto v = get("delta")) cfg.coefficients.delta = to_double("delta", *v);
      if (auto v = get("degenerate"))
        cfg.coefficients.degenerate = to_bool("degenerate", *v);
      if (auto v = get("symmetric"))
        cfg.coefficients.symmetric = to_bool("symmetric", *v);
      if (auto v = get("table")) cfg.coefficients.table = *v;
    } else if (name == "wave") {
      if (auto v = get("tol")) cfg.wave.tol = to_double("tol", *v);
      if (auto v = get("nodes")) cfg.wave.nodes = to_int("nodes", *v);
      if (auto v = get("h")) cfg.wave.h = to_double("h", *v);
    } else if (name == "pde") {
      if (auto v = get("n")) cfg.pde.n = to_int("n", *v);
      if (auto v = get("grid")) cfg.pde.grid = *v;
      if (auto v = get("scheme")) cfg.pde.scheme = *v;
      if (auto v = get("t_end")) cfg.pde.t_end = to_double("t_end", *v);
      if (auto v = get("snapshot_dt"))
        cfg.pde.snapshot_dt = to_double("snapshot_dt", *v);
      if (auto v = get("dt_init")) cfg.pde.dt_init = to_double("dt_init", *v);
      if (auto v = get("dt_max")) cfg.pde.dt_max = to_double("dt_max", *v);
      if (auto v = get("adaptive")) cfg.pde.adaptive = to_bool("adaptive", *v);
      if (auto v = get("cfl")) cfg.pde.cfl = to_double("cfl", *v);
      if (auto v = get("du_cap")) cfg.pde.du_cap = to_double("du_cap", *v);
      if (auto v = get("slope_cap"))
        cfg.pde.slope_cap = to_double("slope_cap", *v);
      if (auto v = get("datum")) cfg.pde.datum = *v;
      if (auto v = get("m1_margin"))
        cfg.pde.m1_margin = to_double("m1_margin", *v);
      if (auto v = get("m1")) cfg.pde.m1 = to_double("m1", *v);
      if (auto v = get("datum_file")) cfg.pde.datum_file = *v;
    } else if (name == "verify") {
      if (auto v = get("checks")) cfg.verify.checks = to_string_list(*v);
      if (auto v = get("epsilon")) cfg.verify.epsilon = to_double("epsilon", *v);
      if (auto v = get("h0")) cfg.verify.h0 = to_double("h0", *v);
      if (auto v = get("envelope_x"))
        cfg.verify.envelope_x = to_double("envelope_x", *v);
      if (auto v = get("tol_disc"))
        cfg.verify.tol_disc = to_double("tol_disc", *v);
      if (auto v = get("s0")) cfg.verify.s0 = to_double("s0", *v);
      if (auto v = get("t_window"))
        cfg.verify.t_window = to_double("t_window", *v);
      if (auto v = get("speed_tol"))
        cfg.verify.speed_tol = to_double("speed_tol", *v);
    } else if (name == "sweep") {
      if (auto v = get("axis")) cfg.sweep.axis = *v;
      if (auto v = get("values")) cfg.sweep.values = to_double_list("values", *v);
    } else if (name == "output") {
      if (auto v = get("dir")) cfg.output.dir = *v;
    } else {
      throw ConfigError(origin + ": unknown section '[" + name + "]'");
    }
    reject_leftovers(sec, name);
  }
  return cfg;
}

}  // namespace bandflow
