#include "bandflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bandflow {

namespace {

using nlohmann::json;

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  return out;
}

// JSON has no inf; infinite h (the full wave) is serialized as "inf".
json finite_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  return json(v);
}

json measured_to_json(const std::map<std::string, double>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[k] = finite_or_inf(v);
  return out;
}

}  // namespace

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
}

void write_profile_csv(const std::string& path, const WaveProfile& profile) {
  auto out = open_out(path);
  out << "x,phi,psi\n";
  for (const auto& s : profile.samples())
    out << fmt17(s.x) << ',' << fmt17(s.phi) << ',' << fmt17(s.psi) << '\n';
}

std::vector<ProfileSample> read_profile_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,phi,psi", 0) != 0)
    throw ConfigError("'" + path + "' is not a profile CSV (header x,phi,psi)");
  std::vector<ProfileSample> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ProfileSample s{};
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &s.x, &s.phi, &s.psi) != 3)
      throw ConfigError("malformed row in '" + path + "': " + line);
    rows.push_back(s);
  }
  return rows;
}

std::string wave_json(const WaveSolution& wave) {
  json j;
  j["c"] = wave.c;
  j["h"] = finite_or_inf(wave.h);
  j["x_plus"] = wave.x_plus;
  j["x_minus"] = wave.x_minus;
  j["height"] = finite_or_inf(wave.height);
  j["tol"] = wave.residual;
  return j.dump(2) + "\n";
}

void write_wave_json(const std::string& path, const WaveSolution& wave) {
  write_text_file(path, wave_json(wave));
}

void write_snapshots_csv(const std::string& path, const EvolveTrace& trace) {
  auto out = open_out(path);
  out << "t,x,u,ux,uxx,theta\n";
  for (size_t k = 0; k < trace.size(); ++k) {
    GridState s{trace.grid, trace.snap(k), trace.snap_times[k]};
    const auto ux = robin_slope(s);
    const auto uxx = robin_curvature(s);
    const auto theta = theta_of(s);
    for (size_t i = 0; i < s.u.size(); ++i)
      out << fmt17(s.t) << ',' << fmt17(trace.grid[i]) << ',' << fmt17(s.u[i])
          << ',' << fmt17(ux[i]) << ',' << fmt17(uxx[i]) << ','
          << fmt17(theta[i]) << '\n';
  }
}

std::string trace_json(const EvolveTrace& trace) {
  json j;
  j["meta"] = {{"pair", trace.pair_desc},
               {"scheme", trace.scheme_name},
               {"datum", trace.datum_kind},
               {"symmetric", trace.symmetric},
               {"grid", {{"kind", trace.grid.kind_name()},
                         {"cells", trace.grid.size() - 1}}},
               {"horizon", {{"reached", trace.horizon.reached},
                            {"time", trace.horizon.time},
                            {"slope", trace.horizon.slope}}}};
  j["snapshots"] = {{"times", trace.snap_times}};
  j["series"] = {{"t", trace.series_t},
                 {"u_center", trace.series_center},
                 {"u_left", trace.series_left},
                 {"u_right", trace.series_right},
                 {"max_slope", trace.series_max_slope},
                 {"min_curvature", trace.series_min_curv}};
  return j.dump(2) + "\n";
}

void write_trace_json(const std::string& path, const EvolveTrace& trace) {
  write_text_file(path, trace_json(trace));
}

std::string report_json(const VerificationReport& report) {
  json j;
  j["meta"] = json::object();
  for (const auto& [k, v] : report.meta) j["meta"][k] = v;
  j["checks"] = json::array();
  for (const auto& c : report.checks) {
    json jc;
    jc["name"] = c.name;
    jc["status"] = status_name(c.status);
    jc["measured"] = measured_to_json(c.measured);
    jc["tolerance"] = c.tolerance;
    jc["window"] = {{"t_min", c.window.t_min},
                    {"t_max", c.window.t_max},
                    {"x_abs", c.window.x_abs}};
    if (!c.note.empty()) jc["note"] = c.note;
    j["checks"].push_back(jc);
  }
  return j.dump(2) + "\n";
}

void write_report_json(const std::string& path,
                       const VerificationReport& report) {
  write_text_file(path, report_json(report));
}

std::pair<std::vector<double>, std::vector<double>> read_xy_csv(
    const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("'" + path + "' is empty");
  std::vector<double> xs, us;
  // Header optional; accept either "x,u" or "x,phi,psi" profile exports.
  const bool has_header = line.find_first_not_of("0123456789+-.eE, \t") !=
                          std::string::npos;
  const bool profile_layout = line.rfind("x,phi", 0) == 0;
  if (!has_header) in.seekg(0);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double a, b, c;
    if (profile_layout) {
      if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3)
        throw ConfigError("malformed row in '" + path + "': " + line);
    } else {
      if (std::sscanf(line.c_str(), "%lf,%lf", &a, &b) != 2)
        throw ConfigError("malformed row in '" + path + "': " + line);
    }
    xs.push_back(a);
    us.push_back(b);
  }
  return {std::move(xs), std::move(us)};
}

void read_coefficient_table(const std::string& path,
                            std::vector<double>& omega, std::vector<double>& a,
                            std::vector<double>& b) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("omega,a,b", 0) != 0)
    throw ConfigError("'" + path +
                      "' is not a coefficient table (header omega,a,b)");
  omega.clear();
  a.clear();
  b.clear();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double w, av, bv;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &w, &av, &bv) != 3)
      throw ConfigError("malformed row in '" + path + "': " + line);
    omega.push_back(w);
    a.push_back(av);
    b.push_back(bv);
  }
}

}  // namespace bandflow
