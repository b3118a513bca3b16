#include "bandflow/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace bandflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Central slope of an arbitrary node-sampled function, interior only.
std::vector<double> interior_slope(const Grid& grid,
                                   const std::vector<double>& v) {
  const auto& x = grid.nodes();
  const size_t n = v.size();
  std::vector<double> s(n, 0.0);
  for (size_t i = 1; i + 1 < n; ++i) {
    const double hm = x[i] - x[i - 1], hp = x[i + 1] - x[i];
    s[i] = (-hp / (hm * (hm + hp))) * v[i - 1] +
           ((hp - hm) / (hm * hp)) * v[i] +
           (hm / (hp * (hm + hp))) * v[i + 1];
  }
  return s;
}

std::vector<double> interior_curvature(const Grid& grid,
                                       const std::vector<double>& v) {
  const auto& x = grid.nodes();
  const size_t n = v.size();
  std::vector<double> s(n, 0.0);
  for (size_t i = 1; i + 1 < n; ++i) {
    const double hm = x[i] - x[i - 1], hp = x[i + 1] - x[i];
    s[i] = 2.0 * (v[i - 1] / (hm * (hm + hp)) - v[i] / (hm * hp) +
                  v[i + 1] / (hp * (hm + hp)));
  }
  return s;
}

// Least-squares slope of y against t over indices [k0, k1].
double fit_slope(const std::vector<double>& t, const std::vector<double>& y,
                 size_t k0, size_t k1) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double n = static_cast<double>(k1 - k0 + 1);
  for (size_t k = k0; k <= k1; ++k) {
    st += t[k];
    sy += y[k];
    stt += t[k] * t[k];
    sty += t[k] * y[k];
  }
  const double denom = n * stt - st * st;
  return denom == 0.0 ? 0.0 : (n * sty - st * sy) / denom;
}

size_t first_index_at_or_after(const std::vector<double>& t, double v) {
  return std::lower_bound(t.begin(), t.end(), v - 1e-12) - t.begin();
}

std::vector<double> wave_nodal_values(const WaveSolution& wave,
                                      const Grid& grid) {
  std::vector<double> phi(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) phi[i] = wave.phi_at(grid[i]);
  return phi;
}

}  // namespace

std::string status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::not_applicable:
      return "not-applicable";
    case CheckStatus::partial:
      return "partial";
  }
  return "?";
}

CheckResult check_linfty_wedge(const EvolveTrace& trace,
                               const WaveSolution& wave_bar,
                               const WedgeOptions& opt) {
  CheckResult res;
  res.name = "linfty-wedge";
  res.tolerance = opt.tol;
  const size_t m = trace.size();
  if (m < 3) {
    res.status = CheckStatus::not_applicable;
    res.note = "insufficient data: need at least 3 snapshots";
    return res;
  }
  res.window = {trace.snap_times.front(), trace.snap_times.back(), 1.0};

  std::vector<double> lo(m), hi(m);
  for (size_t k = 0; k < m; ++k) {
    const auto& u = trace.snap(k);
    lo[k] = *std::min_element(u.begin(), u.end());
    hi[k] = *std::max_element(u.begin(), u.end());
  }
  const double cbar = wave_bar.c;
  double c2 = -kInf;
  for (size_t k = 0; k < m; ++k)
    c2 = std::max(c2, hi[k] - cbar * trace.snap_times[k]);

  const size_t k_half =
      first_index_at_or_after(trace.snap_times, 0.5 * trace.snap_times.back());
  const size_t k0 = std::min(k_half, m - 2);
  const double c0 = fit_slope(trace.snap_times, lo, k0, m - 1);
  const double upper_rate = fit_slope(trace.snap_times, hi, k0, m - 1);
  double c1 = -kInf;
  for (size_t k = 0; k < m; ++k)
    c1 = std::max(c1, c0 * trace.snap_times[k] - lo[k]);

  double violation = 0.0;
  for (size_t k = 0; k < m; ++k) {
    violation = std::max(violation, hi[k] - (cbar * trace.snap_times[k] + c2));
    violation = std::max(violation, (c0 * trace.snap_times[k] - c1) - lo[k]);
  }
  const double rate_excess = upper_rate - cbar * (1.0 + opt.rate_tol);

  res.measured = {{"c0", c0},
                  {"C1", c1},
                  {"C2", c2},
                  {"cbar", cbar},
                  {"upper_rate", upper_rate},
                  {"violation", std::max(violation, rate_excess)}};
  res.status = (c0 > 0.0 && violation <= opt.tol && rate_excess <= 0.0)
                   ? CheckStatus::pass
                   : CheckStatus::fail;
  return res;
}

CheckResult check_convexity(const EvolveTrace& trace,
                            const ConvexityOptions& opt) {
  CheckResult res;
  res.name = "convexity";
  if (trace.datum_kind != "rho") {
    // Hypothesis gate: convexity is only claimed for rho data.
    res.status = CheckStatus::not_applicable;
    res.note = "datum kind '" + trace.datum_kind + "' is not rho";
    return res;
  }
  res.window = {trace.snap_times.front(), trace.snap_times.back(), 1.0};
  double min_curv = kInf, max_curv = 0.0;
  for (size_t k = 0; k < trace.size(); ++k) {
    const auto uxx = interior_curvature(trace.grid, trace.snap(k));
    for (size_t i = 1; i + 1 < uxx.size(); ++i) {
      min_curv = std::min(min_curv, uxx[i]);
      max_curv = std::max(max_curv, std::fabs(uxx[i]));
    }
  }
  res.tolerance = opt.tol_rel * max_curv;
  res.measured = {{"min_uxx", min_curv}, {"max_abs_uxx", max_curv}};
  res.status =
      min_curv > -res.tolerance ? CheckStatus::pass : CheckStatus::fail;
  return res;
}

CheckResult check_gradient_envelopes(const EvolveTrace& trace,
                                     const WaveSolution& wave_bar,
                                     const WaveSolution& wave_h0,
                                     const EnvelopeOptions& opt) {
  CheckResult res;
  res.name = "gradient-envelopes";
  if (trace.datum_kind != "rho" || !trace.symmetric) {
    res.status = CheckStatus::not_applicable;
    res.note = "envelopes are claimed for symmetric rho-initialized runs";
    return res;
  }
  const Grid& grid = trace.grid;
  const double dx = 2.0 / (grid.size() - 1);
  const double tol = opt.tol_disc > 0 ? opt.tol_disc : 50.0 * dx * dx + 1e-8;
  res.tolerance = tol;
  res.window = {trace.snap_times.front(), trace.snap_times.back(), opt.x_abs};

  // Wave slopes through the same central stencil as the solution, so the
  // truncation error largely cancels where u approaches the wave.
  const auto upper_slope =
      interior_slope(grid, wave_nodal_values(wave_bar, grid));
  const auto lower_slope =
      interior_slope(grid, wave_nodal_values(wave_h0, grid));

  double worst_upper = -kInf;
  std::vector<char> lower_ok(trace.size(), 1);
  for (size_t k = 0; k < trace.size(); ++k) {
    if (trace.snap_times[k] <= 0.0) continue;
    const auto ux = interior_slope(grid, trace.snap(k));
    for (size_t i = 1; i + 1 < grid.size(); ++i) {
      const double ax = std::fabs(grid[i]);
      if (ax > opt.x_abs || grid[i] == 0.0) continue;
      const double sgn = grid[i] > 0 ? 1.0 : -1.0;
      // Upper: 0 < sgn u_x < sgn Phi'.
      worst_upper = std::max(worst_upper, -sgn * ux[i]);
      worst_upper = std::max(worst_upper, sgn * (ux[i] - upper_slope[i]));
      // Lower: sgn Phi'(; h0) < sgn u_x.
      if (sgn * (lower_slope[i] - ux[i]) > tol) lower_ok[k] = 0;
    }
  }

  // Onset: the first snapshot after which the lower envelope holds at
  // every later snapshot.
  double onset = -1.0;
  for (size_t k = 0; k < trace.size(); ++k) {
    if (trace.snap_times[k] <= 0.0 || !lower_ok[k]) continue;
    bool holds = true;
    for (size_t j = k; j < trace.size(); ++j)
      if (!lower_ok[j]) {
        holds = false;
        break;
      }
    if (holds) {
      onset = trace.snap_times[k];
      break;
    }
  }

  res.measured = {{"upper_violation", worst_upper},
                  {"lower_onset", onset},
                  {"h0", wave_h0.h}};
  res.status = (worst_upper <= tol && onset >= 0.0) ? CheckStatus::pass
                                                    : CheckStatus::fail;
  return res;
}

CheckResult check_interior_gradient(const EvolveTrace& trace,
                                    const WaveSolution& wave_bar,
                                    const InteriorGradientOptions& opt) {
  CheckResult res;
  res.name = "interior-gradient";
  const double eps = opt.epsilon;
  if (!(eps > 0.0 && eps < 0.5)) {
    res.status = CheckStatus::not_applicable;
    res.note = "epsilon must lie in (0, 1/2)";
    return res;
  }
  const Grid& grid = trace.grid;
  const double m2 =
      (wave_bar.phi_at(1.0 - eps) + wave_bar.c * opt.t_sandwich) / eps;
  res.window = {trace.snap_times.front(), trace.snap_times.back(), 1.0 - eps};

  // Band minima of |u_x| on [1-2eps, 1-eps] and its mirror.
  const auto band_min = [&](const std::vector<double>& ux, double a,
                            double b) {
    double m = kInf;
    for (size_t i = 1; i + 1 < grid.size(); ++i)
      if (grid[i] >= a && grid[i] <= b) m = std::min(m, std::fabs(ux[i]));
    return m;
  };

  std::vector<double> window_sup(trace.size(), 0.0);
  double worst_band = -kInf;
  bool band_ok = true;
  for (size_t k = 0; k < trace.size(); ++k) {
    const auto ux = interior_slope(grid, trace.snap(k));
    for (size_t i = 1; i + 1 < grid.size(); ++i)
      if (std::fabs(grid[i]) <= 1.0 - 2.0 * eps)
        window_sup[k] = std::max(window_sup[k], std::fabs(ux[i]));
    if (trace.snap_times[k] <= 0.0) continue;
    const double right = band_min(ux, 1.0 - 2.0 * eps, 1.0 - eps);
    const double left = band_min(ux, -1.0 + eps, -1.0 + 2.0 * eps);
    const double worst = std::max(left, right);
    worst_band = std::max(worst_band, worst - m2);
    if (!(worst < m2)) band_ok = false;
  }

  // Degenerate window: the datum itself already saturates the bound.
  {
    const auto ux0 = interior_slope(grid, trace.snap(0));
    const double b0 = std::max(band_min(ux0, 1.0 - 2.0 * eps, 1.0 - eps),
                               band_min(ux0, -1.0 + eps, -1.0 + 2.0 * eps));
    if (b0 >= m2) {
      res.status = CheckStatus::not_applicable;
      res.note =
          "hypothesis-window adjustment: M2 is below the band slope of the "
          "initial datum; enlarge epsilon";
      res.measured = {{"M2", m2}, {"band_min_t0", b0}};
      return res;
    }
  }

  // T_eps: first snapshot from which the window sup never exceeds
  // max(M2, its own value).
  double t_eps = -1.0, m3 = -1.0;
  for (size_t k = 0; k < trace.size(); ++k) {
    const double cand = std::max(m2, window_sup[k]);
    bool holds = true;
    for (size_t j = k + 1; j < trace.size(); ++j)
      if (window_sup[j] > cand) {
        holds = false;
        break;
      }
    if (holds) {
      t_eps = trace.snap_times[k];
      m3 = cand;
      break;
    }
  }

  res.measured = {{"M2", m2},
                  {"M3", m3},
                  {"T_eps", t_eps},
                  {"band_violation", worst_band},
                  {"T_sandwich", opt.t_sandwich}};
  res.status =
      (band_ok && t_eps >= 0.0) ? CheckStatus::pass : CheckStatus::fail;
  return res;
}

CheckResult check_convergence(const EvolveTrace& trace,
                              const WaveSolution& wave_bar,
                              const ConvergenceOptions& opt) {
  CheckResult res;
  res.name = "convergence";
  const Grid& grid = trace.grid;
  const double eps = opt.epsilon;
  const double x_win = 1.0 - 2.0 * eps;
  const double t_end = trace.snap_times.back();
  const double s0 = opt.s0 > 0.0 ? opt.s0 : t_end / 8.0;
  const double tol =
      opt.tol > 0.0 ? opt.tol
                    : 0.05 * (wave_bar.phi_at(x_win) - wave_bar.phi_at(0.0));
  res.tolerance = tol;
  res.window = {s0, t_end, x_win};

  const double cbar = wave_bar.c;
  std::vector<double> phi(grid.size());
  for (size_t i = 0; i < grid.size(); ++i)
    phi[i] = std::fabs(grid[i]) <= x_win ? wave_bar.phi_at(grid[i]) : 0.0;

  std::vector<double> ladder_s, ladder_e;
  bool truncated = false;
  for (int l = 0; l < opt.ladder; ++l) {
    const double s_req = s0 * std::pow(opt.ratio, l);
    const size_t ks = first_index_at_or_after(trace.snap_times, s_req);
    if (ks >= trace.size()) {
      truncated = true;
      break;
    }
    const double s = trace.snap_times[ks];
    const double u0s = trace.center_value(ks);
    if (s + opt.t_window > t_end + 1e-9) {
      // The offset window would spill past the end of the trace, so this
      // rung is not comparable to the earlier ones.
      truncated = true;
      break;
    }
    double e = 0.0;
    bool any = false;
    for (size_t k = ks; k < trace.size(); ++k) {
      const double t = trace.snap_times[k] - s;
      if (t > opt.t_window + 1e-12) break;
      any = true;
      const auto& u = trace.snap(k);
      for (size_t i = 0; i < grid.size(); ++i) {
        if (std::fabs(grid[i]) > x_win) continue;
        e = std::max(e, std::fabs(u[i] - u0s - phi[i] - cbar * t));
      }
    }
    if (!any) {
      truncated = true;
      break;
    }
    ladder_s.push_back(s);
    ladder_e.push_back(e);
  }

  // Decreasing ladder with one allowed non-monotone step below 5%; the
  // absolute floor keeps ulp-level noise on exact-wave input from
  // registering as growth.
  bool decreasing = ladder_e.size() >= 2;
  int bad_steps = 0;
  for (size_t l = 1; l < ladder_e.size(); ++l) {
    if (ladder_e[l] >= ladder_e[l - 1] + 1e-13) {
      if (ladder_e[l] <= 1.05 * ladder_e[l - 1])
        ++bad_steps;
      else
        decreasing = false;
    }
  }
  if (bad_steps > 1) decreasing = false;

  // Centerline speed over the trailing half of the run.
  const size_t k_half =
      first_index_at_or_after(trace.snap_times, 0.5 * t_end);
  std::vector<double> centers(trace.size());
  for (size_t k = 0; k < trace.size(); ++k) centers[k] = trace.center_value(k);
  const double speed = fit_slope(trace.snap_times, centers,
                                 std::min(k_half, trace.size() - 2),
                                 trace.size() - 1);
  const double speed_err = std::fabs(speed - cbar) / cbar;

  for (size_t l = 0; l < ladder_e.size(); ++l) {
    res.measured["E" + std::to_string(l)] = ladder_e[l];
    res.measured["s" + std::to_string(l)] = ladder_s[l];
  }
  res.measured["speed"] = speed;
  res.measured["speed_rel_err"] = speed_err;
  res.measured["cbar"] = cbar;

  if (truncated || ladder_e.size() < static_cast<size_t>(opt.ladder)) {
    res.status = CheckStatus::partial;
    res.note = trace.horizon.reached
                   ? "slope horizon reached before the ladder completed"
                   : "trace too short for the requested ladder";
    return res;
  }
  const bool final_ok = ladder_e.back() < tol;
  const bool speed_ok = speed_err <= opt.speed_tol;
  res.status = (decreasing && final_ok && speed_ok) ? CheckStatus::pass
                                                    : CheckStatus::fail;
  if (!decreasing) res.note = "E(s) ladder not decreasing";
  else if (!final_ok) res.note = "final interior error above tolerance";
  else if (!speed_ok) res.note = "centerline speed off cbar";
  return res;
}

CheckResult check_comparison(const EvolveTrace& lower,
                             const EvolveTrace& upper) {
  CheckResult res;
  res.name = "comparison";
  if (!lower.grid.same_as(upper.grid) ||
      lower.scheme_name != upper.scheme_name ||
      lower.pair_desc != upper.pair_desc)
    throw TraceError(
        "comparison needs traces on the same grid, pair and scheme");
  const size_t m = std::min(lower.size(), upper.size());
  if (m == 0 || lower.snap_times[0] != upper.snap_times[0])
    throw TraceError("comparison needs aligned snapshot times");

  // Hypothesis gate: require strict ordering at t = 0.
  const auto& a0 = lower.snap(0);
  const auto& b0 = upper.snap(0);
  for (size_t i = 0; i < a0.size(); ++i) {
    if (!(a0[i] < b0[i])) {
      res.status = CheckStatus::not_applicable;
      res.note = "hypothesis not met at t=0: data are not strictly ordered";
      return res;
    }
  }

  double min_gap = kInf;
  bool ordered = true;
  for (size_t k = 0; k < m; ++k) {
    if (lower.snap_times[k] != upper.snap_times[k])
      throw TraceError("comparison snapshot times diverge at index " +
                       std::to_string(k));
    const auto& a = lower.snap(k);
    const auto& b = upper.snap(k);
    for (size_t i = 0; i < a.size(); ++i) {
      min_gap = std::min(min_gap, b[i] - a[i]);
      if (!(a[i] < b[i])) ordered = false;
    }
  }
  res.window = {lower.snap_times.front(), lower.snap_times[m - 1], 1.0};
  res.measured = {{"min_gap", min_gap},
                  {"snapshots", static_cast<double>(m)}};
  res.status = ordered ? CheckStatus::pass : CheckStatus::fail;
  return res;
}

bool VerificationReport::any_fail() const {
  for (const auto& c : checks)
    if (c.status == CheckStatus::fail) return true;
  return false;
}

VerificationReport build_report(std::vector<CheckResult> checks,
                                std::map<std::string, std::string> meta) {
  std::set<std::string> names;
  for (const auto& c : checks)
    if (!names.insert(c.name).second)
      throw ConfigError("duplicate check name '" + c.name + "' in report");
  std::sort(checks.begin(), checks.end(),
            [](const CheckResult& a, const CheckResult& b) {
              return a.name < b.name;
            });
  return VerificationReport{std::move(meta), std::move(checks)};
}

}  // namespace bandflow
