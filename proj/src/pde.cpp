#include "bandflow/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bandflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// Slopes can overflow mid-blow-up; propagate NaN so the post-step
// finiteness check raises BlowUpError instead of a coefficient error.
CoefficientEval eval_or_nan(const CoefficientPair& pair, double p) {
  if (!std::isfinite(p)) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan, nan};
  }
  return pair.eval(p);
}

// Thomas solve for a tridiagonal system; diag/upper/lower are consumed.
void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag,
                       std::vector<double>& upper, std::vector<double>& rhs) {
  const size_t n = diag.size();
  for (size_t i = 1; i < n; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (size_t i = n - 1; i-- > 0;)
    rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

}  // namespace

// ---------------------------------------------------------------------
// Grid
// ---------------------------------------------------------------------

Grid Grid::uniform(int cells) {
  if (cells < 64 || cells % 2 != 0)
    throw ConfigError("grid needs an even cell count >= 64, got " +
                      std::to_string(cells));
  std::vector<double> x(cells + 1);
  for (int i = 0; i <= cells; ++i)
    x[i] = -1.0 + 2.0 * static_cast<double>(i) / cells;
  x.front() = -1.0;
  x[cells / 2] = 0.0;
  x.back() = 1.0;
  return Grid(std::move(x), GridKind::uniform);
}

Grid Grid::clustered(int cells) {
  if (cells < 64 || cells % 2 != 0)
    throw ConfigError("grid needs an even cell count >= 64, got " +
                      std::to_string(cells));
  std::vector<double> x(cells + 1);
  for (int i = 0; i <= cells; ++i) x[i] = -std::cos(kPi * i / cells);
  x.front() = -1.0;
  x[cells / 2] = 0.0;
  x.back() = 1.0;
  return Grid(std::move(x), GridKind::clustered);
}

double Grid::min_spacing() const {
  double h = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < x_.size(); ++i) h = std::min(h, x_[i] - x_[i - 1]);
  return h;
}

bool Grid::same_as(const Grid& other) const {
  return kind_ == other.kind_ && x_ == other.x_;
}

std::string Grid::kind_name() const {
  return kind_ == GridKind::uniform ? "uniform" : "clustered";
}

// ---------------------------------------------------------------------
// Discrete derivatives with the contact-condition closure
// ---------------------------------------------------------------------

std::vector<double> robin_slope(const GridState& state) {
  const auto& x = state.grid.nodes();
  const auto& u = state.u;
  const size_t n = u.size();
  std::vector<double> ux(n);
  ux[0] = -u[0];
  ux[n - 1] = u[n - 1];
  for (size_t i = 1; i + 1 < n; ++i) {
    const double hm = x[i] - x[i - 1], hp = x[i + 1] - x[i];
    ux[i] = (-hp / (hm * (hm + hp))) * u[i - 1] +
            ((hp - hm) / (hm * hp)) * u[i] +
            (hm / (hp * (hm + hp))) * u[i + 1];
  }
  return ux;
}

std::vector<double> robin_curvature(const GridState& state) {
  const auto& x = state.grid.nodes();
  const auto& u = state.u;
  const size_t n = u.size();
  std::vector<double> uxx(n);
  for (size_t i = 1; i + 1 < n; ++i) {
    const double hm = x[i] - x[i - 1], hp = x[i + 1] - x[i];
    uxx[i] = 2.0 * (u[i - 1] / (hm * (hm + hp)) - u[i] / (hm * hp) +
                    u[i + 1] / (hp * (hm + hp)));
  }
  // Ghost node mirrored at the local spacing, eliminated through
  // u_x(-1) = -u(-1): ghost = u[1] + 2 h u[0].
  {
    const double h = x[1] - x[0];
    uxx[0] = (2.0 * u[1] + (2.0 * h - 2.0) * u[0]) / (h * h);
  }
  {
    const double h = x[n - 1] - x[n - 2];
    uxx[n - 1] = (2.0 * u[n - 2] + (2.0 * h - 2.0) * u[n - 1]) / (h * h);
  }
  return uxx;
}

void flow_rhs_interior(const CoefficientPair& pair, std::span<const double> x,
                       std::span<const double> u, std::span<double> out) {
  const size_t n = x.size();
  for (size_t i = 1; i + 1 < n; ++i) {
    const double hm = x[i] - x[i - 1], hp = x[i + 1] - x[i];
    const double ux = (-hp / (hm * (hm + hp))) * u[i - 1] +
                      ((hp - hm) / (hm * hp)) * u[i] +
                      (hm / (hp * (hm + hp))) * u[i + 1];
    const double uxx =
        2.0 * (u[i - 1] / (hm * (hm + hp)) - u[i] / (hm * hp) +
               u[i + 1] / (hp * (hm + hp)));
    const auto cf = eval_or_nan(pair, ux);
    const double s2 = 1.0 + ux * ux;
    out[i] = cf.a * uxx / s2 + cf.b * std::sqrt(s2);
  }
}

std::vector<double> flow_rhs(const GridState& state,
                             const CoefficientPair& pair) {
  const auto& x = state.grid.nodes();
  const auto& u = state.u;
  const size_t n = u.size();
  std::vector<double> out(n, 0.0);
  flow_rhs_interior(pair, x, u, out);
  const auto uxx = robin_curvature(state);
  {
    const double ux = -u[0];
    const auto cf = eval_or_nan(pair, ux);
    const double s2 = 1.0 + ux * ux;
    out[0] = cf.a * uxx[0] / s2 + cf.b * std::sqrt(s2);
  }
  {
    const double ux = u[n - 1];
    const auto cf = eval_or_nan(pair, ux);
    const double s2 = 1.0 + ux * ux;
    out[n - 1] = cf.a * uxx[n - 1] / s2 + cf.b * std::sqrt(s2);
  }
  return out;
}

double explicit_dt_limit(const GridState& state, const CoefficientPair& pair,
                         double cfl) {
  const auto& x = state.grid.nodes();
  const auto ux = robin_slope(state);
  double lim = std::numeric_limits<double>::infinity();
  const size_t n = x.size();
  for (size_t i = 0; i < n; ++i) {
    const double hm = (i > 0) ? x[i] - x[i - 1] : x[1] - x[0];
    const double hp = (i + 1 < n) ? x[i + 1] - x[i] : hm;
    const double h = std::min(hm, hp);
    const auto cf = eval_or_nan(pair, ux[i]);
    lim = std::min(lim, h * h * (1.0 + ux[i] * ux[i]) / cf.a);
  }
  return cfl * lim;
}

GridState step(const GridState& state, const CoefficientPair& pair, double dt,
               Scheme scheme) {
  if (!(dt > 0.0)) throw ConfigError("step needs dt > 0");
  if (!all_finite(state.u))
    throw BlowUpError("state is already non-finite at t = " +
                          std::to_string(state.t),
                      state.u, state.t);
  GridState next = state;
  next.t = state.t + dt;
  const size_t n = state.u.size();

  if (scheme == Scheme::explicit_euler) {
    const auto f = flow_rhs(state, pair);
    for (size_t i = 0; i < n; ++i) next.u[i] = state.u[i] + dt * f[i];
  } else {
    // Freeze a, b and the slope factor at the current step and solve
    // (I - dt nu d_xx) u' = u + dt g with the contact closure in the rows.
    const auto& x = state.grid.nodes();
    const auto ux = robin_slope(state);
    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n);
    for (size_t i = 0; i < n; ++i) {
      const auto cf = eval_or_nan(pair, ux[i]);
      const double s2 = 1.0 + ux[i] * ux[i];
      const double nu = cf.a / s2;
      const double g = cf.b * std::sqrt(s2);
      rhs[i] = state.u[i] + dt * g;
      if (i == 0) {
        const double h = x[1] - x[0];
        diag[0] = 1.0 - dt * nu * (2.0 * h - 2.0) / (h * h);
        upper[0] = -dt * nu * 2.0 / (h * h);
      } else if (i == n - 1) {
        const double h = x[n - 1] - x[n - 2];
        diag[i] = 1.0 - dt * nu * (2.0 * h - 2.0) / (h * h);
        lower[i] = -dt * nu * 2.0 / (h * h);
      } else {
        const double hm = x[i] - x[i - 1], hp = x[i + 1] - x[i];
        lower[i] = -dt * nu * 2.0 / (hm * (hm + hp));
        upper[i] = -dt * nu * 2.0 / (hp * (hm + hp));
        diag[i] = 1.0 + dt * nu * 2.0 / (hm * hp);
      }
    }
    solve_tridiagonal(lower, diag, upper, rhs);
    next.u = std::move(rhs);
  }

  if (!all_finite(next.u))
    throw BlowUpError("non-finite values after a step of dt = " +
                          std::to_string(dt) + " at t = " +
                          std::to_string(state.t),
                      state.u, state.t);
  return next;
}

std::vector<double> theta_of(const GridState& state) {
  const auto ux = robin_slope(state);
  std::vector<double> theta(ux.size());
  for (size_t i = 0; i < ux.size(); ++i) theta[i] = std::atan(ux[i]);
  return theta;
}

std::pair<double, double> boundary_residual(const GridState& state) {
  const auto& x = state.grid.nodes();
  const auto& u = state.u;
  const size_t n = u.size();
  const double h1l = x[1] - x[0], h2l = x[2] - x[1];
  const double ux_left = u[0] * (-(2.0 * h1l + h2l)) / (h1l * (h1l + h2l)) +
                         u[1] * (h1l + h2l) / (h1l * h2l) -
                         u[2] * h1l / (h2l * (h1l + h2l));
  const double h2r = x[n - 2] - x[n - 3], h1r = x[n - 1] - x[n - 2];
  const double ux_right = u[n - 3] * h1r / (h2r * (h1r + h2r)) -
                          u[n - 2] * (h1r + h2r) / (h1r * h2r) +
                          u[n - 1] * (2.0 * h1r + h2r) / (h1r * (h1r + h2r));
  return {ux_left + u[0], ux_right - u[n - 1]};
}

// ---------------------------------------------------------------------
// Time integration
// ---------------------------------------------------------------------

std::string scheme_name(Scheme s) {
  return s == Scheme::semi_implicit ? "semi-implicit" : "explicit";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "semi-implicit") return Scheme::semi_implicit;
  if (name == "explicit") return Scheme::explicit_euler;
  throw ConfigError("unknown scheme '" + name +
                    "' (use semi-implicit or explicit)");
}

EvolveTrace evolve(GridState state, const CoefficientPair& pair,
                   const EvolveControls& controls) {
  EvolveTrace trace{state.grid};
  trace.pair_desc = pair.describe();
  trace.scheme_name = scheme_name(controls.scheme);
  trace.datum_kind = controls.datum_kind;
  trace.symmetric = controls.symmetric;

  const size_t n = state.u.size();
  const auto record_series = [&](const GridState& s) {
    const auto ux = robin_slope(s);
    const auto uxx = robin_curvature(s);
    double max_ux = 0.0;
    double min_uxx = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) max_ux = std::max(max_ux, std::fabs(ux[i]));
    for (size_t i = 1; i + 1 < n; ++i) min_uxx = std::min(min_uxx, uxx[i]);
    trace.series_t.push_back(s.t);
    trace.series_center.push_back(s.u[s.grid.center_index()]);
    trace.series_left.push_back(s.u.front());
    trace.series_right.push_back(s.u.back());
    trace.series_max_slope.push_back(max_ux);
    trace.series_min_curv.push_back(min_uxx);
    return ux;
  };
  const auto snapshot = [&](const GridState& s) {
    trace.snap_times.push_back(s.t);
    trace.snaps.push_back(s.u);
  };

  record_series(state);
  snapshot(state);

  double dt = controls.dt_init;
  double next_snap = state.t + controls.snapshot_dt;
  int rejects_in_row = 0;

  while (state.t < controls.t_end) {
    double dt_use = dt;
    if (controls.adaptive) {
      dt_use = std::min(dt_use, controls.dt_max);
      if (controls.scheme == Scheme::explicit_euler)
        dt_use = std::min(dt_use, explicit_dt_limit(state, pair, controls.cfl));
    }
    const double t_stop = std::min(next_snap, controls.t_end);
    const bool landing = (t_stop - state.t) <= dt_use;
    if (landing) dt_use = t_stop - state.t;

    GridState trial = [&]() -> GridState {
      try {
        return step(state, pair, dt_use, controls.scheme);
      } catch (const BlowUpError&) {
        if (!controls.adaptive) throw;
        return GridState{state.grid, {}, state.t};  // empty u marks rejection
      }
    }();
    if (landing && !trial.u.empty()) trial.t = t_stop;  // exact snap times

    bool reject = trial.u.empty();
    if (!reject && controls.adaptive) {
      double du = 0.0, umax = 0.0;
      for (size_t i = 0; i < n; ++i) {
        du = std::max(du, std::fabs(trial.u[i] - state.u[i]));
        umax = std::max(umax, std::fabs(state.u[i]));
      }
      if (du > controls.du_cap_rel * (1.0 + umax)) reject = true;
    }
    if (reject) {
      dt *= 0.5;
      if (++rejects_in_row > 60 || dt < 1e-14)
        throw BlowUpError("time step collapsed at t = " +
                              std::to_string(state.t),
                          state.u, state.t);
      continue;
    }

    rejects_in_row = 0;
    state = std::move(trial);
    if (controls.adaptive) dt = std::min(dt * 1.2, controls.dt_max);

    const auto ux = record_series(state);
    // Landings set state.t to next_snap bitwise, so snapshot times are
    // the exact cadence multiples.
    if (state.t >= next_snap) {
      snapshot(state);
      next_snap += controls.snapshot_dt;
    }

    // Resolvability horizon: stop once the slopes adjacent to the walls
    // exceed the cap; the convergence theory is interior, so the run is
    // still usable up to this time.
    const double near_wall =
        std::max(std::fabs(ux[1]), std::fabs(ux[n - 2]));
    if (near_wall > controls.slope_cap) {
      trace.horizon = {true, state.t, near_wall};
      if (trace.snap_times.back() != state.t) snapshot(state);
      break;
    }
  }

  if (trace.snap_times.back() != state.t) snapshot(state);
  return trace;
}

}  // namespace bandflow
