#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bandflow/coefficients.hpp"
#include "bandflow/traveling_wave.hpp"

namespace bandflow {

enum class GridKind { uniform, clustered };
enum class Scheme { semi_implicit, explicit_euler };

// Spatial grid on [-1, 1], symmetric about 0. `cells` must be even and
// >= 64 so the centerline is a node.
class Grid {
 public:
  static Grid uniform(int cells);
  static Grid clustered(int cells);  // cosine map, dense near the walls

  std::span<const double> nodes() const { return x_; }
  size_t size() const { return x_.size(); }
  double operator[](size_t i) const { return x_[i]; }
  GridKind kind() const { return kind_; }
  size_t center_index() const { return (x_.size() - 1) / 2; }
  double min_spacing() const;
  bool same_as(const Grid& other) const;
  std::string kind_name() const;

 private:
  Grid(std::vector<double> x, GridKind kind) : x_(std::move(x)), kind_(kind) {}
  std::vector<double> x_;
  GridKind kind_;
};

struct GridState {
  Grid grid;
  std::vector<double> u;
  double t = 0.0;
};

// First derivative with the slope-equals-height closure at the walls:
// u_x(+-1) = +-u(+-1), interior nodes second-order central.
std::vector<double> robin_slope(const GridState& state);

// Second derivative; at the walls a ghost node is eliminated through the
// contact condition, keeping second order up to the boundary.
std::vector<double> robin_curvature(const GridState& state);

// Right-hand side of u_t = a(u_x) u_xx/(1+u_x^2) + b(u_x) sqrt(1+u_x^2).
std::vector<double> flow_rhs(const GridState& state,
                             const CoefficientPair& pair);

// Interior-node evaluation on an arbitrary node set; used by the main
// rhs and by fixed-boundary test harnesses. out has x.size() entries;
// endpoints are left untouched.
void flow_rhs_interior(const CoefficientPair& pair, std::span<const double> x,
                       std::span<const double> u, std::span<double> out);

// Largest stable explicit step: cfl * min_i dx_i^2 (1+u_x,i^2)/a(u_x,i).
double explicit_dt_limit(const GridState& state, const CoefficientPair& pair,
                         double cfl);

GridState step(const GridState& state, const CoefficientPair& pair, double dt,
               Scheme scheme);

// theta = arctan u_x nodewise; at the walls theta(+-1) = +-arctan u(+-1).
std::vector<double> theta_of(const GridState& state);

// Residual of the contact condition measured with one-sided second-order
// stencils: (u_x(-1) + u(-1), u_x(1) - u(1)).
std::pair<double, double> boundary_residual(const GridState& state);

struct EvolveControls {
  double t_end = 1.0;
  double snapshot_dt = 0.1;
  Scheme scheme = Scheme::semi_implicit;
  double dt_init = 1e-4;
  double dt_max = 0.05;
  bool adaptive = true;   // false: fixed dt_init, no safety clamps
  double cfl = 0.4;
  double du_cap_rel = 0.05;  // reject steps moving u by more than this share
  double slope_cap = 1e3;    // resolvability horizon on near-wall slopes
  std::string datum_kind = "user";
  bool symmetric = false;
};

struct HorizonNotice {
  bool reached = false;
  double time = 0.0;
  double slope = 0.0;
};

struct EvolveTrace {
  explicit EvolveTrace(Grid g) : grid(std::move(g)) {}

  Grid grid;
  std::string pair_desc;
  std::string scheme_name;
  std::string datum_kind;
  bool symmetric = false;

  std::vector<double> snap_times;
  std::vector<std::vector<double>> snaps;

  // Per accepted step.
  std::vector<double> series_t, series_center, series_left, series_right,
      series_max_slope, series_min_curv;

  HorizonNotice horizon;

  size_t size() const { return snap_times.size(); }
  const std::vector<double>& snap(size_t k) const { return snaps[k]; }
  double center_value(size_t k) const {
    return snaps[k][grid.center_index()];
  }
};

// Method-of-lines integration with snapshot capture on an exact cadence.
// Adaptive stepping halves on rejection and grows 1.2x on success;
// explicit steps are additionally capped by the CFL limit. Stops early
// with a horizon notice when the slopes adjacent to the walls exceed
// controls.slope_cap. Non-finite values raise BlowUpError with the last
// good state.
EvolveTrace evolve(GridState state, const CoefficientPair& pair,
                   const EvolveControls& controls);

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

}  // namespace bandflow
