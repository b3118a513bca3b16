#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "bandflow/pde.hpp"
#include "bandflow/spline.hpp"
#include "bandflow/traveling_wave.hpp"

namespace bandflow {

enum class DatumKind { rho, user_function, tabulated };

// Admissible initial data for the flow: compatible endpoint slopes
// (u0'(+-1) = +-u0(+-1) within 1e-8) and u0 > phi(x;0) + M on the grid.
class InitialDatum {
 public:
  // rho(x) = Phi(p x) + M1 where p solves p Phi'(p) = Phi(p) + M1.
  // Throws DatumError naming the admissible threshold when M1 is not
  // above max phi(x;0) + M.
  static InitialDatum rho(const CoefficientPair& pair, double m1,
                          const WaveSolution& wave_bar,
                          const StationaryProfile& stationary);

  static InitialDatum user(std::function<double(double)> f,
                           std::function<double(double)> df);

  // Sampled (x, u) data, x strictly increasing spanning [-1, 1]; the
  // endpoint slopes are measured with one-sided stencils on the given
  // nodes.
  static InitialDatum tabulated(std::vector<double> x, std::vector<double> u);

  double value(double x) const;
  GridState realize(const Grid& grid) const;

  DatumKind kind() const { return kind_; }
  std::string kind_name() const;
  double rho_p() const { return p_; }
  double rho_m1() const { return m1_; }
  // Residuals (left, right) of the compatibility condition.
  std::pair<double, double> compatibility_residual() const;
  void check_compatibility(double tol = 1e-8) const;
  void check_admissibility(const StationaryProfile& stationary,
                           const Grid& grid) const;

 private:
  InitialDatum() = default;
  DatumKind kind_ = DatumKind::user_function;
  // rho
  double p_ = 0.0, m1_ = 0.0;
  std::shared_ptr<const WaveSolution> wave_;
  // user function
  std::function<double(double)> f_, df_;
  // tabulated
  std::shared_ptr<const CubicSpline> table_;
  double left_slope_ = 0.0, right_slope_ = 0.0;
};

InitialDatum make_rho(const CoefficientPair& pair, double m1,
                      const WaveSolution& wave_bar,
                      const StationaryProfile& stationary);

}  // namespace bandflow
