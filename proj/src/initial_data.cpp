#include "bandflow/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bandflow/roots.hpp"

namespace bandflow {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

InitialDatum make_rho(const CoefficientPair& pair, double m1,
                      const WaveSolution& wave_bar,
                      const StationaryProfile& stationary) {
  return InitialDatum::rho(pair, m1, wave_bar, stationary);
}

InitialDatum InitialDatum::rho(const CoefficientPair& pair, double m1,
                               const WaveSolution& wave_bar,
                               const StationaryProfile& stationary) {
  if (!pair.symmetric())
    throw DatumError("the rho datum requires an even coefficient pair");
  const double threshold = stationary.admissible_threshold();
  if (!(m1 > threshold))
    throw DatumError("M1 = " + fmt(m1) +
                     " is not above the admissible threshold max phi(x;0) + "
                     "M = " +
                     fmt(threshold));

  // p Phi'(p) - Phi(p) - M1 is negative at p -> 0 and grows without
  // bound as p -> 1 (the wave slope blows up at the wall).
  const auto g = [&](double p) {
    return p * wave_bar.psi_at(p) - wave_bar.phi_at(p) - m1;
  };
  const double p_hi = std::min(1.0, wave_bar.profile.x_max());
  double lo = 1e-8, hi = p_hi - 1e-12;
  double glo = g(lo), ghi = g(hi);
  if (!(glo < 0.0) || !(ghi > 0.0))
    throw DatumError(
        "no root of p Phi'(p) = Phi(p) + M1 in (0, 1]; M1 = " + fmt(m1) +
        " too small (threshold " + fmt(threshold) + ")");
  InitialDatum d;
  d.kind_ = DatumKind::rho;
  d.m1_ = m1;
  d.p_ = bisect(g, lo, hi, glo, ghi, 1e-14, 1e-12);
  d.wave_ = std::make_shared<WaveSolution>(wave_bar);
  return d;
}

InitialDatum InitialDatum::user(std::function<double(double)> f,
                                std::function<double(double)> df) {
  InitialDatum d;
  d.kind_ = DatumKind::user_function;
  d.f_ = std::move(f);
  d.df_ = std::move(df);
  return d;
}

InitialDatum InitialDatum::tabulated(std::vector<double> x,
                                     std::vector<double> u) {
  if (x.size() < 4 || x.size() != u.size())
    throw DatumError("tabulated datum needs >= 4 matching samples");
  if (std::fabs(x.front() + 1.0) > 1e-9 || std::fabs(x.back() - 1.0) > 1e-9)
    throw DatumError("tabulated datum must span [-1, 1]");
  InitialDatum d;
  d.kind_ = DatumKind::tabulated;
  const size_t n = x.size();
  // Endpoint slopes from one-sided second-order stencils on the given
  // nodes (they may be much denser than the PDE grid).
  {
    const double h1 = x[1] - x[0], h2 = x[2] - x[1];
    d.left_slope_ = u[0] * (-(2.0 * h1 + h2)) / (h1 * (h1 + h2)) +
                    u[1] * (h1 + h2) / (h1 * h2) -
                    u[2] * h1 / (h2 * (h1 + h2));
  }
  {
    const double h2 = x[n - 2] - x[n - 3], h1 = x[n - 1] - x[n - 2];
    d.right_slope_ = u[n - 3] * h1 / (h2 * (h1 + h2)) -
                     u[n - 2] * (h1 + h2) / (h1 * h2) +
                     u[n - 1] * (2.0 * h1 + h2) / (h1 * (h1 + h2));
  }
  d.table_ = std::make_shared<CubicSpline>(std::move(x), std::move(u));
  return d;
}

double InitialDatum::value(double x) const {
  switch (kind_) {
    case DatumKind::rho:
      return wave_->phi_at(p_ * x) + m1_;
    case DatumKind::user_function:
      return f_(x);
    case DatumKind::tabulated:
      return table_->value(x);
  }
  return 0.0;
}

GridState InitialDatum::realize(const Grid& grid) const {
  GridState s{grid, std::vector<double>(grid.size()), 0.0};
  for (size_t i = 0; i < grid.size(); ++i) s.u[i] = value(grid[i]);
  return s;
}

std::pair<double, double> InitialDatum::compatibility_residual() const {
  switch (kind_) {
    case DatumKind::rho: {
      const double right = p_ * wave_->psi_at(p_) - value(1.0);
      const double left = p_ * wave_->psi_at(-p_) + value(-1.0);
      return {left, right};
    }
    case DatumKind::user_function:
      return {df_(-1.0) + f_(-1.0), df_(1.0) - f_(1.0)};
    case DatumKind::tabulated:
      return {left_slope_ + value(-1.0), right_slope_ - value(1.0)};
  }
  return {0.0, 0.0};
}

void InitialDatum::check_compatibility(double tol) const {
  const auto [left, right] = compatibility_residual();
  if (std::fabs(left) > tol || std::fabs(right) > tol)
    throw DatumError(
        "initial datum violates the compatibility condition u0'(+-1) = "
        "+-u0(+-1): residuals (" +
        fmt(left) + ", " + fmt(right) + ") exceed " + fmt(tol));
}

void InitialDatum::check_admissibility(const StationaryProfile& stationary,
                                       const Grid& grid) const {
  for (size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    const double floor = stationary.profile.phi_at(x) + stationary.m_const;
    const double v = value(x);
    if (!(v > floor))
      throw DatumError("initial datum not admissible: u0(" + fmt(x) + ") = " +
                       fmt(v) + " <= phi(x;0) + M = " + fmt(floor));
  }
}

std::string InitialDatum::kind_name() const {
  switch (kind_) {
    case DatumKind::rho:
      return "rho";
    case DatumKind::user_function:
      return "user";
    case DatumKind::tabulated:
      return "tabulated";
  }
  return "?";
}

}  // namespace bandflow
