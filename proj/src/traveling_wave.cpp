#include "bandflow/traveling_wave.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "bandflow/roots.hpp"

namespace bandflow {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = 0.5 * kPi;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

double omega_of_slope(double h) {
  return std::isinf(h) ? kHalfPi : std::atan(h);
}

}  // namespace

// ---------------------------------------------------------------------
// SpanIntegrals
// ---------------------------------------------------------------------

SpanIntegrals::SpanIntegrals(CoefficientPair pair, QuadratureConfig qc)
    : pair_(std::move(pair)), qc_(qc) {
  pair_.require({.sign = true});
  b_sup_ = pair_.extrema().b_sup;
}

void SpanIntegrals::require_speed(double c) const {
  if (c < 0.0)
    throw HypothesisError("span integrals need c >= 0, got c = " + fmt(c));
  if (c == 0.0 && !(b_sup_ < 0.0))
    throw QuadratureError(
        "X(0) diverges for the degenerate b == 0 family (c > 0 required)",
        std::numeric_limits<double>::infinity());
}

double SpanIntegrals::arc(double c, double w_lo, double w_hi) const {
  const auto integrand = [this, c](double w) {
    double a, b;
    pair_.eval_angle(w, a, b);
    return a * std::cos(w) / (c * std::cos(w) - b);
  };
  return integrate(integrand, w_lo, w_hi, qc_).value;
}

double SpanIntegrals::x_plus(double c) const {
  require_speed(c);
  return arc(c, 0.0, kHalfPi);
}

double SpanIntegrals::x_minus(double c) const {
  require_speed(c);
  if (pair_.symmetric()) return -x_plus(c);
  return -arc(c, -kHalfPi, 0.0);
}

double SpanIntegrals::x_h(double c, double h, int side) const {
  require_speed(c);
  if (!(h > 0.0)) throw HypothesisError("x_h needs h > 0, got h = " + fmt(h));
  const double wh = omega_of_slope(h);
  if (side >= 0) return arc(c, 0.0, wh);
  if (pair_.symmetric()) return -arc(c, 0.0, wh);
  return -arc(c, -wh, 0.0);
}

double SpanIntegrals::span_h(double c, double h) const {
  return x_h(c, h, +1) - x_h(c, h, -1);
}

// ---------------------------------------------------------------------
// WaveProfile
// ---------------------------------------------------------------------

double WaveProfile::dx_domega(double w) const {
  double a, b;
  pair_.eval_angle(w, a, b);
  return a * std::cos(w) / (c_ * std::cos(w) - b);
}

double WaveProfile::dphi_domega(double w) const {
  double a, b;
  pair_.eval_angle(w, a, b);
  return a * std::sin(w) / (c_ * std::cos(w) - b);
}

WaveProfile::WaveProfile(CoefficientPair pair, double c, double omega_lo,
                         double omega_hi, double x_shift, int n,
                         QuadratureConfig qc)
    : pair_(std::move(pair)), c_(c), qc_(qc) {
  if (n < 16) n = 16;
  if (n % 2 == 0) ++n;  // odd count puts a sample at omega = 0, the minimum
  if (!(omega_lo < 0.0 && 0.0 < omega_hi))
    throw HypothesisError("profile omega range must contain 0");

  // Chebyshev-Lobatto parameters: dense sampling where the profile is
  // steep (near the interval ends).
  omega_.resize(n);
  const double mid = 0.5 * (omega_lo + omega_hi);
  const double rad = 0.5 * (omega_hi - omega_lo);
  for (int j = 0; j < n; ++j)
    omega_[j] = mid - rad * std::cos(kPi * j / (n - 1));
  omega_.front() = omega_lo;
  omega_.back() = omega_hi;

  // Panel-wise cumulative quadrature over the nodes plus the anchor 0.
  std::vector<double> part = omega_;
  part.push_back(0.0);
  std::sort(part.begin(), part.end());
  part.erase(std::unique(part.begin(), part.end()), part.end());

  const size_t m = part.size();
  std::vector<double> cum_x(m, 0.0), cum_phi(m, 0.0);
  for (size_t k = 1; k < m; ++k) {
    cum_x[k] = cum_x[k - 1] +
               integrate([this](double w) { return dx_domega(w); }, part[k - 1],
                         part[k], qc_)
                   .value;
    cum_phi[k] = cum_phi[k - 1] +
                 integrate([this](double w) { return dphi_domega(w); },
                           part[k - 1], part[k], qc_)
                     .value;
  }
  const size_t zero_idx =
      std::lower_bound(part.begin(), part.end(), 0.0) - part.begin();
  const double x0 = cum_x[zero_idx], phi0 = cum_phi[zero_idx];

  samples_.resize(n);
  size_t k = 0;
  for (int j = 0; j < n; ++j) {
    while (part[k] != omega_[j]) ++k;
    samples_[j] = {cum_x[k] - x0 + x_shift, cum_phi[k] - phi0,
                   std::tan(omega_[j])};
  }
}

void WaveProfile::locate(double x, double& omega, double& phi) const {
  if (samples_.empty()) throw TraceError("profile has no samples");
  if (x < samples_.front().x - 1e-9 || x > samples_.back().x + 1e-9)
    throw std::out_of_range("profile evaluation at x = " + fmt(x) +
                            " outside sampled span [" +
                            fmt(samples_.front().x) + ", " +
                            fmt(samples_.back().x) + "]");
  x = std::clamp(x, samples_.front().x, samples_.back().x);

  size_t lo = 0, hi = samples_.size() - 1;
  while (hi - lo > 1) {
    const size_t mid = (lo + hi) / 2;
    (samples_[mid].x <= x ? lo : hi) = mid;
  }
  if (samples_[lo].x == x) {
    omega = omega_[lo];
    phi = samples_[lo].phi;
    return;
  }
  if (samples_[hi].x == x) {
    omega = omega_[hi];
    phi = samples_[hi].phi;
    return;
  }
  const double w_lo = omega_[lo], w_hi = omega_[hi];
  const double x_lo = samples_[lo].x;
  const auto fx = [&](double w) {
    return x_lo +
           integrate([this](double u) { return dx_domega(u); }, w_lo, w, qc_)
               .value -
           x;
  };
  omega = brent(fx, w_lo, w_hi, 1e-14);
  phi = samples_[lo].phi +
        integrate([this](double u) { return dphi_domega(u); }, w_lo, omega, qc_)
            .value;
}

double WaveProfile::phi_at(double x) const {
  double w, phi;
  locate(x, w, phi);
  return phi;
}

double WaveProfile::psi_at(double x) const {
  double w, phi;
  locate(x, w, phi);
  return std::tan(w);
}

// ---------------------------------------------------------------------
// Profile reconstruction and solvers
// ---------------------------------------------------------------------

WaveProfile reconstruct_profile(const CoefficientPair& pair, double c, double h,
                                int n, QuadratureConfig qc) {
  if (!(c > 0.0) && !(c == 0.0 && pair.extrema().b_sup < 0.0))
    throw HypothesisError(
        "profile reconstruction needs c > 0 (or c = 0 with b < 0), got c = " +
        fmt(c));
  SpanIntegrals spans(pair, qc);
  double w_hi = omega_of_slope(h);
  double w_lo = -w_hi;
  if (pair.degenerate() && std::isinf(h)) {
    // b == 0 with vertical contact: phi diverges at the walls, so the
    // sampled slope is capped; x still reaches within ~a/(c psi) of the
    // span ends.
    w_hi = std::atan(1e8);
    w_lo = -w_hi;
  }
  const double shift =
      1.0 - (std::isinf(h) ? spans.x_plus(c) : spans.x_h(c, h, +1));
  return WaveProfile(pair, c, w_lo, w_hi, shift, n, qc);
}

namespace {

// Bisection for the speed with monotone span function f(c) = d(c) - 2.
// c_hi is the analytic upper speed bound; equality d(c_hi) = 2 (constant a with
// b == 0) is accepted at tolerance. The lower end shrinks geometrically
// until d > 2.
double solve_speed(const std::function<double(double)>& d, double c_hi,
                   double tol, const std::string& label, double& residual) {
  double f_hi = d(c_hi) - 2.0;
  if (std::fabs(f_hi) <= tol) {
    residual = std::fabs(f_hi);
    return c_hi;
  }
  int expand = 0;
  while (f_hi > 0.0 && expand++ < 4) {
    // Quadrature noise can push the bound case slightly past 2.
    c_hi *= 2.0;
    f_hi = d(c_hi) - 2.0;
  }
  if (f_hi > 0.0)
    throw HypothesisError(label + ": d(c) > 2 beyond the upper speed bound");

  double c_lo = 0.5 * c_hi;
  double f_lo = d(c_lo) - 2.0;
  const double floor = 1e-12 * c_hi;
  while (f_lo <= 0.0) {
    c_lo *= 0.5;
    if (c_lo < floor)
      throw HypothesisError(
          label + ": d(c) <= 2 for all c down to " + fmt(c_lo) +
          " (d estimate there = " + fmt(f_lo + 2.0) +
          "); span hypothesis violated");
    f_lo = d(c_lo) - 2.0;
  }

  double c = c_lo;
  for (int it = 0; it < 200; ++it) {
    c = 0.5 * (c_lo + c_hi);
    const double fc = d(c) - 2.0;
    if (std::fabs(fc) <= tol) {
      residual = std::fabs(fc);
      return c;
    }
    if (fc > 0.0)
      c_lo = c;
    else
      c_hi = c;
    if (c_hi - c_lo < 1e-16 * c_hi) break;
  }
  residual = std::fabs(d(c) - 2.0);
  return c;
}

}  // namespace

WaveSolution solve_cbar(const CoefficientPair& pair,
                        const WaveSolveOptions& opt) {
  pair.require({.sign = true, .admissible = true});
  SpanIntegrals spans(pair, opt.quadrature);
  const double c_hi = kHalfPi * pair.extrema().a_sup;

  WaveSolution sol;
  sol.c = solve_speed([&](double c) { return spans.span(c); }, c_hi, opt.tol,
                      "solve_cbar", sol.residual);
  sol.h = std::numeric_limits<double>::infinity();
  sol.x_plus = spans.x_plus(sol.c);
  sol.x_minus = spans.x_minus(sol.c);
  sol.profile = reconstruct_profile(pair, sol.c, sol.h, opt.profile_nodes,
                                    opt.quadrature);
  sol.height = pair.degenerate() ? std::numeric_limits<double>::infinity()
                                 : sol.profile.samples().back().phi;
  return sol;
}

WaveSolution solve_c_of_h(const CoefficientPair& pair, double h,
                          const WaveSolveOptions& opt) {
  pair.require({.sign = true});
  if (!(h > 0.0)) throw HypothesisError("solve_c_of_h needs h > 0");
  const Extrema ex = pair.extrema();
  const double lhs = ex.a0 * h, rhs = -ex.b0 * std::sqrt(1.0 + h * h);
  if (!(lhs > rhs))
    throw HypothesisError("a_0 h > -b_0 sqrt(1+h^2) fails: " + fmt(lhs) +
                          " <= " + fmt(rhs));

  SpanIntegrals spans(pair, opt.quadrature);
  const double c_hi = ex.a_sup * std::atan(h);

  WaveSolution sol;
  sol.c = solve_speed([&](double c) { return spans.span_h(c, h); }, c_hi,
                      opt.tol, "solve_c_of_h", sol.residual);
  sol.h = h;
  sol.x_plus = spans.x_h(sol.c, h, +1);
  sol.x_minus = spans.x_h(sol.c, h, -1);
  sol.profile =
      reconstruct_profile(pair, sol.c, h, opt.profile_nodes, opt.quadrature);
  sol.height = sol.profile.samples().back().phi;
  return sol;
}

double wave_height(const CoefficientPair& pair, double c, double h,
                   QuadratureConfig qc) {
  if (pair.degenerate() && std::isinf(h))
    return std::numeric_limits<double>::infinity();
  if (!(c > 0.0) && !(c == 0.0 && pair.extrema().b_sup < 0.0))
    throw HypothesisError("wave height needs c > 0 (or c = 0 with b < 0)");
  const auto integrand = [&pair, c](double w) {
    double a, b;
    pair.eval_angle(w, a, b);
    return a * std::sin(w) / (c * std::cos(w) - b);
  };
  return integrate(integrand, 0.0, omega_of_slope(h), qc).value;
}

StationaryProfile stationary_profile(const CoefficientPair& pair, int n,
                                     QuadratureConfig qc) {
  pair.require({.sign = true, .admissible = true});
  if (!(pair.extrema().b_sup < 0.0))
    throw HypothesisError(
        "stationary profile needs b < 0 strictly (degenerate family has no "
        "c = 0 profile)");
  SpanIntegrals spans(pair, qc);
  const double xp = spans.x_plus(0.0), xm = spans.x_minus(0.0);
  if (!(xp > 1.0) || !(-xm > 1.0))
    throw HypothesisError("X+(0) = " + fmt(xp) + ", -X-(0) = " + fmt(-xm) +
                          " must both exceed 1 (a_0 > -b_0 required)");

  const auto x_of = [&](double w) {
    if (w == 0.0) return 0.0;
    return w > 0.0 ? spans.x_h(0.0, std::tan(w), +1)
                   : spans.x_h(0.0, std::tan(-w), -1);
  };
  const double w_r =
      brent([&](double w) { return x_of(w) - 1.0; }, 0.0, kHalfPi - 1e-12,
            1e-15);
  const double w_l =
      brent([&](double w) { return x_of(w) + 1.0; }, -kHalfPi + 1e-12, 0.0,
            1e-15);

  StationaryProfile out;
  out.profile = WaveProfile(pair, 0.0, w_l, w_r, 0.0, n, qc);
  out.phi_right = out.profile.samples().back().phi;
  out.psi_right = std::tan(w_r);
  out.phi_left = out.profile.samples().front().phi;
  out.psi_left = std::tan(w_l);
  out.m_const =
      std::max(out.psi_right - out.phi_right, -out.psi_left - out.phi_left);
  return out;
}

}  // namespace bandflow
