// Independent reference computations for the tests: brute-force
// quadrature, a fourth-order ODE integrator for the profile equation,
// and closed forms for the constant-coefficient cases. Everything here
// deliberately avoids the library's quadrature/root-finding paths.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bandflow/coefficients.hpp"

namespace oracles {

inline constexpr double kPi = 3.14159265358979323846;

// Composite-trapezoid evaluation of X+(c) in the angle variable with a
// dense fixed grid. Error ~ (pi/2)^2 f'' / (12 n^2).
inline double trapezoid_x_plus(const bandflow::CoefficientPair& pair, double c,
                               int n = 1000000) {
  const double lo = 0.0, hi = 0.5 * kPi;
  const double h = (hi - lo) / n;
  auto f = [&](double w) {
    const double cw = std::cos(w), sw = std::sin(w);
    // p = tan w evaluated directly; the final node has cw ~ 6e-17 != 0.
    const auto cf = pair.eval(sw / cw);
    return cf.a * cw / (c * cw - cf.b);
  };
  double sum = 0.5 * (f(lo) + f(hi));
  for (int i = 1; i < n; ++i) sum += f(lo + i * h);
  return sum * h;
}

inline double trapezoid_span(const bandflow::CoefficientPair& pair, double c,
                             int n = 1000000) {
  return 2.0 * trapezoid_x_plus(pair, c, n);  // even pairs only
}

// Bisection for d(cbar) = 2 on top of the trapezoid span.
inline double trapezoid_cbar(const bandflow::CoefficientPair& pair,
                             int n = 200000) {
  double hi = 0.5 * kPi * pair.extrema().a_sup;
  double lo = hi / 1024.0;
  while (trapezoid_span(pair, lo, n) <= 2.0) lo *= 0.5;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (trapezoid_span(pair, mid, n) > 2.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Fourth-order Runge-Kutta integration of the profile equation
//   phi'' = (1 + psi^2) (c - b(psi) sqrt(1 + psi^2)) / a(psi)
// from (x, phi, psi) = (0, 0, 0), reporting (phi, psi) at each requested
// x (targets strictly monotone away from 0, both signs allowed).
struct OdePoint {
  double x, phi, psi;
};

inline std::vector<OdePoint> rk4_profile(const bandflow::CoefficientPair& pair,
                                         double c,
                                         const std::vector<double>& targets,
                                         double dx = 1e-5) {
  auto rhs = [&](double /*x*/, double phi, double psi, double& dphi,
                 double& dpsi) {
    (void)phi;
    const auto cf = pair.eval(psi);
    const double s2 = 1.0 + psi * psi;
    dphi = psi;
    dpsi = s2 * (c - cf.b * std::sqrt(s2)) / cf.a;
  };
  auto integrate_to = [&](double from_x, double from_phi, double from_psi,
                          double to_x, double& phi, double& psi) {
    const double len = to_x - from_x;
    const int steps = std::max(1, (int)std::ceil(std::fabs(len) / dx));
    const double h = len / steps;
    double x = from_x;
    phi = from_phi;
    psi = from_psi;
    for (int s = 0; s < steps; ++s) {
      double k1p, k1q, k2p, k2q, k3p, k3q, k4p, k4q;
      rhs(x, phi, psi, k1p, k1q);
      rhs(x + 0.5 * h, phi + 0.5 * h * k1p, psi + 0.5 * h * k1q, k2p, k2q);
      rhs(x + 0.5 * h, phi + 0.5 * h * k2p, psi + 0.5 * h * k2q, k3p, k3q);
      rhs(x + h, phi + h * k3p, psi + h * k3q, k4p, k4q);
      phi += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
      psi += h / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q);
      x += h;
    }
  };

  std::vector<OdePoint> out;
  double xp = 0, pp = 0, qp = 0;  // forward cursor
  double xm = 0, pm = 0, qm = 0;  // backward cursor
  for (double t : targets) {
    if (t >= 0) {
      if (t < xp) throw std::invalid_argument("targets must move outward");
      double phi, psi;
      integrate_to(xp, pp, qp, t, phi, psi);
      xp = t;
      pp = phi;
      qp = psi;
      out.push_back({t, phi, psi});
    } else {
      if (t > xm) throw std::invalid_argument("targets must move outward");
      double phi, psi;
      integrate_to(xm, pm, qm, t, phi, psi);
      xm = t;
      pm = phi;
      qm = psi;
      out.push_back({t, phi, psi});
    }
  }
  return out;
}

// Grim reaper (a == 1, b == 0): profile -(1/c) ln cos(c x) with speed
// cbar = pi/2 on the unit span.
inline double grim_phi(double x, double c = 0.5 * kPi) {
  return -std::log(std::cos(c * x)) / c;
}

// Constant pair at c = 0: circular arc of radius R = a / (-b),
// phi(x; 0) = R - sqrt(R^2 - x^2).
inline double arc_phi(double x, double radius) {
  return radius - std::sqrt(radius * radius - x * x);
}

inline double arc_psi(double x, double radius) {
  return x / std::sqrt(radius * radius - x * x);
}

}  // namespace oracles
