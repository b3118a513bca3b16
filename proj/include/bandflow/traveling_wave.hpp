#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "bandflow/coefficients.hpp"
#include "bandflow/quadrature.hpp"

namespace bandflow {

struct ProfileSample {
  double x, phi, psi;
};

// Span integrals of the wave profile in the angle variable w = arctan r.
// The substitution turns the improper integrals into proper ones with
// the bounded integrand a(w) cos w / (c cos w - b(w)).
class SpanIntegrals {
 public:
  explicit SpanIntegrals(CoefficientPair pair, QuadratureConfig qc = {});

  double x_plus(double c) const;                  // X+(c)
  double x_minus(double c) const;                 // X-(c) < 0
  double x_h(double c, double h, int side) const; // X+-_h(c), side = +1/-1
  double span(double c) const { return x_plus(c) - x_minus(c); }
  double span_h(double c, double h) const;

  const CoefficientPair& pair() const { return pair_; }

 private:
  double arc(double c, double w_lo, double w_hi) const;
  void require_speed(double c) const;

  CoefficientPair pair_;
  QuadratureConfig qc_;
  double b_sup_;
};

// Parametric profile (x(w), phi(w), psi = tan w) recovered by cumulative
// quadrature, anchored at phi(0) = 0 (the profile minimum) and shifted in
// x by a caller-chosen amount. Point evaluation inverts the monotone
// x(w) map with a local quadrature refinement.
class WaveProfile {
 public:
  WaveProfile() = default;
  WaveProfile(CoefficientPair pair, double c, double omega_lo, double omega_hi,
              double x_shift, int n, QuadratureConfig qc = {});

  std::span<const ProfileSample> samples() const { return samples_; }
  double phi_at(double x) const;
  double psi_at(double x) const;
  double x_min() const { return samples_.front().x; }
  double x_max() const { return samples_.back().x; }
  double c() const { return c_; }
  const CoefficientPair& pair() const { return pair_; }
  bool empty() const { return samples_.empty(); }

 private:
  double dx_domega(double w) const;
  double dphi_domega(double w) const;
  // Returns (omega, phi) at the given x by inverting x(w).
  void locate(double x, double& omega, double& phi) const;

  CoefficientPair pair_;
  double c_ = 0.0;
  QuadratureConfig qc_;
  std::vector<double> omega_;
  std::vector<ProfileSample> samples_;
};

// A traveling wave: speed plus profile. h = +inf is the full wave with
// vertical contact at the walls; finite h has endpoint slopes +-h.
struct WaveSolution {
  double c = 0.0;
  double h = std::numeric_limits<double>::infinity();
  double x_plus = 0.0, x_minus = 0.0;
  double height = 0.0;   // lim phi at the right end minus min phi
  double residual = 0.0; // |d(c) - 2| achieved by the root find
  WaveProfile profile;

  double phi_at(double x) const { return profile.phi_at(x); }
  double psi_at(double x) const { return profile.psi_at(x); }
};

// The c = 0 profile on [-1,1] together with the boundary constant M:
// the smallest M with phi'(1) <= phi(1) + M and phi'(-1) >= -[phi(-1)+M].
struct StationaryProfile {
  WaveProfile profile;
  double m_const = 0.0;
  double phi_right = 0.0, psi_right = 0.0;
  double phi_left = 0.0, psi_left = 0.0;
  bool negative_m() const { return m_const < 0.0; }
  // Initial data must exceed phi(x;0) + M everywhere; the sup of that
  // bound over [-1,1].
  double admissible_threshold() const {
    return std::max(phi_right, phi_left) + m_const;
  }
};

struct WaveSolveOptions {
  double tol = 1e-10;       // on |d(c) - 2|
  int profile_nodes = 2048; // Chebyshev-spaced omega samples
  QuadratureConfig quadrature{};
};

// Unique speed with d(cbar) = 2, bracketed by the pi a_sup / 2 bound and
// geometric shrinking from below; profile attached and normalized to
// span [-1, 1].
WaveSolution solve_cbar(const CoefficientPair& pair,
                        const WaveSolveOptions& opt = {});

// Unique speed with d_h(c(h)) = 2 under a0 h > -b0 sqrt(1+h^2).
WaveSolution solve_c_of_h(const CoefficientPair& pair, double h,
                          const WaveSolveOptions& opt = {});

// Profile for a given speed; h may be +inf. The x-shift places the
// sampled domain so its right endpoint sits at x = 1.
WaveProfile reconstruct_profile(const CoefficientPair& pair, double c, double h,
                                int n, QuadratureConfig qc = {});

StationaryProfile stationary_profile(const CoefficientPair& pair, int n = 2048,
                                     QuadratureConfig qc = {});

// Profile height at speed c without building samples: the cumulative
// phi integral up to the endpoint slope h (+inf for the full wave, where
// the degenerate b == 0 family has infinite height).
double wave_height(const CoefficientPair& pair, double c, double h,
                   QuadratureConfig qc = {});

}  // namespace bandflow
