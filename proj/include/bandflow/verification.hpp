#pragma once

#include <map>
#include <string>
#include <vector>

#include "bandflow/pde.hpp"
#include "bandflow/traveling_wave.hpp"

namespace bandflow {

enum class CheckStatus { pass, fail, not_applicable, partial };

std::string status_name(CheckStatus s);

struct CheckWindow {
  double t_min = 0.0, t_max = 0.0;
  double x_abs = 1.0;  // checks run on |x| <= x_abs
};

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::not_applicable;
  std::map<std::string, double> measured;
  double tolerance = 0.0;
  CheckWindow window;
  std::string note;
};

// u is wedged between c0 t - C1 and cbar t + C2: fits the least C2, the
// late-time lower growth rate c0 and its C1, and requires c0 > 0 with
// the late-time upper growth rate not exceeding cbar beyond rate_tol.
struct WedgeOptions {
  double rate_tol = 0.05;  // relative slack on the fitted upper rate
  double tol = 1e-9;       // slack on pointwise wedge violations
};
CheckResult check_linfty_wedge(const EvolveTrace& trace,
                               const WaveSolution& wave_bar,
                               const WedgeOptions& opt = {});

// Interior discrete u_xx stays positive for rho-initialized runs.
struct ConvexityOptions {
  double tol_rel = 1e-6;  // slack = tol_rel * max |u_xx|
};
CheckResult check_convexity(const EvolveTrace& trace,
                            const ConvexityOptions& opt = {});

// 0 < u_x < Phi'(x) on (0, 1) mirrored, and Phi'(x; h0) < u_x after a
// measured onset time. Wave slopes are sampled through the same discrete
// stencil as the solution so truncation errors cancel.
struct EnvelopeOptions {
  double x_abs = 0.95;
  double tol_disc = -1.0;  // < 0: auto = 50 dx^2 + 1e-8
};
CheckResult check_gradient_envelopes(const EvolveTrace& trace,
                                     const WaveSolution& wave_bar,
                                     const WaveSolution& wave_h0,
                                     const EnvelopeOptions& opt = {});

// Band minimum bound min |u_x| < M2 = (Phi(1-eps) + cbar T)/eps on both
// boundary bands at every snapshot, plus the uniform interior bound M3
// after a measured T_eps.
struct InteriorGradientOptions {
  double epsilon = 0.1;
  double t_sandwich = 0.0;  // the measured T of the sandwich ordering
};
CheckResult check_interior_gradient(const EvolveTrace& trace,
                                    const WaveSolution& wave_bar,
                                    const InteriorGradientOptions& opt = {});

// E(s) = max over the interior window and t in [0, t_window] of
// |u(x, t+s) - u(0, s) - Phi(x) - cbar t| over a geometric ladder of
// reference times; requires a decreasing ladder (one < 5% non-monotone
// step allowed), a small final error and a centerline speed near cbar.
struct ConvergenceOptions {
  double epsilon = 0.1;
  double s0 = -1.0;       // < 0: t_end / 8
  int ladder = 3;
  double ratio = 2.0;
  double t_window = 2.0;
  double tol = -1.0;      // < 0: 0.05 * (Phi(1-2 eps) - Phi(0))
  double speed_tol = 0.02;
};
CheckResult check_convergence(const EvolveTrace& trace,
                              const WaveSolution& wave_bar,
                              const ConvergenceOptions& opt = {});

// Nodewise ordering of two runs on the same grid/pair/scheme/times,
// given ordering at t = 0.
CheckResult check_comparison(const EvolveTrace& lower,
                             const EvolveTrace& upper);

struct VerificationReport {
  std::map<std::string, std::string> meta;
  std::vector<CheckResult> checks;  // sorted by name
  bool any_fail() const;
};

// Aggregates results deterministically; duplicate names are a
// configuration error.
VerificationReport build_report(std::vector<CheckResult> checks,
                                std::map<std::string, std::string> meta);

}  // namespace bandflow
