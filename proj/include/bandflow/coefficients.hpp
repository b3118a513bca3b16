#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bandflow/errors.hpp"
#include "bandflow/quadrature.hpp"
#include "bandflow/spline.hpp"

namespace bandflow {

enum class CoefficientFamily { constant, rational_bump, tabulated };

struct CoefficientEval {
  double a, b, da, db;
};

// Extrema of a and b over all slopes: a_sup = max a >= a0 = min a,
// b0 = min b <= b_sup = max b.
struct Extrema {
  double a0, a_sup, b0, b_sup;
};

struct ValidationFlags {
  bool sign = true;             // a > 0 > b (b == 0 allowed when degenerate)
  bool even = false;            // a(p) = a(-p), b(p) = b(-p)
  bool admissible = false;      // a0 > -b0
  bool span_conditions = false; // both improper slope integrals exceed 1
};

struct ValidationReport {
  bool sign_ok = false;
  bool even_ok = false;
  bool admissible_ok = false;
  bool right_integral_ok = false;
  bool left_integral_ok = false;
  double right_integral = 0.0;  // int_0^inf a / (-b (1+r^2)^{3/2}) dr
  double left_integral = 0.0;   // mirrored over (-inf, 0]
  Extrema extrema{};
  bool passed(const ValidationFlags& flags) const;
  std::string failure_text(const ValidationFlags& flags) const;
};

// The anisotropy pair a(p), b(p) induced by the mobility and forcing on
// the unit circle. Immutable after construction; all evaluation paths
// are re-entrant.
class CoefficientPair {
 public:
  // Default-constructed pairs are the unit constants a == 1, b == -1.
  CoefficientPair() = default;

  // a == alpha, b == -beta. beta == 0 only with the degenerate flag.
  static CoefficientPair constant(double alpha, double beta,
                                  bool degenerate = false);
  // a(p) = alpha + eps/(1+p^2), b(p) = -beta - delta/(1+p^2).
  static CoefficientPair rational_bump(double alpha, double eps, double beta,
                                       double delta);
  // Values tabulated against the normal angle w in [-pi/2, pi/2],
  // p = tan(w); cubic interpolation in w.
  static CoefficientPair tabulated(std::vector<double> omega,
                                   std::vector<double> a,
                                   std::vector<double> b, bool symmetric);

  CoefficientEval eval(double p) const;
  // Evaluation through the angle variable, stable at w = +-pi/2.
  void eval_angle(double omega, double& a, double& b) const;

  Extrema extrema() const { return extrema_; }
  ValidationReport validate(const ValidationFlags& flags = {}) const;
  // Throws HypothesisError with the violated inequality text.
  void require(const ValidationFlags& flags) const;

  CoefficientFamily family() const { return family_; }
  bool symmetric() const { return symmetric_; }
  bool degenerate() const { return degenerate_; }
  std::string describe() const;

  // Rebuild with one named parameter (alpha/eps/beta/delta) replaced;
  // used by coefficient-axis sweeps.
  CoefficientPair with_param(const std::string& name, double value) const;
  double param(const std::string& name) const;

 private:
  void finish_construction(const std::string& what);

  CoefficientFamily family_ = CoefficientFamily::constant;
  double alpha_ = 1.0, eps_ = 0.0, beta_ = 1.0, delta_ = 0.0;
  std::shared_ptr<const CubicSpline> table_a_, table_b_;
  bool symmetric_ = true;
  bool degenerate_ = false;
  Extrema extrema_{1.0, 1.0, -1.0, -1.0};
};

// Angle nodes used for sampled sign/evenness checks and for tabulated
// extrema.
inline constexpr int kAngleSamples = 4096;

}  // namespace bandflow
