#include "bandflow/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bandflow {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEvenTol = 1e-12;

double angle_node(int k) {
  return -0.5 * kPi + kPi * static_cast<double>(k) / (kAngleSamples - 1);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

CoefficientPair CoefficientPair::constant(double alpha, double beta,
                                          bool degenerate) {
  CoefficientPair p;
  p.family_ = CoefficientFamily::constant;
  p.alpha_ = alpha;
  p.beta_ = beta;
  p.symmetric_ = true;
  p.degenerate_ = degenerate;
  if (!(alpha > 0.0))
    throw CoefficientError("constant family: alpha = " + fmt(alpha) +
                           " must be positive");
  if (degenerate) {
    if (beta != 0.0)
      throw CoefficientError(
          "constant family: degenerate flag requires beta = 0, got beta = " +
          fmt(beta));
  } else if (!(beta > 0.0)) {
    throw CoefficientError("constant family: beta = " + fmt(beta) +
                           " must be positive (b = -beta < 0); use the "
                           "degenerate flag for b == 0");
  }
  p.extrema_ = {alpha, alpha, -beta, -beta};
  p.finish_construction("constant");
  return p;
}

CoefficientPair CoefficientPair::rational_bump(double alpha, double eps,
                                               double beta, double delta) {
  CoefficientPair p;
  p.family_ = CoefficientFamily::rational_bump;
  p.alpha_ = alpha;
  p.eps_ = eps;
  p.beta_ = beta;
  p.delta_ = delta;
  p.symmetric_ = true;
  // a ranges over the closed hull of {alpha, alpha+eps}; the bump is
  // monotone in |p|, extreme at p = 0 and p -> +-inf.
  p.extrema_ = {std::min(alpha, alpha + eps), std::max(alpha, alpha + eps),
                std::min(-beta, -beta - delta), std::max(-beta, -beta - delta)};
  if (!(p.extrema_.a0 > 0.0))
    throw CoefficientError("rational-bump family: min a = " +
                           fmt(p.extrema_.a0) + " must be positive");
  if (!(p.extrema_.b_sup < 0.0))
    throw CoefficientError("rational-bump family: max b = " +
                           fmt(p.extrema_.b_sup) +
                           " must be negative (beta, beta+delta > 0)");
  p.finish_construction("rational-bump");
  return p;
}

CoefficientPair CoefficientPair::tabulated(std::vector<double> omega,
                                           std::vector<double> a,
                                           std::vector<double> b,
                                           bool symmetric) {
  CoefficientPair p;
  p.family_ = CoefficientFamily::tabulated;
  p.symmetric_ = symmetric;
  if (omega.size() < 8 || a.size() != omega.size() || b.size() != omega.size())
    throw CoefficientError("tabulated family: need >= 8 matching rows");
  if (std::fabs(omega.front() + 0.5 * kPi) > 1e-9 ||
      std::fabs(omega.back() - 0.5 * kPi) > 1e-9)
    throw CoefficientError(
        "tabulated family: omega must span [-pi/2, pi/2] inclusive");
  omega.front() = -0.5 * kPi;
  omega.back() = 0.5 * kPi;
  if (symmetric) {
    const size_t n = omega.size();
    for (size_t i = 0; i < n; ++i) {
      // Evenness in p means a(w) = a(-w); enforce against the mirrored row.
      const size_t j = n - 1 - i;
      if (std::fabs(omega[i] + omega[j]) > 1e-9) continue;
      if (std::fabs(a[i] - a[j]) > kEvenTol || std::fabs(b[i] - b[j]) > kEvenTol)
        throw CoefficientError(
            "tabulated family flagged symmetric but rows are uneven at "
            "omega = " +
            fmt(omega[i]));
    }
  }
  p.table_a_ = std::make_shared<CubicSpline>(omega, a);
  p.table_b_ = std::make_shared<CubicSpline>(std::move(omega), std::move(b));
  double a0 = std::numeric_limits<double>::infinity(), a_sup = -a0;
  double b0 = a0, b_sup = -a0;
  for (int k = 0; k < kAngleSamples; ++k) {
    const double w = angle_node(k);
    const double av = p.table_a_->value(w);
    const double bv = p.table_b_->value(w);
    a0 = std::min(a0, av);
    a_sup = std::max(a_sup, av);
    b0 = std::min(b0, bv);
    b_sup = std::max(b_sup, bv);
  }
  p.extrema_ = {a0, a_sup, b0, b_sup};
  p.finish_construction("tabulated");
  return p;
}

void CoefficientPair::finish_construction(const std::string& what) {
  for (int k = 0; k < kAngleSamples; ++k) {
    double a, b;
    eval_angle(angle_node(k), a, b);
    if (!std::isfinite(a) || !std::isfinite(b))
      throw CoefficientError(what + " family: non-finite value at omega = " +
                             fmt(angle_node(k)));
    if (!(a > 0.0))
      throw CoefficientError(what + " family: a <= 0 at omega = " +
                             fmt(angle_node(k)));
    if (degenerate_) continue;
    if (!(b < 0.0))
      throw CoefficientError(what + " family: b >= 0 at omega = " +
                             fmt(angle_node(k)) +
                             " (only the degenerate flag admits b == 0)");
  }
}

CoefficientEval CoefficientPair::eval(double p) const {
  if (!std::isfinite(p))
    throw CoefficientError("eval requires finite slope p");
  CoefficientEval out{};
  switch (family_) {
    case CoefficientFamily::constant:
      out = {alpha_, -beta_, 0.0, 0.0};
      break;
    case CoefficientFamily::rational_bump: {
      const double q = 1.0 / (1.0 + p * p);
      out.a = alpha_ + eps_ * q;
      out.b = -beta_ - delta_ * q;
      out.da = -2.0 * eps_ * p * q * q;
      out.db = 2.0 * delta_ * p * q * q;
      break;
    }
    case CoefficientFamily::tabulated: {
      const double w = std::atan(p);
      const double dwdp = 1.0 / (1.0 + p * p);
      out.a = table_a_->value(w);
      out.b = table_b_->value(w);
      out.da = table_a_->derivative(w) * dwdp;
      out.db = table_b_->derivative(w) * dwdp;
      break;
    }
  }
  if (!std::isfinite(out.a) || !std::isfinite(out.b) ||
      !std::isfinite(out.da) || !std::isfinite(out.db))
    throw CoefficientError(describe() + ": non-finite evaluation at p = " +
                           fmt(p));
  return out;
}

void CoefficientPair::eval_angle(double omega, double& a, double& b) const {
  switch (family_) {
    case CoefficientFamily::constant:
      a = alpha_;
      b = -beta_;
      return;
    case CoefficientFamily::rational_bump: {
      const double c = std::cos(omega);
      const double c2 = c * c;  // 1/(1+tan^2 w)
      a = alpha_ + eps_ * c2;
      b = -beta_ - delta_ * c2;
      return;
    }
    case CoefficientFamily::tabulated:
      a = table_a_->value(omega);
      b = table_b_->value(omega);
      return;
  }
  a = b = std::numeric_limits<double>::quiet_NaN();
}

ValidationReport CoefficientPair::validate(const ValidationFlags&) const {
  ValidationReport rep;
  rep.extrema = extrema_;

  rep.sign_ok = true;
  rep.even_ok = true;
  for (int k = 0; k < kAngleSamples; ++k) {
    const double w = angle_node(k);
    double a, b, am, bm;
    eval_angle(w, a, b);
    if (!(a > 0.0) || !(degenerate_ ? b <= 0.0 : b < 0.0)) rep.sign_ok = false;
    eval_angle(-w, am, bm);
    if (std::fabs(a - am) > kEvenTol || std::fabs(b - bm) > kEvenTol)
      rep.even_ok = false;
  }

  rep.admissible_ok = extrema_.a0 > -extrema_.b0;

  if (degenerate_) {
    // b == 0 makes both slope integrals diverge to +inf; they hold trivially.
    rep.right_integral = std::numeric_limits<double>::infinity();
    rep.left_integral = rep.right_integral;
    rep.right_integral_ok = rep.left_integral_ok = true;
  } else {
    const auto slope_integrand = [this](double w) {
      double a, b;
      eval_angle(w, a, b);
      return a * std::cos(w) / (-b);
    };
    rep.right_integral = integrate(slope_integrand, 0.0, 0.5 * kPi).value;
    rep.left_integral = integrate(slope_integrand, -0.5 * kPi, 0.0).value;
    // Strict "> 1" with a margin at the quadrature tolerance, so the
    // boundary case (integral exactly 1) fails deterministically.
    rep.right_integral_ok = rep.right_integral > 1.0 + 1e-12;
    rep.left_integral_ok = rep.left_integral > 1.0 + 1e-12;
  }
  return rep;
}

bool ValidationReport::passed(const ValidationFlags& flags) const {
  if (flags.sign && !sign_ok) return false;
  if (flags.even && !even_ok) return false;
  if (flags.admissible && !admissible_ok) return false;
  if (flags.span_conditions && !(right_integral_ok && left_integral_ok))
    return false;
  return true;
}

std::string ValidationReport::failure_text(const ValidationFlags& flags) const {
  std::ostringstream os;
  if (flags.sign && !sign_ok) os << "a(p) > 0 > b(p) fails at a sampled slope; ";
  if (flags.even && !even_ok) os << "evenness a(p) = a(-p), b(p) = b(-p) fails; ";
  if (flags.admissible && !admissible_ok)
    os << "a_0 > -b_0 fails: a_0 = " << fmt(extrema.a0)
       << " <= -b_0 = " << fmt(-extrema.b0) << "; ";
  if (flags.span_conditions && !right_integral_ok)
    os << "right slope integral = " << fmt(right_integral) << " <= 1; ";
  if (flags.span_conditions && !left_integral_ok)
    os << "left slope integral = " << fmt(left_integral) << " <= 1; ";
  return os.str();
}

void CoefficientPair::require(const ValidationFlags& flags) const {
  const ValidationReport rep = validate(flags);
  if (!rep.passed(flags))
    throw HypothesisError(describe() + ": " + rep.failure_text(flags));
}

std::string CoefficientPair::describe() const {
  std::ostringstream os;
  switch (family_) {
    case CoefficientFamily::constant:
      os << "constant(alpha=" << fmt(alpha_) << ", beta=" << fmt(beta_);
      if (degenerate_) os << ", degenerate";
      os << ")";
      break;
    case CoefficientFamily::rational_bump:
      os << "rational-bump(alpha=" << fmt(alpha_) << ", eps=" << fmt(eps_)
         << ", beta=" << fmt(beta_) << ", delta=" << fmt(delta_) << ")";
      break;
    case CoefficientFamily::tabulated:
      os << "tabulated(" << (symmetric_ ? "symmetric" : "general") << ")";
      break;
  }
  return os.str();
}

CoefficientPair CoefficientPair::with_param(const std::string& name,
                                            double value) const {
  double alpha = alpha_, eps = eps_, beta = beta_, delta = delta_;
  if (name == "alpha")
    alpha = value;
  else if (name == "eps")
    eps = value;
  else if (name == "beta")
    beta = value;
  else if (name == "delta")
    delta = value;
  else
    throw ConfigError("unknown coefficient parameter '" + name + "'");
  if (family_ == CoefficientFamily::constant)
    return constant(alpha, beta, degenerate_);
  if (family_ == CoefficientFamily::rational_bump)
    return rational_bump(alpha, eps, beta, delta);
  throw ConfigError("tabulated pairs have no sweepable scalar parameters");
}

double CoefficientPair::param(const std::string& name) const {
  if (name == "alpha") return alpha_;
  if (name == "eps") return eps_;
  if (name == "beta") return beta_;
  if (name == "delta") return delta_;
  throw ConfigError("unknown coefficient parameter '" + name + "'");
}

}  // namespace bandflow
