#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace bandflow {

// Natural cubic spline through strictly increasing abscissae.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const size_t n = x_.size();
    if (n < 3 || y_.size() != n)
      throw std::invalid_argument("spline needs >= 3 matching points");
    for (size_t i = 1; i < n; ++i)
      if (!(x_[i] > x_[i - 1]))
        throw std::invalid_argument("spline abscissae must be increasing");
    // Solve the tridiagonal system for second derivatives (natural BCs).
    m_.assign(n, 0.0);
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), sub(n, 0.0);
    diag[0] = diag[n - 1] = 1.0;
    for (size_t i = 1; i + 1 < n; ++i) {
      const double hm = x_[i] - x_[i - 1];
      const double hp = x_[i + 1] - x_[i];
      sub[i] = hm / 6.0;
      diag[i] = (hm + hp) / 3.0;
      rhs[i] = (y_[i + 1] - y_[i]) / hp - (y_[i] - y_[i - 1]) / hm;
    }
    std::vector<double> c(n, 0.0);
    c[0] = 0.0;
    for (size_t i = 1; i + 1 < n; ++i) {
      const double hp = x_[i + 1] - x_[i];
      const double denom = diag[i] - sub[i] * c[i - 1];
      c[i] = (hp / 6.0) / denom;
      rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / denom;
    }
    for (size_t i = n - 2; i >= 1; --i) m_[i] = rhs[i] - c[i] * m_[i + 1];
  }

  double value(double x) const {
    const size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) *
               (h * h) / 6.0;
  }

  double derivative(double x) const {
    const size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) *
               h / 6.0;
  }

  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

 private:
  size_t segment(double x) const {
    if (x <= x_.front()) return 0;
    if (x >= x_.back()) return x_.size() - 2;
    size_t lo = 0, hi = x_.size() - 1;
    while (hi - lo > 1) {
      const size_t mid = (lo + hi) / 2;
      (x_[mid] <= x ? lo : hi) = mid;
    }
    return lo;
  }

  std::vector<double> x_, y_, m_;
};

}  // namespace bandflow
