#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <utility>
#include <vector>

#include "bandflow/errors.hpp"

namespace bandflow {

struct QuadratureConfig {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  int max_intervals = 8000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // accumulated |G7-K15| over the final panels
  int intervals = 0;
};

namespace detail {

// Kronrod-15 abscissae on [0,1] plus K15 and embedded G7 weights.
inline constexpr double kGkNode[8] = {
    0.000000000000000, 0.207784955007898, 0.405845151377397,
    0.586087235467691, 0.741531185599394, 0.864864423359769,
    0.949107912342759, 0.991455371120813};
inline constexpr double kGkWeight[8] = {
    0.209482141084728, 0.204432940075298, 0.190350578064785,
    0.169004726639267, 0.140653259715525, 0.104790010322250,
    0.063092092629979, 0.022935322010529};
inline constexpr double kGaussWeight[8] = {
    0.417959183673469, 0.0, 0.381830050505119, 0.0,
    0.279705391489277, 0.0, 0.129484966168870, 0.0};

template <class F>
void gauss_kronrod_15(const F& f, double a, double b, double& value,
                      double& err) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double y0 = f(mid);
  double k15 = kGkWeight[0] * y0;
  double g7 = kGaussWeight[0] * y0;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kGkNode[i];
    const double yi = f(mid + dx) + f(mid - dx);
    k15 += kGkWeight[i] * yi;
    g7 += kGaussWeight[i] * yi;
  }
  value = k15 * half;
  err = std::fabs((k15 - g7) * half);
}

}  // namespace detail

// Worst-first global-adaptive Gauss-Kronrod on a finite interval: the
// panel with the largest error estimate is bisected until the summed
// estimate meets max(abs_tol, rel_tol |I|). Panels that reach the
// floating-point resolution of their endpoints are frozen (splitting
// them cannot help). If the budget runs out, the result is still
// returned when the achieved error is within 1e3 of the request (the
// estimate floor is set by roundoff in the integrand, not by panel
// count); beyond that it is a QuadratureError.
template <class F>
QuadratureResult integrate(const F& f, double a, double b,
                           const QuadratureConfig& cfg = {}) {
  QuadratureResult out;
  if (a == b) return out;
  const double sign = (b > a) ? 1.0 : -1.0;
  const double lo = std::min(a, b), hi = std::max(a, b);

  struct Panel {
    double a, b, value, error;
    bool dead = false;
  };
  std::vector<Panel> panels;  // grows only; split panels are marked dead
  panels.reserve(64);
  // Max-heap of splittable panel indices keyed by error; insertion order
  // breaks ties deterministically.
  using Entry = std::pair<double, size_t>;
  std::priority_queue<Entry> heap;

  double total_v = 0.0, total_e = 0.0;
  const auto add_panel = [&](double pa, double pb) {
    Panel p{pa, pb, 0.0, 0.0, false};
    detail::gauss_kronrod_15(f, pa, pb, p.value, p.error);
    total_v += p.value;
    total_e += p.error;
    panels.push_back(p);
    const double width_floor =
        4.0 * 1e-16 * std::max(std::fabs(pa), std::fabs(pb));
    if (pb - pa > width_floor) heap.push({p.error, panels.size() - 1});
  };

  add_panel(lo, hi);
  int splits = 0;
  while (true) {
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total_v));
    if (total_e <= tol) break;
    if (heap.empty() || splits >= cfg.max_intervals) {
      if (total_e <= 1e3 * tol) break;  // roundoff-floor acceptance
      throw QuadratureError(
          "adaptive quadrature stalled: achieved error estimate " +
              std::to_string(total_e) + " above tolerance " +
              std::to_string(tol),
          total_e);
    }
    const auto [err, idx] = heap.top();
    heap.pop();
    if (panels[idx].dead) continue;
    const Panel p = panels[idx];
    panels[idx].dead = true;
    total_v -= p.value;
    total_e -= p.error;
    const double mid = 0.5 * (p.a + p.b);
    add_panel(p.a, mid);
    add_panel(mid, p.b);
    ++splits;
  }

  // Compensated final sum in panel order for reproducibility.
  std::vector<Panel> alive;
  alive.reserve(panels.size());
  for (const auto& p : panels)
    if (!p.dead) alive.push_back(p);
  std::sort(alive.begin(), alive.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  double sum = 0.0, comp = 0.0, esum = 0.0;
  for (const auto& p : alive) {
    const double y = p.value - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    esum += p.error;
  }
  out.value = sign * sum;
  out.error = esum;
  out.intervals = static_cast<int>(alive.size());
  return out;
}

}  // namespace bandflow
