// Acceptance suite: end-to-end checks of the wave solver, the evolution
// scheme and the verification layer at pinned tolerances. Prints one
// PASS/FAIL line per criterion and exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "bandflow/initial_data.hpp"
#include "bandflow/io.hpp"
#include "bandflow/pde.hpp"
#include "bandflow/traveling_wave.hpp"
#include "bandflow/verification.hpp"
#include "oracles.hpp"

using namespace bandflow;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kPi = oracles::kPi;
int g_failures = 0;

struct Criterion {
  const char* name;
  double time_limit;
  Clock::time_point start;
  bool ok = true;
  std::string detail;

  Criterion(const char* n, double limit)
      : name(n), time_limit(limit), start(Clock::now()) {}

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }

  void finish() {
    const double secs =
        std::chrono::duration<double>(Clock::now() - start).count();
    if (secs > time_limit) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + std::string("overran ") +
                std::to_string(time_limit) + " s";
    }
    if (!ok) ++g_failures;
    std::printf("[%s] %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", name, secs,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

const CoefficientPair& ref_pair() {
  static const auto p = CoefficientPair::constant(1.0, 0.5);
  return p;
}

const CoefficientPair& bump_pair() {
  static const auto p = CoefficientPair::rational_bump(1.0, 0.2, 0.5, 0.0);
  return p;
}

// The reference evolution shared by criteria 6 and 7: rho datum on the
// boundary-clustered grid, which keeps the wall layer resolvable far
// beyond the verification windows used here.
const EvolveTrace& reference_trace() {
  static const EvolveTrace tr = [] {
    const auto stat = stationary_profile(ref_pair());
    const auto rho = make_rho(ref_pair(), stat.admissible_threshold() + 1.0,
                              solve_cbar(ref_pair()), stat);
    EvolveControls ctl;
    ctl.t_end = 80.0;
    ctl.snapshot_dt = 0.5;
    ctl.dt_max = 0.01;
    ctl.datum_kind = "rho";
    ctl.symmetric = true;
    return evolve(rho.realize(Grid::clustered(512)), ref_pair(), ctl);
  }();
  return tr;
}

void criterion_1_grim_reaper() {
  Criterion c("1 grim-reaper speed and profile oracle", 1.0);
  const auto grim = CoefficientPair::constant(1.0, 0.0, true);
  const auto sol = solve_cbar(grim);
  c.require(std::fabs(sol.c - 0.5 * kPi) < 1e-8,
            "cbar = " + num(sol.c) + " vs pi/2");
  double worst = 0.0;
  for (const auto& s : sol.profile.samples()) {
    if (std::fabs(s.x) > 0.9) continue;
    worst = std::max(worst, std::fabs(s.phi - oracles::grim_phi(s.x)));
  }
  c.require(worst < 1e-6, "profile error " + num(worst));
  c.finish();
}

void criterion_2_speed_bounds() {
  Criterion c("2 speed and height bounds on five pairs", 10.0);
  const std::vector<CoefficientPair> pairs = {
      CoefficientPair::constant(1.0, 0.5),
      CoefficientPair::constant(1.2, 0.8),
      CoefficientPair::rational_bump(1.0, 0.2, 0.5, 0.0),
      CoefficientPair::rational_bump(1.0, 0.0, 0.4, 0.1),
      CoefficientPair::rational_bump(0.8, 0.4, 0.3, 0.2)};
  for (const auto& pair : pairs) {
    const auto ex = pair.extrema();
    const auto sol = solve_cbar(pair);
    c.require(sol.c > 0.0 && sol.c < 0.5 * kPi * ex.a_sup,
              pair.describe() + ": cbar bound");
    c.require(sol.height <= ex.a_sup / (-ex.b_sup) + 1e-6,
              pair.describe() + ": height " + num(sol.height) + " vs " +
                  num(ex.a_sup / (-ex.b_sup)));
    for (double h : {2.0, 5.0, 20.0}) {
      const auto wh = solve_c_of_h(pair, h);
      c.require(wh.c > 0.0 && wh.c < ex.a_sup * std::atan(h),
                pair.describe() + ": c(h) bound at h=" + num(h));
      c.require(wh.height <= ex.a_sup / (-ex.b_sup) + 1e-6,
                pair.describe() + ": height bound at h=" + num(h));
    }
  }
  c.finish();
}

void criterion_3_monotonicity() {
  Criterion c("3 span and dispersion monotonicity", 10.0);
  SpanIntegrals spans(ref_pair());
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 50; ++i) {
    const double cc = 0.05 + 3.0 * i / 49.0;
    const double d = spans.span(cc);
    c.require(d < prev, "d(c) not strictly decreasing at c=" + num(cc));
    prev = d;
  }
  const double cbar = solve_cbar(ref_pair()).c;
  double prev_ch = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double h = 2.0 * std::pow(1000.0 / 2.0, i / 19.0);
    const double ch = solve_c_of_h(ref_pair(), h).c;
    c.require(ch > prev_ch, "c(h) not strictly increasing at h=" + num(h));
    c.require(ch < cbar, "c(h) above cbar at h=" + num(h));
    prev_ch = ch;
  }
  c.require(cbar - prev_ch < 1e-3,
            "c(1000) gap " + num(cbar - prev_ch) + " >= 1e-3");
  c.finish();
}

void criterion_4_ode_oracle() {
  Criterion c("4 quadrature profile vs fourth-order ODE oracle", 5.0);
  const auto& pair = bump_pair();
  std::vector<double> targets;
  for (int i = 1; i <= 18; ++i) targets.push_back(0.05 * i);
  for (int i = 1; i <= 18; ++i) targets.push_back(-0.05 * i);

  const WaveSolution sols[2] = {solve_cbar(pair), solve_c_of_h(pair, 5.0)};
  for (const auto& sol : sols) {
    const auto pts = oracles::rk4_profile(pair, sol.c, targets);
    double worst = 0.0;
    for (const auto& pt : pts)
      worst = std::max(worst, std::fabs(sol.phi_at(pt.x) - pt.phi));
    c.require(worst < 1e-6,
              "profile-ODE gap " + num(worst) + " at c=" + num(sol.c));
  }
  c.finish();
}

void criterion_5_comparison() {
  Criterion c("5 discrete comparison principle, 20 ordered pairs", 60.0);
  const Grid grid = Grid::uniform(256);
  const double dx = 2.0 / 256.0;
  const double dt = 0.35 * dx * dx;
  const int steps = static_cast<int>(std::ceil(2.0 / dt));

  std::mt19937 rng(7041982);
  std::uniform_real_distribution<double> amp(2.0, 4.0);
  std::uniform_real_distribution<double> pert(-0.25, 0.25);

  auto sample = [&](double A, double B, double D) {
    GridState s{grid, std::vector<double>(grid.size()), 0.0};
    for (size_t i = 0; i < grid.size(); ++i) {
      const double x = grid[i];
      const double sn = std::sin(kPi * x);
      s.u[i] = std::exp(0.5 * x * x) *
               (A + B * std::cos(kPi * x) + D * sn * sn * sn);
    }
    return s;
  };

  int violations = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const double a1 = amp(rng), b1 = pert(rng), d1 = pert(rng);
    const double b2 = pert(rng), d2 = pert(rng);
    const double a2 =
        a1 + 1.2 * (std::fabs(b2 - b1) + std::fabs(d2 - d1)) + 0.1;
    GridState lo = sample(a1, b1, d1);
    GridState hi = sample(a2, b2, d2);
    for (int k = 0; k < steps; ++k) {
      lo = step(lo, ref_pair(), dt, Scheme::explicit_euler);
      hi = step(hi, ref_pair(), dt, Scheme::explicit_euler);
      for (size_t i = 0; i < grid.size(); ++i)
        if (!(lo.u[i] < hi.u[i])) {
          ++violations;
          break;
        }
      if (violations) break;
    }
    if (violations) break;
  }
  c.require(violations == 0, "ordering violated");
  c.finish();
}

void criterion_6_estimate_checks() {
  Criterion c("6 a-priori estimate checks on the rho run (N=512, semi-implicit)", 300.0);
  const auto& tr = reference_trace();
  const auto wave = solve_cbar(ref_pair());
  const auto w5 = solve_c_of_h(ref_pair(), 5.0);
  c.require(!tr.horizon.reached, "horizon reached unexpectedly");

  const auto cx = check_convexity(tr);
  c.require(cx.status == CheckStatus::pass,
            "convexity: min u_xx " + num(cx.measured.at("min_uxx")));

  EnvelopeOptions eo;
  eo.x_abs = 0.9;
  const auto env = check_gradient_envelopes(tr, wave, w5, eo);
  c.require(env.status == CheckStatus::pass, "gradient envelopes");
  c.require(env.measured.at("lower_onset") > 0.0,
            "no onset for the lower envelope");

  const auto wedge = check_linfty_wedge(tr, wave);
  c.require(wedge.status == CheckStatus::pass, "L-infinity wedge");
  c.require(wedge.measured.at("c0") > 0.0, "c0 <= 0");

  InteriorGradientOptions io;
  io.epsilon = 0.1;
  const auto ig = check_interior_gradient(tr, wave, io);
  c.require(ig.status == CheckStatus::pass, "interior gradient bound");
  c.finish();
}

void criterion_7_convergence() {
  Criterion c("7 convergence to the traveling wave", 600.0);
  const auto wave = solve_cbar(ref_pair());
  ConvergenceOptions opt;
  opt.epsilon = 0.1;
  opt.s0 = 8.0;
  opt.t_window = 2.0;
  opt.speed_tol = 0.02;

  const auto judge = [&](const EvolveTrace& tr, const std::string& label) {
    const auto res = check_convergence(tr, wave, opt);
    c.require(res.status == CheckStatus::pass,
              label + ": status " + status_name(res.status) +
                  (res.note.empty() ? "" : ": " + res.note));
    c.require(res.measured.at("E0") > res.measured.at("E1") &&
                  res.measured.at("E1") > res.measured.at("E2"),
              label + ": ladder not decreasing");
    c.require(res.measured.at("E2") < res.tolerance,
              label + ": final E " + num(res.measured.at("E2")) + " vs tol " +
                  num(res.tolerance));
    c.require(res.measured.at("speed_rel_err") <= 0.02,
              label + ": speed error " + num(res.measured.at("speed_rel_err")));
  };

  judge(reference_trace(), "rho datum");

  // General admissible datum: same pass criteria on the same windows.
  {
    auto f = [](double x) { return 4.0 * std::exp(0.5 * x * x); };
    auto df = [](double x) { return 4.0 * x * std::exp(0.5 * x * x); };
    const auto u0 = InitialDatum::user(f, df);
    u0.check_compatibility();
    EvolveControls ctl;
    ctl.t_end = 80.0;
    ctl.snapshot_dt = 0.5;
    ctl.dt_max = 0.01;
    ctl.datum_kind = "user";
    ctl.symmetric = true;
    const EvolveTrace tr =
        evolve(u0.realize(Grid::clustered(512)), ref_pair(), ctl);
    judge(tr, "general datum");
  }
  c.finish();
}

void criterion_8_grid_convergence() {
  Criterion c("8 grid convergence under mesh halving", 300.0);
  const auto stat = stationary_profile(ref_pair());
  const auto rho = make_rho(ref_pair(), stat.admissible_threshold() + 1.0,
                            solve_cbar(ref_pair()), stat);
  std::vector<std::vector<double>> sols;
  std::vector<Grid> grids;
  for (int n : {128, 256, 512}) {
    Grid g = Grid::uniform(n);
    GridState s = rho.realize(g);
    const double dx = 2.0 / n;
    const int steps = static_cast<int>(std::ceil(1.0 / (0.25 * dx * dx)));
    const double dt = 1.0 / steps;  // dt ~ dx^2 keeps time error at O(dx^2)
    for (int k = 0; k < steps; ++k)
      s = step(s, ref_pair(), dt, Scheme::semi_implicit);
    sols.push_back(std::move(s.u));
    grids.push_back(std::move(g));
  }
  double e128 = 0.0, e256 = 0.0;
  for (size_t i = 0; i < grids[0].size(); ++i) {
    if (std::fabs(grids[0][i]) > 0.8) continue;
    const double u512 = sols[2][4 * i], u256 = sols[1][2 * i],
                 u128 = sols[0][i];
    const double uref = u512 + (u512 - u256) / 3.0;  // Richardson reference
    e128 = std::max(e128, std::fabs(u128 - uref));
    e256 = std::max(e256, std::fabs(u256 - uref));
  }
  const double ratio = e128 / e256;
  c.require(ratio >= 3.5, "error ratio " + num(ratio) + " < 3.5");
  c.finish();
}

void criterion_9_determinism() {
  Criterion c("9 determinism and CSV round-trip", 60.0);
  const auto& tr = reference_trace();
  const auto wave = solve_cbar(ref_pair());
  const auto w5 = solve_c_of_h(ref_pair(), 5.0);

  const auto make_report = [&] {
    std::vector<CheckResult> checks;
    checks.push_back(check_convexity(tr));
    checks.push_back(check_linfty_wedge(tr, wave));
    EnvelopeOptions eo;
    eo.x_abs = 0.9;
    checks.push_back(check_gradient_envelopes(tr, wave, w5, eo));
    return report_json(
        build_report(std::move(checks), {{"pair", ref_pair().describe()}}));
  };
  c.require(make_report() == make_report(), "report JSON differs on rerun");

  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "bandflow_acceptance";
  fs::create_directories(dir);
  const std::string p1 = (dir / "profile.csv").string();
  const std::string p2 = (dir / "profile2.csv").string();
  write_profile_csv(p1, wave.profile);
  const auto rows = read_profile_csv(p1);
  const auto ref = wave.profile.samples();
  bool exact = rows.size() == ref.size();
  if (exact)
    for (size_t i = 0; i < rows.size(); ++i)
      exact = exact && rows[i].x == ref[i].x && rows[i].phi == ref[i].phi &&
              rows[i].psi == ref[i].psi;
  c.require(exact, "profile CSV round-trip not bit-exact");

  const auto wave2 = solve_cbar(ref_pair());
  write_profile_csv(p2, wave2.profile);
  std::ifstream f1(p1), f2(p2);
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  c.require(s1.str() == s2.str(), "profile CSV differs across solves");
  c.finish();
}

}  // namespace

int main() {
  std::printf("acceptance suite: band flow laboratory\n");
  criterion_1_grim_reaper();
  criterion_2_speed_bounds();
  criterion_3_monotonicity();
  criterion_4_ode_oracle();
  criterion_5_comparison();
  criterion_6_estimate_checks();
  criterion_7_convergence();
  criterion_8_grid_convergence();
  criterion_9_determinism();
  if (g_failures) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
