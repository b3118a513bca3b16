#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "bandflow/initial_data.hpp"
#include "bandflow/io.hpp"
#include "bandflow/pde.hpp"
#include "bandflow/traveling_wave.hpp"
#include "bandflow/verification.hpp"

using namespace bandflow;

namespace {

const CoefficientPair& ref_pair() {
  static const auto p = CoefficientPair::constant(1.0, 0.5);
  return p;
}

const WaveSolution& ref_wave() {
  static const auto w = solve_cbar(ref_pair());
  return w;
}

const WaveSolution& ref_wave5() {
  static const auto w = solve_c_of_h(ref_pair(), 5.0);
  return w;
}

// u(x, t) = Phi(x) + c t + offset sampled on dyadic snapshot times; with
// c = 1 every term in the convergence error cancels bitwise.
EvolveTrace synthetic_wave_trace(const WaveSolution& wave, double offset,
                                 double t_end, double dt,
                                 const std::string& datum_kind = "user") {
  const Grid grid = Grid::uniform(128);
  EvolveTrace tr{grid};
  tr.pair_desc = "synthetic";
  tr.scheme_name = "exact";
  tr.datum_kind = datum_kind;
  tr.symmetric = true;
  std::vector<double> phi(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) phi[i] = wave.phi_at(grid[i]);
  for (double t = 0.0; t <= t_end + 1e-12; t += dt) {
    std::vector<double> u(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) u[i] = phi[i] + wave.c * t + offset;
    tr.snap_times.push_back(t);
    tr.snaps.push_back(std::move(u));
  }
  return tr;
}

// The reference evolution used by several checks; computed once.
const EvolveTrace& rho_trace() {
  static const EvolveTrace tr = [] {
    const auto stat = stationary_profile(ref_pair());
    const auto rho = make_rho(ref_pair(), stat.admissible_threshold() + 1.0,
                              ref_wave(), stat);
    EvolveControls ctl;
    ctl.t_end = 24.0;
    ctl.snapshot_dt = 0.5;
    ctl.dt_max = 0.01;
    ctl.datum_kind = "rho";
    ctl.symmetric = true;
    return evolve(rho.realize(Grid::clustered(256)), ref_pair(), ctl);
  }();
  return tr;
}

}  // namespace

TEST_CASE("convergence check is zero to roundoff on an exact wave") {
  // The error cancels term by term; what is left is the rounding of
  // phi + t + offset sums, a few ulp of the solution scale.
  WaveSolution unit = ref_wave();
  unit.c = 1.0;
  const EvolveTrace tr = synthetic_wave_trace(unit, 3.0, 16.0, 0.5);
  ConvergenceOptions opt;
  opt.s0 = 2.0;
  opt.t_window = 2.0;
  const CheckResult res = check_convergence(tr, unit, opt);
  CHECK(res.status == CheckStatus::pass);
  CHECK(res.measured.at("E0") <= 5e-15);
  CHECK(res.measured.at("E1") <= 5e-15);
  CHECK(res.measured.at("E2") <= 5e-15);
  CHECK(res.measured.at("speed") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("convergence check goes partial when the trace is short") {
  WaveSolution unit = ref_wave();
  unit.c = 1.0;
  const EvolveTrace tr = synthetic_wave_trace(unit, 0.0, 4.0, 0.5);
  ConvergenceOptions opt;
  opt.s0 = 2.0;  // ladder would need s = 8 plus the window
  const CheckResult res = check_convergence(tr, unit, opt);
  CHECK(res.status == CheckStatus::partial);
}

TEST_CASE("wedge check on the exact wave and a wrong-speed control") {
  const EvolveTrace tr = synthetic_wave_trace(ref_wave(), 2.0, 12.0, 0.5);
  const CheckResult good = check_linfty_wedge(tr, ref_wave());
  CHECK(good.status == CheckStatus::pass);
  CHECK(good.measured.at("c0") == doctest::Approx(ref_wave().c).epsilon(1e-9));
  // Least C2: the wave saturates the upper bound at max Phi + offset.
  const double max_phi = ref_wave().phi_at(1.0);
  CHECK(good.measured.at("C2") ==
        doctest::Approx(max_phi + 2.0).epsilon(1e-6));

  WaveSolution slow = ref_wave();
  slow.c *= 0.8;  // pretend the wave came from a different pair
  const CheckResult bad = check_linfty_wedge(tr, slow);
  CHECK(bad.status == CheckStatus::fail);
  CHECK(bad.measured.at("violation") > 0.0);
}

TEST_CASE("wedge check needs at least 3 snapshots") {
  EvolveTrace tr = synthetic_wave_trace(ref_wave(), 0.0, 0.5, 0.5);
  const CheckResult res = check_linfty_wedge(tr, ref_wave());
  CHECK(res.status == CheckStatus::not_applicable);
}

TEST_CASE("convexity check gates on the datum kind") {
  const CheckResult na =
      check_convexity(synthetic_wave_trace(ref_wave(), 0.0, 2.0, 0.5, "user"));
  CHECK(na.status == CheckStatus::not_applicable);

  // The exact wave is convex; labeled rho it passes.
  const CheckResult ok =
      check_convexity(synthetic_wave_trace(ref_wave(), 0.0, 2.0, 0.5, "rho"));
  CHECK(ok.status == CheckStatus::pass);
  CHECK(ok.measured.at("min_uxx") > 0.0);
}

TEST_CASE("estimate checks pass on the reference rho run") {
  const EvolveTrace& tr = rho_trace();

  const CheckResult cx = check_convexity(tr);
  CHECK(cx.status == CheckStatus::pass);

  EnvelopeOptions eo;
  eo.x_abs = 0.9;
  const CheckResult env =
      check_gradient_envelopes(tr, ref_wave(), ref_wave5(), eo);
  CHECK(env.status == CheckStatus::pass);
  CHECK(env.measured.at("lower_onset") > 0.0);

  const CheckResult wedge = check_linfty_wedge(tr, ref_wave());
  CHECK(wedge.status == CheckStatus::pass);
  CHECK(wedge.measured.at("c0") > 0.9 * ref_wave5().c);

  InteriorGradientOptions io;
  io.epsilon = 0.1;
  const CheckResult ig = check_interior_gradient(tr, ref_wave(), io);
  CHECK(ig.status == CheckStatus::pass);
  CHECK(ig.measured.at("M3") <= ig.measured.at("M2") + 1e-12);
  CHECK(ig.measured.at("T_eps") >= 0.0);
}

TEST_CASE("centerline slope vanishes for symmetric runs") {
  const EvolveTrace& tr = rho_trace();
  for (size_t k = 0; k < tr.size(); ++k) {
    const GridState s{tr.grid, tr.snap(k), tr.snap_times[k]};
    const auto ux = robin_slope(s);
    CHECK(std::fabs(ux[tr.grid.center_index()]) < 1e-8);
  }
}

TEST_CASE("envelope onset across an h0 sweep is reported, not asserted") {
  // Diagnostic only: the onset times for h0 in {3, 5, 10} are measured
  // and must exist, but no monotonicity across h0 is claimed.
  const EvolveTrace& tr = rho_trace();
  EnvelopeOptions eo;
  eo.x_abs = 0.9;
  for (double h0 : {3.0, 5.0, 10.0}) {
    const auto wh = solve_c_of_h(ref_pair(), h0);
    const CheckResult res = check_gradient_envelopes(tr, ref_wave(), wh, eo);
    CHECK(res.status == CheckStatus::pass);
    CHECK(res.measured.at("lower_onset") >= 0.0);
    CHECK(res.measured.at("h0") == h0);
  }
}

TEST_CASE("envelope check gates on datum kind and symmetry") {
  const CheckResult na = check_gradient_envelopes(
      synthetic_wave_trace(ref_wave(), 0.0, 2.0, 0.5, "user"), ref_wave(),
      ref_wave5());
  CHECK(na.status == CheckStatus::not_applicable);
}

TEST_CASE("interior gradient reports a window adjustment on saturated data") {
  // A steep admissible datum whose band slopes already exceed M2; the
  // check must gate instead of reporting a spurious verdict.
  auto f = [](double x) { return 10.0 * std::exp(0.5 * x * x); };
  auto df = [](double x) { return 10.0 * x * std::exp(0.5 * x * x); };
  const auto u0 = InitialDatum::user(f, df);
  u0.check_compatibility();
  EvolveControls ctl;
  ctl.t_end = 1.0;
  ctl.snapshot_dt = 0.5;
  ctl.dt_max = 0.01;
  ctl.datum_kind = "user";
  ctl.symmetric = true;
  const EvolveTrace tr =
      evolve(u0.realize(Grid::clustered(128)), ref_pair(), ctl);
  InteriorGradientOptions io;
  io.epsilon = 0.1;
  const CheckResult res = check_interior_gradient(tr, ref_wave(), io);
  CHECK(res.status == CheckStatus::not_applicable);
  CHECK(res.note.find("window") != std::string::npos);
}

TEST_CASE("comparison check: ordering, gate, and trace mismatch") {
  const EvolveTrace lo = synthetic_wave_trace(ref_wave(), 0.0, 4.0, 0.5);
  const EvolveTrace hi = synthetic_wave_trace(ref_wave(), 1.0, 4.0, 0.5);
  const CheckResult ok = check_comparison(lo, hi);
  CHECK(ok.status == CheckStatus::pass);
  CHECK(ok.measured.at("min_gap") == doctest::Approx(1.0).epsilon(1e-12));

  // Crossing data: gate, no pass/fail.
  EvolveTrace crossed = hi;
  crossed.snaps[0][3] = lo.snaps[0][3] - 1.0;
  const CheckResult gate = check_comparison(lo, crossed);
  CHECK(gate.status == CheckStatus::not_applicable);
  CHECK(gate.note.find("t=0") != std::string::npos);

  EvolveTrace other = synthetic_wave_trace(ref_wave(), 1.0, 4.0, 0.5);
  other.scheme_name = "different";
  CHECK_THROWS_AS(check_comparison(lo, other), TraceError);
}

TEST_CASE("report: ordering, determinism, duplicate rejection") {
  const EvolveTrace tr = synthetic_wave_trace(ref_wave(), 2.0, 12.0, 0.5);
  std::vector<CheckResult> checks;
  checks.push_back(check_linfty_wedge(tr, ref_wave()));
  checks.push_back(check_convexity(tr));
  const std::map<std::string, std::string> meta{{"pair", "synthetic"}};

  const VerificationReport rep = build_report(checks, meta);
  CHECK(rep.checks.size() == 2);
  CHECK(rep.checks[0].name < rep.checks[1].name);
  CHECK_FALSE(rep.any_fail());

  const std::string j1 = report_json(rep);
  const std::string j2 = report_json(build_report(checks, meta));
  CHECK(j1 == j2);

  auto dup = checks;
  dup.push_back(checks[0]);
  CHECK_THROWS_AS(build_report(dup, meta), ConfigError);

  const VerificationReport empty = build_report({}, meta);
  CHECK(empty.checks.empty());
  CHECK_FALSE(empty.any_fail());
}

TEST_CASE("report JSON matches the schema") {
  const EvolveTrace tr = synthetic_wave_trace(ref_wave(), 2.0, 12.0, 0.5);
  std::vector<CheckResult> checks{check_linfty_wedge(tr, ref_wave())};
  const VerificationReport rep =
      build_report(checks, {{"pair", ref_pair().describe()}});
  const auto j = nlohmann::json::parse(report_json(rep));
  REQUIRE(j.contains("meta"));
  REQUIRE(j.contains("checks"));
  REQUIRE(j["checks"].is_array());
  for (const auto& c : j["checks"]) {
    CHECK(c.contains("name"));
    CHECK(c.contains("status"));
    CHECK(c.contains("measured"));
    CHECK(c.contains("tolerance"));
    CHECK(c.contains("window"));
    const std::string st = c["status"];
    CHECK((st == "pass" || st == "fail" || st == "not-applicable" ||
           st == "partial"));
  }
}

TEST_CASE("rerun reproducibility of fitted constants") {
  const EvolveTrace& tr = rho_trace();
  const CheckResult a = check_linfty_wedge(tr, ref_wave());
  const CheckResult b = check_linfty_wedge(tr, ref_wave());
  for (const auto& [k, v] : a.measured) CHECK(v == b.measured.at(k));

  ConvergenceOptions opt;
  opt.s0 = 4.0;
  const CheckResult c1 = check_convergence(tr, ref_wave(), opt);
  const CheckResult c2 = check_convergence(tr, ref_wave(), opt);
  for (const auto& [k, v] : c1.measured) CHECK(v == c2.measured.at(k));
}

TEST_CASE("convergence ladder is monotone on the reference run") {
  ConvergenceOptions opt;
  opt.s0 = 4.0;
  const CheckResult res = check_convergence(rho_trace(), ref_wave(), opt);
  CHECK(res.status == CheckStatus::pass);
  CHECK(res.measured.at("E0") > res.measured.at("E1"));
  CHECK(res.measured.at("E1") > res.measured.at("E2"));
  CHECK(res.measured.at("E2") < res.tolerance);
}
