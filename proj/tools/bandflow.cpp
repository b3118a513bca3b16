// bandflow: traveling waves, graphical curvature-flow evolution, estimate
// verification and parameter sweeps for the band-domain flow with
// slope-equals-height contact conditions.
//
// Exit codes: 0 success / not-applicable, 1 verification failure,
// 2 usage or config error, 3 numerical blow-up.

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "bandflow/config.hpp"
#include "bandflow/initial_data.hpp"
#include "bandflow/io.hpp"
#include "bandflow/pde.hpp"
#include "bandflow/traveling_wave.hpp"
#include "bandflow/verification.hpp"

namespace fs = std::filesystem;
using namespace bandflow;

namespace {

struct CliOptions {
  std::string config_path;
  std::optional<double> h;
  std::string datum;
  std::string datum_file;
  std::string scheme;
  std::string out_dir;
  int jobs = 1;
};

fs::path resolve_out_dir(const CliOptions& cli, const RunConfig& cfg) {
  std::string dir = cli.out_dir;
  if (dir.empty()) dir = cfg.output.dir;
  if (dir.empty()) {
    if (const char* env = std::getenv("BANDFLOW_OUT")) dir = env;
  }
  if (dir.empty()) dir = "out";
  fs::create_directories(dir);
  return dir;
}

RunConfig load_config(CliOptions& cli) {
  if (cli.config_path.empty()) throw ConfigError("--config PATH is required");
  RunConfig cfg = parse_run_config(cli.config_path);
  if (cli.h) cfg.wave.h = *cli.h;
  if (!cli.datum.empty()) cfg.pde.datum = cli.datum;
  if (!cli.datum_file.empty()) cfg.pde.datum_file = cli.datum_file;
  if (!cli.scheme.empty()) cfg.pde.scheme = cli.scheme;
  return cfg;
}

WaveSolveOptions wave_options(const RunConfig& cfg) {
  WaveSolveOptions opt;
  opt.tol = cfg.wave.tol;
  opt.profile_nodes = cfg.wave.nodes;
  return opt;
}

struct DatumBundle {
  InitialDatum datum;
  WaveSolution wave_bar;
  StationaryProfile stationary;
  double m1 = 0.0;
};

DatumBundle build_rho_datum(const CoefficientPair& pair, const RunConfig& cfg) {
  const auto opt = wave_options(cfg);
  WaveSolution wave_bar = solve_cbar(pair, opt);
  StationaryProfile stat = stationary_profile(pair, opt.profile_nodes);
  const double m1 = cfg.pde.m1 ? *cfg.pde.m1
                               : stat.admissible_threshold() + cfg.pde.m1_margin;
  InitialDatum datum = make_rho(pair, m1, wave_bar, stat);
  return {std::move(datum), std::move(wave_bar), std::move(stat), m1};
}

InitialDatum build_datum(const CoefficientPair& pair, const RunConfig& cfg,
                         DatumBundle* bundle_out) {
  if (cfg.pde.datum == "rho") {
    DatumBundle b = build_rho_datum(pair, cfg);
    InitialDatum d = b.datum;
    if (bundle_out) *bundle_out = std::move(b);
    return d;
  }
  if (cfg.pde.datum == "user" || cfg.pde.datum == "tabulated") {
    if (cfg.pde.datum_file.empty())
      throw ConfigError("datum '" + cfg.pde.datum +
                        "' needs datum_file (or --file PATH)");
    auto [xs, us] = read_xy_csv(cfg.pde.datum_file);
    InitialDatum d = InitialDatum::tabulated(std::move(xs), std::move(us));
    d.check_compatibility();
    return d;
  }
  throw ConfigError("unknown datum '" + cfg.pde.datum + "' (rho | user)");
}

int cmd_tw(CliOptions& cli) {
  const RunConfig cfg = load_config(cli);
  const fs::path out = resolve_out_dir(cli, cfg);
  const CoefficientPair pair = cfg.coefficients.build();
  const auto opt = wave_options(cfg);

  const WaveSolution wave = cfg.wave.h ? solve_c_of_h(pair, *cfg.wave.h, opt)
                                       : solve_cbar(pair, opt);
  write_wave_json((out / "wave.json").string(), wave);
  write_profile_csv((out / "profile.csv").string(), wave.profile);
  std::cout << "c = " << fmt17(wave.c) << "  (|d - 2| = " << fmt17(wave.residual)
            << ")\n";
  return 0;
}

int cmd_evolve(CliOptions& cli) {
  const RunConfig cfg = load_config(cli);
  const fs::path out = resolve_out_dir(cli, cfg);
  const CoefficientPair pair = cfg.coefficients.build();
  const Grid grid = cfg.pde.build_grid();

  DatumBundle bundle{InitialDatum::user([](double) { return 0.0; },
                                        [](double) { return 0.0; }),
                     {}, {}, 0.0};
  const InitialDatum datum = build_datum(pair, cfg, &bundle);
  const auto controls =
      cfg.pde.build_controls(datum.kind_name(), pair.symmetric());

  try {
    const EvolveTrace trace = evolve(datum.realize(grid), pair, controls);
    write_snapshots_csv((out / "snapshots.csv").string(), trace);
    write_trace_json((out / "trace.json").string(), trace);
    if (trace.horizon.reached)
      std::cout << "horizon reached at t = " << fmt17(trace.horizon.time)
                << " (near-wall slope " << fmt17(trace.horizon.slope) << ")\n";
    std::cout << "evolved to t = " << fmt17(trace.snap_times.back()) << ", "
              << trace.size() << " snapshots\n";
    return 0;
  } catch (const BlowUpError& e) {
    std::ofstream dump(out / "state_dump.csv");
    dump << "x,u\n";
    for (size_t i = 0; i < e.last_u().size(); ++i)
      dump << fmt17(grid[i]) << ',' << fmt17(e.last_u()[i]) << '\n';
    std::cerr << "blow-up: " << e.what() << "\nlast good state at t = "
              << fmt17(e.time()) << " dumped to "
              << (out / "state_dump.csv").string() << "\n";
    return 3;
  }
}

// First snapshot time at which the rho solution dominates the datum at
// every node; realizes the sandwich time T.
double measure_domination_time(const EvolveTrace& rho_trace,
                               const std::vector<double>& u0) {
  for (size_t k = 0; k < rho_trace.size(); ++k) {
    bool dominates = true;
    const auto& u = rho_trace.snap(k);
    for (size_t i = 0; i < u.size(); ++i)
      if (!(u[i] > u0[i])) {
        dominates = false;
        break;
      }
    if (dominates) return rho_trace.snap_times[k];
  }
  return rho_trace.snap_times.back();
}

int cmd_verify(CliOptions& cli) {
  const RunConfig cfg = load_config(cli);
  const fs::path out = resolve_out_dir(cli, cfg);
  const CoefficientPair pair = cfg.coefficients.build();
  pair.require({.sign = true, .admissible = true});

  const auto opt = wave_options(cfg);
  DatumBundle bundle = build_rho_datum(pair, cfg);
  const WaveSolution wave_h0 = solve_c_of_h(pair, cfg.verify.h0, opt);
  const Grid grid = cfg.pde.build_grid();

  const InitialDatum datum = cfg.pde.datum == "rho"
                                 ? bundle.datum
                                 : build_datum(pair, cfg, nullptr);
  datum.check_admissibility(bundle.stationary, grid);

  const auto controls =
      cfg.pde.build_controls(datum.kind_name(), pair.symmetric());
  const EvolveTrace trace = evolve(datum.realize(grid), pair, controls);

  // Companion rho run: carries the sandwich time for general data and
  // the ordered partner for the comparison check.
  std::optional<EvolveTrace> rho_trace;
  double t_sandwich = 0.0;
  const auto requested = [&](const std::string& name) {
    for (const auto& c : cfg.verify.checks)
      if (c == name) return true;
    return false;
  };
  if (cfg.pde.datum != "rho" &&
      (requested("comparison") || requested("interior-gradient"))) {
    auto rc = controls;
    rc.datum_kind = "rho";
    rho_trace = evolve(bundle.datum.realize(grid), pair, rc);
    t_sandwich =
        measure_domination_time(*rho_trace, datum.realize(grid).u);
  }

  std::vector<CheckResult> results;
  double onset = -1.0;
  for (const auto& name : cfg.verify.checks) {
    if (name == "linfty-wedge") {
      results.push_back(check_linfty_wedge(trace, bundle.wave_bar));
    } else if (name == "convexity") {
      results.push_back(check_convexity(trace));
    } else if (name == "gradient-envelopes") {
      EnvelopeOptions eo;
      eo.x_abs = cfg.verify.envelope_x;
      eo.tol_disc = cfg.verify.tol_disc;
      auto r = check_gradient_envelopes(trace, bundle.wave_bar, wave_h0, eo);
      if (r.measured.count("lower_onset")) onset = r.measured["lower_onset"];
      results.push_back(std::move(r));
    } else if (name == "interior-gradient") {
      InteriorGradientOptions io;
      io.epsilon = cfg.verify.epsilon;
      io.t_sandwich = t_sandwich;
      results.push_back(check_interior_gradient(trace, bundle.wave_bar, io));
    } else if (name == "convergence") {
      ConvergenceOptions co;
      co.epsilon = cfg.verify.epsilon;
      co.s0 = cfg.verify.s0 > 0 ? cfg.verify.s0 : onset;
      co.t_window = cfg.verify.t_window;
      co.speed_tol = cfg.verify.speed_tol;
      results.push_back(check_convergence(trace, bundle.wave_bar, co));
    } else if (name == "comparison") {
      if (cfg.pde.datum == "rho") {
        // Ordered partner: a second rho with M1 + 1.
        InitialDatum upper = make_rho(pair, bundle.m1 + 1.0, bundle.wave_bar,
                                      bundle.stationary);
        auto uc = controls;
        const EvolveTrace upper_trace = evolve(upper.realize(grid), pair, uc);
        results.push_back(check_comparison(trace, upper_trace));
      } else {
        results.push_back(check_comparison(*rho_trace, trace));
      }
    } else {
      throw ConfigError("unknown check '" + name + "'");
    }
  }

  std::map<std::string, std::string> meta{
      {"pair", pair.describe()},
      {"grid", grid.kind_name() + ":" + std::to_string(grid.size() - 1)},
      {"scheme", cfg.pde.scheme},
      {"datum", datum.kind_name()},
      {"cbar", fmt17(bundle.wave_bar.c)},
      {"horizon", trace.horizon.reached ? fmt17(trace.horizon.time) : "none"}};
  const VerificationReport report = build_report(std::move(results), meta);
  write_report_json((out / "report.json").string(), report);

  for (const auto& c : report.checks)
    std::cout << c.name << ": " << status_name(c.status)
              << (c.note.empty() ? "" : " (" + c.note + ")") << "\n";
  return report.any_fail() ? 1 : 0;
}

struct SweepRow {
  double param = 0.0;
  double c = 0.0, x_plus = 0.0, x_minus = 0.0, height = 0.0;
  std::string status = "ok";
};

std::string csv_sanitize(std::string s) {
  for (auto& ch : s)
    if (ch == ',' || ch == '\n') ch = ';';
  return s;
}

int cmd_sweep(CliOptions& cli) {
  const RunConfig cfg = load_config(cli);
  const fs::path out = resolve_out_dir(cli, cfg);
  const CoefficientPair pair = cfg.coefficients.build();
  const auto& axis = cfg.sweep.axis;
  const auto& values = cfg.sweep.values;
  if (axis.empty() || values.empty())
    throw ConfigError("sweep needs [sweep] axis and a non-empty values list");
  for (size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1]) && !(values[i] < values[i - 1]))
      throw ConfigError("sweep axis values must be strictly monotone");
  for (size_t i = 2; i < values.size(); ++i)
    if ((values[i] > values[i - 1]) != (values[1] > values[0]))
      throw ConfigError("sweep axis values must be strictly monotone");

  const auto opt = wave_options(cfg);
  const auto compute = [&](double v) -> SweepRow {
    SweepRow row;
    row.param = v;
    try {
      if (axis == "h") {
        const WaveSolution w = solve_c_of_h(pair, v, opt);
        row = {v, w.c, w.x_plus, w.x_minus, w.height, "ok"};
      } else if (axis == "c") {
        SpanIntegrals spans(pair, opt.quadrature);
        row = {v, v, spans.x_plus(v), spans.x_minus(v),
               wave_height(pair, v, std::numeric_limits<double>::infinity(),
                           opt.quadrature),
               "ok"};
      } else {
        const WaveSolution w = solve_cbar(pair.with_param(axis, v), opt);
        row = {v, w.c, w.x_plus, w.x_minus, w.height, "ok"};
      }
    } catch (const std::exception& e) {
      row.status = "error: " + csv_sanitize(e.what());
    }
    return row;
  };

  std::ofstream os(out / "sweep.csv");
  os << "param,c,x_plus,x_minus,height,status\n";
  const auto write_row = [&](const SweepRow& r) {
    os << fmt17(r.param) << ',' << fmt17(r.c) << ',' << fmt17(r.x_plus) << ','
       << fmt17(r.x_minus) << ',' << fmt17(r.height) << ',' << r.status
       << std::endl;  // flush: rows land incrementally
  };

  const int jobs = std::max(1, cli.jobs);
  if (jobs == 1) {
    for (double v : values) write_row(compute(v));
  } else {
    // Points run concurrently; rows are emitted in axis order as soon as
    // the next-in-order result is ready.
    std::vector<std::optional<SweepRow>> slots(values.size());
    std::mutex mu;
    std::condition_variable cv;
    std::atomic<size_t> next{0};
    auto worker = [&] {
      while (true) {
        const size_t i = next.fetch_add(1);
        if (i >= values.size()) return;
        SweepRow r = compute(values[i]);
        {
          std::lock_guard<std::mutex> lock(mu);
          slots[i] = std::move(r);
        }
        cv.notify_all();
      }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    {
      std::unique_lock<std::mutex> lock(mu);
      for (size_t i = 0; i < values.size(); ++i) {
        cv.wait(lock, [&] { return slots[i].has_value(); });
        write_row(*slots[i]);
      }
    }
    for (auto& t : pool) t.join();
  }
  std::cout << "sweep: " << values.size() << " points -> "
            << (out / "sweep.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"band-domain curvature flow laboratory"};
  app.set_help_flag("--help", "print help");  // frees -h for the --h flag
  app.require_subcommand(1);
  CliOptions cli;

  const auto add_common = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print help");
    sub->add_option("--config", cli.config_path, "run config file")
        ->required();
    sub->add_option("--out", cli.out_dir, "output directory");
  };
  auto* tw = app.add_subcommand("tw", "solve the traveling wave");
  add_common(tw);
  tw->add_option("--h", cli.h, "finite endpoint slope (default: full wave)");
  auto* ev = app.add_subcommand("evolve", "evolve the flow");
  add_common(ev);
  ev->add_option("--datum", cli.datum, "initial datum kind (rho | user)");
  ev->add_option("--scheme", cli.scheme, "semi-implicit | explicit");
  ev->add_option("--file", cli.datum_file, "x,u CSV for the user datum");
  auto* vf = app.add_subcommand("verify", "run the check suite");
  add_common(vf);
  vf->add_option("--datum", cli.datum, "initial datum kind (rho | user)");
  vf->add_option("--scheme", cli.scheme, "semi-implicit | explicit");
  vf->add_option("--file", cli.datum_file, "x,u CSV for the user datum");
  auto* sw = app.add_subcommand("sweep", "parameter sweep");
  add_common(sw);
  sw->add_option("--jobs", cli.jobs, "concurrent sweep points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (tw->parsed()) return cmd_tw(cli);
    if (ev->parsed()) return cmd_evolve(cli);
    if (vf->parsed()) return cmd_verify(cli);
    if (sw->parsed()) return cmd_sweep(cli);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DatumError& e) {
    std::cerr << "datum rejected: " << e.what()
              << "\n(the compatibility condition u0'(+-1) = +-u0(+-1) and the "
                 "threshold u0 > phi(x;0) + M are required)\n";
    return 2;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis violation: " << e.what() << "\n";
    return 2;
  } catch (const BlowUpError& e) {
    std::cerr << "blow-up: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
