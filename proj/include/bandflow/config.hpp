#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bandflow/coefficients.hpp"
#include "bandflow/pde.hpp"

namespace bandflow {

struct CoefficientConfig {
  std::string family = "constant";
  double alpha = 1.0, eps = 0.0, beta = 1.0, delta = 0.0;
  bool degenerate = false;
  bool symmetric = true;
  std::string table;  // tabulated family: omega,a,b CSV
  CoefficientPair build() const;
};

struct WaveConfig {
  double tol = 1e-10;
  int nodes = 2048;
  std::optional<double> h;
};

struct PdeConfig {
  int n = 512;
  std::string grid = "uniform";
  std::string scheme = "semi-implicit";
  double t_end = 10.0;
  double snapshot_dt = 0.5;
  double dt_init = 1e-4;
  double dt_max = 0.05;
  bool adaptive = true;
  double cfl = 0.4;
  double du_cap = 0.05;
  double slope_cap = 1e3;
  std::string datum = "rho";
  double m1_margin = 1.0;
  std::optional<double> m1;  // absolute M1; overrides the margin
  std::string datum_file;

  Grid build_grid() const;
  EvolveControls build_controls(const std::string& datum_kind,
                                bool symmetric) const;
};

struct VerifyConfig {
  std::vector<std::string> checks = {"linfty-wedge", "convexity",
                                     "gradient-envelopes", "interior-gradient",
                                     "convergence", "comparison"};
  double epsilon = 0.1;
  double h0 = 5.0;
  double envelope_x = 0.95;
  double tol_disc = -1.0;
  double s0 = -1.0;
  double t_window = 2.0;
  double speed_tol = 0.02;
};

struct SweepConfig {
  std::string axis;  // "h", "c", or a coefficient parameter name
  std::vector<double> values;
};

struct OutputConfig {
  std::string dir;
};

struct RunConfig {
  CoefficientConfig coefficients;
  WaveConfig wave;
  PdeConfig pde;
  VerifyConfig verify;
  SweepConfig sweep;
  OutputConfig output;
  std::vector<std::string> sections_present;
  bool has_section(const std::string& name) const;
};

// Flat sectioned key-value format:
//   [section]
//   key = value      # strings quoted, bools true/false, '#' comments
// Unknown sections or keys are rejected.
RunConfig parse_run_config(const std::string& path);
RunConfig parse_run_config_text(const std::string& text,
                                const std::string& origin = "<string>");

}  // namespace bandflow
