#ifndef LSINV_SCENARIO_HPP
#define LSINV_SCENARIO_HPP

#include <optional>
#include <string>
#include <vector>

#include "lsinv/detect.hpp"
#include "lsinv/domain.hpp"

namespace lsinv {

enum class ScenarioKind {
  StaticDefect, // stationary state -> Q profile -> defect report
  ShiftScan,    // Q^{dL} scan -> inferred period -> defect report
  Driven,       // Floquet mode -> Qbar profile + Jbar + kernel
  Convergence,  // eps(k_max, dx) table
  DeltaOracle   // analytic delta-defect plateau ratios over k
};

struct ScanRange {
  double from = 0.0;
  double to = 0.0;
  double step = 0.0;

  std::vector<double> values() const;
};

struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::StaticDefect;

  // lattice
  double supercell = 0.0;
  std::vector<double> centers;
  std::vector<double> strengths;
  double width = 0.5;
  std::optional<double> support_width;
  std::optional<DrivingLaw> driving;

  // discretization
  int k_max = 128;
  double dx = 0.05;

  // state and transform
  int state_index = 0;
  SymmetryTransform transform = SymmetryTransform::translation(5.0);

  // shift scan
  ScanRange scan{3.5, 6.5, 0.05};
  double trim_lo = 0.0;
  double trim_hi = 0.0;

  // floquet
  int substeps = 1024;
  int time_samples = 256;

  // detection
  double floor = 0.0; // <= 0: default floor

  // convergence sweep
  std::vector<int> k_max_values;
  std::vector<double> dx_values;
  double domain_lo = 0.0;
  double domain_hi = 0.0;

  // delta oracle
  double delta_strength = 2.5;
  double delta_spacing = 5.0;
  ScanRange k_sweep{0.05, 8.0, 0.005};

  // output
  std::string out_dir; // empty: resolved from env or default
  bool write_tsv = true;
  bool write_json = true;
};

/// Parse + validate a JSON config document. Unknown keys are rejected.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);

/// Canonical JSON echo of an effective config; parsing it reproduces the
/// run exactly.
std::string serialize_config(const ScenarioConfig& config);

enum class RunStatus : int {
  Ok = 0,
  BadConfig = 2,
  NumericalFailure = 3,
  NoSymmetryFound = 4
};

struct RunResult {
  RunStatus status = RunStatus::Ok;
  std::string message;
  std::vector<std::string> output_files;
  SymmetryReport report;
  std::optional<double> inferred_period;
};

struct RunOverrides {
  std::optional<std::string> out_dir;
  std::optional<int> k_max;
  std::optional<double> floor;
};

/// Execute a scenario and write its output files. Exceptions are mapped
/// onto the status (never thrown across this boundary).
RunResult run_scenario(ScenarioConfig config, const RunOverrides& overrides = {});

} // namespace lsinv

#endif
