#include "lsinv/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lsinv/errors.hpp"
#include "lsinv/floquet.hpp"
#include "lsinv/hamiltonian.hpp"
#include "lsinv/invariants.hpp"
#include "lsinv/transfer.hpp"

namespace lsinv {

namespace {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

void require_keys(const Json& object, const char* where,
                  std::initializer_list<const char*> allowed) {
  for (const auto& item : object.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key)
        known = true;
    if (!known)
      throw ConfigError(std::string("config: unknown key '") + item.key() +
                        "' in " + where);
  }
}

double number_at(const Json& object, const char* key, double fallback) {
  if (!object.contains(key))
    return fallback;
  if (!object[key].is_number())
    throw ConfigError(std::string("config: '") + key + "' must be a number");
  return object[key].get<double>();
}

int integer_at(const Json& object, const char* key, int fallback) {
  if (!object.contains(key))
    return fallback;
  if (!object[key].is_number_integer())
    throw ConfigError(std::string("config: '") + key + "' must be an integer");
  return object[key].get<int>();
}

ScenarioKind scenario_from_name(const std::string& name) {
  if (name == "static-defect")
    return ScenarioKind::StaticDefect;
  if (name == "shift-scan")
    return ScenarioKind::ShiftScan;
  if (name == "driven")
    return ScenarioKind::Driven;
  if (name == "convergence")
    return ScenarioKind::Convergence;
  if (name == "delta-oracle")
    return ScenarioKind::DeltaOracle;
  throw ConfigError("config: unknown scenario '" + name + "'");
}

const char* scenario_name(ScenarioKind kind) {
  switch (kind) {
  case ScenarioKind::StaticDefect:
    return "static-defect";
  case ScenarioKind::ShiftScan:
    return "shift-scan";
  case ScenarioKind::Driven:
    return "driven";
  case ScenarioKind::Convergence:
    return "convergence";
  case ScenarioKind::DeltaOracle:
    return "delta-oracle";
  }
  return "?";
}

void parse_lattice(const Json& node, ScenarioConfig& config) {
  require_keys(node, "lattice",
               {"supercell", "n_barriers", "spacing", "strength", "centers",
                "strengths", "width", "support_width", "defects", "driving"});

  config.width = number_at(node, "width", 0.5);
  if (node.contains("support_width"))
    config.support_width = node["support_width"].get<double>();

  if (node.contains("centers")) {
    config.centers = node["centers"].get<std::vector<double>>();
    if (!node.contains("strengths"))
      throw ConfigError("config: explicit centers require strengths");
    config.strengths = node["strengths"].get<std::vector<double>>();
    config.supercell = number_at(node, "supercell", 0.0);
    if (config.supercell <= 0.0)
      throw ConfigError("config: explicit centers require supercell");
  } else {
    const int n_barriers = integer_at(node, "n_barriers", 0);
    const double spacing = number_at(node, "spacing", 0.0);
    const double strength = number_at(node, "strength", 1.0);
    if (n_barriers < 1 || spacing <= 0.0)
      throw ConfigError("config: lattice needs centers/strengths or "
                        "n_barriers and spacing");
    config.centers.resize(n_barriers);
    for (int n = 0; n < n_barriers; ++n)
      config.centers[n] = (n - (n_barriers - 1) / 2.0) * spacing;
    config.strengths.assign(n_barriers, strength);
    config.supercell = number_at(node, "supercell", n_barriers * spacing);
  }

  if (node.contains("defects")) {
    for (const Json& defect : node["defects"]) {
      require_keys(defect, "defect", {"index", "strength"});
      const int index = integer_at(defect, "index", -1);
      if (index < 0 || index >= static_cast<int>(config.strengths.size()))
        throw ConfigError("config: defect index out of range");
      config.strengths[index] = number_at(defect, "strength", 0.0);
    }
  }

  if (node.contains("driving")) {
    const Json& driving = node["driving"];
    require_keys(driving, "driving", {"amplitude", "omega"});
    DrivingLaw law;
    law.amplitude = number_at(driving, "amplitude", 0.0);
    law.omega = number_at(driving, "omega", 0.0);
    config.driving = law;
  }
}

SymmetryTransform parse_transform(const Json& node) {
  require_keys(node, "transform", {"kind", "parameter"});
  const std::string kind = node.value("kind", "translation");
  const double parameter = number_at(node, "parameter", 0.0);
  if (kind == "translation")
    return SymmetryTransform::translation(parameter);
  if (kind == "inversion")
    return SymmetryTransform::inversion(parameter);
  throw ConfigError("config: transform kind must be translation or inversion");
}

} // namespace

std::vector<double> ScanRange::values() const {
  if (step <= 0.0 || to < from)
    throw ConfigError("config: scan range needs step > 0 and to >= from");
  std::vector<double> out;
  const int count = static_cast<int>(std::round((to - from) / step)) + 1;
  out.reserve(count);
  for (int i = 0; i < count; ++i)
    out.push_back(from + i * step);
  return out;
}

ScenarioConfig parse_config(const std::string& json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const std::exception& error) {
    throw ConfigError(std::string("config: invalid JSON: ") + error.what());
  }
  require_keys(root, "config",
               {"scenario", "lattice", "basis", "grid", "state_index",
                "transform", "scan", "floquet", "detection", "convergence",
                "delta_oracle", "output"});

  ScenarioConfig config;
  if (!root.contains("scenario"))
    throw ConfigError("config: missing 'scenario'");
  config.scenario = scenario_from_name(root["scenario"].get<std::string>());

  if (root.contains("lattice"))
    parse_lattice(root["lattice"], config);
  else if (config.scenario != ScenarioKind::DeltaOracle)
    throw ConfigError("config: missing 'lattice'");

  if (root.contains("basis")) {
    require_keys(root["basis"], "basis", {"k_max"});
    config.k_max = integer_at(root["basis"], "k_max", config.k_max);
  }
  if (root.contains("grid")) {
    require_keys(root["grid"], "grid", {"dx"});
    config.dx = number_at(root["grid"], "dx", config.dx);
  }
  config.state_index = integer_at(root, "state_index", 0);
  if (root.contains("transform"))
    config.transform = parse_transform(root["transform"]);

  if (root.contains("scan")) {
    const Json& scan = root["scan"];
    require_keys(scan, "scan", {"from", "to", "step", "trim"});
    config.scan.from = number_at(scan, "from", config.scan.from);
    config.scan.to = number_at(scan, "to", config.scan.to);
    config.scan.step = number_at(scan, "step", config.scan.step);
    if (scan.contains("trim")) {
      const auto trim = scan["trim"].get<std::vector<double>>();
      if (trim.size() != 2)
        throw ConfigError("config: scan trim must be [lo, hi]");
      config.trim_lo = trim[0];
      config.trim_hi = trim[1];
    }
  }

  if (root.contains("floquet")) {
    const Json& floquet = root["floquet"];
    require_keys(floquet, "floquet", {"substeps", "time_samples"});
    config.substeps = integer_at(floquet, "substeps", config.substeps);
    config.time_samples =
        integer_at(floquet, "time_samples", config.time_samples);
  }

  if (root.contains("detection")) {
    require_keys(root["detection"], "detection", {"floor"});
    config.floor = number_at(root["detection"], "floor", 0.0);
  }

  if (root.contains("convergence")) {
    const Json& conv = root["convergence"];
    require_keys(conv, "convergence", {"k_max_values", "dx_values", "domain"});
    config.k_max_values = conv["k_max_values"].get<std::vector<int>>();
    config.dx_values = conv["dx_values"].get<std::vector<double>>();
    const auto domain = conv["domain"].get<std::vector<double>>();
    if (domain.size() != 2)
      throw ConfigError("config: convergence domain must be [lo, hi]");
    config.domain_lo = domain[0];
    config.domain_hi = domain[1];
  }

  if (root.contains("delta_oracle")) {
    const Json& node = root["delta_oracle"];
    require_keys(node, "delta_oracle",
                 {"strength", "spacing", "k_from", "k_to", "k_step"});
    config.delta_strength = number_at(node, "strength", config.delta_strength);
    config.delta_spacing = number_at(node, "spacing", config.delta_spacing);
    config.k_sweep.from = number_at(node, "k_from", config.k_sweep.from);
    config.k_sweep.to = number_at(node, "k_to", config.k_sweep.to);
    config.k_sweep.step = number_at(node, "k_step", config.k_sweep.step);
  }

  if (root.contains("output")) {
    const Json& output = root["output"];
    require_keys(output, "output", {"directory", "formats"});
    config.out_dir = output.value("directory", "");
    if (output.contains("formats")) {
      config.write_tsv = false;
      config.write_json = false;
      for (const Json& format : output["formats"]) {
        const std::string name = format.get<std::string>();
        if (name == "tsv")
          config.write_tsv = true;
        else if (name == "json")
          config.write_json = true;
        else
          throw ConfigError("config: unknown output format '" + name + "'");
      }
    }
  }
  return config;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const ScenarioConfig& config) {
  Json root;
  root["scenario"] = scenario_name(config.scenario);

  if (config.scenario != ScenarioKind::DeltaOracle) {
    Json lattice;
    lattice["supercell"] = config.supercell;
    lattice["centers"] = config.centers;
    lattice["strengths"] = config.strengths;
    lattice["width"] = config.width;
    if (config.support_width)
      lattice["support_width"] = *config.support_width;
    if (config.driving) {
      lattice["driving"] = Json{{"amplitude", config.driving->amplitude},
                                {"omega", config.driving->omega}};
    }
    root["lattice"] = lattice;
    root["basis"] = Json{{"k_max", config.k_max}};
    root["grid"] = Json{{"dx", config.dx}};
    root["state_index"] = config.state_index;
    root["transform"] =
        Json{{"kind", config.transform.kind == SymmetryKind::Translation
                          ? "translation"
                          : "inversion"},
             {"parameter", config.transform.parameter}};
  }

  if (config.scenario == ScenarioKind::ShiftScan) {
    root["scan"] = Json{{"from", config.scan.from},
                        {"to", config.scan.to},
                        {"step", config.scan.step},
                        {"trim", Json::array({config.trim_lo, config.trim_hi})}};
  }
  if (config.scenario == ScenarioKind::Driven) {
    root["floquet"] = Json{{"substeps", config.substeps},
                           {"time_samples", config.time_samples}};
  }
  if (config.scenario == ScenarioKind::StaticDefect ||
      config.scenario == ScenarioKind::ShiftScan ||
      config.scenario == ScenarioKind::Driven) {
    root["detection"] = Json{{"floor", config.floor}};
  }
  if (config.scenario == ScenarioKind::Convergence) {
    root["convergence"] =
        Json{{"k_max_values", config.k_max_values},
             {"dx_values", config.dx_values},
             {"domain", Json::array({config.domain_lo, config.domain_hi})}};
  }
  if (config.scenario == ScenarioKind::DeltaOracle) {
    root["delta_oracle"] = Json{{"strength", config.delta_strength},
                                {"spacing", config.delta_spacing},
                                {"k_from", config.k_sweep.from},
                                {"k_to", config.k_sweep.to},
                                {"k_step", config.k_sweep.step}};
  }

  Json formats = Json::array();
  if (config.write_tsv)
    formats.push_back("tsv");
  if (config.write_json)
    formats.push_back("json");
  root["output"] =
      Json{{"directory", config.out_dir}, {"formats", formats}};
  return root.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

namespace {

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

class TsvWriter {
public:
  TsvWriter(const std::filesystem::path& path, RunResult& result) {
    out_.open(path);
    if (!out_)
      throw ConfigError("output: cannot write " + path.string());
    result.output_files.push_back(path.string());
  }

  void comment(const std::string& line) { out_ << "# " << line << "\n"; }

  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      if (!first)
        out_ << "\t";
      out_ << format_number(v);
      first = false;
    }
    out_ << "\n";
  }

  void header(std::initializer_list<const char*> names) {
    out_ << "#";
    for (const char* name : names)
      out_ << " " << name;
    out_ << "\n";
  }

private:
  std::ofstream out_;
};

LatticeSpec make_lattice(const ScenarioConfig& config) {
  return LatticeSpec(config.supercell, config.centers, config.strengths,
                     config.width, config.driving, config.support_width);
}

Json report_json(const ScenarioConfig& config, const LatticeSpec& lattice,
                 const SymmetryReport& report, double alignment_offset) {
  Json out;
  out["floor_used"] = report.floor;
  out["alignment_offset"] = alignment_offset;

  Json plateaus = Json::array();
  for (const Plateau& p : report.plateaus) {
    plateaus.push_back(Json{{"x_begin", p.x_begin},
                            {"x_end", p.x_end},
                            {"re", p.value.real()},
                            {"im", p.value.imag()},
                            {"abs", std::abs(p.value)},
                            {"spread", p.spread}});
  }
  out["plateaus"] = plateaus;

  Json deviations = Json::array();
  for (std::size_t i = 0; i < report.deviations.size(); ++i) {
    const Deviation& d = report.deviations[i];
    deviations.push_back(
        Json{{"x_begin", d.x_begin},
             {"x_end", d.x_end},
             {"length", d.length},
             {"peak_slope", d.peak_slope},
             {"width_flag",
              i < report.width_flags.size() && report.width_flags[i]}});
  }
  out["deviations"] = deviations;
  out["defect_estimates"] = report.defect_estimates;
  out["unresolved_clusters"] = report.unresolved_clusters;
  (void)config;
  (void)lattice;
  return out;
}

Json knobs_json(const ScenarioConfig& config, const LatticeSpec* lattice) {
  Json knobs;
  knobs["natural_units"] = "hbar = m = 1";
  knobs["width_delta"] = config.width;
  if (lattice)
    knobs["support_w"] = lattice->support_width();
  knobs["k_max"] = config.k_max;
  knobs["dx"] = config.dx;
  knobs["substeps"] = config.substeps;
  knobs["time_samples"] = config.time_samples;
  knobs["floor_config"] = config.floor;
  return knobs;
}

void write_report(const std::filesystem::path& path, const Json& report,
                  RunResult& result) {
  std::ofstream out(path);
  if (!out)
    throw ConfigError("output: cannot write " + path.string());
  out << report.dump(2) << "\n";
  result.output_files.push_back(path.string());
}

void write_profile_tsv(const std::filesystem::path& path,
                       const CurrentProfile& profile, double alignment_offset,
                       const std::string& label, RunResult& result) {
  TsvWriter tsv(path, result);
  tsv.comment(label);
  tsv.comment("x column is grid x + " + format_number(alignment_offset) +
              " (alignment offset L/2 for translation profiles)");
  tsv.header({"x", "re_q", "im_q", "abs2_q"});
  for (int i = 0; i < profile.grid.n_points; ++i) {
    const Complex q = profile.values(i);
    tsv.row({profile.grid.point(i) + alignment_offset, q.real(), q.imag(),
             std::norm(q)});
  }
}

double alignment_offset_for(const SymmetryTransform& transform) {
  return transform.kind == SymmetryKind::Translation ? transform.parameter / 2.0
                                                     : 0.0;
}

// ---------------------------------------------------------------------------
// Scenario pipelines
// ---------------------------------------------------------------------------

struct StaticPipeline {
  LatticeSpec lattice;
  PlaneWaveBasis basis;
  Grid grid;
  std::vector<WaveState> states;
};

StaticPipeline solve_static(const ScenarioConfig& config) {
  StaticPipeline pipeline{make_lattice(config),
                          PlaneWaveBasis{config.k_max, config.supercell},
                          Grid::over_supercell(
                              config.supercell,
                              static_cast<int>(std::round(config.supercell /
                                                          config.dx))),
                          {}};
  const Eigen::MatrixXcd h =
      build_hamiltonian(pipeline.lattice, pipeline.basis, 0.0);
  pipeline.states = eigensolve(h, pipeline.basis, pipeline.grid);
  if (config.state_index < 0 ||
      config.state_index >= static_cast<int>(pipeline.states.size()))
    throw ConfigError("config: state_index out of range for basis size");
  return pipeline;
}

void run_static_defect(const ScenarioConfig& config,
                       const std::filesystem::path& out_dir,
                       RunResult& result) {
  StaticPipeline pipeline = solve_static(config);
  const WaveState& state = pipeline.states[config.state_index];

  const CurrentProfile profile =
      two_point_current(state, pipeline.basis, config.transform);
  SymmetryReport report = segment_constancy(profile, config.floor);
  locate_defects(report, config.transform, pipeline.lattice.support_width(),
                 pipeline.lattice.driving_amplitude());
  result.report = report;

  const double offset = alignment_offset_for(config.transform);
  if (config.write_tsv)
    write_profile_tsv(out_dir / "profile.tsv", profile, offset,
                      "two-point current Q(x)", result);
  if (config.write_json) {
    Json doc;
    doc["config"] = Json::parse(serialize_config(config));
    doc["knobs"] = knobs_json(config, &pipeline.lattice);
    doc["results"] = report_json(config, pipeline.lattice, report, offset);
    doc["results"]["energy"] = state.energy;
    doc["results"]["state_index"] = config.state_index;
    doc["status"] = "ok";
    write_report(out_dir / "report.json", doc, result);
  }
}

void run_shift_scan(const ScenarioConfig& config,
                    const std::filesystem::path& out_dir, RunResult& result) {
  StaticPipeline pipeline = solve_static(config);
  const WaveState& state = pipeline.states[config.state_index];

  const std::vector<double> shifts = config.scan.values();
  const ScanMap scan = shift_scan(state, pipeline.basis, shifts);

  double trim_lo = config.trim_lo, trim_hi = config.trim_hi;
  if (trim_lo >= trim_hi) {
    // Default trim: right half of the supercell, clear of the central
    // defect neighbourhood for every scanned shift.
    trim_lo = pipeline.lattice.support_width() / 2.0 + pipeline.grid.spacing();
    trim_hi = config.supercell / 2.0 - pipeline.grid.spacing();
  }
  const PeriodScan period_scan = infer_period(scan, trim_lo, trim_hi);
  result.inferred_period = period_scan.period;

  if (config.write_tsv) {
    {
      TsvWriter tsv(out_dir / "scan.tsv", result);
      tsv.comment("shift scan: log10 |Q^{dL}(x)|^2");
      tsv.header({"delta_L", "x", "log10_abs2_q"});
      for (std::size_t row = 0; row < shifts.size(); ++row)
        for (int i = 0; i < scan.grid.n_points; ++i)
          tsv.row({shifts[row], scan.grid.point(i),
                   std::log10(std::max(scan.abs2(row, i), 1e-300))});
    }
    {
      TsvWriter tsv(out_dir / "scan_scores.tsv", result);
      tsv.comment("constancy score per shift, trim [" +
                  format_number(trim_lo) + ", " + format_number(trim_hi) + "]");
      tsv.header({"delta_L", "score"});
      for (std::size_t row = 0; row < shifts.size(); ++row)
        tsv.row({shifts[row], period_scan.scores[row]});
    }
  }

  Json doc;
  doc["config"] = Json::parse(serialize_config(config));
  doc["knobs"] = knobs_json(config, &pipeline.lattice);
  doc["knobs"]["trim"] = Json::array({trim_lo, trim_hi});

  if (period_scan.flat || !period_scan.period) {
    result.status = RunStatus::NoSymmetryFound;
    result.message = "shift scan: score curve is flat, no period found";
    doc["results"] = Json{{"inferred_period", nullptr},
                          {"flat_scores", true},
                          {"candidates", period_scan.candidates}};
    doc["status"] = "no-symmetry-found";
    if (config.write_json)
      write_report(out_dir / "report.json", doc, result);
    return;
  }

  // Detect defects at the inferred period.
  const SymmetryTransform inferred =
      SymmetryTransform::translation(*period_scan.period);
  const CurrentProfile profile =
      two_point_current(state, pipeline.basis, inferred);
  SymmetryReport report = segment_constancy(profile, config.floor);
  locate_defects(report, inferred, pipeline.lattice.support_width(),
                 pipeline.lattice.driving_amplitude());
  report.inferred_period = period_scan.period;
  result.report = report;

  const double offset = alignment_offset_for(inferred);
  if (config.write_tsv)
    write_profile_tsv(out_dir / "profile.tsv", profile, offset,
                      "Q(x) at the inferred period", result);
  if (config.write_json) {
    doc["results"] = report_json(config, pipeline.lattice, report, offset);
    doc["results"]["inferred_period"] = *period_scan.period;
    doc["results"]["candidates"] = period_scan.candidates;
    doc["results"]["energy"] = state.energy;
    doc["status"] = "ok";
    write_report(out_dir / "report.json", doc, result);
  }
}

void run_driven(const ScenarioConfig& config,
                const std::filesystem::path& out_dir, RunResult& result) {
  if (!config.driving)
    throw ConfigError("config: driven scenario requires lattice.driving");
  const LatticeSpec lattice = make_lattice(config);
  const PlaneWaveBasis basis{config.k_max, config.supercell};
  const Grid grid = Grid::over_supercell(
      config.supercell,
      static_cast<int>(std::round(config.supercell / config.dx)));

  const PeriodPropagator propagator =
      propagate_period(lattice, basis, 0.0, config.substeps);
  const std::vector<FloquetSeed> seeds =
      floquet_modes(propagator, config.driving->omega);

  const std::vector<double> energies = mean_energies(
      lattice, basis, seeds, config.substeps, config.time_samples);
  std::size_t lowest = 0;
  for (std::size_t j = 1; j < energies.size(); ++j)
    if (energies[j] < energies[lowest])
      lowest = j;

  const FloquetMode mode =
      mode_time_series(lattice, basis, grid, seeds[lowest],
                       config.time_samples, config.substeps);

  const CurrentProfile qbar = averaged_current(mode, basis, config.transform);
  SymmetryReport report = segment_constancy(qbar, config.floor);
  locate_defects(report, config.transform, lattice.support_width(),
                 lattice.driving_amplitude());
  result.report = report;

  const CurrentProfile jbar = probability_current(mode, basis);

  const double offset = alignment_offset_for(config.transform);
  if (config.write_tsv) {
    write_profile_tsv(out_dir / "qbar_profile.tsv", qbar, offset,
                      "time-averaged two-point current Qbar(x)", result);
    write_profile_tsv(out_dir / "jbar_profile.tsv", jbar, 0.0,
                      "period-averaged probability current Jbar(x)", result);
    TsvWriter tsv(out_dir / "kernel.tsv", result);
    tsv.comment("integral kernel |Q(x, t)|^2 over one period");
    tsv.header({"t", "x", "abs2_q"});
    for (std::size_t s = 0; s < mode.samples.size(); ++s) {
      const CurrentProfile slice =
          instantaneous_current(mode, s, basis, config.transform);
      for (int i = 0; i < grid.n_points; ++i)
        tsv.row({mode.samples[s].t, grid.point(i) + offset,
                 std::norm(slice.values(i))});
    }
  }

  if (config.write_json) {
    Json doc;
    doc["config"] = Json::parse(serialize_config(config));
    doc["knobs"] = knobs_json(config, &lattice);
    doc["results"] = report_json(config, lattice, report, offset);
    doc["results"]["mode_index"] = lowest;
    doc["results"]["quasienergy"] = mode.quasienergy;
    doc["results"]["mean_energy"] = mode.mean_energy;
    const Eigen::VectorXd jbar_abs = jbar.values.cwiseAbs();
    doc["results"]["jbar_max_abs"] = jbar_abs.maxCoeff();
    doc["results"]["jbar_spread"] = jbar_abs.maxCoeff() - jbar_abs.minCoeff();
    doc["status"] = "ok";
    write_report(out_dir / "report.json", doc, result);
  }
}

void run_convergence(const ScenarioConfig& config,
                     const std::filesystem::path& out_dir, RunResult& result) {
  if (config.k_max_values.empty() || config.dx_values.empty())
    throw ConfigError("config: convergence scenario needs k_max_values and "
                      "dx_values");
  if (config.domain_lo >= config.domain_hi)
    throw ConfigError("config: convergence domain must satisfy lo < hi");
  const LatticeSpec lattice = make_lattice(config);

  Json table = Json::array();
  std::optional<TsvWriter> tsv;
  if (config.write_tsv) {
    tsv.emplace(out_dir / "convergence.tsv", result);
    tsv->comment("grid-limited constancy measure eps(k_max, dx)");
    tsv->header({"k_max", "dx", "epsilon"});
  }

  for (double dx : config.dx_values) {
    const int n_points =
        static_cast<int>(std::round(config.supercell / dx));
    const Grid grid = Grid::over_supercell(config.supercell, n_points);
    for (int k_max : config.k_max_values) {
      const PlaneWaveBasis basis{k_max, config.supercell};
      const Eigen::MatrixXcd h = build_hamiltonian(lattice, basis, 0.0);
      const std::vector<WaveState> states = eigensolve(h, basis, grid);
      const CurrentProfile profile = grid_sampled_current(
          states[config.state_index], config.supercell, config.transform);
      const double epsilon =
          convergence_measure(profile, config.domain_lo, config.domain_hi);
      if (tsv)
        tsv->row({static_cast<double>(k_max), dx, epsilon});
      table.push_back(Json{{"k_max", k_max}, {"dx", dx}, {"epsilon", epsilon}});
    }
  }

  if (config.write_json) {
    Json doc;
    doc["config"] = Json::parse(serialize_config(config));
    doc["knobs"] = knobs_json(config, &lattice);
    doc["results"] = Json{{"table", table}};
    doc["status"] = "ok";
    write_report(out_dir / "report.json", doc, result);
  }
}

void run_delta_oracle(const ScenarioConfig& config,
                      const std::filesystem::path& out_dir,
                      RunResult& result) {
  const std::vector<double> ks = config.k_sweep.values();
  double min_discrepancy = std::numeric_limits<double>::infinity();
  double k_at_min = 0.0;

  std::optional<TsvWriter> tsv;
  if (config.write_tsv) {
    tsv.emplace(out_dir / "delta_sweep.tsv", result);
    tsv->comment("single delta defect, strength " +
                 format_number(config.delta_strength) + ", translation L = " +
                 format_number(config.delta_spacing));
    tsv->header(
        {"k", "ratio_CL_abs2", "ratio_RL_abs2", "plateau_discrepancy"});
  }

  for (double k : ks) {
    const DeltaPlateaus q = delta_defect_analytic(
        config.delta_strength, k, config.delta_spacing, Complex(1.0, 0.0));
    const double amplitude = std::abs(k); // |A_kL| for |F0| = 1
    const double discrepancy =
        std::max({std::abs(q.left - q.center), std::abs(q.center - q.right),
                  std::abs(q.left - q.right)}) /
        amplitude;
    if (discrepancy < min_discrepancy) {
      min_discrepancy = discrepancy;
      k_at_min = k;
    }
    if (tsv)
      tsv->row({k, std::norm(q.center / q.left), std::norm(q.right / q.left),
                discrepancy});
  }

  if (config.write_json) {
    Json doc;
    doc["config"] = Json::parse(serialize_config(config));
    doc["results"] = Json{{"min_plateau_discrepancy", min_discrepancy},
                          {"k_at_min", k_at_min},
                          {"globally_constant_somewhere",
                           min_discrepancy <= 0.0}};
    doc["status"] = "ok";
    write_report(out_dir / "report.json", doc, result);
  }
}

std::filesystem::path resolve_out_dir(const ScenarioConfig& config) {
  if (!config.out_dir.empty())
    return config.out_dir;
  if (const char* env = std::getenv("LSINV_OUT_DIR"); env && *env)
    return env;
  return "lsinv_out";
}

} // namespace

RunResult run_scenario(ScenarioConfig config, const RunOverrides& overrides) {
  RunResult result;
  try {
    if (overrides.out_dir)
      config.out_dir = *overrides.out_dir;
    if (overrides.k_max)
      config.k_max = *overrides.k_max;
    if (overrides.floor)
      config.floor = *overrides.floor;

    const std::filesystem::path out_dir = resolve_out_dir(config);
    config.out_dir = out_dir.string();
    std::filesystem::create_directories(out_dir);

    switch (config.scenario) {
    case ScenarioKind::StaticDefect:
      run_static_defect(config, out_dir, result);
      break;
    case ScenarioKind::ShiftScan:
      run_shift_scan(config, out_dir, result);
      break;
    case ScenarioKind::Driven:
      run_driven(config, out_dir, result);
      break;
    case ScenarioKind::Convergence:
      run_convergence(config, out_dir, result);
      break;
    case ScenarioKind::DeltaOracle:
      run_delta_oracle(config, out_dir, result);
      break;
    }
  } catch (const ConfigError& error) {
    result.status = RunStatus::BadConfig;
    result.message = error.what();
  } catch (const NumericalError& error) {
    result.status = RunStatus::NumericalFailure;
    result.message = error.what();
  } catch (const std::exception& error) {
    result.status = RunStatus::NumericalFailure;
    result.message = std::string("unexpected failure: ") + error.what();
  }
  return result;
}

} // namespace lsinv
