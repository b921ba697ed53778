#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chronoq/analysis.hpp"
#include "chronoq/integrate.hpp"
#include "chronoq/model.hpp"

namespace chronoq::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 2,
  kExitNumerical = 3,
  kExitGateNotFound = 4,
  kExitUsage = 64,
};

enum class OutputFormat { Csv, Json };

/// A probe only counts as passing when |C_k(T)|^2 and |C_k(-T)|^2 agree this well.
inline constexpr double kProbeMirrorLimit = 1e-5;

/// Gate peaks at or above this are reported as reaching the unit-population
/// transfer condition.
inline constexpr double kUnitPeakThreshold = 0.99;

struct RunConfig {
  SystemParameters params = kPaperDefaults;
  IntegratorConfig integrator;
  double t_start = 0.0;
  double t_end = 1000.0;
  TwoQubitState initial = cnot_initial();
  std::filesystem::path output;  // empty: command default
  OutputFormat format = OutputFormat::Csv;
  double horizon = 1000.0;
  double threshold = 0.99;

  void validate() const;
};

/// "00" / "|01>" / ... or eight comma-separated reals (re0,im0,...,re3,im3).
/// Explicit amplitudes must have norm^2 within 1e-9 of 1 and are rescaled to
/// unit norm.
TwoQubitState parse_initial(std::string_view text);

/// Strict decimal parse; throws UsageError.
double parse_real(std::string_view text);

/// Overlay a JSON config (keys as the long flag names, e.g. "t-end").
/// Unknown keys are a usage error.
void apply_config_json(RunConfig& cfg, const nlohmann::json& doc);

/// Relative paths land under $CHRONOQ_OUT when it is set.
std::filesystem::path resolve_output(const std::filesystem::path& path);

/// The field named by `axis` ("w1", "w2", "j", "omega", "phi1", "phi2").
double& parameter_field(SystemParameters& params, std::string_view axis);

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int cmd_figures(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out,
                std::ostream& err);

/// Writes the report as JSON to `out` (and to cfg.output when set).
int cmd_probe(const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct SweepRow {
  double value = 0.0;
  bool found = false;
  double gate_time = 0.0;  // NaN when not found
  double peak = 0.0;       // best |C3|^2 seen when not found
  double max_norm_error = 0.0;
};

/// One independent probe per value; rows may be computed concurrently but
/// come back in input order.
std::vector<SweepRow> run_sweep(const RunConfig& base, std::string_view axis,
                                const std::vector<double>& values);

int cmd_sweep(const RunConfig& base, std::string_view axis, const std::vector<double>& values,
              std::ostream& out, std::ostream& err);

nlohmann::json report_to_json(const GateProbeReport& report);

}  // namespace chronoq::cli
