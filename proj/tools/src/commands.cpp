#include "chronoq_cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <ostream>
#include <thread>

#include "chronoq/errors.hpp"
#include "chronoq_cli/expr.hpp"
#include "chronoq_cli/trajectory_io.hpp"

namespace chronoq::cli {

namespace fs = std::filesystem;
using nlohmann::json;

void RunConfig::validate() const {
  params.validate();
  integrator.validate();
  if (!std::isfinite(t_start) || !std::isfinite(t_end)) throw UsageError("times must be finite");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw UsageError("horizon must be positive");
  if (!(threshold > 0.0 && threshold <= 1.0)) throw UsageError("threshold must lie in (0, 1]");
  if (std::abs(initial.norm2() - 1.0) > 1e-9) throw UsageError("initial state is not normalized");
}

double parse_real(std::string_view text) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || !std::isfinite(v)) {
    throw UsageError("expected a finite number, got '" + s + "'");
  }
  return v;
}

TwoQubitState parse_initial(std::string_view text) {
  std::string name(text);
  if (name.size() == 4 && name.front() == '|' && name.back() == '>') name = name.substr(1, 2);
  if (name == "00") return TwoQubitState::basis(0);
  if (name == "01") return TwoQubitState::basis(1);
  if (name == "10") return TwoQubitState::basis(2);
  if (name == "11") return TwoQubitState::basis(3);

  std::vector<double> parts;
  std::size_t start = 0;
  for (;;) {
    const auto comma = name.find(',', start);
    parts.push_back(parse_real(name.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (parts.size() != 8) {
    throw UsageError("initial state must be a basis label or 8 comma-separated reals");
  }
  TwoQubitState s;
  for (std::size_t k = 0; k < 4; ++k) s[k] = Complex(parts[2 * k], parts[2 * k + 1]);
  const double n2 = s.norm2();
  if (std::abs(n2 - 1.0) > 1e-9) {
    throw UsageError("initial amplitudes have norm^2 " + format_double(n2) + ", expected 1");
  }
  s *= 1.0 / std::sqrt(n2);
  return s;
}

double& parameter_field(SystemParameters& p, std::string_view axis) {
  if (axis == "w1") return p.w1;
  if (axis == "w2") return p.w2;
  if (axis == "j") return p.j;
  if (axis == "omega") return p.omega;
  if (axis == "phi1") return p.phi1;
  if (axis == "phi2") return p.phi2;
  throw UsageError("unknown parameter '" + std::string(axis) + "'");
}

namespace {

double json_real(const json& v, std::string_view key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_real(v.get<std::string>());
  throw UsageError("config key '" + std::string(key) + "' must be a number");
}

double json_phase(const json& v, std::string_view key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_phase(v.get<std::string>());
  throw UsageError("config key '" + std::string(key) + "' must be a number or phase expression");
}

}  // namespace

void apply_config_json(RunConfig& cfg, const json& doc) {
  if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
  for (const auto& [key, v] : doc.items()) {
    if (key == "w1" || key == "w2" || key == "j" || key == "omega") {
      parameter_field(cfg.params, key) = json_real(v, key);
    } else if (key == "phi1" || key == "phi2") {
      parameter_field(cfg.params, key) = json_phase(v, key);
    } else if (key == "dt") {
      cfg.integrator.dt = json_real(v, key);
    } else if (key == "rel-tol") {
      cfg.integrator.rel_tol = json_real(v, key);
    } else if (key == "abs-tol") {
      cfg.integrator.abs_tol = json_real(v, key);
    } else if (key == "stride") {
      if (!v.is_number_integer()) throw UsageError("config key 'stride' must be an integer");
      cfg.integrator.sample_stride = v.get<int>();
    } else if (key == "method") {
      cfg.integrator.method = parse_method(v.get<std::string>());
    } else if (key == "t-start") {
      cfg.t_start = json_real(v, key);
    } else if (key == "t-end") {
      cfg.t_end = json_real(v, key);
    } else if (key == "horizon") {
      cfg.horizon = json_real(v, key);
    } else if (key == "threshold") {
      cfg.threshold = json_real(v, key);
    } else if (key == "initial") {
      cfg.initial = parse_initial(v.get<std::string>());
    } else if (key == "output") {
      cfg.output = v.get<std::string>();
    } else if (key == "format") {
      const auto f = v.get<std::string>();
      if (f != "csv" && f != "json") throw UsageError("format must be csv or json");
      cfg.format = f == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    } else {
      throw UsageError("unknown config key '" + key + "'");
    }
  }
}

fs::path resolve_output(const fs::path& path) {
  if (path.is_absolute()) return path;
  if (const char* dir = std::getenv("CHRONOQ_OUT"); dir != nullptr && *dir != '\0') {
    return fs::path(dir) / path;
  }
  return path;
}

namespace {

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string());
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  return f;
}

void finish(std::ofstream& f, const fs::path& path) {
  f.flush();
  if (!f) throw IoError("write to " + path.string() + " failed");
}

double norm2_of(const TwoQubitState& s) { return s.norm2(); }
double pop0(const TwoQubitState& s) { return std::norm(s[0]); }
double pop1(const TwoQubitState& s) { return std::norm(s[1]); }
double pop2(const TwoQubitState& s) { return std::norm(s[2]); }
double pop3(const TwoQubitState& s) { return std::norm(s[3]); }

// Samples over [-T, T] in increasing time from a backward and forward run
// that both start at t = 0.
std::vector<TimedState> stitch(const Trajectory& backward, const Trajectory& forward) {
  std::vector<TimedState> out(backward.samples.rbegin(), backward.samples.rend() - 1);
  out.insert(out.end(), forward.samples.begin(), forward.samples.end());
  return out;
}

}  // namespace

json report_to_json(const GateProbeReport& r) {
  return {{"found", true},
          {"gate_time", r.gate_time},
          {"threshold", r.threshold},
          {"scan_peak", r.scan_peak},
          {"peak_population_forward", r.peak_population_forward},
          {"peak_population_backward", r.peak_population_backward},
          {"residual_populations_forward", r.residual_populations_forward},
          {"residual_populations_backward", r.residual_populations_backward},
          {"max_norm_error", r.max_norm_error},
          {"mirror_residual", r.mirror_residual},
          {"unit_peak_reproduced", r.peak_population_forward >= kUnitPeakThreshold}};
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const auto traj = evolve(cfg.params, cfg.initial, cfg.t_start, cfg.t_end, cfg.integrator);

    const bool to_stdout = cfg.output == "-";
    fs::path path = cfg.output;
    if (path.empty()) path = cfg.format == OutputFormat::Csv ? "trajectory.csv" : "trajectory.json";

    auto emit = [&](std::ostream& os) {
      if (cfg.format == OutputFormat::Csv) {
        write_trajectory_csv(os, traj.samples);
      } else {
        os << trajectory_to_json(traj).dump(1) << '\n';
      }
    };
    if (to_stdout) {
      emit(out);
    } else {
      path = resolve_output(path);
      auto f = open_output(path);
      emit(f);
      finish(f, path);
    }

    const auto pops = populations(traj.back().state);
    std::ostream& summary = to_stdout ? err : out;
    summary << "simulate: samples=" << traj.samples.size() << " t_final=" << format_double(traj.back().t)
            << " p00=" << format_double(pops[0]) << " p01=" << format_double(pops[1])
            << " p10=" << format_double(pops[2]) << " p11=" << format_double(pops[3])
            << " max_norm_error=" << format_double(max_norm_error(traj))
            << " output=" << (to_stdout ? std::string("-") : path.string()) << '\n';
    return kExitOk;
  });
}

int cmd_figures(const RunConfig& cfg, const fs::path& out_dir, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const fs::path dir = resolve_output(out_dir);

    json manifest;
    double T = cfg.horizon;
    try {
      const auto report = cnot_probe(cfg.params, cfg.integrator, cfg.horizon, cfg.threshold);
      T = report.gate_time;
      manifest["gate"] = report_to_json(report);
    } catch (const DetectionError& e) {
      err << "warning: " << e.what() << "; writing figures over the full horizon\n";
      manifest["gate"] = {{"found", false},
                          {"threshold", cfg.threshold},
                          {"best_peak", e.best_peak()},
                          {"best_time", e.best_time()},
                          {"unit_peak_reproduced", false}};
    }

    const auto fwd = evolve(cfg.params, cnot_initial(), 0.0, T, cfg.integrator);
    const auto bwd = evolve(cfg.params, cnot_initial(), 0.0, -T, cfg.integrator);
    const auto samples = stitch(bwd, fwd);

    struct Figure {
      const char* file;
      const char* column;
      double (*value)(const TwoQubitState&);
    };
    const Figure figures[] = {{"fig1_norm.csv", "norm2", norm2_of},
                              {"fig2_p00.csv", "p00", pop0},
                              {"fig3_p01.csv", "p01", pop1},
                              {"fig4_p10.csv", "p10", pop2},
                              {"fig5_p11.csv", "p11", pop3}};
    json files = json::array();
    for (const auto& fig : figures) {
      const auto path = dir / fig.file;
      auto f = open_output(path);
      write_series_csv(f, fig.column, samples, fig.value);
      finish(f, path);
      files.push_back(fig.file);
    }

    const bool reproduced = manifest["gate"]["unit_peak_reproduced"].get<bool>();
    manifest["t_range"] = {-T, T};
    manifest["horizon"] = cfg.horizon;
    manifest["parameters"] = to_json(cfg.params);
    manifest["integrator"] = to_json(cfg.integrator);
    manifest["max_norm_error"] = std::max(max_norm_error(fwd), max_norm_error(bwd));
    manifest["mirror_residual"] = mirror_residual(fwd, bwd);
    manifest["files"] = files;
    manifest["generator"] = "chronoq " CHRONOQ_VERSION;
    manifest["unit_population_transfer"] =
        reproduced ? "reached: peak |C3|^2 >= 0.99"
                   : "not reached: the first |11> population maximum stays below 0.99 for these "
                     "parameters; see gate.peak_population_forward / gate.best_peak";

    const auto mpath = dir / "manifest.json";
    auto mf = open_output(mpath);
    mf << manifest.dump(2) << '\n';
    finish(mf, mpath);

    out << "figures: T=" << format_double(T) << " samples=" << samples.size()
        << " dir=" << dir.string() << '\n';
    return kExitOk;
  });
}

int cmd_probe(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    json doc;
    int code = kExitOk;
    try {
      const auto report = cnot_probe(cfg.params, cfg.integrator, cfg.horizon, cfg.threshold);
      doc = report_to_json(report);
      if (!(report.mirror_residual <= kProbeMirrorLimit)) code = kExitNumerical;
    } catch (const DetectionError& e) {
      doc = {{"found", false},
             {"threshold", cfg.threshold},
             {"best_peak", e.best_peak()},
             {"best_time", e.best_time()},
             {"unit_peak_reproduced", false}};
      code = kExitGateNotFound;
    }
    doc["horizon"] = cfg.horizon;
    doc["parameters"] = to_json(cfg.params);
    doc["integrator"] = to_json(cfg.integrator);

    out << doc.dump(2) << '\n';
    if (!cfg.output.empty()) {
      const auto path = resolve_output(cfg.output);
      auto f = open_output(path);
      f << doc.dump(2) << '\n';
      finish(f, path);
    }
    return code;
  });
}

std::vector<SweepRow> run_sweep(const RunConfig& base, std::string_view axis,
                                const std::vector<double>& values) {
  SystemParameters probe_params = base.params;
  parameter_field(probe_params, axis);  // reject unknown axes before spawning work

  std::vector<SweepRow> rows(values.size());
  std::vector<std::exception_ptr> failures(values.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      try {
        SystemParameters p = base.params;
        parameter_field(p, axis) = values[i];
        SweepRow& row = rows[i];
        row.value = values[i];
        const auto scan_traj = evolve(p, cnot_initial(), 0.0, base.horizon, base.integrator);
        const auto scan = scan_gate_peak(scan_traj, base.threshold);
        if (scan.gate) {
          const auto report = cnot_probe(p, base.integrator, base.horizon, base.threshold);
          row.found = true;
          row.gate_time = report.gate_time;
          row.peak = report.peak_population_forward;
          row.max_norm_error = std::max(report.max_norm_error, max_norm_error(scan_traj));
        } else {
          row.gate_time = std::nan("");
          row.peak = scan.best_peak;
          row.max_norm_error = max_norm_error(scan_traj);
        }
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  const std::size_t n_workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(values.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
  }
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return rows;
}

int cmd_sweep(const RunConfig& base, std::string_view axis, const std::vector<double>& values,
              std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    base.validate();
    if (values.empty()) throw UsageError("sweep needs at least one value");
    const auto rows = run_sweep(base, axis, values);

    const fs::path path = resolve_output(base.output.empty() ? fs::path("sweep.csv") : base.output);
    auto f = open_output(path);
    f << std::string(axis) << ",found,T,peak,max_norm_error\n";
    for (const auto& r : rows) {
      f << format_double(r.value) << ',' << (r.found ? 1 : 0) << ',' << format_double(r.gate_time)
        << ',' << format_double(r.peak) << ',' << format_double(r.max_norm_error) << '\n';
    }
    finish(f, path);

    const auto found = std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.found; });
    out << "sweep: axis=" << axis << " rows=" << rows.size() << " found=" << found
        << " output=" << path.string() << '\n';
    return kExitOk;
  });
}

}  // namespace chronoq::cli
