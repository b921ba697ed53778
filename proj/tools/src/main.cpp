#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chronoq/errors.hpp"
#include "chronoq_cli/commands.hpp"
#include "chronoq_cli/expr.hpp"

namespace {

using namespace chronoq;
using namespace chronoq::cli;

// Raw flag text; only flags the user actually passed are applied, after the
// config file, so flags win.
struct Flags {
  std::string config;
  std::string w1, w2, j, omega, phi1, phi2;
  std::string dt, t_start, t_end, method, threshold, horizon;
  std::string stride, rel_tol, abs_tol, initial, output, format;
};

struct Bound {
  CLI::Option* opt;
  std::string* value;
  std::string key;
};

std::vector<Bound> add_common(CLI::App& app, Flags& f) {
  std::vector<Bound> b;
  auto add = [&](const std::string& name, std::string& target, const std::string& help) {
    auto* opt = app.add_option("--" + name, target, help);
    b.push_back({opt, &target, name});
    return opt;
  };
  app.add_option("--config", f.config, "JSON config file (keys as the long flag names)");
  add("w1", f.w1, "Larmor frequency of qubit 1");
  add("w2", f.w2, "Larmor frequency of qubit 2");
  add("j", f.j, "coupling constant J (either sign)");
  add("omega", f.omega, "Rabi frequency (>= 0)");
  add("phi1", f.phi1, "drive phase of qubit 1, e.g. pi/2");
  add("phi2", f.phi2, "drive phase of qubit 2, e.g. pi/4");
  add("dt", f.dt, "step (fixed) or first trial step (adaptive)");
  add("t-start", f.t_start, "start time");
  add("t-end", f.t_end, "end time; below t-start integrates backward");
  add("method", f.method, "fixed_rk4 | adaptive_45");
  add("threshold", f.threshold, "gate population threshold in (0, 1]");
  add("horizon", f.horizon, "gate search horizon");
  add("stride", f.stride, "keep every k-th accepted step");
  add("rel-tol", f.rel_tol, "adaptive relative tolerance");
  add("abs-tol", f.abs_tol, "adaptive absolute tolerance");
  add("initial", f.initial, "00|01|10|11 or re0,im0,re1,im1,re2,im2,re3,im3");
  add("output", f.output, "output file ('-' for stdout where supported)");
  add("format", f.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  return b;
}

RunConfig build_config(const Flags& f, const std::vector<Bound>& bound) {
  RunConfig cfg;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw UsageError("cannot read config file " + f.config);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError(std::string("config file: ") + e.what());
    }
    apply_config_json(cfg, doc);
  }

  nlohmann::json overrides = nlohmann::json::object();
  for (const auto& b : bound) {
    if (b.opt->count() == 0) continue;
    if (b.key == "stride") {
      const double v = parse_real(*b.value);
      if (v != static_cast<int>(v)) throw UsageError("--stride must be an integer");
      overrides[b.key] = static_cast<int>(v);
    } else {
      overrides[b.key] = *b.value;
    }
  }
  apply_config_json(cfg, overrides);
  return cfg;
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> values;
  std::size_t start = 0;
  for (;;) {
    const auto comma = list.find(',', start);
    values.push_back(parse_phase(list.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven two-qubit dynamics: trajectories, CNOT gate probes and figure data"};
  app.require_subcommand(1);

  Flags f;
  auto* simulate = app.add_subcommand("simulate", "integrate one trajectory and write it out");
  auto* figures = app.add_subcommand("figures", "write norm and population curves over [-T, T]");
  auto* probe = app.add_subcommand("probe", "detect the gate time and compare +T with -T");
  auto* sweep = app.add_subcommand("sweep", "probe once per value of one parameter");

  const auto b_sim = add_common(*simulate, f);
  const auto b_fig = add_common(*figures, f);
  const auto b_probe = add_common(*probe, f);
  const auto b_sweep = add_common(*sweep, f);

  std::string out_dir = "figures";
  figures->add_option("--out-dir", out_dir, "directory for fig1..fig5 and manifest.json");

  std::string axis, values;
  sweep->add_option("--axis", axis, "w1 | w2 | j | omega | phi1 | phi2")->required();
  sweep->add_option("--values", values, "comma-separated values, phase expressions allowed")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(build_config(f, b_sim), std::cout, std::cerr);
    if (figures->parsed()) return cmd_figures(build_config(f, b_fig), out_dir, std::cout, std::cerr);
    if (probe->parsed()) return cmd_probe(build_config(f, b_probe), std::cout, std::cerr);
    if (sweep->parsed()) {
      return cmd_sweep(build_config(f, b_sweep), axis, parse_values(values), std::cout, std::cerr);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
