#include "chronoq_cli/trajectory_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "chronoq/analysis.hpp"
#include "chronoq/errors.hpp"

namespace chronoq::cli {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TimedState>& samples) {
  out << kTrajectoryHeader << '\n';
  for (const auto& s : samples) {
    const auto pops = populations(s.state);
    out << format_double(s.t);
    for (double p : pops) out << ',' << format_double(p);
    out << ',' << format_double(s.state.norm2());
    for (std::size_t k = 0; k < 4; ++k) {
      out << ',' << format_double(s.state[k].real()) << ',' << format_double(s.state[k].imag());
    }
    out << '\n';
  }
}

namespace {

double parse_field(const std::string& field, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || *end != '\0') {
    throw UsageError("line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return v;
}

}  // namespace

std::vector<TimedState> read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader) {
    throw UsageError("trajectory CSV header mismatch");
  }
  std::vector<TimedState> samples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> cols;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) cols.push_back(parse_field(field, line_no));
    if (cols.size() != 14) {
      throw UsageError("line " + std::to_string(line_no) + ": expected 14 columns");
    }
    TimedState s;
    s.t = cols[0];
    for (std::size_t k = 0; k < 4; ++k) s.state[k] = Complex(cols[6 + 2 * k], cols[7 + 2 * k]);
    samples.push_back(s);
  }
  return samples;
}

nlohmann::json to_json(const SystemParameters& p) {
  return {{"w1", p.w1}, {"w2", p.w2},     {"j", p.j},
          {"omega", p.omega}, {"phi1", p.phi1}, {"phi2", p.phi2}};
}

nlohmann::json to_json(const IntegratorConfig& c) {
  return {{"method", to_string(c.method)},
          {"dt", c.dt},
          {"rel_tol", c.rel_tol},
          {"abs_tol", c.abs_tol},
          {"sample_stride", c.sample_stride}};
}

nlohmann::json trajectory_to_json(const Trajectory& traj) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : traj.samples) {
    nlohmann::json amps = nlohmann::json::array();
    for (std::size_t k = 0; k < 4; ++k) amps.push_back({s.state[k].real(), s.state[k].imag()});
    samples.push_back({{"t", s.t}, {"c", amps}});
  }
  return {{"params", to_json(traj.params)},
          {"integrator", to_json(traj.config)},
          {"direction", to_string(traj.direction)},
          {"samples", samples}};
}

std::vector<TimedState> samples_from_json(const nlohmann::json& doc) {
  std::vector<TimedState> out;
  for (const auto& s : doc.at("samples")) {
    TimedState ts;
    ts.t = s.at("t").get<double>();
    const auto& c = s.at("c");
    for (std::size_t k = 0; k < 4; ++k) {
      ts.state[k] = Complex(c.at(k).at(0).get<double>(), c.at(k).at(1).get<double>());
    }
    out.push_back(ts);
  }
  return out;
}

void write_series_csv(std::ostream& out, std::string_view column,
                      const std::vector<TimedState>& samples, double (*value)(const TwoQubitState&)) {
  out << "t," << column << '\n';
  for (const auto& s : samples) out << format_double(s.t) << ',' << format_double(value(s.state)) << '\n';
}

}  // namespace chronoq::cli
