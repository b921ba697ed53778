#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chronoq/integrate.hpp"

namespace chronoq::cli {

/// Output file could not be created or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Column order of trajectory CSV files.
inline constexpr std::string_view kTrajectoryHeader =
    "t,p00,p01,p10,p11,norm2,re_c0,im_c0,re_c1,im_c1,re_c2,im_c2,re_c3,im_c3";

/// 17 significant digits: enough for an exact binary64 round trip.
std::string format_double(double v);

void write_trajectory_csv(std::ostream& out, const std::vector<TimedState>& samples);
/// Parses the amplitude columns back; population columns are ignored.
/// Throws UsageError on malformed input.
std::vector<TimedState> read_trajectory_csv(std::istream& in);

nlohmann::json to_json(const SystemParameters& p);
nlohmann::json to_json(const IntegratorConfig& c);
nlohmann::json trajectory_to_json(const Trajectory& traj);
std::vector<TimedState> samples_from_json(const nlohmann::json& doc);

/// Two-column CSV (t, value) used for figure data.
void write_series_csv(std::ostream& out, std::string_view column,
                      const std::vector<TimedState>& samples, double (*value)(const TwoQubitState&));

}  // namespace chronoq::cli
