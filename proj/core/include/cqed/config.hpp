#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqed/model.hpp"
#include "cqed/trajectory.hpp"

namespace cqed {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything needed to reproduce a run. Physical fields are SI, trajectory
/// fields are in units of 1/kappa; key names mirror the field names.
struct RunConfig {
  std::string preset{"set1"};
  PhysicalParameters physics;
  TrajectoryConfig trajectory;
  std::string formula{"ideal"};     // analytic: ideal, fixed, mc-naive, mc-weighted
  std::size_t samples{10000};       // analytic Monte-Carlo configurations
  std::string sim_mode{"g2"};       // simulate: g2, semiclassical, semiclassical-adiabatic, beam-stats
  std::size_t hist_bins{50};
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// `key = value` lines; `#` starts a comment; blank lines ignored.
KeyValues parse_key_values(std::istream& in, std::string_view source = "<input>");

/// Config for a named preset with default trajectory settings.
RunConfig default_config(std::string_view preset_name);

/// Applies one key; throws ConfigError for unknown keys or bad values.
void set_value(RunConfig& cfg, std::string_view key, std::string_view value);

/// `preset` (if present) is applied first, then the remaining keys in order.
/// A `content_hash` entry is checked against the other entries.
RunConfig config_from(const KeyValues& kv);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical entries of a config (round-trips through config_from).
KeyValues to_key_values(const RunConfig& cfg);

std::uint64_t fnv1a64(std::string_view data);

/// Manifest text: canonical entries, tool_version and content_hash.
std::string manifest_text(const RunConfig& cfg);

std::string format_double(double v);

}  // namespace cqed
