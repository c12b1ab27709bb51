#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rodpulse/field.hpp"
#include "rodpulse/model.hpp"

namespace rodpulse::cli {

enum ExitStatus : int {
  kExitOk = 0,
  kExitGatingFailure = 1,
  kExitConfigError = 2,
  kExitNumericalFailure = 3,
};

/// Scenario plus run settings read from a key = value file.
struct RunConfig {
  Scenario scenario = canonical_scenario();
  int nx = 401;
  double courant = 0.9;
  double horizon_in_transit_times = 5.0;
  int modal_terms_n = 200;
  std::string output_dir = "output";
  std::vector<std::string> warnings;

  double horizon() const { return horizon_in_transit_times * scenario.transit_time(); }
};

/// Throws ConfigError naming the key and 1-based line for unknown or repeated
/// keys, unparsable values and violated invariants. Keys not present keep
/// their defaults.
RunConfig parse_config(std::string_view text);

/// Reads and parses a file; a missing file is a ConfigError.
RunConfig load_config(const std::filesystem::path& path);

/// Every key with its effective value, one per line, in a fixed order.
std::string effective_config_text(const RunConfig& config);

/// 17 significant digits; parse_number(format_number(v)) == v for finite v.
std::string format_number(double value);
/// Whole-string decimal parse; nullopt on any trailing or missing characters.
std::optional<double> parse_number(std::string_view text);

/// "x,t,u" (or "x,t,T") then one line per sample, t-major.
void write_field_csv(std::ostream& out, const DisplacementField& field);
std::string field_csv(const DisplacementField& field);
/// Inverse of write_field_csv. Throws ParameterError on malformed input.
DisplacementField read_field_csv(std::istream& in);

/// Command-line selections that override the config file.
struct CommandOptions {
  std::optional<std::filesystem::path> config_path;
  std::optional<std::filesystem::path> output_dir;
  std::optional<BoundaryKind> mode;
};

enum class PointMassModel { Free, Oscillator };

struct PointMassOptions {
  PointMassModel model = PointMassModel::Free;
  double mass = 1.0;
  double damping = 0.0;
  double stiffness = 1.0;
  double t_end = 2.0;
  int samples = 201;
};

/// Loads the config, applies the overrides and echoes effective_config.txt
/// into the output directory.
RunConfig resolve_config(const CommandOptions& options);

/// Each returns an exit status; failures propagate as exceptions and are
/// mapped by guarded().
int cmd_simulate(const CommandOptions& options, std::ostream& log);
int cmd_invert(const CommandOptions& options, std::ostream& log);
int cmd_series(const CommandOptions& options, std::ostream& log);
int cmd_validate(const CommandOptions& options, std::ostream& log);
int cmd_point_mass(const CommandOptions& options, const PointMassOptions& pm, std::ostream& log);

/// Samples of the point-mass response on [0, t_end], header "t,x".
std::string point_mass_csv(const RunConfig& config, const PointMassOptions& pm);

/// Runs `command`, printing any exception to `err` and returning the matching
/// exit status: 2 for configuration and parameter errors, 3 for the rest.
int guarded(const std::function<int()>& command, std::ostream& err);

}  // namespace rodpulse::cli
