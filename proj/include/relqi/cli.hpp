#pragma once

// Command-line front end. Subcommands: spin-entropy, spin-distinguish,
// photon-density, photon-distinguish, doppler, channel-audit, entangle-sweep,
// convergence. Exit codes: 0 success, 1 non-convergence (output still
// written), 2 configuration error.

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace relqi::cli {

/// Invalid configuration; `field` names the offending option.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error("config error: field '" + field + "': " + message), field_(std::move(field)) {}
  [[nodiscard]] const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// `min:max:step` (inclusive of max up to rounding) or a comma-separated list.
std::vector<double> parse_range(std::string_view text, const std::string& field);

double parse_number(std::string_view text, const std::string& field);

/// Shortest round-trip-stable text with 12 significant digits, '.' decimal.
std::string format_number(double value);

/// Flag values by name (without leading dashes), after --config overrides.
struct SweepConfig {
  std::string subcommand;
  std::map<std::string, std::string> values;
  int nodes = 0;
  double tolerance = 0.0;
  std::string out;
  std::string format;
};

struct ConvergenceRow {
  std::string observable;
  int nodes_per_axis = 0;
  double value = 0.0;
  /// Relative change from the previous resolution (absolute when the reference is 0).
  double delta = 0.0;
  bool converged = false;
};

/// Observable (spin-entropy, spin-error, photon-error, concurrence) at n and 2n
/// nodes per axis; concurrence uses n and n + 2 to bound memory. Resolutions
/// below 4 are never reported as converged.
std::vector<ConvergenceRow> convergence_report(const SweepConfig& config);

/// Entry point; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace relqi::cli
