#pragma once

// Run configuration, dispatch and serialization behind the pwstring command-line tool.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pwstring/core_model.hpp"

namespace pwstring {

enum class Command { energy, energy_n, spectrum, thermal, free_energy, hagedorn, oracle, scan };
enum class OutputFormat { csv, json };

std::string to_string(Command command);
Command parse_command(const std::string& name);  // throws DomainError

/// Parses a real number, accepting multiples of pi: "pi", "2pi", "0.5*pi", "pi/2", "-pi".
double parse_real(const std::string& text);

struct RunConfig {
  Command command = Command::energy;
  /// Parameter name -> textual value. For scan, "command" names the swept operation and
  /// exactly one other parameter holds a start:stop:step range.
  std::map<std::string, std::string> parameters;
  std::optional<std::string> output_path;
  OutputFormat format = OutputFormat::csv;
  int jobs = 1;
};

/// Reads {"command": ..., "parameters": {...}, "output": {"path": ..., "format": ...},
/// "jobs": n}. Unknown keys at any level are rejected.
RunConfig load_run_config(const std::string& json_text);

/// Settings given explicitly on the command line.
struct RunOverrides {
  std::optional<Command> command;
  std::map<std::string, std::string> parameters;
  std::optional<std::string> output_path;
  std::optional<OutputFormat> format;
  std::optional<int> jobs;
};

/// Overlays the command-line settings on a configuration read from file.
RunConfig apply_overrides(RunConfig base, const RunOverrides& flags);

/// Expands start:stop:step into the inclusive grid (stop kept within half a step).
std::vector<double> parse_range(const std::string& text);

/// One output row: inputs first, then the value with its method and error estimate,
/// then any further named quantities.
struct Record {
  std::vector<std::pair<std::string, double>> inputs;
  double value = 0.0;
  std::string method;
  double abs_error_estimate = 0.0;
  std::vector<std::pair<std::string, double>> extras;
  std::vector<std::pair<std::string, std::string>> labels;
};

struct Artifact {
  std::vector<Record> records;
};

/// Contour energy against the cutoff oracle for one configuration.
struct MethodComparison {
  double contour;
  double oracle;
  double difference;  ///< |contour - oracle|
  double contour_error;
  double oracle_error;
  bool disagree;      ///< difference exceeds the combined error estimates
};

MethodComparison compare_methods(const StringConfig& cfg);

/// Validates the configuration and runs it. Throws DomainError or NumericalError.
Artifact run(const RunConfig& cfg);

std::string to_csv(const Artifact& artifact);
std::string to_json(const RunConfig& cfg, const Artifact& artifact);

struct DispatchOutcome {
  int exit_status;            ///< 0 ok, 1 domain error, 2 numerical failure
  std::string artifact;       ///< serialized output when exit_status == 0
  std::string error_record;   ///< one-line JSON error record otherwise
};

/// run + serialization, with errors mapped to exit statuses.
DispatchOutcome dispatch(const RunConfig& cfg);

/// The exit-status-1 error record for problems found before dispatch (unreadable files).
std::string domain_error_record(const std::string& message);

}  // namespace pwstring
