// pwstring: Casimir energies, spectra, thermal sums and the one-loop free energy of the
// piecewise uniform string, written as CSV or JSON.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pwstring/cli_io.hpp"
#include "pwstring/errors.hpp"

namespace {

struct Flags {
  std::map<std::string, std::string> values;
  std::string config_path;
  std::string output_path;
  std::string format;
  int jobs = 0;
};

void add_common(CLI::App* sub, Flags& flags, bool with_scan_target) {
  const std::pair<const char*, const char*> params[] = {
      {"s", "length ratio L_II / L_I (integer for free-energy, hagedorn)"},
      {"x", "tension ratio T_I / T_II in [0, 1]"},
      {"N", "number of type-I/type-II piece pairs"},
      {"L", "total length (default pi)"},
      {"T", "temperature"},
      {"T_II", "tension of piece II"},
      {"beta", "inverse temperature"},
      {"omega_max", "upper end of the spectrum search"},
      {"derivatives", "also compute U and S (free-energy)"},
  };
  for (const auto& [name, help] : params) {
    sub->add_option_function<std::string>(
        std::string("--") + name, [&flags, key = std::string(name)](const std::string& v) {
          flags.values[key] = v;
        },
        help);
  }
  if (with_scan_target) {
    sub->add_option_function<std::string>(
        "--command", [&flags](const std::string& v) { flags.values["command"] = v; },
        "operation to sweep");
  }
  sub->add_option("--config", flags.config_path, "JSON run configuration; flags override it");
  sub->add_option("-o,--output", flags.output_path, "write the result here instead of stdout");
  sub->add_option("--format", flags.format, "csv (default) or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--jobs", flags.jobs, "worker threads for scan")->check(CLI::PositiveNumber);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pwstring::DomainError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Casimir energies and thermodynamics of the piecewise uniform string"};
  app.require_subcommand(1);
  Flags flags;
  const char* names[] = {"energy", "energy-n", "spectrum", "thermal",
                         "free-energy", "hagedorn", "oracle", "scan"};
  for (const char* name : names) {
    add_common(app.add_subcommand(name), flags, std::string(name) == "scan");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  pwstring::RunConfig base;
  try {
    if (!flags.config_path.empty()) base = pwstring::load_run_config(read_file(flags.config_path));
    pwstring::RunOverrides overrides;
    overrides.command = pwstring::parse_command(app.get_subcommands().front()->get_name());
    overrides.parameters = flags.values;
    if (!flags.output_path.empty()) overrides.output_path = flags.output_path;
    if (!flags.format.empty()) {
      overrides.format =
          flags.format == "json" ? pwstring::OutputFormat::json : pwstring::OutputFormat::csv;
    }
    if (flags.jobs > 0) overrides.jobs = flags.jobs;
    base = pwstring::apply_overrides(base, overrides);
  } catch (const pwstring::DomainError& e) {
    std::cerr << pwstring::domain_error_record(e.what()) << '\n';
    return 1;
  }

  const pwstring::DispatchOutcome outcome = pwstring::dispatch(base);
  if (outcome.exit_status != 0) {
    std::cerr << outcome.error_record << '\n';
    return outcome.exit_status;
  }
  if (base.output_path) {
    std::ofstream out(*base.output_path, std::ios::binary);
    if (!out) {
      std::cerr << pwstring::domain_error_record("cannot write '" + *base.output_path + "'") << '\n';
      return 1;
    }
    out << outcome.artifact;
  } else {
    std::cout << outcome.artifact;
  }
  return 0;
}
