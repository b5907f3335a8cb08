#include "pwstring/cli_io.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pwstring/energy_finite_t.hpp"
#include "pwstring/energy_zero_t.hpp"
#include "pwstring/errors.hpp"
#include "pwstring/oracle_cutoff.hpp"
#include "pwstring/spectrum.hpp"
#include "pwstring/thermo_quantum.hpp"

namespace pwstring {

namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kToolVersion = "1.0.0";

const std::vector<std::pair<Command, std::string>>& command_names() {
  static const std::vector<std::pair<Command, std::string>> names{
      {Command::energy, "energy"},           {Command::energy_n, "energy-n"},
      {Command::spectrum, "spectrum"},       {Command::thermal, "thermal"},
      {Command::free_energy, "free-energy"}, {Command::hagedorn, "hagedorn"},
      {Command::oracle, "oracle"},           {Command::scan, "scan"},
  };
  return names;
}

struct ParameterSpec {
  std::set<std::string> required;
  std::set<std::string> optional;
};

ParameterSpec parameters_of(Command command) {
  switch (command) {
    case Command::energy: return {{"s", "x"}, {"L"}};
    case Command::energy_n: return {{"N", "x"}, {"L"}};
    case Command::spectrum: return {{"s", "x", "omega_max"}, {"L"}};
    case Command::thermal: return {{"x", "T"}, {"s", "N", "L"}};
    case Command::free_energy: return {{"s", "T_II", "beta"}, {"derivatives"}};
    case Command::hagedorn: return {{"s", "T_II"}, {}};
    case Command::oracle: return {{"s", "x"}, {"L"}};
    case Command::scan: break;
  }
  throw DomainError("scan cannot be nested");
}

std::string trim_lower(const std::string& text) {
  std::string out;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  return out;
}

double parse_plain(const std::string& text, const std::string& original) {
  if (text.empty()) throw DomainError("empty number in '" + original + "'");
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("not a number: '" + original + "'");
  }
  if (used != text.size() || !std::isfinite(value)) {
    throw DomainError("not a finite number: '" + original + "'");
  }
  return value;
}

class Parameters {
 public:
  Parameters(Command command, const std::map<std::string, std::string>& raw) : raw_(raw) {
    const ParameterSpec spec = parameters_of(command);
    for (const auto& [key, value] : raw) {
      if (!spec.required.contains(key) && !spec.optional.contains(key)) {
        throw DomainError("unknown parameter '" + key + "' for command " + to_string(command));
      }
    }
    for (const auto& key : spec.required) {
      if (!raw.contains(key)) {
        throw DomainError("missing parameter '" + key + "' for command " + to_string(command));
      }
    }
  }

  bool has(const std::string& key) const { return raw_.contains(key); }

  double real(const std::string& key, std::optional<double> fallback = std::nullopt) const {
    const auto it = raw_.find(key);
    if (it == raw_.end()) {
      if (fallback) return *fallback;
      throw DomainError("missing parameter '" + key + "'");
    }
    return parse_real(it->second);
  }

  int integer(const std::string& key) const {
    const double v = real(key);
    if (v != std::round(v) || std::abs(v) > 1e9) {
      throw DomainError("parameter '" + key + "' must be an integer, got " + raw_.at(key));
    }
    return static_cast<int>(v);
  }

  bool flag(const std::string& key) const {
    const auto it = raw_.find(key);
    if (it == raw_.end()) return false;
    const std::string v = trim_lower(it->second);
    if (v == "1" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "no") return false;
    throw DomainError("parameter '" + key + "' must be a boolean, got " + it->second);
  }

 private:
  std::map<std::string, std::string> raw_;
};

using Job = std::function<Artifact()>;

Record energy_record(std::vector<std::pair<std::string, double>> inputs, const EnergyResult& r) {
  Record rec;
  rec.inputs = std::move(inputs);
  rec.value = r.value;
  rec.method = std::string(to_string(r.method));
  rec.abs_error_estimate = r.abs_error_estimate;
  return rec;
}

// Validates parameters and returns the deferred computation.
Job prepare(Command command, const std::map<std::string, std::string>& raw) {
  const Parameters p(command, raw);
  switch (command) {
    case Command::energy: {
      const StringConfig cfg(p.real("s"), p.real("x"), p.real("L", kPi));
      return [cfg] {
        const std::vector<std::pair<std::string, double>> in{
            {"s", cfg.length_ratio()}, {"x", cfg.tension_ratio()}, {"L", cfg.total_length()}};
        Artifact a;
        a.records.push_back(energy_record(in, casimir_two_piece(cfg)));
        if (cfg.tension_ratio() == 0.0) {
          a.records.push_back(
              energy_record(in, casimir_two_piece_x0(cfg.length_ratio(), cfg.total_length())));
        }
        return a;
      };
    }
    case Command::energy_n: {
      const NPieceConfig cfg(p.integer("N"), p.real("x"), p.real("L", kPi));
      return [cfg] {
        const std::vector<std::pair<std::string, double>> in{
            {"N", double(cfg.piece_pairs())}, {"x", cfg.tension_ratio()}, {"L", cfg.total_length()}};
        Artifact a;
        a.records.push_back(energy_record(in, casimir_2n(cfg)));
        if (cfg.tension_ratio() == 0.0) {
          a.records.push_back(
              energy_record(in, casimir_2n_x0(cfg.piece_pairs(), cfg.total_length())));
        }
        return a;
      };
    }
    case Command::spectrum: {
      const StringConfig cfg(p.real("s"), p.real("x"), p.real("L", kPi));
      const double omega_max = p.real("omega_max");
      if (!(omega_max > 0.0)) throw DomainError("omega_max must be positive");
      return [cfg, omega_max] {
        const Spectrum spec = find_spectrum(cfg, omega_max);
        Artifact a;
        for (const auto& line : spec.entries) {
          Record rec;
          rec.inputs = {{"s", cfg.length_ratio()},
                        {"x", cfg.tension_ratio()},
                        {"L", cfg.total_length()},
                        {"omega_max", omega_max}};
          rec.value = line.omega;
          rec.method = "root";
          rec.abs_error_estimate = 1e-12 * std::max(1.0, line.omega);
          rec.extras = {{"multiplicity", double(line.multiplicity)},
                        {"branch_coincidence", line.branch_coincidence ? 1.0 : 0.0}};
          a.records.push_back(std::move(rec));
        }
        return a;
      };
    }
    case Command::thermal: {
      if (p.has("s") == p.has("N")) {
        throw DomainError("thermal needs exactly one of s (two pieces) or N (2N pieces)");
      }
      const ThermalConfig th(p.real("T"));
      if (!(th.temperature() > 0.0)) throw DomainError("thermal needs T > 0");
      const double x = p.real("x");
      const double length = p.real("L", kPi);
      if (p.has("s")) {
        const StringConfig cfg(p.real("s"), x, length);
        return [cfg, th] {
          const std::vector<std::pair<std::string, double>> in{{"s", cfg.length_ratio()},
                                                               {"x", cfg.tension_ratio()},
                                                               {"L", cfg.total_length()},
                                                               {"T", th.temperature()}};
          Artifact a;
          a.records.push_back(energy_record(in, casimir_two_piece_thermal(cfg, th)));
          a.records.push_back(energy_record(in, high_t_limit(cfg, th)));
          return a;
        };
      }
      const NPieceConfig cfg(p.integer("N"), x, length);
      return [cfg, th] {
        const std::vector<std::pair<std::string, double>> in{{"N", double(cfg.piece_pairs())},
                                                             {"x", cfg.tension_ratio()},
                                                             {"L", cfg.total_length()},
                                                             {"T", th.temperature()}};
        Artifact a;
        const MatsubaraSum sum =
            cfg.tension_ratio() == 0.0
                ? matsubara_2n_x0(cfg.piece_pairs(), th, cfg.total_length())
                : matsubara_2n(cfg, th);
        Record rec = energy_record(in, {sum.value(th.temperature()), EnergyMethod::matsubara,
                                        th.temperature() * sum.tail_bound});
        rec.extras = {{"static_term", sum.static_term},
                      {"dynamic_part", th.temperature() * sum.dynamic_sum}};
        a.records.push_back(std::move(rec));
        return a;
      };
    }
    case Command::free_energy: {
      const QuantumStringConfig cfg(p.integer("s"), p.real("T_II"));
      const double beta = p.real("beta");
      if (!(beta > 0.0)) throw DomainError("beta must be positive");
      const bool derivatives = p.flag("derivatives");
      if (derivatives && !(beta > 1.1 * hagedorn_beta(cfg))) {
        throw DomainError("derivatives need beta > 1.1 beta_c");
      }
      return [cfg, beta, derivatives] {
        const FreeEnergyResult f = free_energy(cfg, beta);
        Record rec;
        rec.inputs = {{"s", double(cfg.length_ratio())}, {"T_II", cfg.tension_two()}, {"beta", beta}};
        rec.value = f.free_energy;
        rec.method = "modular-integral";
        rec.abs_error_estimate = f.abs_error_estimate;
        rec.extras = {{"constant_term", f.constant_term},
                      {"integral", f.integral},
                      {"divergence_rate", f.divergence_rate},
                      {"tau2_min", f.tau2_min},
                      {"beta_c", hagedorn_beta(cfg)}};
        if (derivatives) {
          const ThermoResult t = thermo_derivatives(cfg, beta);
          rec.extras.push_back({"internal_energy", t.internal_energy});
          rec.extras.push_back({"entropy", t.entropy});
          rec.extras.push_back({"identity_residual", t.identity_residual});
        }
        rec.labels = {{"convergence", std::string(to_string(f.flag))}, {"branch", "first"}};
        Artifact a;
        a.records.push_back(std::move(rec));
        return a;
      };
    }
    case Command::hagedorn: {
      const QuantumStringConfig cfg(p.integer("s"), p.real("T_II"));
      return [cfg] {
        Record rec;
        rec.inputs = {{"s", double(cfg.length_ratio())}, {"T_II", cfg.tension_two()}};
        rec.value = hagedorn_beta(cfg);
        rec.method = "closed-form";
        rec.extras = {{"T_c", 1.0 / rec.value},
                      {"integrand_divergence_beta", free_energy_divergence_beta(cfg)}};
        Artifact a;
        a.records.push_back(std::move(rec));
        return a;
      };
    }
    case Command::oracle: {
      const StringConfig cfg(p.real("s"), p.real("x"), p.real("L", kPi));
      return [cfg] {
        const MethodComparison c = compare_methods(cfg);
        Record rec;
        rec.inputs = {{"s", cfg.length_ratio()}, {"x", cfg.tension_ratio()}, {"L", cfg.total_length()}};
        rec.value = c.contour;
        rec.method = "contour-vs-cutoff";
        rec.abs_error_estimate = c.contour_error;
        rec.extras = {{"oracle", c.oracle},
                      {"oracle_error", c.oracle_error},
                      {"difference", c.difference},
                      {"disagree", c.disagree ? 1.0 : 0.0}};
        Artifact a;
        a.records.push_back(std::move(rec));
        return a;
      };
    }
    case Command::scan: break;
  }
  throw DomainError("scan cannot be nested");
}

Artifact run_scan(const RunConfig& cfg) {
  auto params = cfg.parameters;
  const auto sub = params.find("command");
  if (sub == params.end()) throw DomainError("scan needs --command");
  const Command inner = parse_command(sub->second);
  if (inner == Command::scan) throw DomainError("scan cannot be nested");
  params.erase(sub);

  std::string swept;
  for (const auto& [key, value] : params) {
    if (value.find(':') != std::string::npos) {
      if (!swept.empty()) throw DomainError("scan sweeps exactly one parameter; got " + swept + " and " + key);
      swept = key;
    }
  }
  if (swept.empty()) throw DomainError("scan needs one parameter given as start:stop:step");
  const std::vector<double> grid = parse_range(params.at(swept));

  std::vector<Job> jobs;
  for (double value : grid) {
    auto point = params;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    point[swept] = buf;
    jobs.push_back(prepare(inner, point));
  }

  std::vector<Artifact> results(jobs.size());
  std::vector<std::exception_ptr> failures(jobs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        results[i] = jobs[i]();
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const int workers = std::clamp<int>(cfg.jobs, 1, static_cast<int>(jobs.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // One row per grid point for the energies; the cross-check rows stay with single runs.
  const bool primary_only =
      inner == Command::energy || inner == Command::energy_n || inner == Command::thermal;
  Artifact out;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (failures[i]) std::rethrow_exception(failures[i]);
    auto& recs = results[i].records;
    if (primary_only && recs.size() > 1) recs.resize(1);
    for (auto& rec : recs) out.records.push_back(std::move(rec));
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ojson json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

std::string error_record(int status, const std::string& kind, const std::string& message,
                         std::optional<double> best_estimate = std::nullopt) {
  ojson e;
  e["status"] = status;
  e["kind"] = kind;
  e["message"] = message;
  if (best_estimate) e["best_estimate"] = json_number(*best_estimate);
  return e.dump();
}

}  // namespace

std::string to_string(Command command) {
  for (const auto& [c, name] : command_names()) {
    if (c == command) return name;
  }
  return "unknown";
}

Command parse_command(const std::string& name) {
  for (const auto& [c, n] : command_names()) {
    if (n == name) return c;
  }
  throw DomainError("unknown command '" + name + "'");
}

double parse_real(const std::string& text) {
  const std::string t = trim_lower(text);
  const auto at = t.find("pi");
  if (at == std::string::npos) return parse_plain(t, text);

  std::string head = t.substr(0, at);
  const std::string tail = t.substr(at + 2);
  if (!head.empty() && head.back() == '*') head.pop_back();
  double coefficient = 1.0;
  if (head == "-") {
    coefficient = -1.0;
  } else if (!head.empty() && head != "+") {
    coefficient = parse_plain(head, text);
  }
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') throw DomainError("cannot parse '" + text + "'");
    divisor = parse_plain(tail.substr(1), text);
    if (divisor == 0.0) throw DomainError("division by zero in '" + text + "'");
  }
  return coefficient * kPi / divisor;
}

std::vector<double> parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw DomainError("range must be start:stop:step, got '" + text + "'");
  const double start = parse_real(parts[0]);
  const double stop = parse_real(parts[1]);
  const double step = parse_real(parts[2]);
  if (step == 0.0 || (stop - start) * step < 0.0) {
    throw DomainError("range step must be nonzero and point from start to stop: '" + text + "'");
  }
  const double count = std::floor((stop - start) / step + 0.5);
  if (count > 1e6) throw DomainError("range has more than a million points: '" + text + "'");
  std::vector<double> grid;
  for (int i = 0; i <= static_cast<int>(count); ++i) grid.push_back(start + i * step);
  return grid;
}

RunConfig load_run_config(const std::string& json_text) {
  ojson doc;
  try {
    doc = ojson::parse(json_text);
  } catch (const std::exception& e) {
    throw DomainError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DomainError("config must be a JSON object");
  RunConfig cfg;
  const auto text_of = [](const ojson& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return format_number(v.get<double>());
    if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
    throw DomainError("config value for '" + key + "' must be a string, number or boolean");
  };
  for (const auto& [key, value] : doc.items()) {
    if (key == "command") {
      cfg.command = parse_command(text_of(value, key));
    } else if (key == "parameters") {
      if (!value.is_object()) throw DomainError("config 'parameters' must be an object");
      for (const auto& [name, v] : value.items()) cfg.parameters[name] = text_of(v, name);
    } else if (key == "output") {
      if (!value.is_object()) throw DomainError("config 'output' must be an object");
      for (const auto& [name, v] : value.items()) {
        if (name == "path") {
          cfg.output_path = text_of(v, name);
        } else if (name == "format") {
          const std::string f = text_of(v, name);
          if (f != "csv" && f != "json") throw DomainError("output format must be csv or json");
          cfg.format = f == "csv" ? OutputFormat::csv : OutputFormat::json;
        } else {
          throw DomainError("unknown config key 'output." + name + "'");
        }
      }
    } else if (key == "jobs") {
      if (!value.is_number_integer() || value.get<int>() < 1) {
        throw DomainError("config 'jobs' must be a positive integer");
      }
      cfg.jobs = value.get<int>();
    } else {
      throw DomainError("unknown config key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig apply_overrides(RunConfig base, const RunOverrides& flags) {
  if (flags.command) base.command = *flags.command;
  for (const auto& [key, value] : flags.parameters) base.parameters[key] = value;
  if (flags.output_path) base.output_path = flags.output_path;
  if (flags.format) base.format = *flags.format;
  if (flags.jobs) base.jobs = *flags.jobs;
  return base;
}

MethodComparison compare_methods(const StringConfig& cfg) {
  const EnergyResult contour = casimir_two_piece(cfg);
  const CutoffResult oracle = casimir_by_cutoff(cfg);
  MethodComparison out{};
  out.contour = contour.value;
  out.oracle = oracle.extrapolated_energy;
  out.difference = std::abs(out.contour - out.oracle);
  out.contour_error = contour.abs_error_estimate;
  out.oracle_error = oracle.abs_error_estimate;
  out.disagree = out.difference > out.contour_error + out.oracle_error + 1e-12;
  return out;
}

Artifact run(const RunConfig& cfg) {
  if (cfg.jobs < 1) throw DomainError("jobs must be >= 1");
  if (cfg.command == Command::scan) return run_scan(cfg);
  return prepare(cfg.command, cfg.parameters)();
}

std::string to_csv(const Artifact& artifact) {
  std::ostringstream out;
  if (artifact.records.empty()) return "";
  const Record& first = artifact.records.front();
  std::vector<std::string> header;
  for (const auto& [name, v] : first.inputs) header.push_back(name);
  header.insert(header.end(), {"value", "method", "abs_error_estimate"});
  for (const auto& [name, v] : first.extras) header.push_back(name);
  for (const auto& [name, v] : first.labels) header.push_back(name);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';

  for (const auto& rec : artifact.records) {
    if (rec.inputs.size() != first.inputs.size() || rec.extras.size() != first.extras.size() ||
        rec.labels.size() != first.labels.size()) {
      throw DomainError("records with different layouts cannot share one CSV table");
    }
    std::vector<std::string> cells;
    for (const auto& [name, v] : rec.inputs) cells.push_back(format_number(v));
    cells.push_back(format_number(rec.value));
    cells.push_back(rec.method);
    cells.push_back(format_number(rec.abs_error_estimate));
    for (const auto& [name, v] : rec.extras) cells.push_back(format_number(v));
    for (const auto& [name, v] : rec.labels) cells.push_back(v);
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  }
  return out.str();
}

std::string to_json(const RunConfig& cfg, const Artifact& artifact) {
  ojson doc;
  doc["command"] = to_string(cfg.command);
  doc["parameters"] = ojson::object();
  for (const auto& [key, value] : cfg.parameters) doc["parameters"][key] = value;
  doc["results"] = ojson::array();
  for (const auto& rec : artifact.records) {
    ojson r;
    r["inputs"] = ojson::object();
    for (const auto& [name, v] : rec.inputs) r["inputs"][name] = json_number(v);
    r["value"] = json_number(rec.value);
    r["method"] = rec.method;
    r["abs_error_estimate"] = json_number(rec.abs_error_estimate);
    r["extras"] = ojson::object();
    for (const auto& [name, v] : rec.extras) r["extras"][name] = json_number(v);
    r["labels"] = ojson::object();
    for (const auto& [name, v] : rec.labels) r["labels"][name] = v;
    doc["results"].push_back(std::move(r));
  }
  doc["provenance"] = {{"tool", "pwstring"}, {"version", kToolVersion}};
  return doc.dump(2) + "\n";
}

DispatchOutcome dispatch(const RunConfig& cfg) {
  try {
    const Artifact artifact = run(cfg);
    return {0, cfg.format == OutputFormat::csv ? to_csv(artifact) : to_json(cfg, artifact), ""};
  } catch (const DomainError& e) {
    return {1, "", error_record(1, "domain_error", e.what())};
  } catch (const NumericalError& e) {
    return {2, "", error_record(2, "numerical_failure", e.what(), e.best_estimate())};
  } catch (const std::exception& e) {
    return {2, "", error_record(2, "numerical_failure", e.what())};
  }
}

std::string domain_error_record(const std::string& message) {
  return error_record(1, "domain_error", message);
}

}  // namespace pwstring
