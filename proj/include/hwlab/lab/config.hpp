#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hwlab/error.hpp"

namespace hwlab::lab {

/// Bad command line or configuration: exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"ground-state", "travel",         "evolve", "stability",
                                              "instability",  "sweep-velocity", "verify"};
  return names;
}

struct ExperimentConfig {
  std::string command = "ground-state";

  std::size_t nx = 256, ny = 256;
  double lx = 40.0, ly = 40.0;

  double p = 2.0, omega = 1.0, v = 0.0;

  double tol = 1e-9;
  int max_iter = 5000;
  std::string init_kind = "gaussian";  // gaussian | traveling | random | snapshot
  std::uint64_t seed = 1;

  double T = 20.0;
  double dt = 0.0;  // 0: largest step with dt * max|symbol| <= 0.5 dividing T
  std::size_t sample_stride = 100;
  double s_monitor = 0.6;
  bool enforce_step_limit = true;

  double delta = 1e-2;                           // stability: ||noise||_X / ||Q||_X
  double stable_factor = 3.0;                    // STABLE if max distance <= factor * initial
  std::vector<double> lambdas{0.95, 1.05};       // instability: T_lambda Q data
  double unstable_factor = 10.0;                 // UNSTABLE if distance grows by this factor
  std::vector<double> v_list{0.0, 0.5, 0.9, 0.99};

  std::string out_dir = ".";
  std::string snapshot_in;
  std::string snapshot_out;

  bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

inline std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + fmt_double(v[k]);
  return s;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw UsageError("config key " + key + ": expected a number, got '" + s + "'");
  }
}

template <class Int>
Int parse_int(const std::string& key, const std::string& s) {
  Int x{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw UsageError("config key " + key + ": expected an integer, got '" + s + "'");
  return x;
}

inline bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw UsageError("config key " + key + ": expected true or false, got '" + s + "'");
}

inline std::vector<double> parse_list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  if (out.empty()) throw UsageError("config key " + key + ": empty list");
  return out;
}

}  // namespace detail

/// Canonical key order; every key is "section.name" except the bare command.
inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "command",          "grid.nx",         "grid.ny",           "grid.lx",
      "grid.ly",          "model.p",         "model.omega",       "model.v",
      "solver.tol",       "solver.max_iter", "solver.init_kind",  "solver.seed",
      "evolution.T",      "evolution.dt",    "evolution.sample_stride", "evolution.s_monitor",
      "evolution.enforce_step_limit", "stability.delta", "stability.factor", "instability.lambdas",
      "instability.factor", "sweep.v_list",  "output.out_dir",    "output.snapshot_in",
      "output.snapshot_out"};
  return keys;
}

inline std::string get(const ExperimentConfig& c, const std::string& key) {
  using detail::fmt_double;
  if (key == "command") return c.command;
  if (key == "grid.nx") return std::to_string(c.nx);
  if (key == "grid.ny") return std::to_string(c.ny);
  if (key == "grid.lx") return fmt_double(c.lx);
  if (key == "grid.ly") return fmt_double(c.ly);
  if (key == "model.p") return fmt_double(c.p);
  if (key == "model.omega") return fmt_double(c.omega);
  if (key == "model.v") return fmt_double(c.v);
  if (key == "solver.tol") return fmt_double(c.tol);
  if (key == "solver.max_iter") return std::to_string(c.max_iter);
  if (key == "solver.init_kind") return c.init_kind;
  if (key == "solver.seed") return std::to_string(c.seed);
  if (key == "evolution.T") return fmt_double(c.T);
  if (key == "evolution.dt") return fmt_double(c.dt);
  if (key == "evolution.sample_stride") return std::to_string(c.sample_stride);
  if (key == "evolution.s_monitor") return fmt_double(c.s_monitor);
  if (key == "evolution.enforce_step_limit") return c.enforce_step_limit ? "true" : "false";
  if (key == "stability.delta") return fmt_double(c.delta);
  if (key == "stability.factor") return fmt_double(c.stable_factor);
  if (key == "instability.lambdas") return detail::fmt_list(c.lambdas);
  if (key == "instability.factor") return fmt_double(c.unstable_factor);
  if (key == "sweep.v_list") return detail::fmt_list(c.v_list);
  if (key == "output.out_dir") return c.out_dir;
  if (key == "output.snapshot_in") return c.snapshot_in;
  if (key == "output.snapshot_out") return c.snapshot_out;
  throw UsageError("unknown config key '" + key + "'");
}

inline void set(ExperimentConfig& c, const std::string& key, const std::string& raw) {
  using namespace detail;
  const std::string s = trim(raw);
  if (key == "command") {
    bool ok = false;
    for (const auto& n : command_names()) ok = ok || n == s;
    if (!ok) throw UsageError("unknown command '" + s + "'");
    c.command = s;
  } else if (key == "grid.nx") c.nx = parse_int<std::size_t>(key, s);
  else if (key == "grid.ny") c.ny = parse_int<std::size_t>(key, s);
  else if (key == "grid.lx") c.lx = parse_double(key, s);
  else if (key == "grid.ly") c.ly = parse_double(key, s);
  else if (key == "model.p") c.p = parse_double(key, s);
  else if (key == "model.omega") c.omega = parse_double(key, s);
  else if (key == "model.v") c.v = parse_double(key, s);
  else if (key == "solver.tol") c.tol = parse_double(key, s);
  else if (key == "solver.max_iter") c.max_iter = parse_int<int>(key, s);
  else if (key == "solver.init_kind") {
    if (s != "gaussian" && s != "traveling" && s != "random" && s != "snapshot")
      throw UsageError("solver.init_kind must be gaussian, traveling, random or snapshot");
    c.init_kind = s;
  } else if (key == "solver.seed") c.seed = parse_int<std::uint64_t>(key, s);
  else if (key == "evolution.T") c.T = parse_double(key, s);
  else if (key == "evolution.dt") c.dt = parse_double(key, s);
  else if (key == "evolution.sample_stride") c.sample_stride = parse_int<std::size_t>(key, s);
  else if (key == "evolution.s_monitor") c.s_monitor = parse_double(key, s);
  else if (key == "evolution.enforce_step_limit") c.enforce_step_limit = parse_bool(key, s);
  else if (key == "stability.delta") c.delta = parse_double(key, s);
  else if (key == "stability.factor") c.stable_factor = parse_double(key, s);
  else if (key == "instability.lambdas") c.lambdas = parse_list(key, s);
  else if (key == "instability.factor") c.unstable_factor = parse_double(key, s);
  else if (key == "sweep.v_list") c.v_list = parse_list(key, s);
  else if (key == "output.out_dir") c.out_dir = s;
  else if (key == "output.snapshot_in") c.snapshot_in = s;
  else if (key == "output.snapshot_out") c.snapshot_out = s;
  else throw UsageError("unknown config key '" + key + "'");
}

/// Parse flat "section.key = value" text; '#' starts a comment.
inline ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {}) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
    set(base, detail::trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

inline ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {}) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

/// Canonical text: every key in fixed order, "key = value" per line.
inline std::string serialize(const ExperimentConfig& c) {
  std::string out;
  for (const auto& k : config_keys()) out += k + " = " + get(c, k) + "\n";
  return out;
}

/// FNV-1a 64 of the canonical text, output destinations excluded so that reruns into another
/// directory carry the same hash.
inline std::uint64_t config_hash(const ExperimentConfig& c) {
  ExperimentConfig k = c;
  k.out_dir = ".";
  k.snapshot_out.clear();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : serialize(k)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hwlab::lab
