#pragma once

// Run configuration: a sectioned key = value text file.
//
//   [potential]   kind, a, v0, g
//   [constants]   hbar, mass
//   [task]        energy, e_max, index, parity, grid_points, n_bins, n_draws,
//                 seed, psi_states, e_target, sweep_v0, window
//   [thresholds]  gap_infinite_well, gap_closed_court, support_mass,
//                 breakdown_factor
//   [output]      directory, format
//
// Lines starting with ';' or '#' are comments. Every key is optional; unknown
// sections or keys are rejected. `emit` writes every key in canonical form, so
// parse(emit(c)) == c and emit(parse(emit(c))) == emit(c).

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "cqd/correspondence.hpp"
#include "cqd/potential.hpp"
#include "cqd/quantum.hpp"

namespace cqd {

// `key` is "section.name" (or empty when the error is not tied to one key).
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what) : std::invalid_argument(what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct RunConfig {
  struct Potential {
    PotentialKind kind = PotentialKind::ClosedCourt;
    double a = 25.0;
    double v0 = 10.0;
    double g = 1.0;
  } potential;

  struct ConstantsBlock {
    double hbar = 1.0;
    double mass = 0.5;
  } constants;

  struct Task {
    double energy = 10.066;
    double e_max = 12.0;
    // 0 selects the state nearest `energy`.
    int index = 0;
    Parity parity = Parity::Odd;
    // 0 selects the engine's default grid.
    int grid_points = 0;
    int n_bins = 10;
    int n_draws = 1000;
    std::uint64_t seed = 1;
    int psi_states = 4;
    double e_target = 10.0;
    std::vector<double> sweep_v0{10.0, 6.0, 2.0};
    // 0 selects max(minimal window, a/5).
    double window = 0.0;
  } task;

  struct Thresholds {
    double gap_infinite_well = calibration::kGapInfiniteWell;
    double gap_closed_court = calibration::kGapClosedCourt;
    double support_mass = calibration::kSupportMass;
    double breakdown_factor = calibration::kBreakdownFactor;
  } thresholds;

  struct Output {
    std::string directory = ".";
    std::string format = "csv";
  } output;

  PotentialSpec spec() const {
    const Constants c{constants.hbar, constants.mass, potential.g};
    switch (potential.kind) {
      case PotentialKind::Bouncer: return PotentialSpec::bouncer(c);
      case PotentialKind::InfiniteWell: return PotentialSpec::infinite_well(potential.a, c);
      case PotentialKind::ClosedCourt: break;
    }
    return PotentialSpec::closed_court(potential.v0, potential.a, c);
  }

  friend bool operator==(const RunConfig& l, const RunConfig& r);
};

namespace config_detail {

// Shortest %g form that reads back to the same double.
inline std::string format_double(double v) {
  char buf[40];
  for (int digits = 1; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline double parse_double(const std::string& key, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    throw ConfigError(key, "expected a finite number, got '" + text + "'");
  }
  return v;
}

inline long long parse_integer(const std::string& key, const std::string& text, long long lo, long long hi) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE || v < lo || v > hi) {
    throw ConfigError(key, "expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                               "], got '" + text + "'");
  }
  return v;
}

inline std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  if (text.empty() || text.front() == '-') throw ConfigError(key, "expected an unsigned integer, got '" + text + "'");
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw ConfigError(key, "expected an unsigned integer, got '" + text + "'");
  }
  return v;
}

inline std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError(key, "empty list element");
    out.push_back(parse_double(key, item.substr(b, e - b + 1)));
  }
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

inline std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

inline PotentialKind parse_kind(const std::string& key, const std::string& text) {
  if (text == "bouncer") return PotentialKind::Bouncer;
  if (text == "infinite_well") return PotentialKind::InfiniteWell;
  if (text == "closed_court") return PotentialKind::ClosedCourt;
  throw ConfigError(key, "expected bouncer, infinite_well or closed_court, got '" + text + "'");
}

inline std::string format_kind(PotentialKind k) {
  switch (k) {
    case PotentialKind::Bouncer: return "bouncer";
    case PotentialKind::InfiniteWell: return "infinite_well";
    case PotentialKind::ClosedCourt: break;
  }
  return "closed_court";
}

inline Parity parse_parity(const std::string& key, const std::string& text) {
  if (text == "even") return Parity::Even;
  if (text == "odd") return Parity::Odd;
  throw ConfigError(key, "expected even or odd, got '" + text + "'");
}

struct Field {
  std::string section;
  std::string name;
  std::function<void(RunConfig&, const std::string& key, const std::string& value)> set;
  std::function<std::string(const RunConfig&)> get;

  std::string key() const { return section + "." + name; }
};

#define CQD_DOUBLE(sec, member)                                                                 \
  Field{#sec, #member, [](RunConfig& c, const std::string& k, const std::string& v) {         \
          c.sec.member = parse_double(k, v);                                                    \
        },                                                                                      \
        [](const RunConfig& c) { return format_double(c.sec.member); }}
#define CQD_INT(sec, member, lo, hi)                                                            \
  Field{#sec, #member, [](RunConfig& c, const std::string& k, const std::string& v) {         \
          c.sec.member = static_cast<int>(parse_integer(k, v, lo, hi));                         \
        },                                                                                      \
        [](const RunConfig& c) { return std::to_string(c.sec.member); }}

inline const std::vector<Field>& fields() {
  static const std::vector<Field> table{
      Field{"potential", "kind",
            [](RunConfig& c, const std::string& k, const std::string& v) { c.potential.kind = parse_kind(k, v); },
            [](const RunConfig& c) { return format_kind(c.potential.kind); }},
      CQD_DOUBLE(potential, a),
      CQD_DOUBLE(potential, v0),
      CQD_DOUBLE(potential, g),
      CQD_DOUBLE(constants, hbar),
      CQD_DOUBLE(constants, mass),
      CQD_DOUBLE(task, energy),
      CQD_DOUBLE(task, e_max),
      CQD_INT(task, index, 0, 100000),
      Field{"task", "parity",
            [](RunConfig& c, const std::string& k, const std::string& v) { c.task.parity = parse_parity(k, v); },
            [](const RunConfig& c) { return to_string(c.task.parity); }},
      CQD_INT(task, grid_points, 0, 10000000),
      CQD_INT(task, n_bins, 2, 10000000),
      CQD_INT(task, n_draws, 0, 100000000),
      Field{"task", "seed",
            [](RunConfig& c, const std::string& k, const std::string& v) { c.task.seed = parse_unsigned(k, v); },
            [](const RunConfig& c) { return std::to_string(c.task.seed); }},
      CQD_INT(task, psi_states, 0, 100000),
      CQD_DOUBLE(task, e_target),
      Field{"task", "sweep_v0",
            [](RunConfig& c, const std::string& k, const std::string& v) { c.task.sweep_v0 = parse_list(k, v); },
            [](const RunConfig& c) { return format_list(c.task.sweep_v0); }},
      CQD_DOUBLE(task, window),
      CQD_DOUBLE(thresholds, gap_infinite_well),
      CQD_DOUBLE(thresholds, gap_closed_court),
      CQD_DOUBLE(thresholds, support_mass),
      CQD_DOUBLE(thresholds, breakdown_factor),
      Field{"output", "directory",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              if (v.empty()) throw ConfigError(k, "empty directory");
              c.output.directory = v;
            },
            [](const RunConfig& c) { return c.output.directory; }},
      Field{"output", "format",
            [](RunConfig& c, const std::string& k, const std::string& v) {
              if (v != "csv") throw ConfigError(k, "only csv output is supported, got '" + v + "'");
              c.output.format = v;
            },
            [](const RunConfig& c) { return c.output.format; }},
  };
  return table;
}

#undef CQD_DOUBLE
#undef CQD_INT

inline const Field* find_field(const std::string& section, const std::string& name) {
  for (const auto& f : fields()) {
    if (f.section == section && f.name == name) return &f;
  }
  return nullptr;
}

}  // namespace config_detail

inline bool operator==(const RunConfig& l, const RunConfig& r) {
  for (const auto& f : config_detail::fields()) {
    if (f.get(l) != f.get(r)) return false;
  }
  return true;
}

// Range checks that do not depend on the command.
inline void validate(const RunConfig& c) {
  const auto& p = c.potential;
  if (!(c.constants.hbar > 0)) throw ConfigError("constants.hbar", "must be positive");
  if (!(c.constants.mass > 0)) throw ConfigError("constants.mass", "must be positive");
  if (!(p.g > 0)) throw ConfigError("potential.g", "must be positive");
  if (p.kind != PotentialKind::Bouncer && !(p.a > 0)) throw ConfigError("potential.a", "must be positive");
  if (p.kind == PotentialKind::ClosedCourt && !(p.v0 >= 0)) throw ConfigError("potential.v0", "must be >= 0");
  if (!(c.task.window >= 0)) throw ConfigError("task.window", "must be >= 0");
  if (c.task.grid_points == 1) throw ConfigError("task.grid_points", "must be 0 or at least 2");
  for (double v : c.task.sweep_v0) {
    if (!(v >= 0)) throw ConfigError("task.sweep_v0", "entries must be >= 0");
  }
}

// Applies one "section.key=value" assignment.
inline void apply_override(RunConfig& c, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const std::string key = assignment.substr(0, eq);
  const auto dot = key.find('.');
  if (eq == std::string::npos || dot == std::string::npos) {
    throw ConfigError(key, "override must look like section.key=value");
  }
  const auto* f = config_detail::find_field(key.substr(0, dot), key.substr(dot + 1));
  if (!f) throw ConfigError(key, "unknown key");
  f->set(c, key, assignment.substr(eq + 1));
}

inline RunConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", "line " + std::to_string(e.line()) + ": " + e.message());
  }
  RunConfig c;
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) throw ConfigError(section, "key outside of a section");
    if (std::none_of(config_detail::fields().begin(), config_detail::fields().end(),
                     [&](const auto& f) { return f.section == section; })) {
      throw ConfigError(section, "unknown section");
    }
    for (const auto& [name, value] : body) {
      const auto* f = config_detail::find_field(section, name);
      if (!f) throw ConfigError(section + "." + name, "unknown key");
      f->set(c, f->key(), value.get_value<std::string>());
    }
  }
  validate(c);
  return c;
}

inline RunConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  return parse_config(in);
}

inline std::string emit_config(const RunConfig& c) {
  std::string out, section;
  for (const auto& f : config_detail::fields()) {
    if (f.section != section) {
      if (!section.empty()) out += "\n";
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += f.name + " = " + f.get(c) + "\n";
  }
  return out;
}

}  // namespace cqd
