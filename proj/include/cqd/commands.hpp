#pragma once

// Command implementations behind the cqd executable. Each cmd_* writes CSV
// files into config.output.directory and returns their paths.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "cqd/classical.hpp"
#include "cqd/config.hpp"
#include "cqd/correspondence.hpp"
#include "cqd/csv.hpp"
#include "cqd/errors.hpp"
#include "cqd/potential.hpp"
#include "cqd/quantum.hpp"

namespace cqd::cli {

enum ExitCode : int { kSuccess = 0, kOtherFailure = 1, kConfigFailure = 2, kNumericalFailure = 3 };

using Files = std::vector<std::string>;

struct TableOneRow {
  double v0;
  double energy;
  double p_minus;
  double p_plus;
  double delta_p;
};

// Reference rows (a = 25, hbar = 2m = 1).
inline constexpr TableOneRow kTableOneReference[] = {
    {10.0, 10.066, 0.257, 3.173, 2.916},
    {6.0, 10.073, 2.108, 3.174, 1.156},
    {2.0, 10.105, 2.847, 3.179, 0.332},
};

namespace detail {

inline std::string output_path(const RunConfig& cfg, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output.directory, ec);
  if (ec || !std::filesystem::is_directory(cfg.output.directory)) {
    throw ConfigError("output.directory", "cannot create directory '" + cfg.output.directory + "'");
  }
  return (std::filesystem::path(cfg.output.directory) / name).string();
}

inline void require_well(const RunConfig& cfg, const std::string& command) {
  if (cfg.potential.kind == PotentialKind::Bouncer) {
    throw ConfigError("potential.kind", command + " needs infinite_well or closed_court");
  }
}

inline std::vector<double> position_grid(const RunConfig& cfg, const PotentialSpec& spec) {
  const double e = cfg.task.energy;
  if (cfg.task.grid_points == 0) return default_position_grid(spec, e);
  const auto [lo, hi] = allowed_region(spec, e);
  const auto n = static_cast<std::size_t>(cfg.task.grid_points);
  if (spec.kind != PotentialKind::Bouncer) return numerics::linspace(lo, hi, n);
  // Stop one step short of the divergent apex.
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
  return g;
}

// Closed-court states below e_max, or the analytic states of a flat well.
inline std::vector<Eigenstate> spectrum(const RunConfig& cfg, const PotentialSpec& spec) {
  if (cfg.potential.kind == PotentialKind::InfiniteWell) {
    std::vector<Eigenstate> out;
    for (Parity parity : {Parity::Even, Parity::Odd}) {
      for (int n = 1; infinite_well_energy(spec, n, parity) <= cfg.task.e_max; ++n) {
        out.push_back(eigenstate_infinite_well(spec, n, parity));
      }
    }
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.energy < r.energy; });
    return out;
  }
  return closed_court_spectrum(spec, cfg.task.e_max);
}

// task.index > 0: the state of task.parity with that index.
// task.index = 0: the eigenvalue nearest task.energy, either parity.
inline Eigenstate select_state(const RunConfig& cfg, const PotentialSpec& spec) {
  if (cfg.task.index > 0 && cfg.potential.kind == PotentialKind::InfiniteWell) {
    return eigenstate_infinite_well(spec, cfg.task.index, cfg.task.parity);
  }
  if (cfg.task.index > 0) {
    for (double e : eigenvalues_closed_court(spec, cfg.task.e_max, cfg.task.parity).energies) {
      auto st = eigenstate_closed_court(spec, e, cfg.task.parity);
      if (st.index == cfg.task.index) return st;
    }
    throw ConfigError("task.index", "no " + to_string(cfg.task.parity) + " state with index " +
                                        std::to_string(cfg.task.index) + " below task.e_max");
  }
  const double e_max = std::max(cfg.task.e_max, 1.05 * cfg.task.energy);
  RunConfig wide = cfg;
  wide.task.e_max = e_max;
  const auto all = spectrum(wide, spec);
  if (all.empty()) throw ConfigError("task.energy", "no eigenstate below " + config_detail::format_double(e_max));
  return *std::min_element(all.begin(), all.end(), [&](const auto& l, const auto& r) {
    return std::abs(l.energy - cfg.task.energy) < std::abs(r.energy - cfg.task.energy);
  });
}

inline void write_histogram(const std::string& path, const HistogramRun& run) {
  std::vector<std::size_t> counts;
  if (!run.draws.empty()) counts = histogram_counts(run.draws, run.variable, run.bin_edges);
  CsvWriter csv(path, {"bin_lo", "bin_hi", "time_fraction", "count"});
  for (std::size_t i = 0; i < run.n_bins(); ++i) {
    csv.row(run.bin_edges[i], run.bin_edges[i + 1], run.bin_mass[i], counts.empty() ? 0 : counts[i]);
  }
}

inline void write_measurements(const std::string& path, const std::vector<Measurement>& draws) {
  CsvWriter csv(path, {"draw", "t", "position", "momentum"});
  for (std::size_t i = 0; i < draws.size(); ++i) csv.row(i, draws[i].t, draws[i].position, draws[i].momentum);
}

inline Files write_classical(const RunConfig& cfg, const PotentialSpec& spec, const std::string& prefix) {
  Files files;
  const double e = cfg.task.energy;
  const auto pos = classical_position_density(spec, e, position_grid(cfg, spec));
  const auto mom_grid = cfg.task.grid_points == 0
                            ? default_classical_momentum_grid(spec, e)
                            : default_classical_momentum_grid(spec, e, static_cast<std::size_t>(cfg.task.grid_points));
  const auto mom = classical_momentum_density(spec, e, mom_grid);

  files.push_back(output_path(cfg, prefix + "position_density.csv"));
  {
    CsvWriter csv(files.back(), {"x", "density"});
    for (std::size_t i = 0; i < pos.grid.size(); ++i) csv.row(pos.grid[i], pos.values[i]);
  }
  files.push_back(output_path(cfg, prefix + "momentum_density.csv"));
  {
    CsvWriter csv(files.back(), {"p", "density"});
    for (std::size_t i = 0; i < mom.grid.size(); ++i) csv.row(mom.grid[i], mom.values[i]);
  }
  if (!mom.atoms.empty()) {
    files.push_back(output_path(cfg, prefix + "momentum_atoms.csv"));
    CsvWriter csv(files.back(), {"p", "weight"});
    for (const auto& a : mom.atoms) csv.row(a.location, a.weight);
  }

  std::vector<Measurement> draws;
  if (cfg.task.n_draws > 0) {
    draws = sample_measurements(spec, e, static_cast<std::size_t>(cfg.task.n_draws), cfg.task.seed);
    files.push_back(output_path(cfg, prefix + "measurements.csv"));
    write_measurements(files.back(), draws);
  }
  for (Variable v : {Variable::Position, Variable::Momentum}) {
    auto run = project_trajectory(spec, e, cfg.task.n_bins, v);
    run.draws = draws;
    files.push_back(output_path(cfg, prefix + "histogram_" + to_string(v) + ".csv"));
    write_histogram(files.back(), run);
  }
  return files;
}

}  // namespace detail

inline Files cmd_classical(const RunConfig& cfg) {
  const auto spec = cfg.spec();
  check_regime(spec, cfg.task.energy);
  return detail::write_classical(cfg, spec, "classical_");
}

inline Files cmd_eigensolve(const RunConfig& cfg) {
  detail::require_well(cfg, "eigensolve");
  const auto spec = cfg.spec();
  spec.validate();
  Files files;
  const auto states = detail::spectrum(cfg, spec);
  files.push_back(detail::output_path(cfg, "eigenvalues.csv"));
  {
    CsvWriter csv(files.back(), {"index", "parity", "energy", "residual"});
    for (const auto& st : states) {
      csv.row(st.index, to_string(st.parity), st.energy, eigen_residual(spec, st.energy, st.parity));
    }
  }
  const std::size_t keep = std::min<std::size_t>(states.size(), static_cast<std::size_t>(cfg.task.psi_states));
  if (keep > 0) {
    files.push_back(detail::output_path(cfg, "psi.csv"));
    std::vector<std::string> header{"x"};
    for (std::size_t i = 0; i < keep; ++i) {
      header.push_back("psi_" + to_string(states[i].parity) + "_" + std::to_string(states[i].index));
    }
    CsvWriter csv(files.back(), header);
    const auto& grid = states.front().grid;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      std::vector<CsvCell> row{grid[j]};
      for (std::size_t i = 0; i < keep; ++i) row.emplace_back(states[i].psi[j]);
      csv.row(row);
    }
  }
  return files;
}

inline Files cmd_momentum(const RunConfig& cfg) {
  detail::require_well(cfg, "momentum");
  const auto spec = cfg.spec();
  spec.validate();
  const auto st = detail::select_state(cfg, spec);
  auto grid = default_momentum_grid(st);
  if (cfg.task.grid_points > 0) {
    grid = numerics::linspace(grid.front(), grid.back(), static_cast<std::size_t>(cfg.task.grid_points));
  }
  const auto phi = momentum_transform(st, grid);
  const auto cl = classical_momentum_density(spec, st.energy, grid);
  Files files{detail::output_path(cfg, "momentum.csv")};
  {
    CsvWriter csv(files.back(), {"p", "phi_re", "phi_im", "density", "classical_density"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
      csv.row(grid[i], phi.phi[i].real(), phi.phi[i].imag(), phi.density[i], cl.values[i]);
    }
  }
  files.push_back(detail::output_path(cfg, "momentum_state.csv"));
  {
    const auto cs = classical_state(spec, st.energy);
    CsvWriter csv(files.back(), {"index", "parity", "energy", "p_minus", "p_plus", "norm", "support_mass"});
    csv.row(st.index, to_string(st.parity), st.energy, cs.p_minus, cs.p_plus, phi.norm(),
            momentum_support_mass(phi, cs, spec));
  }
  if (!cl.atoms.empty()) {
    files.push_back(detail::output_path(cfg, "momentum_atoms.csv"));
    CsvWriter csv(files.back(), {"p", "weight"});
    for (const auto& a : cl.atoms) csv.row(a.location, a.weight);
  }
  return files;
}

inline Files cmd_table1(const RunConfig& cfg) {
  const double a = 25.0;
  const Constants c{1.0, 0.5, 1.0};
  Files files{detail::output_path(cfg, "table1.csv")};
  CsvWriter csv(files.back(), {"v0", "a", "index", "parity", "energy", "p_minus", "p_plus", "delta_p",
                               "hbar_over_a", "ref_energy", "ref_p_minus", "ref_p_plus", "ref_delta_p",
                               "dev_energy", "dev_p_minus", "dev_p_plus", "dev_delta_p"});
  for (const auto& ref : kTableOneReference) {
    const auto spec = PotentialSpec::closed_court(ref.v0, a, c);
    RunConfig local = cfg;
    local.task.energy = ref.energy;
    local.task.index = 0;
    local.task.e_max = 1.05 * ref.energy;
    const auto st = detail::select_state(local, spec);
    const auto cs = classical_state(spec, st.energy);
    csv.row(ref.v0, a, st.index, to_string(st.parity), st.energy, cs.p_minus, cs.p_plus, cs.delta_p(),
            c.hbar / a, ref.energy, ref.p_minus, ref.p_plus, ref.delta_p, std::abs(st.energy - ref.energy),
            std::abs(cs.p_minus - ref.p_minus), std::abs(cs.p_plus - ref.p_plus),
            std::abs(cs.delta_p() - ref.delta_p));
  }
  return files;
}

inline Files cmd_sweep(const RunConfig& cfg) {
  detail::require_well(cfg, "sweep");
  CompareOptions opt;
  opt.window = cfg.task.window;
  opt.breakdown_factor = cfg.thresholds.breakdown_factor;
  const auto reports = v0_sweep(cfg.potential.a, cfg.constants.hbar, cfg.constants.mass, cfg.task.e_target,
                                cfg.task.sweep_v0, opt);
  Files files{detail::output_path(cfg, "sweep.csv")};
  CsvWriter csv(files.back(), {"v0", "a", "energy", "index", "parity", "window", "l2_gap_position",
                               "support_mass_momentum", "delta_p_classical", "delta_p_intrinsic",
                               "plateau_height", "classical_unreliable", "support_mass_ok", "flagged", "note"});
  for (const auto& r : reports) {
    if (r.flagged) {
      csv.row(r.spec.v0, r.spec.a, NAN, 0, "", NAN, NAN, NAN, NAN, r.delta_p_intrinsic, NAN, 0, 0, 1, r.note);
      continue;
    }
    csv.row(r.spec.v0, r.spec.a, r.energy, r.index, to_string(r.parity), r.window, r.l2_gap_position,
            r.support_mass_momentum, r.delta_p_classical, r.delta_p_intrinsic, r.plateau_height,
            r.classical_unreliable ? 1 : 0, r.support_mass_momentum > cfg.thresholds.support_mass ? 1 : 0, 0,
            r.note);
  }
  return files;
}

// Bouncer run: one period of the orbit, projection histograms with sampled
// counts, and the classical densities.
inline Files cmd_bounce_sim(const RunConfig& cfg) {
  RunConfig local = cfg;
  local.potential.kind = PotentialKind::Bouncer;
  const auto spec = local.spec();
  check_regime(spec, cfg.task.energy);
  Files files;
  const auto orbit = classical_orbit(spec, cfg.task.energy);
  files.push_back(detail::output_path(cfg, "bounce_trajectory.csv"));
  {
    CsvWriter csv(files.back(), {"t", "z", "p"});
    const std::size_t n = 1001;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = orbit.period * static_cast<double>(i) / static_cast<double>(n - 1);
      const auto [z, p] = orbit.at(std::min(t, std::nextafter(orbit.period, 0.0)));
      csv.row(t, z, p);
    }
  }
  const auto rest = detail::write_classical(local, spec, "bounce_");
  files.insert(files.end(), rest.begin(), rest.end());
  return files;
}

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"classical", "eigensolve", "momentum", "table1", "sweep", "bounce-sim"};
  return names;
}

inline std::string quote(const std::string& s) {
  std::string q = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') q += '\\';
    q += (c == '\n') ? ' ' : c;
  }
  return q + "\"";
}

// One line: error=<kind> key=<section.key|-> message="<text>"
inline std::string diagnostic(const std::string& kind, const std::string& key, const std::string& message) {
  return "error=" + kind + " key=" + (key.empty() ? "-" : key) + " message=" + quote(message);
}

// Runs one command; errors become a single diagnostic line on `err` and an
// exit code.
inline int run_command(const std::string& command, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
    Files files;
    if (command == "classical") files = cmd_classical(cfg);
    else if (command == "eigensolve") files = cmd_eigensolve(cfg);
    else if (command == "momentum") files = cmd_momentum(cfg);
    else if (command == "table1") files = cmd_table1(cfg);
    else if (command == "sweep") files = cmd_sweep(cfg);
    else if (command == "bounce-sim") files = cmd_bounce_sim(cfg);
    else throw ConfigError("", "unknown command '" + command + "'");
    for (const auto& f : files) out << f << '\n';
    return kSuccess;
  } catch (const ConfigError& e) {
    err << diagnostic("config", e.key(), e.what()) << '\n';
    return kConfigFailure;
  } catch (const RegimeError& e) {
    err << diagnostic("config", "", e.what()) << '\n';
    return kConfigFailure;
  } catch (const WindowTooSmall& e) {
    err << diagnostic("config", "task.window", e.what()) << '\n';
    return kConfigFailure;
  } catch (const NumericalError& e) {
    err << diagnostic("numerical", "", e.what()) << '\n';
    return kNumericalFailure;
  } catch (const ResolutionError& e) {
    err << diagnostic("numerical", "", e.what()) << '\n';
    return kNumericalFailure;
  } catch (const std::invalid_argument& e) {
    err << diagnostic("config", "", e.what()) << '\n';
    return kConfigFailure;
  } catch (const std::exception& e) {
    err << diagnostic("internal", "", e.what()) << '\n';
    return kOtherFailure;
  }
}

}  // namespace cqd::cli
