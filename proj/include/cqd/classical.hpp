#pragma once

// Classical probability densities for position and momentum, the exact
// piecewise orbit, trajectory projection histograms and seeded Monte Carlo
// "measurements".
//
// P_CL(x) = 1 / (tau v(x)) and P_CL(p) = sum over orbit branches of
// 1 / (T_CL |F|). Orbits are built from constant-force segments, so every
// time fraction below is computed in closed form rather than by stepping.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cqd/errors.hpp"
#include "cqd/numerics.hpp"
#include "cqd/potential.hpp"
#include "cqd/random.hpp"

namespace cqd {

enum class Variable { Position, Momentum };

inline std::string to_string(Variable v) { return v == Variable::Position ? "position" : "momentum"; }

struct Interval {
  double lo;
  double hi;
  bool contains(double v) const { return v >= lo && v <= hi; }
  double width() const { return hi - lo; }
};

struct Atom {
  double location;
  double weight;
};

struct DensityCurve {
  Variable variable = Variable::Position;
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<Interval> support;
  // Endpoints where the density diverges integrably; never sampled.
  std::vector<double> divergent_endpoints;
  // Point masses (the flat well's momentum distribution).
  std::vector<Atom> atoms;
  // Exact mass of the parts of the support not spanned by grid points.
  double omitted_mass = 0.0;

  // Trapezoid rule over consecutive grid pairs lying in the same support
  // interval; pairs that straddle a gap or a support edge are skipped.
  double trapezoid_mass() const {
    double sum = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      for (const auto& s : support) {
        if (s.contains(grid[i - 1]) && s.contains(grid[i])) {
          sum += 0.5 * (grid[i] - grid[i - 1]) * (values[i] + values[i - 1]);
          break;
        }
      }
    }
    return sum;
  }

  double atom_mass() const {
    double m = 0.0;
    for (const auto& a : atoms) m += a.weight;
    return m;
  }

  double total_mass() const { return trapezoid_mass() + omitted_mass + atom_mass(); }
};

struct Measurement {
  double t;
  double position;
  double momentum;
};

struct HistogramRun {
  Variable variable = Variable::Position;
  std::vector<double> bin_edges;
  std::vector<double> bin_mass;
  std::vector<Measurement> draws;

  std::size_t n_bins() const { return bin_mass.size(); }
  std::size_t n_draws() const { return draws.size(); }
};

// One constant-force stretch of the orbit, monotone in both x and p.
struct OrbitSegment {
  double t_begin;
  double t_end;
  double x_begin;
  double x_end;
  double p_begin;
  double p_end;
  double force;

  double duration() const { return t_end - t_begin; }

  std::pair<double, double> at(double t, double mass) const {
    const double s = t - t_begin;
    const double x = x_begin + (p_begin * s + 0.5 * force * s * s) / mass;
    return {std::clamp(x, std::min(x_begin, x_end), std::max(x_begin, x_end)), p_begin + force * s};
  }

  // Time at which the segment passes position x (clamped to the segment).
  double time_at_position(double x, double mass) const {
    const double lo = std::min(x_begin, x_end), hi = std::max(x_begin, x_end);
    x = std::clamp(x, lo, hi);
    if (x == x_begin) return t_begin;
    if (x == x_end) return t_end;
    const double direction = (p_begin + p_end) >= 0 ? 1.0 : -1.0;
    const double p_sq = p_begin * p_begin + 2.0 * mass * force * (x - x_begin);
    const double p_x = direction * std::sqrt(std::max(0.0, p_sq));
    const double denom = p_begin + p_x;
    if (denom == 0.0) return t_begin;
    return t_begin + 2.0 * mass * (x - x_begin) / denom;
  }
};

struct Orbit {
  std::vector<OrbitSegment> segments;
  double period = 0.0;
  double mass = 1.0;

  std::pair<double, double> at(double t) const {
    t = std::fmod(t, period);
    if (t < 0) t += period;
    for (const auto& seg : segments) {
      if (t <= seg.t_end) return seg.at(t, mass);
    }
    return segments.back().at(t, mass);
  }
};

// ---------------------------------------------------------------------------
// Energy bookkeeping

// tau = sqrt(m/2) * integral of dx / sqrt(E - V(x)) over the allowed region.
// On each straight piece of V the substitution u = sqrt(E - V) makes the
// integrand the constant 2/|V'|, so the turning-point singularity drops out.
inline double half_period(const PotentialSpec& spec, double energy) {
  check_regime(spec, energy);
  double integral = 0.0;
  for (const auto& piece : linear_pieces(spec, energy)) {
    const double k0 = std::max(0.0, energy - piece.v_at(piece.x_begin));
    const double k1 = std::max(0.0, energy - piece.v_at(piece.x_end));
    if (piece.slope == 0.0) {
      integral += (piece.x_end - piece.x_begin) / std::sqrt(k0);
    } else {
      const double u0 = std::sqrt(k0), u1 = std::sqrt(k1);
      // integral over u of the constant 2/|slope|
      integral += 2.0 / std::abs(piece.slope) * std::abs(u0 - u1);
    }
  }
  return std::sqrt(spec.constants.mass / 2.0) * integral;
}

inline ClassicalState classical_state(const PotentialSpec& spec, double energy) {
  check_regime(spec, energy);
  const double m = spec.constants.mass;
  ClassicalState s;
  s.energy = energy;
  s.p_plus = std::sqrt(2.0 * m * energy);
  s.p_minus = spec.kind == PotentialKind::ClosedCourt ? std::sqrt(2.0 * m * (energy - spec.v0)) : 0.0;
  s.tau = half_period(spec, energy);
  s.turning_points = allowed_region(spec, energy);
  return s;
}

// ---------------------------------------------------------------------------
// Orbit

// Starts at the left wall (wells) or at the floor moving up (bouncer).
inline Orbit classical_orbit(const PotentialSpec& spec, double energy) {
  const ClassicalState st = classical_state(spec, energy);
  const double m = spec.constants.mass;
  Orbit orbit;
  orbit.mass = m;
  auto& seg = orbit.segments;
  if (spec.kind == PotentialKind::Bouncer) {
    const double force = -m * spec.constants.g;
    const double h = st.turning_points.second;
    const double rise = st.p_plus / (m * spec.constants.g);
    seg.push_back({0.0, rise, 0.0, h, st.p_plus, 0.0, force});
    seg.push_back({rise, 2 * rise, h, 0.0, 0.0, -st.p_plus, force});
  } else if (spec.is_flat()) {
    const double a = spec.a;
    const double cross = 2.0 * a * m / st.p_plus;
    seg.push_back({0.0, cross, -a, a, st.p_plus, st.p_plus, 0.0});
    seg.push_back({cross, 2 * cross, a, -a, -st.p_plus, -st.p_plus, 0.0});
  } else {
    const double a = spec.a;
    const double f = spec.v0 / a;
    const double quarter = st.delta_p() / f;
    const double pm = st.p_minus, pp = st.p_plus;
    seg.push_back({0.0, quarter, -a, 0.0, pm, pp, f});
    seg.push_back({quarter, 2 * quarter, 0.0, a, pp, pm, -f});
    seg.push_back({2 * quarter, 3 * quarter, a, 0.0, -pm, -pp, -f});
    seg.push_back({3 * quarter, 4 * quarter, 0.0, -a, -pp, -pm, f});
  }
  orbit.period = seg.back().t_end;
  return orbit;
}

// (position, momentum) at time t; t = 0 is the left wall (wells) or the
// bounce (bouncer).
inline std::pair<double, double> trajectory(const PotentialSpec& spec, double energy, double t) {
  return classical_orbit(spec, energy).at(t);
}

namespace classical_detail {

// Time the orbit spends with `variable` in [lo, hi]. Constant-momentum
// segments (flat well) count only if their momentum lies in [lo, hi) or, with
// closed_right, [lo, hi].
inline double time_in_range(const Orbit& orbit, Variable variable, double lo, double hi,
                            bool closed_right = true) {
  double total = 0.0;
  for (const auto& seg : orbit.segments) {
    if (variable == Variable::Position) {
      const double t0 = seg.time_at_position(lo, orbit.mass);
      const double t1 = seg.time_at_position(hi, orbit.mass);
      total += std::abs(t1 - t0);
    } else if (seg.force == 0.0) {
      const double p = seg.p_begin;
      if (p >= lo && (p < hi || (closed_right && p == hi))) total += seg.duration();
    } else {
      const double pmin = std::min(seg.p_begin, seg.p_end);
      const double pmax = std::max(seg.p_begin, seg.p_end);
      const double overlap = std::min(hi, pmax) - std::max(lo, pmin);
      if (overlap > 0) total += overlap / std::abs(seg.force);
    }
  }
  return total;
}

inline double mass_in_range(const Orbit& orbit, Variable variable, double lo, double hi) {
  if (hi <= lo) return 0.0;
  return time_in_range(orbit, variable, lo, hi) / orbit.period;
}

inline void require_sorted(std::span<const double> grid) {
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw std::invalid_argument("density grid must be sorted ascending");
  }
}

inline double sliver_mass(const Orbit& orbit, Variable variable, const std::vector<Interval>& support,
                          std::span<const double> grid) {
  double omitted = 0.0;
  for (const auto& s : support) {
    if (s.width() == 0.0) continue;
    auto first = std::find_if(grid.begin(), grid.end(), [&](double g) { return s.contains(g); });
    if (first == grid.end()) {
      omitted += mass_in_range(orbit, variable, s.lo, s.hi);
      continue;
    }
    auto last = std::find_if(grid.rbegin(), grid.rend(), [&](double g) { return s.contains(g); });
    omitted += mass_in_range(orbit, variable, s.lo, *first);
    omitted += mass_in_range(orbit, variable, *last, s.hi);
  }
  return omitted;
}

// Maximal runs of the orbit with continuous, monotone p(t) and constant force.
struct MomentumBranch {
  double p_lo;
  double p_hi;
  double force;
};

inline std::vector<MomentumBranch> momentum_branches(const Orbit& orbit) {
  std::vector<MomentumBranch> out;
  const OrbitSegment* prev = nullptr;
  for (const auto& seg : orbit.segments) {
    if (seg.force == 0.0) {
      prev = nullptr;
      continue;
    }
    const double lo = std::min(seg.p_begin, seg.p_end);
    const double hi = std::max(seg.p_begin, seg.p_end);
    if (prev && prev->force == seg.force && prev->p_end == seg.p_begin) {
      out.back().p_lo = std::min(out.back().p_lo, lo);
      out.back().p_hi = std::max(out.back().p_hi, hi);
    } else {
      out.push_back({lo, hi, seg.force});
    }
    prev = &seg;
  }
  return out;
}

inline std::vector<Interval> merge_intervals(std::vector<Interval> in) {
  std::sort(in.begin(), in.end(), [](const Interval& l, const Interval& r) { return l.lo < r.lo; });
  std::vector<Interval> out;
  for (const auto& iv : in) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, iv.hi);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

}  // namespace classical_detail

// ---------------------------------------------------------------------------
// Densities

inline std::vector<double> divergent_endpoints(const PotentialSpec& spec, double energy) {
  if (spec.kind == PotentialKind::Bouncer) return {allowed_region(spec, energy).second};
  return {};
}

inline DensityCurve classical_position_density(const PotentialSpec& spec, double energy,
                                               std::span<const double> grid) {
  const ClassicalState st = classical_state(spec, energy);
  classical_detail::require_sorted(grid);
  const double m = spec.constants.mass;
  const auto [lo, hi] = st.turning_points;
  DensityCurve curve;
  curve.variable = Variable::Position;
  curve.support = {{lo, hi}};
  curve.divergent_endpoints = divergent_endpoints(spec, energy);
  curve.grid.assign(grid.begin(), grid.end());
  curve.values.reserve(grid.size());
  for (double x : grid) {
    if (x < lo || x > hi) {
      throw SupportError("position " + std::to_string(x) + " outside the allowed region [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    for (double d : curve.divergent_endpoints) {
      if (x == d) throw SupportError("grid must be strictly interior at the divergent endpoint " + std::to_string(d));
    }
    const double kinetic = energy - evaluate_potential(spec, x);
    if (!(kinetic > 0)) throw SupportError("position " + std::to_string(x) + " is a turning point");
    const double speed = std::sqrt(2.0 * kinetic / m);
    curve.values.push_back(1.0 / (st.tau * speed));
  }
  const Orbit orbit = classical_orbit(spec, energy);
  curve.omitted_mass = classical_detail::sliver_mass(orbit, Variable::Position, curve.support, grid);
  return curve;
}

// Branch sum of 1 / (T_CL |F|). Grid points outside the momentum support get 0.
inline DensityCurve classical_momentum_density(const PotentialSpec& spec, double energy,
                                               std::span<const double> grid) {
  const ClassicalState st = classical_state(spec, energy);
  classical_detail::require_sorted(grid);
  const Orbit orbit = classical_orbit(spec, energy);
  const double period = st.period();
  DensityCurve curve;
  curve.variable = Variable::Momentum;
  curve.grid.assign(grid.begin(), grid.end());
  curve.values.assign(grid.size(), 0.0);

  if (spec.is_flat()) {
    // Two delta functions at +-p; nothing finite to sample.
    curve.support = {{-st.p_plus, -st.p_plus}, {st.p_plus, st.p_plus}};
    curve.atoms = {{-st.p_plus, 0.5}, {st.p_plus, 0.5}};
    return curve;
  }

  const auto branches = classical_detail::momentum_branches(orbit);
  std::vector<Interval> ranges;
  for (const auto& b : branches) ranges.push_back({b.p_lo, b.p_hi});
  curve.support = classical_detail::merge_intervals(ranges);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double sum = 0.0;
    for (const auto& b : branches) {
      if (grid[i] >= b.p_lo && grid[i] <= b.p_hi) sum += 1.0 / (period * std::abs(b.force));
    }
    curve.values[i] = sum;
  }
  curve.omitted_mass = classical_detail::sliver_mass(orbit, Variable::Momentum, curve.support, grid);
  return curve;
}

// ---------------------------------------------------------------------------
// Default sampling grids

// Wells: uniform with 0 and +-a as nodes, spaced so the Euler-Maclaurin
// estimate of the trapezoid error stays below ~1e-8. Bouncer: nodes uniform
// in u = sqrt(H - z) down to u = 0.2 sqrt(H), then geometric in u towards the
// divergent endpoint, stopping at u = 1e-4 sqrt(H).
inline std::vector<double> default_position_grid(const PotentialSpec& spec, double energy) {
  const ClassicalState st = classical_state(spec, energy);
  if (spec.kind == PotentialKind::Bouncer) {
    const double h = st.turning_points.second;
    const double top = std::sqrt(h);
    std::vector<double> u;
    const int uniform = 2000;
    for (int i = 0; i < uniform; ++i) u.push_back(top * (1.0 - 0.8 * i / uniform));
    const double ratio = 1.0 - 4e-4;
    for (double v = 0.2 * top; v > 1e-4 * top; v *= ratio) u.push_back(v);
    std::vector<double> z;
    z.reserve(u.size());
    for (double v : u) z.push_back(h - v * v);
    z.front() = 0.0;
    return z;
  }
  const double a = spec.a;
  double jumps = 0.0;  // sum of |f'| jumps across the smooth pieces
  if (!spec.is_flat()) {
    const double scale = spec.v0 / (4.0 * a * (std::sqrt(energy) - std::sqrt(energy - spec.v0)));
    const double slope = spec.v0 / (2.0 * a);
    jumps = 2.0 * scale * slope * (std::pow(energy - spec.v0, -1.5) - std::pow(energy, -1.5));
  }
  std::size_t intervals = 2000;
  if (jumps > 0) {
    const double h = std::sqrt(12.0 * 1e-8 / jumps);
    intervals = std::max<std::size_t>(intervals, static_cast<std::size_t>(std::ceil(2 * a / h)));
    intervals = std::min<std::size_t>(intervals, 2000000);
  }
  intervals += intervals % 2;
  auto grid = numerics::linspace(-a, a, intervals + 1);
  grid[intervals / 2] = 0.0;
  return grid;
}

// Uniform on [-1.5 p+, 1.5 p+] with the support edges +-p-, +-p+ inserted.
inline std::vector<double> default_classical_momentum_grid(const PotentialSpec& spec, double energy,
                                                           std::size_t points = 4001) {
  const ClassicalState st = classical_state(spec, energy);
  auto grid = numerics::linspace(-1.5 * st.p_plus, 1.5 * st.p_plus, points);
  for (double p : {-st.p_plus, -st.p_minus, st.p_minus, st.p_plus}) grid.push_back(p);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

// ---------------------------------------------------------------------------
// Trajectory projection and sampling

inline std::pair<double, double> variable_range(const PotentialSpec& spec, double energy, Variable variable) {
  const ClassicalState st = classical_state(spec, energy);
  if (variable == Variable::Position) return st.turning_points;
  return {-st.p_plus, st.p_plus};
}

// bin_mass[i] = (time with `variable` in bin i) / T_CL, from the analytic orbit.
inline HistogramRun project_trajectory(const PotentialSpec& spec, double energy, int n_bins,
                                       Variable variable) {
  if (n_bins < 2) throw std::invalid_argument("project_trajectory: n_bins must be >= 2");
  const Orbit orbit = classical_orbit(spec, energy);
  const auto [lo, hi] = variable_range(spec, energy, variable);
  HistogramRun run;
  run.variable = variable;
  run.bin_edges = numerics::linspace(lo, hi, static_cast<std::size_t>(n_bins) + 1);
  run.bin_mass.resize(n_bins);
  for (int i = 0; i < n_bins; ++i) {
    const bool last = i == n_bins - 1;
    run.bin_mass[i] = classical_detail::time_in_range(orbit, variable, run.bin_edges[i],
                                                      run.bin_edges[i + 1], last) /
                      orbit.period;
  }
  return run;
}

// n draws t ~ U[0, T_CL), each mapped through the orbit.
inline std::vector<Measurement> sample_measurements(const PotentialSpec& spec, double energy,
                                                    std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_measurements: n must be >= 1");
  const Orbit orbit = classical_orbit(spec, energy);
  const CounterRng rng(seed);
  std::vector<Measurement> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = orbit.period * rng.uniform(i);
    const auto [x, p] = orbit.at(t);
    out.push_back({t, x, p});
  }
  return out;
}

// Counts of draws per bin ([lo, hi) bins, last bin closed).
inline std::vector<std::size_t> histogram_counts(std::span<const Measurement> draws,
                                                 Variable variable, std::span<const double> edges) {
  std::vector<std::size_t> counts(edges.size() - 1, 0);
  for (const auto& d : draws) {
    const double v = variable == Variable::Position ? d.position : d.momentum;
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    std::size_t bin = static_cast<std::size_t>(std::distance(edges.begin(), it));
    if (bin == 0) continue;
    bin -= 1;
    if (bin >= counts.size()) {
      if (v == edges.back()) bin = counts.size() - 1;
      else continue;
    }
    ++counts[bin];
  }
  return counts;
}

}  // namespace cqd
