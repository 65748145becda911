#pragma once

// Bound states of the closed court (piecewise Airy) and the infinite well
// (analytic), and their momentum-space wavefunctions
//
//   phi(p) = (2 pi hbar)^{-1/2} * integral of psi(x) e^{+i p x / hbar} dx.
//
// On 0 <= x <= a the closed-court solution is C Ai(z) + D Bi(z) with
// z = (x - sigma) / rho, rho = (hbar^2 a / (2 m V0))^{1/3}, sigma = E a / V0;
// the left half follows from parity. Eigenvalue conditions:
//   odd  (psi(0) = 0):  Ai(z0) Bi(za) - Ai(za) Bi(z0)   = 0
//   even (psi'(0) = 0): Ai'(z0) Bi(za) - Ai(za) Bi'(z0) = 0
// with z0 = -sigma / rho and za = (a - sigma) / rho.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cqd/airy.hpp"
#include "cqd/classical.hpp"
#include "cqd/errors.hpp"
#include "cqd/numerics.hpp"
#include "cqd/potential.hpp"

namespace cqd {

enum class Parity { Even, Odd };

inline std::string to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

enum class StateSource { AiryPiecewise, InfiniteWellAnalytic };

struct AiryScales {
  double rho;
  double sigma;

  static AiryScales of(const PotentialSpec& spec, double energy) {
    const auto& c = spec.constants;
    return {std::cbrt(c.hbar * c.hbar * spec.a / (2.0 * c.mass * spec.v0)), energy * spec.a / spec.v0};
  }
  double z_at(double x) const { return (x - sigma) / rho; }
};

struct Eigenstate {
  Parity parity = Parity::Even;
  int index = 0;
  double energy = 0.0;
  StateSource source = StateSource::InfiniteWellAnalytic;
  PotentialSpec spec{};

  // Airy piecewise: psi = c_ai Ai(z) + c_bi Bi(z) on [0, a].
  double c_ai = 0.0;
  double c_bi = 0.0;
  AiryScales scales{1.0, 0.0};
  // Analytic well: psi = amplitude * cos(k x) or amplitude * sin(k x).
  double wavenumber = 0.0;
  double amplitude = 0.0;

  // Samples on a uniform grid over [-a, a].
  std::vector<double> grid;
  std::vector<double> psi;

  double value(double x) const {
    if (std::abs(x) > spec.a) return 0.0;
    if (source == StateSource::InfiniteWellAnalytic) {
      return parity == Parity::Even ? amplitude * std::cos(wavenumber * x)
                                    : amplitude * std::sin(wavenumber * x);
    }
    const auto v = airy_eval(scales.z_at(std::abs(x)));
    const double w = c_ai * v.ai + c_bi * v.bi;
    return (x < 0 && parity == Parity::Odd) ? -w : w;
  }

  double derivative(double x) const {
    if (std::abs(x) > spec.a) return 0.0;
    if (source == StateSource::InfiniteWellAnalytic) {
      return parity == Parity::Even ? -amplitude * wavenumber * std::sin(wavenumber * x)
                                    : amplitude * wavenumber * std::cos(wavenumber * x);
    }
    const auto v = airy_eval(scales.z_at(std::abs(x)));
    const double w = (c_ai * v.ai_prime + c_bi * v.bi_prime) / scales.rho;
    return (x < 0 && parity == Parity::Even) ? -w : w;
  }

  std::vector<double> sample(std::span<const double> xs) const {
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(value(x));
    return out;
  }
};

struct MomentumWavefunction {
  std::vector<double> grid;
  std::vector<std::complex<double>> phi;
  std::vector<double> density;

  double norm() const { return numerics::trapezoid(grid, density); }
};

struct EigenvalueSearch {
  std::vector<double> energies;
  std::vector<std::string> warnings;
};

namespace quantum_detail {

inline constexpr int kStateSamples = 4001;
inline constexpr double kEigenResidualTolerance = 1e-8;

inline void require_closed_court(const PotentialSpec& spec) {
  spec.validate();
  if (spec.kind != PotentialKind::ClosedCourt) {
    throw RegimeError("closed-court routine called on a " + to_string(spec.kind) + " potential");
  }
}

// Boundary determinant divided by the Airy modulus envelopes of its
// arguments, so its magnitude is O(1) independent of E.
inline double scaled_determinant(const PotentialSpec& spec, double energy, Parity parity) {
  const auto s = AiryScales::of(spec, energy);
  const double z0 = s.z_at(0.0), za = s.z_at(spec.a);
  if (parity == Parity::Odd) {
    return airy_cross(z0, za) / (airy_modulus(z0) * airy_modulus(za));
  }
  return airy_cross_prime(z0, za) / (airy_modulus_prime(z0) * airy_modulus(za));
}

// Phase-space area / (2 pi hbar): expected number of states of one parity
// with energy in (V0, E].
inline double weyl_count_one_parity(const PotentialSpec& spec, double energy) {
  const auto& c = spec.constants;
  const double factor = 2.0 * std::sqrt(2.0 * c.mass) * (2.0 * spec.a / (3.0 * spec.v0));
  const double action = factor * (std::pow(energy, 1.5) - std::pow(energy - spec.v0, 1.5));
  const double action_v0 = factor * std::pow(spec.v0, 1.5);
  return (action - action_v0) / (2.0 * std::numbers::pi * c.hbar);
}

inline double bisect_root(const PotentialSpec& spec, Parity parity, double lo, double hi, double f_lo) {
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = scaled_determinant(spec, mid, parity);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0) == (f_lo < 0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline std::vector<double> uniform_state_grid(double a) {
  auto g = numerics::linspace(-a, a, kStateSamples);
  g[kStateSamples / 2] = 0.0;
  return g;
}

// Sign changes of psi strictly inside (0, a).
inline int interior_nodes(const Eigenstate& st) {
  const double a = st.spec.a;
  const double p_max = std::sqrt(2.0 * st.spec.constants.mass * st.energy);
  const double wavelength = 2.0 * std::numbers::pi * st.spec.constants.hbar / p_max;
  const int n = std::max(400, static_cast<int>(std::ceil(40.0 * a / wavelength)));
  int nodes = 0;
  double prev = st.value(a * 0.5 / n);
  for (int i = 1; i < n; ++i) {
    const double cur = st.value(a * (i + 0.5) / n);
    if ((cur < 0) != (prev < 0)) ++nodes;
    prev = cur;
  }
  return nodes;
}

}  // namespace quantum_detail

// ---------------------------------------------------------------------------
// Infinite well

inline double infinite_well_wavenumber(double a, int n, Parity parity) {
  return parity == Parity::Even ? (n - 0.5) * std::numbers::pi / a : n * std::numbers::pi / a;
}

inline double infinite_well_energy(const PotentialSpec& spec, int n, Parity parity) {
  const auto& c = spec.constants;
  const double k = infinite_well_wavenumber(spec.a, n, parity);
  return c.hbar * c.hbar * k * k / (2.0 * c.mass);
}

// Even: a^{-1/2} cos((n - 1/2) pi x / a); odd: a^{-1/2} sin(n pi x / a).
inline Eigenstate eigenstate_infinite_well(const PotentialSpec& spec, int n, Parity parity) {
  spec.validate();
  if (!spec.is_flat()) throw RegimeError("eigenstate_infinite_well needs a flat well");
  if (n < 1) throw std::invalid_argument("state index must be >= 1");
  Eigenstate st;
  st.parity = parity;
  st.index = n;
  st.spec = spec;
  st.source = StateSource::InfiniteWellAnalytic;
  st.wavenumber = infinite_well_wavenumber(spec.a, n, parity);
  st.amplitude = 1.0 / std::sqrt(spec.a);
  st.energy = infinite_well_energy(spec, n, parity);
  st.grid = quantum_detail::uniform_state_grid(spec.a);
  st.psi = st.sample(st.grid);
  return st;
}

// ---------------------------------------------------------------------------
// Closed court

// All eigenvalues of the given parity in (V0, e_max], ascending.
inline EigenvalueSearch eigenvalues_closed_court(const PotentialSpec& spec, double e_max, Parity parity) {
  quantum_detail::require_closed_court(spec);
  if (!(e_max > 0)) throw RegimeError("e_max must be positive");
  EigenvalueSearch out;
  if (spec.is_flat()) {
    for (int n = 1;; ++n) {
      const double e = infinite_well_energy(spec, n, parity);
      if (e > e_max) break;
      out.energies.push_back(e);
    }
    return out;
  }
  if (e_max <= spec.v0) return out;

  // ~12 samples per level spacing pi hbar / tau; same-parity roots are twice
  // as far apart, so no root pair can hide between two samples.
  const double hbar = spec.constants.hbar;
  double e = spec.v0 * (1.0 + 1e-12) + 1e-300;
  double f = quantum_detail::scaled_determinant(spec, e, parity);
  while (e < e_max) {
    const double spacing = std::numbers::pi * hbar / half_period(spec, e);
    const double next = std::min(e_max, e + spacing / 12.0);
    const double f_next = quantum_detail::scaled_determinant(spec, next, parity);
    if (f_next == 0.0) {
      out.energies.push_back(next);
    } else if (f != 0.0 && (f < 0) != (f_next < 0)) {
      out.energies.push_back(quantum_detail::bisect_root(spec, parity, e, next, f));
    }
    e = next;
    f = f_next;
  }

  const double expected = quantum_detail::weyl_count_one_parity(spec, e_max);
  const double found = static_cast<double>(out.energies.size());
  if (std::abs(found - expected) > 1.5) {
    out.warnings.push_back("found " + std::to_string(out.energies.size()) + " " + to_string(parity) +
                           " roots but the phase-space estimate is " + std::to_string(expected) +
                           "; the bracket grid may have skipped roots");
  }
  return out;
}

// Boundary residual of E, envelope-scaled; zero at an eigenvalue.
inline double eigen_residual(const PotentialSpec& spec, double energy, Parity parity) {
  quantum_detail::require_closed_court(spec);
  if (spec.is_flat()) return 0.0;
  return quantum_detail::scaled_determinant(spec, energy, parity);
}

inline Eigenstate eigenstate_closed_court(const PotentialSpec& spec, double energy, Parity parity) {
  quantum_detail::require_closed_court(spec);
  check_regime(spec, energy);
  if (spec.is_flat()) {
    for (int n = 1;; ++n) {
      const double e = infinite_well_energy(spec, n, parity);
      if (std::abs(e - energy) <= 1e-10 * energy) return eigenstate_infinite_well(spec, n, parity);
      if (e > energy) throw NumericalError("energy is not a flat-well eigenvalue");
    }
  }
  const double residual = quantum_detail::scaled_determinant(spec, energy, parity);
  if (std::abs(residual) > quantum_detail::kEigenResidualTolerance) {
    throw NumericalError("E = " + std::to_string(energy) + " fails the " + to_string(parity) +
                         " eigencondition (scaled residual " + std::to_string(residual) + ")");
  }

  Eigenstate st;
  st.parity = parity;
  st.energy = energy;
  st.spec = spec;
  st.source = StateSource::AiryPiecewise;
  st.scales = AiryScales::of(spec, energy);
  const double z0 = st.scales.z_at(0.0), za = st.scales.z_at(spec.a);
  const auto at0 = airy_eval(z0), ata = airy_eval(za);

  // (C, D) orthogonal to the better-conditioned boundary row.
  const double r0a = parity == Parity::Odd ? at0.ai : at0.ai_prime;
  const double r0b = parity == Parity::Odd ? at0.bi : at0.bi_prime;
  if (std::hypot(r0a, r0b) >= std::hypot(ata.ai, ata.bi)) {
    st.c_ai = r0b;
    st.c_bi = -r0a;
  } else {
    st.c_ai = ata.bi;
    st.c_bi = -ata.ai;
  }

  // For w'' = z w:  integral of w^2 dz = z w^2 - w'^2.
  auto antiderivative = [&](double z, const AiryValues& v) {
    const double w = st.c_ai * v.ai + st.c_bi * v.bi;
    const double wp = st.c_ai * v.ai_prime + st.c_bi * v.bi_prime;
    return z * w * w - wp * wp;
  };
  const double norm_sq = 2.0 * st.scales.rho * (antiderivative(za, ata) - antiderivative(z0, at0));
  const double scale = 1.0 / std::sqrt(norm_sq);
  st.c_ai *= scale;
  st.c_bi *= scale;

  st.index = quantum_detail::interior_nodes(st) + 1;
  // Same sign convention as the analytic well states: sign psi'(a) = (-1)^n.
  const double want = (st.index % 2 == 0) ? 1.0 : -1.0;
  if (st.derivative(spec.a) * want < 0) {
    st.c_ai = -st.c_ai;
    st.c_bi = -st.c_bi;
  }
  st.grid = quantum_detail::uniform_state_grid(spec.a);
  st.psi = st.sample(st.grid);
  return st;
}

// All states of both parities in (V0, e_max], sorted by energy.
inline std::vector<Eigenstate> closed_court_spectrum(const PotentialSpec& spec, double e_max) {
  std::vector<Eigenstate> out;
  for (Parity parity : {Parity::Even, Parity::Odd}) {
    for (double e : eigenvalues_closed_court(spec, e_max, parity).energies) {
      out.push_back(eigenstate_closed_court(spec, e, parity));
    }
  }
  std::sort(out.begin(), out.end(), [](const Eigenstate& l, const Eigenstate& r) { return l.energy < r.energy; });
  return out;
}

// ---------------------------------------------------------------------------
// Densities and momentum space

inline DensityCurve quantum_position_density(const Eigenstate& st, std::span<const double> grid) {
  DensityCurve curve;
  curve.variable = Variable::Position;
  curve.support = {{-st.spec.a, st.spec.a}};
  curve.grid.assign(grid.begin(), grid.end());
  curve.values.reserve(grid.size());
  for (double x : grid) {
    if (std::abs(x) > st.spec.a) throw SupportError("position outside the well");
    const double v = st.value(x);
    curve.values.push_back(v * v);
  }
  return curve;
}

inline DensityCurve quantum_position_density(const Eigenstate& st) {
  return quantum_position_density(st, st.grid);
}

// Closed form for the flat well:
//   even: sqrt(a / 2 pi hbar) [sinc(k a - a p / hbar) + sinc(k a + a p / hbar)]
//   odd:  i sqrt(a / 2 pi hbar) [sinc(k a - a p / hbar) - sinc(k a + a p / hbar)]
inline std::complex<double> infinite_well_momentum_closed_form(const PotentialSpec& spec, int n,
                                                               Parity parity, double p) {
  const double a = spec.a, hbar = spec.constants.hbar;
  const double ka = infinite_well_wavenumber(a, n, parity) * a;
  auto sinc = [](double u) { return u == 0.0 ? 1.0 : std::sin(u) / u; };
  const double pre = std::sqrt(a / (2.0 * std::numbers::pi * hbar));
  const double minus = sinc(ka - a * p / hbar), plus = sinc(ka + a * p / hbar);
  if (parity == Parity::Even) return {pre * (minus + plus), 0.0};
  return {0.0, pre * (minus - plus)};
}

struct MomentumOptions {
  int panels = 0;        // Gauss panels on [0, a]; 0 picks the minimum admissible
  int gauss_order = 4;
  double panels_per_oscillation = 20.0;
};

// Panels on [0, a] needed for `per_oscillation` panels per period of both the
// kernel at |p|max and psi itself.
inline int required_panels(const Eigenstate& st, double p_abs_max, double per_oscillation = 20.0) {
  const double hbar = st.spec.constants.hbar;
  const double p_state = std::sqrt(2.0 * st.spec.constants.mass * st.energy);
  const double p_ref = std::max(p_abs_max, p_state);
  const double oscillation = 2.0 * std::numbers::pi * hbar / p_ref;
  return std::max(4, static_cast<int>(std::ceil(per_oscillation * st.spec.a / oscillation)));
}

inline MomentumWavefunction momentum_transform(const Eigenstate& st, std::span<const double> grid,
                                               const MomentumOptions& opt = {}) {
  if (grid.empty()) throw std::invalid_argument("momentum grid is empty");
  const double a = st.spec.a, hbar = st.spec.constants.hbar;
  double p_abs_max = 0.0;
  double max_step = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    p_abs_max = std::max(p_abs_max, std::abs(grid[i]));
    if (i > 0) max_step = std::max(max_step, grid[i] - grid[i - 1]);
  }
  const int needed = required_panels(st, p_abs_max, opt.panels_per_oscillation);
  if (opt.panels > 0 && opt.panels < needed) {
    throw ResolutionError("momentum_transform: " + std::to_string(opt.panels) +
                              " panels cannot resolve |p| up to " + std::to_string(p_abs_max) +
                              "; need at least " + std::to_string(needed),
                          needed);
  }
  if (max_step > hbar / (2.0 * a)) {
    throw ResolutionError("momentum_transform: grid spacing " + std::to_string(max_step) +
                              " exceeds half the intrinsic width hbar/a = " + std::to_string(hbar / a),
                          hbar / (2.0 * a));
  }
  const int panels = opt.panels > 0 ? opt.panels : needed;
  const auto rule = numerics::composite_gauss(0.0, a, panels, numerics::gauss_legendre(opt.gauss_order));
  std::vector<double> weighted(rule.nodes.size());
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) weighted[j] = rule.weights[j] * st.value(rule.nodes[j]);

  // Definite parity folds [-a, a] onto [0, a]: even -> 2 cos, odd -> 2i sin.
  const double pre = 2.0 / std::sqrt(2.0 * std::numbers::pi * hbar);
  const bool even = st.parity == Parity::Even;
  const std::size_t nodes = weighted.size();
  MomentumWavefunction out;
  out.grid.assign(grid.begin(), grid.end());
  out.phi.resize(grid.size());
  out.density.resize(grid.size());

  // On a uniform grid the kernel is advanced by a fixed rotation per node,
  // re-seeded from sin/cos every kResync rows.
  constexpr std::size_t kResync = 256;
  const double step = grid.size() > 1 ? grid[1] - grid[0] : 0.0;
  bool uniform = grid.size() > 2;
  for (std::size_t i = 1; uniform && i < grid.size(); ++i) {
    uniform = std::abs((grid[i] - grid[i - 1]) - step) <= 1e-9 * std::abs(step);
  }
  std::vector<double> c(nodes), s(nodes), rot_c(nodes), rot_s(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    rot_c[j] = std::cos(step / hbar * rule.nodes[j]);
    rot_s[j] = std::sin(step / hbar * rule.nodes[j]);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!uniform || i % kResync == 0) {
      const double q = grid[i] / hbar;
      for (std::size_t j = 0; j < nodes; ++j) {
        c[j] = std::cos(q * rule.nodes[j]);
        s[j] = std::sin(q * rule.nodes[j]);
      }
    }
    double sum = 0.0;
    const std::vector<double>& kernel = even ? c : s;
    for (std::size_t j = 0; j < nodes; ++j) sum += weighted[j] * kernel[j];
    out.phi[i] = even ? std::complex<double>(pre * sum, 0.0) : std::complex<double>(0.0, pre * sum);
    out.density[i] = std::norm(out.phi[i]);
    if (uniform) {
      for (std::size_t j = 0; j < nodes; ++j) {
        const double cn = c[j] * rot_c[j] - s[j] * rot_s[j];
        s[j] = s[j] * rot_c[j] + c[j] * rot_s[j];
        c[j] = cn;
      }
    }
  }
  return out;
}

// Symmetric window [-W, W]: W is at least 1.5 p+ and wide enough that the
// wall-kink tail bound
//   |phi(p)|^2 <= hbar^3 (|psi'(a)| + |psi'(-a)|)^2 / (2 pi (p^2 - p+^2)^2)
// leaves at most `tail_target` of the mass outside. Spacing is the finer of
// 3 p+ / 4000 and hbar / (8 a).
inline std::vector<double> default_momentum_grid(const Eigenstate& st, double tail_target = 2e-5) {
  const double a = st.spec.a, hbar = st.spec.constants.hbar;
  const double p_plus = std::sqrt(2.0 * st.spec.constants.mass * st.energy);
  const double kink = std::abs(st.derivative(a)) + std::abs(st.derivative(-a));
  // Two-sided integral of the bound beyond W.
  auto tail = [&](double w) {
    const double pp = p_plus;
    const double integral =
        (w / (w * w - pp * pp) + std::log((w - pp) / (w + pp)) / (2.0 * pp)) / (2.0 * pp * pp);
    return hbar * hbar * hbar * kink * kink / std::numbers::pi * integral;
  };
  double lo = 1.5 * p_plus, hi = lo;
  if (tail(lo) > tail_target) {
    while (tail(hi) > tail_target) hi *= 2.0;
    for (int i = 0; i < 100; ++i) {
      const double mid = 0.5 * (lo + hi);
      (tail(mid) > tail_target ? lo : hi) = mid;
    }
  }
  const double width = hi;
  const double step = std::min(3.0 * p_plus / 4000.0, hbar / (8.0 * a));
  std::size_t intervals = static_cast<std::size_t>(std::ceil(2.0 * width / step));
  intervals += intervals % 2;
  auto g = numerics::linspace(-width, width, intervals + 1);
  g[intervals / 2] = 0.0;
  return g;
}

inline MomentumWavefunction momentum_transform(const Eigenstate& st) {
  return momentum_transform(st, default_momentum_grid(st));
}

}  // namespace cqd
