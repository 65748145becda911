#pragma once

// Classical-vs-quantum comparisons: windowed L2 gap in position space,
// quantum momentum mass inside the classical support, and the V0 -> 0 sweep
// toward the infinite well.
//
// The agreement thresholds below are calibration constants of this toolkit,
// not derived bounds.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cqd/classical.hpp"
#include "cqd/errors.hpp"
#include "cqd/numerics.hpp"
#include "cqd/potential.hpp"
#include "cqd/quantum.hpp"

namespace cqd {

namespace calibration {
inline constexpr double kGapInfiniteWell = 0.05;
inline constexpr double kGapClosedCourt = 0.1;
inline constexpr double kSupportMass = 0.9;
// Classical picture flagged unreliable when delta_p <= kBreakdownFactor * hbar / a.
inline constexpr double kBreakdownFactor = 2.0;
// Sweep entries need an eigenvalue within this relative distance of the target.
inline constexpr double kSweepEnergyTolerance = 0.02;
}  // namespace calibration

struct PositionComparison {
  double window = 0.0;
  double l2_gap = 0.0;
  double minimal_window = 0.0;
};

struct ComparisonReport {
  PotentialSpec spec{};
  double energy = 0.0;
  Parity parity = Parity::Even;
  int index = 0;
  double window = 0.0;
  double l2_gap_position = 0.0;
  double support_mass_momentum = 0.0;
  double delta_p_classical = 0.0;
  double delta_p_intrinsic = 0.0;
  double plateau_height = 0.0;
  bool classical_unreliable = false;
  // No eigenvalue close enough to the target; numeric fields are unset.
  bool flagged = false;
  std::string note;

  std::string summary() const {
    std::ostringstream os;
    os << to_string(spec.kind) << "(V0=" << spec.v0 << ", a=" << spec.a << ")";
    return os.str();
  }
};

namespace correspondence_detail {

// Running integral of the piecewise-linear interpolant of (x, y).
class Cumulative {
 public:
  Cumulative(std::span<const double> x, std::span<const double> y) : x_(x), y_(y), c_(x.size(), 0.0) {
    for (std::size_t i = 1; i < x.size(); ++i) c_[i] = c_[i - 1] + 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  }

  double at(double v) const {
    if (v <= x_.front()) return 0.0;
    if (v >= x_.back()) return c_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), v);
    const std::size_t i = static_cast<std::size_t>(std::distance(x_.begin(), it)) - 1;
    const double dx = x_[i + 1] - x_[i];
    if (dx == 0.0) return c_[i];
    const double slope = (y_[i + 1] - y_[i]) / dx;
    const double s = v - x_[i];
    return c_[i] + y_[i] * s + 0.5 * slope * s * s;
  }

  double average(double center, double window) const {
    return (at(center + 0.5 * window) - at(center - 0.5 * window)) / window;
  }

 private:
  std::span<const double> x_;
  std::span<const double> y_;
  std::vector<double> c_;
};

inline double de_broglie(const PotentialSpec& spec, double energy, double x) {
  const double p = local_momentum(spec, energy, x);
  return p > 0 ? 2.0 * std::numbers::pi * spec.constants.hbar / p : INFINITY;
}

}  // namespace correspondence_detail

// Smallest w with w >= 2 pi hbar / p(x) on the whole interior [lo + w, hi - w].
// Returns +inf if no such window exists.
inline double minimal_window(const PotentialSpec& spec, double energy) {
  const auto [lo, hi] = allowed_region(spec, energy);
  auto longest = [&](double w) {
    return std::max(correspondence_detail::de_broglie(spec, energy, lo + w),
                    correspondence_detail::de_broglie(spec, energy, hi - w));
  };
  double left = 0.0, right = 0.5 * (hi - lo);
  if (longest(right * (1 - 1e-12)) > right) return INFINITY;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (left + right);
    (longest(mid) > mid ? left : right) = mid;
  }
  return right;
}

// Moving averages of both curves over `window`, compared on the interior that
// stays `window` away from the support edges. Gap is ||avg_qm - avg_cl||_2 /
// ||avg_cl||_2.
inline PositionComparison local_average_compare(const DensityCurve& pqm, const DensityCurve& pcl, double window,
                                                const PotentialSpec& spec, double energy) {
  if (pqm.support.size() != 1 || pcl.support.size() != 1) {
    throw std::invalid_argument("local_average_compare: single-interval supports required");
  }
  const Interval s = pcl.support.front();
  if (std::abs(pqm.support.front().lo - s.lo) > 1e-12 * (1 + std::abs(s.lo)) ||
      std::abs(pqm.support.front().hi - s.hi) > 1e-12 * (1 + std::abs(s.hi))) {
    throw std::invalid_argument("local_average_compare: curves have different supports");
  }
  const double w_min = minimal_window(spec, energy);
  if (!(window >= w_min)) {
    std::ostringstream os;
    os << "averaging window " << window << " is shorter than the local de Broglie wavelength; minimal window is "
       << w_min;
    throw WindowTooSmall(os.str(), w_min);
  }
  const correspondence_detail::Cumulative cq(pqm.grid, pqm.values), cc(pcl.grid, pcl.values);
  std::vector<double> xs, diff_sq, ref_sq;
  for (double x : pqm.grid) {
    if (x < s.lo + window || x > s.hi - window) continue;
    const double q = cq.average(x, window), c = cc.average(x, window);
    xs.push_back(x);
    diff_sq.push_back((q - c) * (q - c));
    ref_sq.push_back(c * c);
  }
  if (xs.size() < 2) throw std::invalid_argument("local_average_compare: window leaves no interior");
  const double num = numerics::trapezoid(xs, diff_sq), den = numerics::trapezoid(xs, ref_sq);
  return {window, std::sqrt(num / den), w_min};
}

// Fraction of the sampled density lying in [p- - 2 hbar/a, p+ + 2 hbar/a] and
// its mirror image.
inline double momentum_support_mass(std::span<const double> grid, std::span<const double> density,
                                    const ClassicalState& state, const PotentialSpec& spec) {
  const double widen = 2.0 * spec.constants.hbar / spec.a;
  const double inner = std::max(0.0, state.p_minus - widen), outer = state.p_plus + widen;
  const double total = numerics::trapezoid(grid, density);
  if (!(total > 0)) return 0.0;
  double inside = 0.0;
  if (inner == 0.0) {
    inside = numerics::trapezoid_between(grid, density, -outer, outer);
  } else {
    inside = numerics::trapezoid_between(grid, density, -outer, -inner) +
             numerics::trapezoid_between(grid, density, inner, outer);
  }
  return std::clamp(inside / total, 0.0, 1.0);
}

inline double momentum_support_mass(const MomentumWavefunction& phi, const ClassicalState& state,
                                    const PotentialSpec& spec) {
  return momentum_support_mass(phi.grid, phi.density, state, spec);
}

inline bool classical_unreliable(double delta_p, const PotentialSpec& spec,
                                 double breakdown_factor = calibration::kBreakdownFactor) {
  return delta_p <= breakdown_factor * spec.constants.hbar / spec.a;
}

struct CompareOptions {
  // 0 selects max(minimal_window, a/5).
  double window = 0.0;
  double breakdown_factor = calibration::kBreakdownFactor;
};

// Full classical-vs-quantum report for one closed-court eigenstate.
inline ComparisonReport compare_state(const Eigenstate& st, const CompareOptions& opt = {}) {
  const PotentialSpec& spec = st.spec;
  const ClassicalState cs = classical_state(spec, st.energy);
  ComparisonReport r;
  r.spec = spec;
  r.energy = st.energy;
  r.parity = st.parity;
  r.index = st.index;
  r.delta_p_classical = cs.delta_p();
  r.delta_p_intrinsic = spec.constants.hbar / spec.a;
  r.classical_unreliable = classical_unreliable(r.delta_p_classical, spec, opt.breakdown_factor);
  r.plateau_height = spec.is_flat() ? INFINITY : 1.0 / (2.0 * r.delta_p_classical);

  const auto pcl = classical_position_density(spec, st.energy, st.grid);
  const auto pqm = quantum_position_density(st);
  const double w = opt.window > 0 ? opt.window : std::max(minimal_window(spec, st.energy), spec.a / 5.0);
  const auto cmp = local_average_compare(pqm, pcl, w, spec, st.energy);
  r.window = cmp.window;
  r.l2_gap_position = cmp.l2_gap;

  const auto phi = momentum_transform(st);
  r.support_mass_momentum = momentum_support_mass(phi, cs, spec);
  r.note = "thresholds are calibration constants";
  return r;
}

// For each V0: nearest closed-court eigenvalue to e_target (either parity),
// both engines, one report. Entries without an eigenvalue within 2% of the
// target are flagged and the sweep continues.
inline std::vector<ComparisonReport> v0_sweep(double a, double hbar, double mass, double e_target,
                                              std::span<const double> v0_list, const CompareOptions& opt = {}) {
  std::vector<ComparisonReport> out;
  const double e_max = e_target * (1.0 + calibration::kSweepEnergyTolerance);
  for (double v0 : v0_list) {
    const auto spec = PotentialSpec::closed_court(v0, a, {hbar, mass, 1.0});
    ComparisonReport flagged;
    flagged.spec = spec;
    flagged.flagged = true;
    flagged.delta_p_intrinsic = hbar / a;
    if (e_max <= v0) {
      flagged.note = "target energy not above V0";
      out.push_back(flagged);
      continue;
    }
    double best = NAN;
    Parity best_parity = Parity::Even;
    for (Parity parity : {Parity::Even, Parity::Odd}) {
      for (double e : eigenvalues_closed_court(spec, e_max, parity).energies) {
        if (std::isnan(best) || std::abs(e - e_target) < std::abs(best - e_target)) {
          best = e;
          best_parity = parity;
        }
      }
    }
    if (std::isnan(best) || std::abs(best - e_target) > calibration::kSweepEnergyTolerance * e_target) {
      flagged.note = "no eigenvalue within 2% of the target energy";
      out.push_back(flagged);
      continue;
    }
    out.push_back(compare_state(eigenstate_closed_court(spec, best, best_parity), opt));
  }
  return out;
}

}  // namespace cqd
