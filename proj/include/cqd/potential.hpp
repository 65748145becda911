#pragma once

// Potential families, physical constants and energy bookkeeping.
//
// Units default to hbar = 2m = 1. Infinite walls are reported as
// +infinity by evaluate_potential, never as a large finite number.

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cqd/errors.hpp"

namespace cqd {

enum class PotentialKind { Bouncer, InfiniteWell, ClosedCourt };

inline std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::Bouncer: return "bouncer";
    case PotentialKind::InfiniteWell: return "infinite_well";
    case PotentialKind::ClosedCourt: return "closed_court";
  }
  return "unknown";
}

struct Constants {
  double hbar = 1.0;
  double mass = 0.5;
  double g = 1.0;  // bouncer only

  friend bool operator==(const Constants&, const Constants&) = default;
};

inline constexpr double kInfiniteWall = std::numeric_limits<double>::infinity();

inline bool is_wall(double v) { return std::isinf(v) && v > 0; }

struct PotentialSpec {
  PotentialKind kind = PotentialKind::InfiniteWell;
  double a = 1.0;   // half-width (wells)
  double v0 = 0.0;  // wall-edge height (closed court)
  Constants constants{};

  static PotentialSpec bouncer(Constants c = {}) {
    return {PotentialKind::Bouncer, 0.0, 0.0, c};
  }
  static PotentialSpec infinite_well(double a, Constants c = {}) {
    return {PotentialKind::InfiniteWell, a, 0.0, c};
  }
  static PotentialSpec closed_court(double v0, double a, Constants c = {}) {
    return {PotentialKind::ClosedCourt, a, v0, c};
  }

  bool is_well() const { return kind != PotentialKind::Bouncer; }

  // A closed court with V0 = 0 is the infinite well.
  bool is_flat() const {
    return kind == PotentialKind::InfiniteWell ||
           (kind == PotentialKind::ClosedCourt && v0 == 0.0);
  }

  void validate() const {
    const auto& c = constants;
    if (!(c.hbar > 0) || !(c.mass > 0) || !(c.g > 0)) {
      throw RegimeError("constants hbar, mass and g must be strictly positive");
    }
    if (is_well() && !(a > 0)) throw RegimeError("well half-width a must be positive");
    if (kind == PotentialKind::ClosedCourt && !(v0 >= 0)) {
      throw RegimeError("closed-court V0 must be non-negative");
    }
    if (!std::isfinite(a) || !std::isfinite(v0)) throw RegimeError("non-finite potential parameter");
  }

  friend bool operator==(const PotentialSpec&, const PotentialSpec&) = default;
};

inline double evaluate_potential(const PotentialSpec& spec, double x) {
  switch (spec.kind) {
    case PotentialKind::Bouncer:
      return x < 0 ? kInfiniteWall : spec.constants.mass * spec.constants.g * x;
    case PotentialKind::InfiniteWell:
      return std::abs(x) > spec.a ? kInfiniteWall : 0.0;
    case PotentialKind::ClosedCourt:
      return std::abs(x) > spec.a ? kInfiniteWall : spec.v0 * std::abs(x) / spec.a;
  }
  return kInfiniteWall;
}

// Straight piece of V(x) on [x_begin, x_end]; the closed court has two, the
// flat well and the bouncer one each.
struct LinearPiece {
  double x_begin;
  double x_end;
  double v_begin;
  double slope;

  double v_at(double x) const { return v_begin + slope * (x - x_begin); }
};

// Throws RegimeError outside the supported regime.
inline void check_regime(const PotentialSpec& spec, double energy) {
  spec.validate();
  if (!(energy > 0) || !std::isfinite(energy)) {
    throw RegimeError("energy must be positive and finite");
  }
  if (spec.kind == PotentialKind::ClosedCourt && !(energy > spec.v0)) {
    throw RegimeError("closed court requires E > V0 (got E=" + std::to_string(energy) +
                      ", V0=" + std::to_string(spec.v0) + ")");
  }
}

// Classically allowed region [lo, hi] at energy E.
inline std::pair<double, double> allowed_region(const PotentialSpec& spec, double energy) {
  if (spec.kind == PotentialKind::Bouncer) {
    return {0.0, energy / (spec.constants.mass * spec.constants.g)};
  }
  return {-spec.a, spec.a};
}

inline std::vector<LinearPiece> linear_pieces(const PotentialSpec& spec, double energy) {
  const auto [lo, hi] = allowed_region(spec, energy);
  switch (spec.kind) {
    case PotentialKind::Bouncer:
      return {{lo, hi, 0.0, spec.constants.mass * spec.constants.g}};
    case PotentialKind::InfiniteWell:
      return {{lo, hi, 0.0, 0.0}};
    case PotentialKind::ClosedCourt: {
      const double f = spec.v0 / spec.a;
      if (f == 0.0) return {{lo, hi, 0.0, 0.0}};
      return {{-spec.a, 0.0, spec.v0, -f}, {0.0, spec.a, 0.0, f}};
    }
  }
  return {};
}

// Local momentum magnitude sqrt(2m(E - V(x))); zero outside the allowed region.
inline double local_momentum(const PotentialSpec& spec, double energy, double x) {
  const double v = evaluate_potential(spec, x);
  if (is_wall(v) || v >= energy) return 0.0;
  return std::sqrt(2.0 * spec.constants.mass * (energy - v));
}

struct ClassicalState {
  double energy = 0.0;
  double p_minus = 0.0;
  double p_plus = 0.0;
  double tau = 0.0;  // half-period
  std::pair<double, double> turning_points{};

  double period() const { return 2.0 * tau; }
  double delta_p() const { return p_plus - p_minus; }
};

}  // namespace cqd
