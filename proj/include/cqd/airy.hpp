#pragma once

// Airy functions Ai, Bi and their derivatives on the real line.
//
// Evaluation regions (see docs/airy_error_budget.md for how the cut points
// were chosen):
//   |z| <= kMaclaurinRadius         Maclaurin series about z = 0
//   kMaclaurinRadius < |z| <= z*    Taylor continuation of the ODE y'' = z y,
//                                   stepped in the numerically stable direction
//   z < -z*                         asymptotic expansion, trigonometric phase form
//   z > +z*                         asymptotic expansion, exponential form
//
// Bi overflows a double for z > kBiOverflowArgument; airy_eval throws
// std::overflow_error there. Ai underflows gracefully to zero.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cqd {

struct AiryValues {
  double ai = 0.0;
  double ai_prime = 0.0;
  double bi = 0.0;
  double bi_prime = 0.0;
};

namespace airy_detail {

inline constexpr double kAi0 = 0.35502805388781723926;
inline constexpr double kAiPrime0 = -0.25881940379280679840;
inline constexpr double kBi0 = 0.61492662744600073515;
inline constexpr double kBiPrime0 = 0.44828835735382635791;

inline constexpr double kMaclaurinRadius = 2.0;
inline constexpr double kAsymptoticRadius = 8.5;
inline constexpr double kTaylorStep = 1.0;
// zeta = (2/3) z^{3/2} reaches log(DBL_MAX) ~ 709.78 here.
inline constexpr double kBiOverflowArgument = 104.0;

inline constexpr int kAsymptoticTerms = 48;

// c_k and d_k of the classical Airy asymptotic series.
struct AsymptoticCoefficients {
  std::array<double, kAsymptoticTerms> c{};
  std::array<double, kAsymptoticTerms> d{};
};

constexpr AsymptoticCoefficients make_asymptotic_coefficients() {
  AsymptoticCoefficients out;
  out.c[0] = 1.0;
  out.d[0] = 1.0;
  for (int k = 1; k < kAsymptoticTerms; ++k) {
    const double kk = k;
    out.c[k] = out.c[k - 1] * (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) /
               ((2 * kk - 1) * 216.0 * kk);
    out.d[k] = -out.c[k] * (6 * kk + 1) / (6 * kk - 1);
  }
  return out;
}

inline constexpr AsymptoticCoefficients kCoeff = make_asymptotic_coefficients();

struct Pair {
  double value;
  double derivative;
};

// Advance a solution of y'' = z y from z0 to z0 + h with its Taylor series.
inline Pair taylor_step(double z0, Pair y, double h) {
  double a_km1 = y.value;       // a_{k-1}
  double a_k = y.derivative;    // a_k, starting at k = 1
  double a_km2 = 0.0;           // a_{k-2}
  double hk = h;                // h^k
  double value = y.value + a_k * h;
  double deriv = a_k;
  int small = 0;
  // a_{k+1} = (z0 a_{k-1} + a_{k-2}) / ((k+1) k)
  for (int k = 1; k < 400; ++k) {
    const double a_kp1 = (z0 * a_km1 + a_km2) / ((k + 1.0) * k);
    const double dv_term = (k + 1.0) * a_kp1 * hk;
    hk *= h;
    const double v_term = a_kp1 * hk;
    value += v_term;
    deriv += dv_term;
    const double scale = std::abs(value) + std::abs(deriv) + 1e-300;
    if (std::abs(v_term) + std::abs(dv_term) < 1e-18 * scale) {
      if (++small == 3) break;
    } else {
      small = 0;
    }
    a_km2 = a_km1;
    a_km1 = a_k;
    a_k = a_kp1;
  }
  return {value, deriv};
}

inline Pair taylor_propagate(double z_from, Pair y, double z_to) {
  const double span = z_to - z_from;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(span) / kTaylorStep)));
  const double h = span / steps;
  for (int i = 0; i < steps; ++i) {
    y = taylor_step(z_from + i * h, y, h);
  }
  return y;
}

inline double zeta_of(double x) { return 2.0 / 3.0 * x * std::sqrt(x); }

// Ai, Ai', Bi, Bi' at -x for x >= kAsymptoticRadius.
inline AiryValues asymptotic_negative(double x) {
  const double zeta = zeta_of(x);
  const double inv = 1.0 / zeta;
  double p = 0.0, q = 0.0, r = 0.0, s = 0.0;
  double power = 1.0;  // zeta^{-k}
  double prev = INFINITY;
  for (int k = 0; k < kAsymptoticTerms; ++k) {
    const double tc = kCoeff.c[k] * power;
    const double td = kCoeff.d[k] * power;
    const double mag = std::abs(tc) + std::abs(td);
    if (mag > prev) break;  // series has started to diverge
    // signs: (-1)^{floor(k/2)}
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sign * tc;
      r += sign * td;
    } else {
      q += sign * tc;
      s += sign * td;
    }
    if (mag < 1e-17 * (std::abs(p) + std::abs(r))) break;
    prev = mag;
    power *= inv;
  }
  const double theta = zeta + std::numbers::pi / 4.0;
  const double sn = std::sin(theta);
  const double cs = std::cos(theta);
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  const double x4 = std::sqrt(std::sqrt(x));
  AiryValues v;
  v.ai = inv_sqrt_pi / x4 * (sn * p - cs * q);
  v.bi = inv_sqrt_pi / x4 * (cs * p + sn * q);
  v.ai_prime = -inv_sqrt_pi * x4 * (cs * r + sn * s);
  v.bi_prime = inv_sqrt_pi * x4 * (sn * r - cs * s);
  return v;
}

// Exponentially scaled values for z >= kAsymptoticRadius:
// ai * e^{zeta}, ai' * e^{zeta}, bi * e^{-zeta}, bi' * e^{-zeta}.
inline AiryValues asymptotic_positive_scaled(double z) {
  const double zeta = zeta_of(z);
  const double inv = 1.0 / zeta;
  double alt_c = 0.0, alt_d = 0.0, sum_c = 0.0, sum_d = 0.0;
  double power = 1.0;
  double prev = INFINITY;
  for (int k = 0; k < kAsymptoticTerms; ++k) {
    const double tc = kCoeff.c[k] * power;
    const double td = kCoeff.d[k] * power;
    const double mag = std::abs(tc) + std::abs(td);
    if (mag > prev) break;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    alt_c += sign * tc;
    alt_d += sign * td;
    sum_c += tc;
    sum_d += td;
    if (mag < 1e-17) break;
    prev = mag;
    power *= inv;
  }
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  const double z4 = std::sqrt(std::sqrt(z));
  AiryValues v;
  v.ai = 0.5 * inv_sqrt_pi / z4 * alt_c;
  v.ai_prime = -0.5 * inv_sqrt_pi * z4 * alt_d;
  v.bi = inv_sqrt_pi / z4 * sum_c;
  v.bi_prime = inv_sqrt_pi * z4 * sum_d;
  return v;
}

// Maclaurin / Taylor-continuation route, valid for |z| <= kAsymptoticRadius.
// Bi for z > 0 and both functions for z < 0 are stepped outward from the
// origin; Ai for z > kMaclaurinRadius is stepped inward from the asymptotic
// anchor, which is the direction in which it grows.
inline AiryValues series_route(double z) {
  const Pair ai = [&] {
    if (z > kMaclaurinRadius) {
      const double anchor = kAsymptoticRadius;
      const AiryValues s = asymptotic_positive_scaled(anchor);
      const double damp = std::exp(-zeta_of(anchor));
      return taylor_propagate(anchor, {s.ai * damp, s.ai_prime * damp}, z);
    }
    return taylor_propagate(0.0, {kAi0, kAiPrime0}, z);
  }();
  const Pair bi = taylor_propagate(0.0, {kBi0, kBiPrime0}, z);
  return {ai.value, ai.derivative, bi.value, bi.derivative};
}

// Scaled evaluation shared by airy_eval and the cross products. For z > 0 the
// returned values carry the factors e^{+zeta} (Ai, Ai') and e^{-zeta} (Bi, Bi');
// for z <= 0 they are unscaled and zeta is reported as 0.
struct ScaledAiry {
  AiryValues values;
  double zeta = 0.0;
};

inline ScaledAiry scaled(double z) {
  if (z < -kAsymptoticRadius) return {asymptotic_negative(-z), 0.0};
  if (z <= 0.0) return {series_route(z), 0.0};
  const double zeta = zeta_of(z);
  if (z > kAsymptoticRadius) return {asymptotic_positive_scaled(z), zeta};
  AiryValues v = series_route(z);
  const double up = std::exp(zeta);
  const double down = 1.0 / up;
  v.ai *= up;
  v.ai_prime *= up;
  v.bi *= down;
  v.bi_prime *= down;
  return {v, zeta};
}

}  // namespace airy_detail

inline AiryValues airy_eval(double z) {
  if (std::isnan(z)) throw std::domain_error("airy_eval: argument is NaN");
  if (z > airy_detail::kBiOverflowArgument) {
    throw std::overflow_error("airy_eval: Bi(" + std::to_string(z) +
                              ") exceeds the double range");
  }
  const auto s = airy_detail::scaled(z);
  if (s.zeta == 0.0) return s.values;
  const double up = std::exp(s.zeta);
  const double down = std::exp(-s.zeta);
  return {s.values.ai * down, s.values.ai_prime * down, s.values.bi * up, s.values.bi_prime * up};
}

namespace airy_detail {

// a1 * b2 * e^{zeta2 - zeta1} - a2 * b1 * e^{zeta1 - zeta2}, with the scaled
// magnitudes of both arguments folded in. Products of the scaled parts are
// O(1), so only the exponent can over- or underflow.
inline double scaled_cross(double a1, double b1, double zeta1, double a2, double b2, double zeta2) {
  const double d = zeta2 - zeta1;
  return a1 * b2 * std::exp(d) - a2 * b1 * std::exp(-d);
}

}  // namespace airy_detail

// Ai(z1) Bi(z2) - Ai(z2) Bi(z1)
inline double airy_cross(double z1, double z2) {
  if (z1 == z2) return 0.0;
  const auto s1 = airy_detail::scaled(z1);
  const auto s2 = airy_detail::scaled(z2);
  return airy_detail::scaled_cross(s1.values.ai, s1.values.bi, s1.zeta, s2.values.ai,
                                   s2.values.bi, s2.zeta);
}

// Ai'(z1) Bi(z2) - Ai(z2) Bi'(z1)
inline double airy_cross_prime(double z1, double z2) {
  const auto s1 = airy_detail::scaled(z1);
  const auto s2 = airy_detail::scaled(z2);
  return airy_detail::scaled_cross(s1.values.ai_prime, s1.values.bi_prime, s1.zeta,
                                   s2.values.ai, s2.values.bi, s2.zeta);
}

// Modulus functions sqrt(Ai^2 + Bi^2) and sqrt(Ai'^2 + Bi'^2). For z > 0
// these are dominated by Bi and overflow with it.
inline double airy_modulus(double z) {
  const auto v = airy_eval(z);
  return std::hypot(v.ai, v.bi);
}

inline double airy_modulus_prime(double z) {
  const auto v = airy_eval(z);
  return std::hypot(v.ai_prime, v.bi_prime);
}

}  // namespace cqd
