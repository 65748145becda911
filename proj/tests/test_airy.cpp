#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cqd/airy.hpp"

using cqd::airy_eval;

namespace {

struct Reference {
  double z, ai, ai_prime, bi, bi_prime;
};

const std::vector<Reference> kReference = {
#include "data/airy_reference.inc"
};

// Error relative to the value for z >= 0, to the oscillation envelope for z < 0.
double rel_error(double got, double want, double envelope) {
  return std::abs(got - want) / std::max(std::abs(want), envelope);
}

}  // namespace

TEST_CASE("values match the high-precision table", "[airy]") {
  for (const auto& r : kReference) {
    CAPTURE(r.z);
    const auto v = airy_eval(r.z);
    const double env = r.z < 0 ? std::hypot(r.ai, r.bi) : 0.0;
    const double env_prime = r.z < 0 ? std::hypot(r.ai_prime, r.bi_prime) : 0.0;
    // Argument rounding dominates at large |z|: d(phase) = sqrt|z| * ulp(z).
    const double tol = r.z < -20 ? 5e-13 : 1e-13;
    CHECK(rel_error(v.ai, r.ai, env) < tol);
    CHECK(rel_error(v.ai_prime, r.ai_prime, env_prime) < tol);
    CHECK(rel_error(v.bi, r.bi, env) < tol);
    CHECK(rel_error(v.bi_prime, r.bi_prime, env_prime) < tol);
  }
}

TEST_CASE("values at the origin", "[airy]") {
  const auto v = airy_eval(0.0);
  CHECK(v.ai == Catch::Approx(0.35502805388781724).epsilon(1e-15));
  CHECK(v.ai_prime == Catch::Approx(-0.25881940379280680).epsilon(1e-15));
  CHECK(v.bi == Catch::Approx(0.61492662744600074).epsilon(1e-15));
  CHECK(v.bi_prime == Catch::Approx(0.44828835735382636).epsilon(1e-15));
}

TEST_CASE("first zero of Ai", "[airy]") {
  const double z1 = -2.3381074104597670385;
  CHECK(std::abs(airy_eval(z1).ai) < 1e-15);
}

TEST_CASE("Wronskian holds across [-40, 40]", "[airy][property]") {
  std::mt19937_64 gen(20241016);
  std::uniform_real_distribution<double> dist(-40.0, 40.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double z = dist(gen);
    const auto v = airy_eval(z);
    const double w = v.ai * v.bi_prime - v.ai_prime * v.bi;
    worst = std::max(worst, std::abs(w * std::numbers::pi - 1.0));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("ODE residual f'' = z f", "[airy][property]") {
  const double h = 1e-4;
  for (double z = -30.0; z <= 12.0; z += 0.37) {
    CAPTURE(z);
    const auto lo = airy_eval(z - h), mid = airy_eval(z), hi = airy_eval(z + h);
    const double ai_pp = (hi.ai_prime - lo.ai_prime) / (2 * h);
    const double bi_pp = (hi.bi_prime - lo.bi_prime) / (2 * h);
    const double env = z < 0 ? cqd::airy_modulus(z) : 0.0;
    const double scale_ai = (std::abs(z) + 1.0) * std::max(env, std::abs(mid.ai));
    const double scale_bi = (std::abs(z) + 1.0) * std::max(env, std::abs(mid.bi));
    CHECK(std::abs(ai_pp - z * mid.ai) < 1e-6 * scale_ai);
    CHECK(std::abs(bi_pp - z * mid.bi) < 1e-6 * scale_bi);
  }
}

TEST_CASE("continuous across the evaluation-method boundaries", "[airy][property]") {
  for (double edge : {-8.5, -2.0, 2.0, 8.5}) {
    CAPTURE(edge);
    const double below = std::nextafter(edge, -INFINITY), above = std::nextafter(edge, INFINITY);
    const auto l = airy_eval(below), r = airy_eval(above);
    const double env = edge < 0 ? cqd::airy_modulus(edge) : 0.0;
    const double env_prime = edge < 0 ? cqd::airy_modulus_prime(edge) : 0.0;
    CHECK(rel_error(l.ai, r.ai, env) < 1e-13);
    CHECK(rel_error(l.ai_prime, r.ai_prime, env_prime) < 1e-13);
    CHECK(rel_error(l.bi, r.bi, env) < 1e-13);
    CHECK(rel_error(l.bi_prime, r.bi_prime, env_prime) < 1e-13);
  }
}

TEST_CASE("series and asymptotic routes agree around the switch", "[airy][property]") {
  namespace d = cqd::airy_detail;
  for (double x = 7.5; x <= 9.5; x += 0.05) {
    CAPTURE(x);
    const auto taylor = d::series_route(-x), asym = d::asymptotic_negative(x);
    const double env = std::hypot(asym.ai, asym.bi), env_prime = std::hypot(asym.ai_prime, asym.bi_prime);
    CHECK(std::abs(taylor.ai - asym.ai) < 1e-9 * env);
    CHECK(std::abs(taylor.bi - asym.bi) < 1e-9 * env);
    CHECK(std::abs(taylor.ai_prime - asym.ai_prime) < 1e-9 * env_prime);
    CHECK(std::abs(taylor.bi_prime - asym.bi_prime) < 1e-9 * env_prime);

    const auto pos = d::series_route(x), scaled = d::asymptotic_positive_scaled(x);
    const double zeta = d::zeta_of(x);
    CHECK(pos.ai == Catch::Approx(scaled.ai * std::exp(-zeta)).epsilon(1e-9));
    CHECK(pos.bi == Catch::Approx(scaled.bi * std::exp(zeta)).epsilon(1e-9));
    CHECK(pos.bi_prime == Catch::Approx(scaled.bi_prime * std::exp(zeta)).epsilon(1e-9));
  }
}

TEST_CASE("cross products", "[airy]") {
  // Ai vanishes at its first zero, leaving Ai(0) Bi(z1).
  const double z1 = -2.3381074104597670385;
  CHECK(cqd::airy_cross(0.0, z1) == Catch::Approx(airy_eval(0.0).ai * airy_eval(z1).bi).epsilon(1e-13));
  CHECK(cqd::airy_cross(1.3, 1.3) == 0.0);
  CHECK(cqd::airy_cross(-7.0, -7.0) == 0.0);
  for (auto [z1, z2] : std::vector<std::pair<double, double>>{{-5.0, 3.0}, {-20.0, -1.0}, {0.5, 1.5}}) {
    const auto a = airy_eval(z1), b = airy_eval(z2);
    CHECK(cqd::airy_cross(z1, z2) == Catch::Approx(a.ai * b.bi - b.ai * a.bi).epsilon(1e-12));
    CHECK(cqd::airy_cross_prime(z1, z2) == Catch::Approx(a.ai_prime * b.bi - b.ai * a.bi_prime).epsilon(1e-12));
  }
}

TEST_CASE("modulus is the oscillation envelope", "[airy]") {
  for (double z : {-50.0, -10.0, -3.0}) {
    const auto v = airy_eval(z);
    CHECK(cqd::airy_modulus(z) == Catch::Approx(std::hypot(v.ai, v.bi)).epsilon(1e-13));
  }
}

TEST_CASE("Bi overflow is reported", "[airy]") {
  CHECK_THROWS_AS(airy_eval(110.0), std::overflow_error);
  CHECK_NOTHROW(airy_eval(100.0));
}
