#include <catch_amalgamated.hpp>

#include <cmath>

#include "cqd/classical.hpp"
#include "cqd/potential.hpp"
#include "cqd/random.hpp"

using namespace cqd;

TEST_CASE("closed court shape", "[potential]") {
  const auto s = PotentialSpec::closed_court(10.0, 25.0);
  CHECK(evaluate_potential(s, 0.0) == 0.0);
  CHECK(evaluate_potential(s, 25.0) == Catch::Approx(10.0));
  CHECK(evaluate_potential(s, -12.5) == Catch::Approx(5.0));
  CHECK(is_wall(evaluate_potential(s, 25.0001)));
  CHECK(is_wall(evaluate_potential(s, -30.0)));
  for (double x : {0.3, 7.0, 19.9}) CHECK(evaluate_potential(s, x) == evaluate_potential(s, -x));
}

TEST_CASE("bouncer and flat well shapes", "[potential]") {
  const auto b = PotentialSpec::bouncer({1.0, 0.5, 2.0});
  CHECK(evaluate_potential(b, 3.0) == Catch::Approx(3.0));
  CHECK(is_wall(evaluate_potential(b, -0.1)));
  const auto w = PotentialSpec::infinite_well(2.0);
  CHECK(evaluate_potential(w, 1.9) == 0.0);
  CHECK(is_wall(evaluate_potential(w, 2.1)));
}

TEST_CASE("regime checks", "[potential]") {
  const auto s = PotentialSpec::closed_court(10.0, 25.0);
  CHECK_THROWS_AS(check_regime(s, 9.0), RegimeError);
  CHECK_THROWS_AS(check_regime(s, 10.0), RegimeError);
  CHECK_NOTHROW(check_regime(s, 10.066));
  CHECK_THROWS_AS(check_regime(PotentialSpec::infinite_well(1.0), 0.0), RegimeError);
  CHECK_THROWS_AS(check_regime(PotentialSpec::infinite_well(-1.0), 1.0), RegimeError);
  CHECK_THROWS_AS(check_regime(PotentialSpec::closed_court(-1.0, 1.0), 1.0), RegimeError);
  CHECK_THROWS_AS(check_regime(PotentialSpec::infinite_well(1.0, {0.0, 0.5, 1.0}), 1.0), RegimeError);
  CHECK_THROWS_AS(check_regime(PotentialSpec::infinite_well(1.0), NAN), RegimeError);
}

TEST_CASE("allowed region and local momentum", "[potential]") {
  const auto b = PotentialSpec::bouncer({1.0, 0.5, 1.0});
  const auto [lo, hi] = allowed_region(b, 2.0);
  CHECK(lo == 0.0);
  CHECK(hi == Catch::Approx(4.0));
  CHECK(local_momentum(b, 2.0, 4.0) == 0.0);
  CHECK(local_momentum(b, 2.0, 0.0) == Catch::Approx(std::sqrt(2.0)));

  const auto s = PotentialSpec::closed_court(6.0, 25.0);
  CHECK(local_momentum(s, 10.0, 0.0) == Catch::Approx(std::sqrt(10.0)));
  CHECK(local_momentum(s, 10.0, 25.0) == Catch::Approx(2.0));
  CHECK(local_momentum(s, 10.0, 26.0) == 0.0);
}

TEST_CASE("linear pieces reproduce the potential", "[potential][property]") {
  const auto s = PotentialSpec::closed_court(6.0, 25.0);
  for (const auto& piece : linear_pieces(s, 10.0)) {
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const double x = piece.x_begin + t * (piece.x_end - piece.x_begin);
      CHECK(piece.v_at(x) == Catch::Approx(evaluate_potential(s, x)).margin(1e-14));
    }
  }
  CHECK(linear_pieces(PotentialSpec::closed_court(0.0, 3.0), 1.0).size() == 1);
}

TEST_CASE("a V0 = 0 court is flat", "[potential]") {
  CHECK(PotentialSpec::closed_court(0.0, 3.0).is_flat());
  CHECK_FALSE(PotentialSpec::closed_court(1e-3, 3.0).is_flat());
  CHECK(PotentialSpec::infinite_well(3.0).is_flat());
}

TEST_CASE("counter RNG matches SplitMix64", "[random]") {
  // Reference stream of SplitMix64 seeded with 0.
  const CounterRng rng(0);
  CHECK(rng.bits(0) == 0xE220A8397B1DCDAFULL);
  CHECK(rng.bits(1) == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.bits(2) == 0x06C45D188009454FULL);
  const CounterRng other(42);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double u = other.uniform(i);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("classical state bookkeeping", "[potential][property]") {
  for (double v0 : {10.0, 6.0, 2.0, 0.2}) {
    const auto s = PotentialSpec::closed_court(v0, 25.0, {1.3, 0.7, 1.0});
    for (double e : {v0 + 0.01, v0 + 1.0, 3.0 * v0 + 5.0}) {
      const auto st = classical_state(s, e);
      CHECK(st.p_plus * st.p_plus - st.p_minus * st.p_minus == Catch::Approx(2.0 * 0.7 * v0).epsilon(1e-12));
      CHECK(st.p_minus >= 0.0);
      CHECK(st.p_minus < st.p_plus);
      CHECK(st.tau > 0.0);
      const auto again = classical_state(s, e);
      CHECK(again.tau == st.tau);
      CHECK(again.p_minus == st.p_minus);
    }
  }
  const auto b = PotentialSpec::bouncer({1.0, 1.7, 9.81});
  const auto st = classical_state(b, 12.3);
  CHECK(st.turning_points.second * 1.7 * 9.81 == Catch::Approx(12.3).epsilon(1e-12));
  CHECK(st.p_minus == 0.0);
  const auto w = classical_state(PotentialSpec::infinite_well(25.0), 4.0);
  CHECK(w.p_minus == 0.0);
  CHECK(w.p_plus == Catch::Approx(2.0));
  CHECK(w.turning_points.first == -25.0);
}
