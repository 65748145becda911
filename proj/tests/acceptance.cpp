// Acceptance run: evaluates criteria 1-7 at their stated tolerances and
// prints one PASS/FAIL line per criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "cqd/commands.hpp"
#include "cqd/correspondence.hpp"
#include "oracles.hpp"

using namespace cqd;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [" << what << "]";
    }
  }
};

std::string fmt(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Eigenstate nearest_state(const PotentialSpec& spec, double target) {
  const auto states = closed_court_spectrum(spec, 1.05 * target);
  return *std::min_element(states.begin(), states.end(), [&](const auto& l, const auto& r) {
    return std::abs(l.energy - target) < std::abs(r.energy - target);
  });
}

double tau_quadrature(const PotentialSpec& spec, double e) {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [&](double x) { return 1.0 / std::sqrt(e - evaluate_potential(spec, x)); };
  return std::sqrt(spec.constants.mass / 2.0) * (ts.integrate(f, -spec.a, 0.0) + ts.integrate(f, 0.0, spec.a));
}

Verdict criterion1() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& ref : cli::kTableOneReference) {
    const auto spec = PotentialSpec::closed_court(ref.v0, 25.0);
    const auto st = nearest_state(spec, ref.energy);
    const auto cs = classical_state(spec, st.energy);
    const std::string row = "V0=" + fmt(ref.v0) + " ";
    v.require(std::abs(st.energy - ref.energy) <= 0.001, row + "E=" + fmt(st.energy, 7) + " vs " + fmt(ref.energy, 7));
    v.require(std::abs(cs.p_minus - ref.p_minus) <= 0.002,
              row + "p-=" + fmt(cs.p_minus, 6) + " vs " + fmt(ref.p_minus, 6));
    v.require(std::abs(cs.p_plus - ref.p_plus) <= 0.002, row + "p+=" + fmt(cs.p_plus, 6) + " vs " + fmt(ref.p_plus, 6));
    v.require(std::abs(cs.delta_p() - ref.delta_p) <= 0.002,
              row + "dp=" + fmt(cs.delta_p(), 6) + " vs " + fmt(ref.delta_p, 6));
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.require(seconds < 10.0, "runtime " + fmt(seconds) + " s");
  v.detail << " runtime " << fmt(seconds, 3) << " s";
  return v;
}

Verdict criterion2() {
  Verdict v;
  double worst_p = 0.0, worst_x = 0.0, worst_tau = 0.0;
  for (const auto& ref : cli::kTableOneReference) {
    const auto spec = PotentialSpec::closed_court(ref.v0, 25.0);
    const double e = nearest_state(spec, ref.energy).energy;
    const auto cs = classical_state(spec, e);
    const double tau_q = tau_quadrature(spec, e);
    worst_tau = std::max(worst_tau, std::abs(cs.tau - tau_q) / tau_q);

    // 1000 points across the positive momentum band, both signs.
    std::vector<double> grid;
    for (int i = 0; i < 500; ++i) {
      const double p = cs.p_minus + (cs.p_plus - cs.p_minus) * (i + 0.5) / 500.0;
      grid.push_back(-p);
      grid.push_back(p);
    }
    std::sort(grid.begin(), grid.end());
    const auto curve = classical_momentum_density(spec, e, grid);
    const auto branches = classical_detail::momentum_branches(classical_orbit(spec, e));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double quad = 0.0;
      for (const auto& b : branches) {
        if (grid[i] >= b.p_lo && grid[i] <= b.p_hi) quad += 1.0 / (2.0 * tau_q * std::abs(b.force));
      }
      const double closed = 1.0 / (2.0 * cs.delta_p());
      worst_p = std::max({worst_p, std::abs(quad - closed), std::abs(curve.values[i] - closed)});
    }

    const auto xs = numerics::linspace(-24.975, 24.975, 1999);
    const auto pos = classical_position_density(spec, e, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double closed =
          ref.v0 / (4.0 * 25.0 * (std::sqrt(e) - std::sqrt(e - ref.v0)) * std::sqrt(e - ref.v0 * std::abs(xs[i]) / 25.0));
      const double speed = std::sqrt(2.0 * (e - evaluate_potential(spec, xs[i])) / spec.constants.mass);
      worst_x = std::max({worst_x, std::abs(1.0 / (tau_q * speed) - closed), std::abs(pos.values[i] - closed)});
    }
  }
  v.require(worst_p <= 1e-8, "P(p) error " + fmt(worst_p));
  v.require(worst_x <= 1e-10, "P(x) error " + fmt(worst_x));
  v.detail << " max|P(p)-1/(2dp)|=" << fmt(worst_p, 3) << " max|P(x)-closed|=" << fmt(worst_x, 3)
           << " tau rel=" << fmt(worst_tau, 3);
  return v;
}

Verdict criterion3() {
  Verdict v;
  double worst_density = 0.0, worst_parseval = 0.0;
  auto check_state = [&](const Eigenstate& st, const std::string& label) {
    const auto& spec = st.spec;
    const double pos_q = quantum_position_density(st).total_mass();
    const auto pos_c = classical_position_density(spec, st.energy, default_position_grid(spec, st.energy));
    const auto mom_c =
        classical_momentum_density(spec, st.energy, default_classical_momentum_grid(spec, st.energy));
    for (double m : {pos_q, pos_c.total_mass(), mom_c.total_mass()}) {
      worst_density = std::max(worst_density, std::abs(m - 1.0));
      v.require(std::abs(m - 1.0) <= 1e-6, label + " density mass " + fmt(m, 10));
    }
    const double parseval = momentum_transform(st).norm();
    worst_parseval = std::max(worst_parseval, std::abs(parseval - 1.0));
    v.require(std::abs(parseval - 1.0) <= 1e-4, label + " Parseval " + fmt(parseval, 8));
  };
  for (const auto& ref : cli::kTableOneReference) {
    check_state(nearest_state(PotentialSpec::closed_court(ref.v0, 25.0), ref.energy), "V0=" + fmt(ref.v0));
  }
  const auto box = PotentialSpec::infinite_well(25.0);
  for (Parity p : {Parity::Even, Parity::Odd}) {
    for (int n = 1; n <= 20; ++n) check_state(eigenstate_infinite_well(box, n, p), "well n=" + std::to_string(n));
  }
  v.detail << " max density error " << fmt(worst_density, 3) << ", max Parseval deficit " << fmt(worst_parseval, 3);
  return v;
}

Verdict criterion4() {
  Verdict v;
  const auto box = PotentialSpec::infinite_well(25.0);
  double worst = 0.0;
  for (int n : {1, 5, 10}) {
    const auto st = eigenstate_infinite_well(box, n, Parity::Even);
    const auto phi = momentum_transform(st);
    double err = 0.0;
    for (std::size_t i = 0; i < phi.grid.size(); ++i) {
      err = std::max(err, std::abs(phi.phi[i] - infinite_well_momentum_closed_form(box, n, Parity::Even, phi.grid[i])));
    }
    v.require(err <= 1e-6, "n=" + std::to_string(n) + " error " + fmt(err));
    worst = std::max(worst, err);
  }
  v.detail << " max abs error " << fmt(worst, 3);
  return v;
}

Verdict criterion5() {
  Verdict v;
  const RunConfig defaults;
  const auto spec = PotentialSpec::bouncer();
  const double e = defaults.task.energy;
  const auto draws = sample_measurements(spec, e, 1000, defaults.task.seed);
  const auto [plo, phi] = variable_range(spec, e, Variable::Momentum);
  const auto p_counts = histogram_counts(draws, Variable::Momentum, numerics::linspace(plo, phi, 11));
  double chi2 = 0.0;
  for (auto c : p_counts) chi2 += (c - 100.0) * (c - 100.0) / 100.0;
  const double critical = boost::math::quantile(boost::math::complement(boost::math::chi_squared(9.0), 0.01));
  v.require(chi2 < critical, "chi2 " + fmt(chi2) + " >= " + fmt(critical));
  const auto [zlo, zhi] = variable_range(spec, e, Variable::Position);
  const auto z_counts = histogram_counts(draws, Variable::Position, numerics::linspace(zlo, zhi, 11));
  v.require(z_counts.back() > z_counts.front(), "last decile not above first");
  v.detail << " seed " << defaults.task.seed << " chi2=" << fmt(chi2) << " (1% critical " << fmt(critical)
           << "), first/last decile " << z_counts.front() << "/" << z_counts.back();
  return v;
}

Verdict criterion6() {
  Verdict v;
  const std::vector<double> v0s{10.0, 6.0, 2.0};
  const auto reports = v0_sweep(25.0, 1.0, 0.5, 10.0, v0s);
  const double reference_dp[] = {2.916, 1.156, 0.332};
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    const std::string row = "V0=" + fmt(r.spec.v0) + " ";
    if (r.flagged) {
      v.require(false, row + "flagged: " + r.note);
      continue;
    }
    const double expected = 1.0 / (2.0 * reference_dp[i]);
    v.require(std::abs(r.plateau_height - expected) <= 0.01 * expected, row + "plateau " + fmt(r.plateau_height));
    v.require(r.support_mass_momentum > calibration::kSupportMass, row + "support mass " + fmt(r.support_mass_momentum));
    v.require(!r.classical_unreliable, row + "breakdown flag set");
    if (i > 0) v.require(r.plateau_height > reports[i - 1].plateau_height, row + "plateau not increasing");
    v.detail << " " << row << "plateau=" << fmt(r.plateau_height) << " mass=" << fmt(r.support_mass_momentum);
  }
  return v;
}

Verdict criterion7() {
  Verdict v;
  double worst = 0.0;
  std::size_t count = 0;
  for (double v0 : {10.0, 6.0, 2.0}) {
    const auto spec = PotentialSpec::closed_court(v0, 25.0);
    std::vector<double> energies;
    for (Parity p : {Parity::Even, Parity::Odd}) {
      const auto found = eigenvalues_closed_court(spec, 12.0, p).energies;
      energies.insert(energies.end(), found.begin(), found.end());
    }
    std::sort(energies.begin(), energies.end());
    const auto roots = oracle::shooting_spectrum(spec, v0 + 1e-9, 12.0, 0.01);
    if (roots.size() != energies.size()) {
      v.require(false, "V0=" + fmt(v0) + " count " + std::to_string(energies.size()) + " vs shooting " +
                           std::to_string(roots.size()));
      continue;
    }
    for (std::size_t i = 0; i < roots.size(); ++i) worst = std::max(worst, std::abs(energies[i] - roots[i]) / roots[i]);
    count += roots.size();
  }
  v.require(worst <= 1e-4, "eigenvalue rel error " + fmt(worst));
  double wronskian = 0.0;
  for (int i = 0; i <= 80000; ++i) {
    const double z = -40.0 + i * 1e-3;
    const auto a = airy_eval(z);
    wronskian = std::max(wronskian, std::abs(std::numbers::pi * (a.ai * a.bi_prime - a.ai_prime * a.bi) - 1.0));
  }
  v.require(wronskian <= 1e-10, "Wronskian " + fmt(wronskian));
  v.detail << " " << count << " eigenvalues, max rel error " << fmt(worst, 3) << "; Wronskian max rel "
           << fmt(wronskian, 3);
  return v;
}

}  // namespace

int main() {
  const std::pair<const char*, Verdict (*)()> criteria[] = {
      {"reference table reproduction", criterion1},
      {"classical oracle equivalence", criterion2},
      {"normalization and Parseval", criterion3},
      {"flat-well momentum transform", criterion4},
      {"bouncer statistics", criterion5},
      {"V0 -> 0 trend", criterion6},
      {"solver cross-validation", criterion7},
  };
  int failed = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    failed += v.pass ? 0 : 1;
    std::printf("criterion %d %s: %s.%s\n", index, v.pass ? "PASS" : "FAIL", name, v.detail.str().c_str());
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed;
}
