#pragma once

// Small quadrature helpers shared by the engines.

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace cqd::numerics {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre rule by Newton iteration on P_n.
inline GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

// Composite Gauss-Legendre abscissae/weights for [lo, hi] split into
// `panels` equal panels.
inline GaussRule composite_gauss(double lo, double hi, int panels, const GaussRule& base) {
  GaussRule out;
  const std::size_t order = base.nodes.size();
  out.nodes.reserve(panels * order);
  out.weights.reserve(panels * order);
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * width;
    for (std::size_t i = 0; i < order; ++i) {
      out.nodes.push_back(mid + 0.5 * width * base.nodes[i]);
      out.weights.push_back(0.5 * width * base.weights[i]);
    }
  }
  return out;
}

inline double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("trapezoid: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return sum;
}

// Trapezoid integral of the piecewise-linear interpolant of (x, y) over
// [lo, hi] (clipped to the sampled range).
inline double trapezoid_between(std::span<const double> x, std::span<const double> y, double lo,
                                double hi) {
  if (x.size() < 2 || hi <= lo) return 0.0;
  lo = std::max(lo, x.front());
  hi = std::min(hi, x.back());
  double sum = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double x0 = x[i - 1], x1 = x[i];
    if (x1 <= lo || x0 >= hi || x1 == x0) continue;
    const double a = std::max(x0, lo), b = std::min(x1, hi);
    const double slope = (y[i] - y[i - 1]) / (x1 - x0);
    const double ya = y[i - 1] + slope * (a - x0);
    const double yb = y[i - 1] + slope * (b - x0);
    sum += 0.5 * (b - a) * (ya + yb);
  }
  return sum;
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) return {lo};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  out.back() = hi;
  return out;
}

}  // namespace cqd::numerics
