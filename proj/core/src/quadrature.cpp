#include "spinlhv/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "spinlhv/common.hpp"

namespace spinlhv::quadrature {

namespace {

// Returns P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double prev = 1.0;
  double cur = x;
  for (int k = 2; k <= n; ++k) {
    const double next = ((2.0 * k - 1.0) * x * cur - (k - 1.0) * prev) / k;
    prev = cur;
    cur = next;
  }
  return {cur, n * (x * cur - prev) / (x * x - 1.0)};
}

}  // namespace

Rule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [value, slope] = legendre(n, x);
      const double dx = value / slope;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double slope = legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * slope * slope);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

Rule composite_gauss_legendre(int n, int panels) {
  if (panels < 1) throw std::invalid_argument("composite_gauss_legendre: panels must be positive");
  const Rule base = gauss_legendre(n);
  Rule rule;
  rule.nodes.reserve(static_cast<std::size_t>(n) * panels);
  rule.weights.reserve(static_cast<std::size_t>(n) * panels);
  const double width = 2.0 / panels;
  for (int k = 0; k < panels; ++k) {
    const double mid = -1.0 + (k + 0.5) * width;
    for (int i = 0; i < n; ++i) {
      rule.nodes.push_back(mid + 0.5 * width * base.nodes[i]);
      rule.weights.push_back(0.5 * width * base.weights[i]);
    }
  }
  return rule;
}

Rule periodic_trapezoid(int n) {
  if (n < 1) throw std::invalid_argument("periodic_trapezoid: n must be positive");
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.assign(n, kTwoPi / n);
  for (int i = 0; i < n; ++i) rule.nodes[i] = kTwoPi * i / n;
  return rule;
}

}  // namespace spinlhv::quadrature
