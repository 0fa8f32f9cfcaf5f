#pragma once

#include <vector>

namespace spinlhv::quadrature {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
Rule gauss_legendre(int n);

// Gauss-Legendre on each of `panels` equal sub-intervals of [-1, 1].
Rule composite_gauss_legendre(int n, int panels);

// Periodic trapezoidal rule: n uniform nodes on [0, 2pi), weights 2pi / n.
Rule periodic_trapezoid(int n);

}  // namespace spinlhv::quadrature
