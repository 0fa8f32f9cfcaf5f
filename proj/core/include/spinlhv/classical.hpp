#pragma once

// Classical hidden-variable engine for two spins coupled through H = xi p_A p_B.
//
// A phase point x = (q_A, p_A, q_B, p_B) is the deterministic hidden variable.
// The epistemic state is the product density
//   wp0(x) = wp_delta(x_A; x0A) wp_delta(x_B; x0B),
//   wp_delta(x_s; x0s) = (1 + delta f(x_s, x0s)) / 4pi,
// transported by the exact flow x -> M(tau) x, so wp(x, tau) = wp0(M(-tau) x).
//
// Phase-space integrals use a periodic trapezoidal rule in each q and composite
// Gauss-Legendre in each p. Because the backward flow shears q_A by p_B and q_B
// by p_A only, every integral needed here factorizes, for fixed (p_A, p_B), into
// a product of two one-dimensional q sums; the 4D integrals become contractions
// over the (p_A, p_B) grid.

#include <functional>
#include <optional>
#include <stdexcept>

#include <Eigen/Core>

#include "spinlhv/common.hpp"
#include "spinlhv/spinspace.hpp"

namespace spinlhv::classical {

using spinspace::Direction;
using spinspace::PhasePoint;

// (q_A, p_A, q_B, p_B). The q entries are not wrapped: the flow is affine.
using PhaseVector = Eigen::Vector4d;

class DistributionSpec {
 public:
  // Probability density: delta must lie in [0, 1] (std::domain_error otherwise).
  DistributionSpec(double delta, PhasePoint x0A, PhasePoint x0B);

  // Quasi-density with any delta >= 0, e.g. delta = sqrt(3) for the Wigner
  // function. The result may take negative values.
  static DistributionSpec quasi(double delta, PhasePoint x0A, PhasePoint x0B);

  double delta() const { return delta_; }
  const PhasePoint& center(Subsystem s) const { return s == Subsystem::A ? x0A_ : x0B_; }
  bool may_be_negative() const { return delta_ > 1.0; }

 private:
  DistributionSpec(double delta, PhasePoint x0A, PhasePoint x0B, bool quasi);

  double delta_;
  PhasePoint x0A_;
  PhasePoint x0B_;
};

// p p0 + cos(q - q0) sqrt((1 - p^2)(1 - p0^2)) = J(x) . J(x0).
double f_kernel(const PhasePoint& x, const PhasePoint& x0);

double pdelta(const PhasePoint& x, const PhasePoint& x0, double delta);

// Smallest wp_delta(.; x0) on an n x n grid covering [0, 2pi] x [-1, 1].
double min_pdelta_on_grid(double delta, const PhasePoint& x0, int n = 201);

// M(tau): q_A += tau p_B, q_B += tau p_A. det M = 1.
Eigen::Matrix4d flow_matrix(double tau);

PhaseVector flow(const PhaseVector& x, double tau);

double evolved_density(const DistributionSpec& spec, const PhaseVector& x, double tau);

struct QuadratureSpec {
  int n_q = 64;  // uniform nodes per angle, even and >= 8
  int n_p = 64;  // Gauss-Legendre nodes per momentum panel, >= 4
  // When set, each result is recomputed with (2 n_q, 2 n_p) and the call
  // throws QuadratureNotConverged if any integral moves by more than this.
  std::optional<double> gate_tolerance = 1e-8;

  void validate() const;  // std::invalid_argument on bad node counts
  QuadratureSpec doubled() const { return {2 * n_q, 2 * n_p, std::nullopt}; }
  QuadratureSpec ungated() const { return {n_q, n_p, std::nullopt}; }
};

class QuadratureNotConverged : public std::runtime_error {
 public:
  QuadratureNotConverged(const std::string& what, double shift)
      : std::runtime_error(what), shift_(shift) {}
  double shift() const { return shift_; }

 private:
  double shift_;
};

// Number of Gauss-Legendre panels per momentum axis for an integrand sheared by
// tau: the phase tau p swept across half a panel stays below 24 radians.
int momentum_panels(double tau);

// Tensor-product rule over [0, 2pi]^2 x [-1, 1]^2. `shear` is the largest |tau|
// appearing in the integrand, used to pick the momentum panel count.
double integrate_phase_space(const std::function<double(const PhaseVector&)>& integrand,
                             const QuadratureSpec& quad, double shear = 0.0);

// Every integral of wp(x, tau) the engine reports, from one pass over the grid.
struct PhaseSpaceSummary {
  double total = 0.0;              // int wp d4x
  double joint_square = 0.0;       // int wp^2 d4x
  double marginal_square_a = 0.0;  // int wp_A^2 d2x_A
  double marginal_square_b = 0.0;  // int wp_B^2 d2x_B
  Mat3 correlations = Mat3::Zero();  // int wp J_i(x_A) J_j(x_B) d4x
  Vec3 moment_a = Vec3::Zero();      // int wp J(x_A) d4x
  Vec3 moment_b = Vec3::Zero();      // int wp J(x_B) d4x
};

PhaseSpaceSummary summarize(const DistributionSpec& spec, double tau, const QuadratureSpec& quad);

enum class PurityTarget { A, B, joint };

// int wp^2(tau) / int wp^2(0), over the marginal (d2x) or the joint (d4x).
double classical_purity(const DistributionSpec& spec, PurityTarget target, double tau,
                        const QuadratureSpec& quad);

double marginal_density(const DistributionSpec& spec, Subsystem s, const PhasePoint& x, double tau,
                        const QuadratureSpec& quad);

// (1/2) sum_s (1 - P_cl[wp_s(tau)] / P_cl[wp~_s(tau)]), wp~_s the
// interaction-free marginal.
double ccl_numeric(const DistributionSpec& spec, double tau, const QuadratureSpec& quad);

// Same quantity from precomputed summaries at tau and at tau = 0. Without a
// free Hamiltonian the interaction-free marginal is the initial one.
double ccl_from_summaries(const PhaseSpaceSummary& now, const PhaseSpaceSummary& initial);

CorrelationMatrix classical_correlation_matrix(const DistributionSpec& spec, double tau,
                                               const QuadratureSpec& quad);

// <(nA . J_A)(nB . J_B)> - <nA . J_A><nB . J_B>.
double correlation_function_cl(const DistributionSpec& spec, double tau, const Direction& nA,
                               const Direction& nB, const QuadratureSpec& quad);

double covariance(const PhaseSpaceSummary& summary, const Direction& nA, const Direction& nB);

}  // namespace spinlhv::classical
