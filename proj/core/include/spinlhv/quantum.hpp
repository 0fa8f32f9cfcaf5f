#pragma once

// Exact quantum mechanics of spin coherent states and of two qubits coupled by
// H = (xi / hbar) J_z^A J_z^B.
//
// Units: hbar = 1, time is the dimensionless tau = xi t, so the propagator is
// exp(-i (tau / 4) sigma_z (x) sigma_z).
//
// Single-spin basis: |j, -j + n>, n = 0..2j. For a qubit index 0 is m = -1/2
// and index 1 is m = +1/2, so sigma_z = diag(-1, +1) and sigma_y = [[0, i],
// [-i, 0]] in this ordering. Two-qubit amplitudes are ordered (--, -+, +-, ++),
// i.e. index 2 a + b with a the A index and b the B index.

#include <Eigen/Core>

#include "spinlhv/common.hpp"
#include "spinlhv/spinspace.hpp"

namespace spinlhv::quantum {

using spinspace::CoherentLabel;
using spinspace::Direction;
using spinspace::PhasePoint;

inline constexpr int kMaxTwoJ = 100;  // j_max = 50

// Half-integer spin quantum number, stored as 2j.
class SpinJ {
 public:
  // Throws std::invalid_argument unless 1 <= two_j <= kMaxTwoJ.
  explicit SpinJ(int two_j);
  static SpinJ half() { return SpinJ(1); }

  int two_j() const { return two_j_; }
  double value() const { return 0.5 * two_j_; }
  int dimension() const { return two_j_ + 1; }

 private:
  int two_j_;
};

struct PureStateJ {
  SpinJ j;
  Eigen::VectorXcd amplitudes;
};

// |w> = e^{w J_+} |j, -j> / (1 + |w|^2)^j, binomials through log-gamma.
PureStateJ coherent_state(const CoherentLabel& w, SpinJ j);

// J_x, J_y, J_z (axis 0, 1, 2) in units of hbar, built from the ladder
// operators in the |j, -j + n> basis.
Eigen::MatrixXcd spin_matrix(SpinJ j, int axis);

// Pauli matrices in the (-, +) ordering, equal to 2 J_r for j = 1/2.
Eigen::Matrix2cd pauli(int axis);

struct SpinExpectation {
  Vec3 matrix_elements;  // <w|J_r|w>
  Vec3 closed_form;      // j ((w + w*), i (w - w*), |w|^2 - 1) / (1 + |w|^2)
};

// Throws std::logic_error if the two routes disagree by more than 1e-10.
SpinExpectation spin_expectation(const CoherentLabel& w, SpinJ j);

// Sum over r of <J_r^2> - <J_r>^2, from matrix elements. Equals j.
double spin_variance(const CoherentLabel& w, SpinJ j);

struct TwoQubitState {
  Eigen::Vector4cd amplitudes;
};

TwoQubitState product_state(const CoherentLabel& w0A, const CoherentLabel& w0B);

TwoQubitState evolve(const TwoQubitState& psi0, double tau);

struct DensityMatrix2 {
  Eigen::Matrix2cd entries;
};

DensityMatrix2 reduce(const TwoQubitState& psi, Subsystem keep);

double purity(const DensityMatrix2& rho);

// Linear-entropy entanglement generated from |w0A> (x) |w0B> at time tau:
// (1/2) sum_s (1 - P[rho_s] / P[rho~_s]), where rho~_s is the interaction-free
// reduced state.
double cq_numeric(const CoherentLabel& w0A, const CoherentLabel& w0B, double tau);

// T_ij = <psi| sigma_i (x) sigma_j |psi>.
CorrelationMatrix pauli_correlation_matrix(const TwoQubitState& psi);

// Single-spin observable normalization: n . sigma or n . J = n . sigma / 2.
enum class ObservableScale { pauli, spin_half };

// Covariance <O_A O_B> - <O_A><O_B> of O_s = c n_s . sigma, c = 1 or 1/2.
double correlation_function_q(const TwoQubitState& psi, const Direction& nA,
                              const Direction& nB,
                              ObservableScale scale = ObservableScale::spin_half);

// Husimi density of a qubit state over (q, p): (2j + 1) <w|rho|w> / 4pi, which
// integrates to one over [0, 2pi] x [-1, 1].
double husimi_reduced(const DensityMatrix2& rho, const PhasePoint& x);

}  // namespace spinlhv::quantum
