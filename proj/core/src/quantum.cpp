#include "spinlhv/quantum.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spinlhv::quantum {
namespace {

constexpr cplx kI{0.0, 1.0};

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

Eigen::Vector2cd qubit_coherent(const CoherentLabel& w) {
  if (w.at_infinity) return {0.0, 1.0};
  return Eigen::Vector2cd(1.0, w.w) / std::sqrt(1.0 + std::norm(w.w));
}

// (O_A (x) O_B) as a 4x4 matrix in the 2a + b ordering.
Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

double expectation(const Eigen::VectorXcd& psi, const Eigen::MatrixXcd& op) {
  return psi.dot(op * psi).real();
}

}  // namespace

SpinJ::SpinJ(int two_j) : two_j_(two_j) {
  if (two_j < 1 || two_j > kMaxTwoJ) {
    throw std::invalid_argument("SpinJ: 2j must lie in [1, " + std::to_string(kMaxTwoJ) +
                                "], got " + std::to_string(two_j));
  }
}

PureStateJ coherent_state(const CoherentLabel& w, SpinJ j) {
  const int dim = j.dimension();
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(dim);
  if (w.at_infinity) {
    amps(dim - 1) = 1.0;
    return {j, amps};
  }
  const double r = std::abs(w.w);
  if (r == 0.0) {
    amps(0) = 1.0;
    return {j, amps};
  }
  const double arg = std::arg(w.w);
  const double log_norm = j.value() * std::log1p(r * r);
  for (int n = 0; n < dim; ++n) {
    const double log_mod = 0.5 * log_binomial(j.two_j(), n) + n * std::log(r) - log_norm;
    amps(n) = std::polar(std::exp(log_mod), n * arg);
  }
  return {j, amps};
}

Eigen::MatrixXcd spin_matrix(SpinJ j, int axis) {
  const int dim = j.dimension();
  const double jv = j.value();
  Eigen::MatrixXcd raise = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n + 1 < dim; ++n) {
    const double m = -jv + n;
    raise(n + 1, n) = std::sqrt(jv * (jv + 1.0) - m * (m + 1.0));
  }
  switch (axis) {
    case 0:
      return 0.5 * (raise + raise.adjoint());
    case 1:
      return (raise - raise.adjoint()) / (2.0 * kI);
    case 2: {
      Eigen::MatrixXcd jz = Eigen::MatrixXcd::Zero(dim, dim);
      for (int n = 0; n < dim; ++n) jz(n, n) = -jv + n;
      return jz;
    }
    default:
      throw std::invalid_argument("spin_matrix: axis must be 0, 1 or 2");
  }
}

Eigen::Matrix2cd pauli(int axis) { return 2.0 * spin_matrix(SpinJ::half(), axis); }

SpinExpectation spin_expectation(const CoherentLabel& w, SpinJ j) {
  const auto state = coherent_state(w, j);
  SpinExpectation out;
  for (int r = 0; r < 3; ++r) {
    out.matrix_elements(r) = expectation(state.amplitudes, spin_matrix(j, r));
  }
  if (w.at_infinity) {
    out.closed_form = Vec3(0.0, 0.0, j.value());
  } else {
    const double den = 1.0 + std::norm(w.w);
    const cplx sum = w.w + std::conj(w.w);
    const cplx diff = kI * (w.w - std::conj(w.w));
    out.closed_form = j.value() *
                      Vec3(sum.real() / den, diff.real() / den, (std::norm(w.w) - 1.0) / den);
  }
  const double gap = (out.matrix_elements - out.closed_form).cwiseAbs().maxCoeff();
  if (!(gap <= 1e-10)) {
    throw std::logic_error("spin_expectation: matrix elements and closed form differ by " +
                           std::to_string(gap));
  }
  return out;
}

double spin_variance(const CoherentLabel& w, SpinJ j) {
  const auto state = coherent_state(w, j);
  double total = 0.0;
  for (int r = 0; r < 3; ++r) {
    const Eigen::MatrixXcd op = spin_matrix(j, r);
    const double mean = expectation(state.amplitudes, op);
    total += expectation(state.amplitudes, op * op) - mean * mean;
  }
  return total;
}

TwoQubitState product_state(const CoherentLabel& w0A, const CoherentLabel& w0B) {
  const Eigen::Vector2cd a = qubit_coherent(w0A);
  const Eigen::Vector2cd b = qubit_coherent(w0B);
  TwoQubitState psi;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) psi.amplitudes(2 * i + k) = a(i) * b(k);
  return psi;
}

TwoQubitState evolve(const TwoQubitState& psi0, double tau) {
  // sigma_z (x) sigma_z is +1 on --, ++ and -1 on -+, +-.
  const cplx same = std::polar(1.0, -0.25 * tau);
  const cplx flip = std::conj(same);
  TwoQubitState out = psi0;
  out.amplitudes(0) *= same;
  out.amplitudes(1) *= flip;
  out.amplitudes(2) *= flip;
  out.amplitudes(3) *= same;
  return out;
}

DensityMatrix2 reduce(const TwoQubitState& psi, Subsystem keep) {
  const auto& v = psi.amplitudes;
  DensityMatrix2 rho{Eigen::Matrix2cd::Zero()};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      cplx acc = 0.0;
      for (int k = 0; k < 2; ++k) {
        acc += keep == Subsystem::A ? v(2 * i + k) * std::conj(v(2 * j + k))
                                    : v(2 * k + i) * std::conj(v(2 * k + j));
      }
      rho.entries(i, j) = acc;
    }
  }
  return rho;
}

double purity(const DensityMatrix2& rho) { return (rho.entries * rho.entries).trace().real(); }

double cq_numeric(const CoherentLabel& w0A, const CoherentLabel& w0B, double tau) {
  const TwoQubitState psi0 = product_state(w0A, w0B);
  const TwoQubitState psi = evolve(psi0, tau);
  double sum = 0.0;
  for (Subsystem s : {Subsystem::A, Subsystem::B}) {
    // Free dynamics is absent, so the interaction-free reduced state is the
    // initial one.
    const double reference = purity(reduce(psi0, s));
    sum += 1.0 - purity(reduce(psi, s)) / reference;
  }
  return 0.5 * sum;
}

CorrelationMatrix pauli_correlation_matrix(const TwoQubitState& psi) {
  CorrelationMatrix t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      t.entries(i, j) = expectation(psi.amplitudes, kron(pauli(i), pauli(j)));
  return t;
}

double correlation_function_q(const TwoQubitState& psi, const Direction& nA,
                              const Direction& nB, ObservableScale scale) {
  const Vec3 a = spinspace::direction_to_cartesian(nA);
  const Vec3 b = spinspace::direction_to_cartesian(nB);
  Eigen::Matrix2cd opA = Eigen::Matrix2cd::Zero();
  Eigen::Matrix2cd opB = Eigen::Matrix2cd::Zero();
  for (int r = 0; r < 3; ++r) {
    opA += a(r) * pauli(r);
    opB += b(r) * pauli(r);
  }
  const double c = scale == ObservableScale::pauli ? 1.0 : 0.5;
  opA *= c;
  opB *= c;
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const double joint = expectation(psi.amplitudes, kron(opA, opB));
  const double meanA = expectation(psi.amplitudes, kron(opA, id));
  const double meanB = expectation(psi.amplitudes, kron(id, opB));
  return joint - meanA * meanB;
}

double husimi_reduced(const DensityMatrix2& rho, const PhasePoint& x) {
  const Eigen::Vector2cd w = qubit_coherent(spinspace::w_from_phase_point(x));
  const double overlap = w.dot(rho.entries * w).real();
  return 2.0 * overlap / (4.0 * kPi);
}

}  // namespace spinlhv::quantum
