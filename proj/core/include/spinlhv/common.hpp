#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Core>

namespace spinlhv {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Subsystem { A, B };

// Joint spin-direction expectations T_ij = <(e_i . O_A)(e_j . O_B)>, so that
// for unit directions a, b the joint expectation is a^T T b. Produced by both
// the quantum and the classical engine; the CHSH layer only sees this type.
struct CorrelationMatrix {
  Mat3 entries = Mat3::Zero();
};

}  // namespace spinlhv
