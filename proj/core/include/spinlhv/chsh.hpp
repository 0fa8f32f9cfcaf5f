#pragma once

// CHSH combination B = |<A B> + <A' B> + <A B'> - <A' B'>| for bilinear joint
// expectations <A B> = a^T T b, and its maximization over unit directions.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spinlhv/common.hpp"
#include "spinlhv/spinspace.hpp"

namespace spinlhv::chsh {

using spinspace::Direction;

// The six free angles; Alice's first direction a is fixed to z.
struct MeasurementSetting {
  Direction a_prime;
  Direction b;
  Direction b_prime;

  static MeasurementSetting from_angles(double theta_a_prime, double phi_a_prime, double theta_b,
                                        double phi_b, double theta_b_prime, double phi_b_prime);
};

struct ObservableBounds {
  double o_min;
  double o_max;

  // Throws std::invalid_argument if o_min > o_max or a bound is not finite.
  ObservableBounds(double lo, double hi);
  double bar() const;
};

// |z^T T (b + b') + a'^T T (b - b')|.
double chsh_value(const Mat3& t, const MeasurementSetting& mu);
double chsh_value(const CorrelationMatrix& t, const MeasurementSetting& mu);

// 2 max{a, a'} max{b, b'} over the bars of the four spectra.
double chsh_classical_bound(const ObservableBounds& a, const ObservableBounds& a_prime,
                            const ObservableBounds& b, const ObservableBounds& b_prime);

enum class BmaxMethod { closed_form, optimizer };

struct BmaxResult {
  double value = 0.0;
  // Setting that attains `value` for the matrix alice_frame * T, i.e. with
  // Alice's first direction rotated onto z. alice_frame is the identity
  // whenever a = z was imposed.
  MeasurementSetting argmax;
  Mat3 alice_frame = Mat3::Identity();
  BmaxMethod method = BmaxMethod::closed_form;
};

// 2 sqrt(s1^2 + s2^2) from the two largest singular values of T.
BmaxResult bmax_closed_form(const Mat3& t);

enum class AliceAxis {
  fixed_z,  // a = z, six angles
  free,     // a searched as well, eight angles
};

struct OptimizerOptions {
  int restarts = 16;  // >= 8
  AliceAxis alice = AliceAxis::fixed_z;
};

class OptimizerLandscapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Coarse angle grid plus seeded random starts, each refined by Nelder-Mead.
// Deterministic for a given seed. Throws OptimizerLandscapeError when the two
// best restarts differ by more than 1e-4.
BmaxResult bmax_optimize(const Mat3& t, std::uint64_t seed, const OptimizerOptions& options = {});

class DegenerateNormalization : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// (B(tau) - 2) / (max B - 2). Throws DegenerateNormalization when the series
// is empty or its maximum does not exceed 2 + 1e-9.
std::vector<double> violation_quantifier(const std::vector<double>& bmax_series);

}  // namespace spinlhv::chsh
