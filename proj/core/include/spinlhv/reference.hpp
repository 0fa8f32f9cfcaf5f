#pragma once

// Closed-form results for two coupled spins, used as oracles for the numeric
// engines and as the fast path for sweeps. Removable singularities at tau = 0
// are evaluated by Taylor series.

#include "spinlhv/common.hpp"

namespace spinlhv::reference {

struct SeparabilityParams {
  double alpha;  // (p0A^2 + p0B^2) / 2
  double beta;   // p0A^2 p0B^2

  static SeparabilityParams from_momenta(double p0A, double p0B);
};

// 8 |w0A|^2 |w0B|^2 sin^2(tau/2) / ((1 + |w0A|^2)^2 (1 + |w0B|^2)^2).
double cq_closed_w(cplx w0A, cplx w0B, double tau);

// (1/2)(1 - p0A^2)(1 - p0B^2) sin^2(tau/2).
double cq_closed_p(double p0A, double p0B, double tau);

// delta^2/(3 + delta^2) [X + delta^2 Y / tau^2] with
// X = (1 - alpha)(1 - sinc^2 tau), Y = (beta - alpha)(cos tau - sinc tau)^2.
double ccl_closed(double delta, double p0A, double p0B, double tau);

// delta^2 (1 - alpha) / (3 + delta^2).
double ccl_limit(double delta, double alpha);

struct ShortTimeCoeffs {
  double omega_q;
  double omega_cl;
};

// Coefficients of C ~ omega tau^2 near tau = 0. omega_q = (1 - 2 alpha + beta)/8;
// omega_cl = delta^2/(3 + delta^2) [(1 - alpha)/3 + delta^2 (beta - alpha)/9],
// which is (3 - 4 alpha + beta)/36 at delta = 1.
ShortTimeCoeffs short_time_coeffs(double p0A, double p0B, double delta = 1.0);

struct GammaFactors {
  double gamma_q;   // cos(n pi / 4)
  double gamma_cl;  // delta sin(n pi / 2) / (n pi / 2), delta at n = 0
};

// Throws std::invalid_argument for n < 0.
GammaFactors gamma_factors(int n, double delta);

struct CorrelationUV {
  double u_q;   // sin^2(tau/2) / 4
  double v_q;   // sin(tau/2) / 4
  double u_cl;  // delta^2 [j1(tau)^2 - sinc^2(tau)/9], 2 delta^2 tau^2/135 near 0
  double v_cl;  // delta tau j1(tau) / 3, delta tau / 9 near 0
};

// Covariance entries for w0A = w0B = 1: u on (x, x), v on (y, z) and (z, y).
CorrelationUV corr_uv_closed(double tau, double delta);

// sin(x)/x and (sin x - x cos x)/x^3 with series near zero.
double sinc(double x);
double j1_scaled(double x);

}  // namespace spinlhv::reference
