#include "spinlhv/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace spinlhv::reference {
namespace {

constexpr double kSeriesCutoff = 1e-2;

// 1 - sin(x)/x.
double one_minus_sinc(double x) {
  const double x2 = x * x;
  if (std::abs(x) < kSeriesCutoff) return x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
  return 1.0 - std::sin(x) / x;
}

}  // namespace

SeparabilityParams SeparabilityParams::from_momenta(double p0A, double p0B) {
  const double a2 = p0A * p0A;
  const double b2 = p0B * p0B;
  return {0.5 * (a2 + b2), a2 * b2};
}

double sinc(double x) { return 1.0 - one_minus_sinc(x); }

double j1_scaled(double x) {
  const double x2 = x * x;
  if (std::abs(x) < kSeriesCutoff) {
    return 1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0 - x2 * x2 * x2 / 45360.0;
  }
  return (std::sin(x) - x * std::cos(x)) / (x2 * x);
}

double cq_closed_w(cplx w0A, cplx w0B, double tau) {
  const double a = std::norm(w0A);
  const double b = std::norm(w0B);
  const double s = std::sin(0.5 * tau);
  return 8.0 * a * b * s * s / ((1.0 + a) * (1.0 + a) * (1.0 + b) * (1.0 + b));
}

double cq_closed_p(double p0A, double p0B, double tau) {
  const double s = std::sin(0.5 * tau);
  return 0.5 * (1.0 - p0A * p0A) * (1.0 - p0B * p0B) * s * s;
}

double ccl_closed(double delta, double p0A, double p0B, double tau) {
  const auto [alpha, beta] = SeparabilityParams::from_momenta(p0A, p0B);
  const double d2 = delta * delta;
  const double m = one_minus_sinc(tau);
  const double x = (1.0 - alpha) * m * (2.0 - m);
  // Y / tau^2 = (beta - alpha) tau^2 j1^2, finite at tau = 0.
  const double j = j1_scaled(tau);
  const double y_over_tau2 = (beta - alpha) * tau * tau * j * j;
  return d2 / (3.0 + d2) * (x + d2 * y_over_tau2);
}

double ccl_limit(double delta, double alpha) {
  const double d2 = delta * delta;
  return d2 * (1.0 - alpha) / (3.0 + d2);
}

ShortTimeCoeffs short_time_coeffs(double p0A, double p0B, double delta) {
  const auto [alpha, beta] = SeparabilityParams::from_momenta(p0A, p0B);
  const double d2 = delta * delta;
  return {(1.0 - 2.0 * alpha + beta) / 8.0,
          d2 / (3.0 + d2) * ((1.0 - alpha) / 3.0 + d2 * (beta - alpha) / 9.0)};
}

GammaFactors gamma_factors(int n, double delta) {
  if (n < 0) throw std::invalid_argument("gamma_factors: n must be >= 0");
  if (n == 0) return {1.0, delta};
  static constexpr double kSinQuarterTurns[4] = {0.0, 1.0, 0.0, -1.0};
  static constexpr double kCosEighthTurns[8] = {1.0, std::numbers::sqrt2 / 2, 0.0, -std::numbers::sqrt2 / 2,
                                                -1.0, -std::numbers::sqrt2 / 2, 0.0, std::numbers::sqrt2 / 2};
  const double half_turns = 0.5 * kPi * n;
  return {kCosEighthTurns[n % 8], delta * kSinQuarterTurns[n % 4] / half_turns};
}

CorrelationUV corr_uv_closed(double tau, double delta) {
  const double s = std::sin(0.5 * tau);
  const double d2 = delta * delta;
  const double t2 = tau * tau;
  const double j = j1_scaled(tau);
  double u_cl;
  if (std::abs(tau) < 1e-3) {
    u_cl = d2 * t2 * (2.0 / 135.0 - 43.0 * t2 / 14175.0);
  } else {
    const double sc = sinc(tau);
    u_cl = d2 * (j * j - sc * sc / 9.0);
  }
  return {0.25 * s * s, 0.25 * s, u_cl, delta * tau * j / 3.0};
}

}  // namespace spinlhv::reference
