#include "spinlhv/spinspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spinlhv::spinspace {

double wrap_angle(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value can round back up to exactly 2pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double circular_distance(double a, double b) {
  const double d = wrap_angle(a - b);
  return d > kPi ? kTwoPi - d : d;
}

Direction Direction::from_angles(double theta, double phi) {
  double t = wrap_angle(theta);
  double f = phi;
  if (t > kPi) {
    t = kTwoPi - t;
    f += kPi;
  }
  return {t, wrap_angle(f)};
}

Vec3 direction_to_cartesian(const Direction& d) {
  const double st = std::sin(d.theta);
  return {st * std::cos(d.phi), st * std::sin(d.phi), std::cos(d.theta)};
}

Direction direction_from_cartesian(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw std::domain_error("direction_from_cartesian: zero vector");
  const double z = std::clamp(v.z() / n, -1.0, 1.0);
  const double theta = std::acos(z);
  const double phi = (v.x() == 0.0 && v.y() == 0.0) ? 0.0 : std::atan2(v.y(), v.x());
  return {theta, wrap_angle(phi)};
}

PhasePoint::PhasePoint(double q, double p) {
  if (!std::isfinite(q) || !std::isfinite(p) || std::abs(p) > 1.0) {
    throw std::domain_error("PhasePoint: need finite q and p in [-1, 1], got p = " +
                            std::to_string(p));
  }
  q_ = wrap_angle(q);
  p_ = p;
}

PhasePoint phase_point_from_w(const CoherentLabel& label) {
  if (label.at_infinity) return {0.0, 1.0};
  const double r2 = std::norm(label.w);
  if (r2 == 0.0) return {0.0, -1.0};
  if (std::isinf(r2)) return {0.0, 1.0};
  // (r2 - 1) / (r2 + 1) cannot leave [-1, 1] in floating point for finite r2.
  return {-std::arg(label.w), (r2 - 1.0) / (r2 + 1.0)};
}

CoherentLabel w_from_phase_point(const PhasePoint& x) {
  if (x.p() >= 1.0) return CoherentLabel::infinity();
  const double modulus = std::sqrt((1.0 + x.p()) / (1.0 - x.p()));
  return CoherentLabel::finite(std::polar(modulus, -x.q()));
}

Vec3 classical_spin(const PhasePoint& x) {
  const double s = std::sqrt(1.0 - x.p() * x.p());
  return {s * std::cos(x.q()), s * std::sin(x.q()), x.p()};
}

}  // namespace spinlhv::spinspace
