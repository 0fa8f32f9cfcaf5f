#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spinlhv/spinspace.hpp"

using namespace spinlhv;
using namespace spinlhv::spinspace;

namespace {

std::mt19937_64 rng(11);
double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

void expect_vec(const Vec3& got, const Vec3& want, double tol) {
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(got(i), want(i), tol) << "component " << i;
}

}  // namespace

TEST(DirectionToCartesian, PolesAndEquator) {
  expect_vec(direction_to_cartesian({0.0, 2.7}), Vec3(0, 0, 1), 1e-15);
  expect_vec(direction_to_cartesian({kPi / 2, 0.0}), Vec3(1, 0, 0), 1e-15);
  expect_vec(direction_to_cartesian({kPi / 2, kPi / 2}), Vec3(0, 1, 0), 1e-15);
}

TEST(DirectionToCartesian, UnitNormForRandomAngles) {
  for (int i = 0; i < 2000; ++i) {
    const Direction d = Direction::from_angles(uniform(-10, 10), uniform(-10, 10));
    EXPECT_NEAR(direction_to_cartesian(d).norm(), 1.0, 1e-14);
    EXPECT_GE(d.theta, 0.0);
    EXPECT_LE(d.theta, kPi);
    EXPECT_GE(d.phi, 0.0);
    EXPECT_LT(d.phi, kTwoPi);
  }
}

TEST(DirectionFromAngles, ReflectionKeepsTheVector) {
  for (int i = 0; i < 200; ++i) {
    const double theta = uniform(-10, 10), phi = uniform(-10, 10);
    const Vec3 raw(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
    expect_vec(direction_to_cartesian(Direction::from_angles(theta, phi)), raw, 1e-13);
  }
}

TEST(DirectionFromCartesian, InvertsDirectionToCartesian) {
  for (int i = 0; i < 200; ++i) {
    const Direction d{uniform(0.01, kPi - 0.01), uniform(0, kTwoPi)};
    const Direction back = direction_from_cartesian(3.0 * direction_to_cartesian(d));
    EXPECT_NEAR(back.theta, d.theta, 1e-12);
    EXPECT_NEAR(circular_distance(back.phi, d.phi), 0.0, 1e-12);
  }
}

TEST(WrapAngle, HalfOpenInterval) {
  EXPECT_EQ(wrap_angle(0.0), 0.0);
  EXPECT_NEAR(wrap_angle(-0.5), kTwoPi - 0.5, 1e-15);
  EXPECT_NEAR(wrap_angle(7.0), 7.0 - kTwoPi, 1e-15);
  EXPECT_LT(wrap_angle(-1e-300), kTwoPi);
  EXPECT_LT(wrap_angle(kTwoPi), kTwoPi);
}

TEST(CircularDistance, Symmetric) {
  EXPECT_NEAR(circular_distance(0.1, kTwoPi - 0.1), 0.2, 1e-14);
  EXPECT_NEAR(circular_distance(0.0, kPi), kPi, 1e-15);
}

TEST(PhasePoint, RejectsMomentumOutsideRange) {
  EXPECT_THROW(PhasePoint(0.0, 1.0000001), std::domain_error);
  EXPECT_THROW(PhasePoint(0.0, -2.0), std::domain_error);
  EXPECT_THROW(PhasePoint(std::nan(""), 0.0), std::domain_error);
  EXPECT_NO_THROW(PhasePoint(0.0, 1.0));
}

TEST(PhasePoint, WrapsAngle) {
  const PhasePoint x(-kPi / 2, 0.3);
  EXPECT_NEAR(x.q(), 1.5 * kPi, 1e-15);
}

TEST(PhasePointFromW, Examples) {
  const PhasePoint one = phase_point_from_w(CoherentLabel::finite(1.0));
  EXPECT_NEAR(one.q(), 0.0, 1e-15);
  EXPECT_NEAR(one.p(), 0.0, 1e-15);

  const PhasePoint south = phase_point_from_w(CoherentLabel::finite(0.0));
  EXPECT_EQ(south.q(), 0.0);
  EXPECT_EQ(south.p(), -1.0);

  const PhasePoint north = phase_point_from_w(CoherentLabel::infinity());
  EXPECT_EQ(north.q(), 0.0);
  EXPECT_EQ(north.p(), 1.0);

  const PhasePoint x = phase_point_from_w(CoherentLabel::finite(1.0 / std::sqrt(2.0)));
  EXPECT_NEAR(x.q(), 0.0, 1e-15);
  EXPECT_NEAR(x.p(), -1.0 / 3.0, 1e-15);
  // Forward map: sqrt((1 + p)/(1 - p)) = sqrt((2/3)/(4/3)).
  EXPECT_NEAR(std::abs(w_from_phase_point(x).w), std::sqrt(0.5), 1e-15);
}

TEST(PhasePointFromW, PhaseConvention) {
  // w = e^{-i q} r, so arg w = -q.
  const PhasePoint x = phase_point_from_w(CoherentLabel::finite(std::polar(2.0, -0.7)));
  EXPECT_NEAR(x.q(), 0.7, 1e-14);
  EXPECT_NEAR(x.p(), 3.0 / 5.0, 1e-14);
}

TEST(WFromPhasePoint, Poles) {
  EXPECT_TRUE(w_from_phase_point(PhasePoint(1.0, 1.0)).at_infinity);
  EXPECT_EQ(w_from_phase_point(PhasePoint(1.0, -1.0)).w, cplx(0.0, 0.0));
}

TEST(Spinspace, RoundTripPhasePointThroughW) {
  for (int i = 0; i < 5000; ++i) {
    const PhasePoint x(uniform(0, kTwoPi), uniform(-0.999999, 0.999999));
    const PhasePoint y = phase_point_from_w(w_from_phase_point(x));
    EXPECT_NEAR(circular_distance(x.q(), y.q()), 0.0, 1e-12);
    EXPECT_NEAR(x.p(), y.p(), 1e-12);
  }
}

TEST(ClassicalSpin, Examples) {
  expect_vec(classical_spin(PhasePoint(0.0, 0.0)), Vec3(1, 0, 0), 1e-15);
  expect_vec(classical_spin(PhasePoint(2.2, 1.0)), Vec3(0, 0, 1), 1e-15);
  expect_vec(classical_spin(PhasePoint(kPi / 2, 0.0)), Vec3(0, 1, 0), 1e-15);
}

TEST(ClassicalSpin, UnitNorm) {
  for (int i = 0; i < 5000; ++i) {
    EXPECT_NEAR(classical_spin(PhasePoint(uniform(0, kTwoPi), uniform(-1, 1))).norm(), 1.0, 1e-14);
  }
}

TEST(Spinspace, StereographicConsistency) {
  for (int i = 0; i < 2000; ++i) {
    const double theta = uniform(1e-3, kPi - 1e-3);
    const double phi = uniform(0, kTwoPi);
    const cplx w = std::polar(1.0 / std::tan(theta / 2), -phi);
    expect_vec(classical_spin(phase_point_from_w(CoherentLabel::finite(w))),
               direction_to_cartesian({theta, phi}), 1e-12);
  }
}
