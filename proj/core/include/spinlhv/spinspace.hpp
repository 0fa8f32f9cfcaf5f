#pragma once

// Geometry shared by the quantum and classical engines: directions on the unit
// sphere, the stereographic label w of a spin coherent state and the canonical
// phase-space coordinates (q, p) = (phi, cos theta).
//
// Pole convention: w = 0 <-> p = -1 and w = infinity <-> p = +1, with q = 0 at
// both poles.

#include "spinlhv/common.hpp"

namespace spinlhv::spinspace {

// Wraps an angle into [0, 2pi).
double wrap_angle(double angle);

// Distance between two angles on the circle, in [0, pi].
double circular_distance(double a, double b);

struct Direction {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2pi)

  // Brings arbitrary finite angles into the canonical ranges, flipping phi by
  // pi when theta is reflected back into [0, pi].
  static Direction from_angles(double theta, double phi);
};

Vec3 direction_to_cartesian(const Direction& d);

// Inverse of direction_to_cartesian for a nonzero vector (normalized first).
Direction direction_from_cartesian(const Vec3& v);

class PhasePoint {
 public:
  PhasePoint() = default;
  // Wraps q into [0, 2pi). Throws std::domain_error if |p| > 1 or q is not
  // finite.
  PhasePoint(double q, double p);

  double q() const { return q_; }
  double p() const { return p_; }

 private:
  double q_ = 0.0;
  double p_ = 0.0;
};

// Stereographic coordinate w = e^{-i q} sqrt((1 + p) / (1 - p)); the north pole
// is represented by the point-at-infinity marker.
struct CoherentLabel {
  cplx w{0.0, 0.0};
  bool at_infinity = false;

  static CoherentLabel finite(cplx value) { return {value, false}; }
  static CoherentLabel infinity() { return {cplx{0.0, 0.0}, true}; }
};

PhasePoint phase_point_from_w(const CoherentLabel& label);
CoherentLabel w_from_phase_point(const PhasePoint& x);

// Classical spin J(x) = (sqrt(1 - p^2) cos q, sqrt(1 - p^2) sin q, p).
Vec3 classical_spin(const PhasePoint& x);

}  // namespace spinlhv::spinspace
