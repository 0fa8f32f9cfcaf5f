#include "spinlhv/chsh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <string>

#include <Eigen/Geometry>
#include <Eigen/SVD>

namespace spinlhv::chsh {
namespace {

using spinspace::direction_to_cartesian;

Vec3 unit(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

double combination(const Mat3& t, const Vec3& a, const Vec3& a_prime, const Vec3& b,
                   const Vec3& b_prime) {
  return std::abs(a.dot(t * (b + b_prime)) + a_prime.dot(t * (b - b_prime)));
}

// Proper rotation whose rows are (e1, axis x e1, axis), so it maps `axis` to z
// and the part of `hint` orthogonal to the axis onto the positive x half-plane.
Mat3 frame_with_axis(const Vec3& axis, const Vec3& hint) {
  Vec3 e1 = hint - hint.dot(axis) * axis;
  if (e1.norm() < 1e-12) {
    const Vec3 trial = std::abs(axis.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    e1 = trial - trial.dot(axis) * axis;
  }
  e1.normalize();
  Mat3 r;
  r.row(0) = e1.transpose();
  r.row(1) = axis.cross(e1).transpose();
  r.row(2) = axis.transpose();
  return r;
}

using Point = Eigen::VectorXd;

struct Simplex {
  std::vector<Point> vertices;
  std::vector<double> values;
};

// Nelder-Mead minimization with the standard coefficients (1, 2, 1/2, 1/2).
Point nelder_mead(const std::function<double(const Point&)>& f, Point start, double step,
                  int max_evaluations) {
  const int n = static_cast<int>(start.size());
  Simplex s;
  s.vertices.push_back(start);
  for (int i = 0; i < n; ++i) {
    Point v = start;
    v(i) += step;
    s.vertices.push_back(v);
  }
  for (const auto& v : s.vertices) s.values.push_back(f(v));
  int evaluations = n + 1;

  std::vector<int> order(n + 1);
  while (evaluations < max_evaluations) {
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return s.values[x] < s.values[y]; });
    const int best = order.front();
    const int worst = order.back();
    const int second_worst = order[n - 1];

    double size = 0.0;
    for (const auto& v : s.vertices) size = std::max(size, (v - s.vertices[best]).cwiseAbs().maxCoeff());
    if (s.values[worst] - s.values[best] < 1e-15 && size < 1e-10) break;

    Point centroid = Point::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += s.vertices[i];
    centroid /= n;

    const Point reflected = centroid + (centroid - s.vertices[worst]);
    const double fr = f(reflected);
    ++evaluations;
    if (fr < s.values[best]) {
      const Point expanded = centroid + 2.0 * (centroid - s.vertices[worst]);
      const double fe = f(expanded);
      ++evaluations;
      if (fe < fr) {
        s.vertices[worst] = expanded;
        s.values[worst] = fe;
      } else {
        s.vertices[worst] = reflected;
        s.values[worst] = fr;
      }
      continue;
    }
    if (fr < s.values[second_worst]) {
      s.vertices[worst] = reflected;
      s.values[worst] = fr;
      continue;
    }
    const bool outside = fr < s.values[worst];
    const Point contracted = outside ? Point(centroid + 0.5 * (reflected - centroid))
                                     : Point(centroid + 0.5 * (s.vertices[worst] - centroid));
    const double fc = f(contracted);
    ++evaluations;
    if (fc < std::min(fr, s.values[worst])) {
      s.vertices[worst] = contracted;
      s.values[worst] = fc;
      continue;
    }
    for (int i = 0; i <= n; ++i) {
      if (i == best) continue;
      s.vertices[i] = s.vertices[best] + 0.5 * (s.vertices[i] - s.vertices[best]);
      s.values[i] = f(s.vertices[i]);
      ++evaluations;
    }
  }
  const auto it = std::min_element(s.values.begin(), s.values.end());
  return s.vertices[static_cast<std::size_t>(it - s.values.begin())];
}

// Repeated Nelder-Mead from the current best until a restart stops improving.
Point refine(const std::function<double(const Point&)>& f, Point x) {
  double fx = f(x);
  double step = 0.3;
  for (int round = 0; round < 6; ++round) {
    const Point next = nelder_mead(f, x, step, 4000);
    const double fn = f(next);
    const bool stalled = fx - fn < 1e-14;
    if (fn <= fx) {
      x = next;
      fx = fn;
    }
    if (stalled && round > 0) break;
    step = 0.05;
  }
  return x;
}

// Angles (theta_a', phi_a', theta_b, phi_b, theta_b', phi_b'[, theta_a, phi_a]).
double objective_value(const Mat3& t, const Point& x) {
  const Vec3 a = x.size() == 8 ? unit(x(6), x(7)) : Vec3::UnitZ();
  return combination(t, a, unit(x(0), x(1)), unit(x(2), x(3)), unit(x(4), x(5)));
}

constexpr int kGridPoints = 12;

// Best point of a 12^5 grid over (theta_a', phi_a', theta_b, phi_b, theta_b')
// with phi_b' = phi_b and a = z.
Point grid_seed(const Mat3& t) {
  std::array<double, kGridPoints> thetas{}, phis{};
  for (int k = 0; k < kGridPoints; ++k) {
    thetas[k] = (k + 0.5) * kPi / kGridPoints;
    phis[k] = kTwoPi * k / kGridPoints;
  }
  std::vector<Vec3> dirs(kGridPoints * kGridPoints);
  for (int i = 0; i < kGridPoints; ++i)
    for (int j = 0; j < kGridPoints; ++j) dirs[i * kGridPoints + j] = unit(thetas[i], phis[j]);

  const Vec3 tz = t.transpose() * Vec3::UnitZ();
  double best = -1.0;
  std::array<int, 5> arg{};
  for (int ia = 0; ia < kGridPoints * kGridPoints; ++ia) {
    const Vec3 ta = t.transpose() * dirs[ia];
    for (int ib = 0; ib < kGridPoints * kGridPoints; ++ib) {
      const double plus = tz.dot(dirs[ib]) + ta.dot(dirs[ib]);
      const Vec3 diff = tz - ta;
      const int phi_index = ib % kGridPoints;
      for (int it = 0; it < kGridPoints; ++it) {
        const double v = std::abs(plus + diff.dot(dirs[it * kGridPoints + phi_index]));
        if (v > best) {
          best = v;
          arg = {ia / kGridPoints, ia % kGridPoints, ib / kGridPoints, phi_index, it};
        }
      }
    }
  }
  Point x(6);
  x << thetas[arg[0]], phis[arg[1]], thetas[arg[2]], phis[arg[3]], thetas[arg[4]], phis[arg[3]];
  return x;
}

}  // namespace

MeasurementSetting MeasurementSetting::from_angles(double theta_a_prime, double phi_a_prime,
                                                   double theta_b, double phi_b,
                                                   double theta_b_prime, double phi_b_prime) {
  return {Direction::from_angles(theta_a_prime, phi_a_prime), Direction::from_angles(theta_b, phi_b),
          Direction::from_angles(theta_b_prime, phi_b_prime)};
}

ObservableBounds::ObservableBounds(double lo, double hi) : o_min(lo), o_max(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    throw std::invalid_argument("ObservableBounds: need finite o_min <= o_max");
  }
}

double ObservableBounds::bar() const { return std::max(std::abs(o_min), std::abs(o_max)); }

double chsh_value(const Mat3& t, const MeasurementSetting& mu) {
  return combination(t, Vec3::UnitZ(), direction_to_cartesian(mu.a_prime),
                     direction_to_cartesian(mu.b), direction_to_cartesian(mu.b_prime));
}

double chsh_value(const CorrelationMatrix& t, const MeasurementSetting& mu) {
  return chsh_value(t.entries, mu);
}

double chsh_classical_bound(const ObservableBounds& a, const ObservableBounds& a_prime,
                            const ObservableBounds& b, const ObservableBounds& b_prime) {
  return 2.0 * std::max(a.bar(), a_prime.bar()) * std::max(b.bar(), b_prime.bar());
}

BmaxResult bmax_closed_form(const Mat3& t) {
  const Eigen::JacobiSVD<Mat3> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 s = svd.singularValues();
  const Mat3 u = svd.matrixU();
  const Mat3 v = svd.matrixV();
  const double norm = std::hypot(s(0), s(1));

  BmaxResult out;
  out.method = BmaxMethod::closed_form;
  out.value = 2.0 * norm;
  Vec3 b = v.col(0);
  Vec3 b_prime = v.col(0);
  if (norm > 0.0) {
    b = (s(0) * v.col(0) + s(1) * v.col(1)) / norm;
    b_prime = (s(0) * v.col(0) - s(1) * v.col(1)) / norm;
  }
  // a = u1 and a' = u2; rotate Alice's side so that a lands on z.
  out.alice_frame = frame_with_axis(u.col(0), u.col(1));
  out.argmax = {spinspace::direction_from_cartesian(out.alice_frame * u.col(1)),
                spinspace::direction_from_cartesian(b),
                spinspace::direction_from_cartesian(b_prime)};
  return out;
}

BmaxResult bmax_optimize(const Mat3& t, std::uint64_t seed, const OptimizerOptions& options) {
  if (options.restarts < 8) {
    throw std::invalid_argument("bmax_optimize: restarts must be >= 8, got " +
                                std::to_string(options.restarts));
  }
  const bool free_axis = options.alice == AliceAxis::free;
  const int dim = free_axis ? 8 : 6;
  const auto f = [&t](const Point& x) { return -objective_value(t, x); };

  std::mt19937_64 rng(seed);
  const auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  std::vector<Point> starts;
  Point seeded(dim);
  seeded.head(6) = grid_seed(t);
  if (free_axis) seeded.tail(2) << 0.0, 0.0;
  starts.push_back(seeded);
  while (static_cast<int>(starts.size()) < options.restarts) {
    Point x(dim);
    for (int i = 0; i < dim; i += 2) {
      x(i) = kPi * uniform();
      x(i + 1) = kTwoPi * uniform();
    }
    starts.push_back(x);
  }

  std::vector<double> values;
  Point best_point;
  double best_value = -1.0;
  for (const Point& start : starts) {
    const Point x = refine(f, start);
    const double v = objective_value(t, x);
    values.push_back(v);
    if (v > best_value) {
      best_value = v;
      best_point = x;
    }
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  if (values[0] - values[1] > 1e-4) {
    throw OptimizerLandscapeError("bmax_optimize: best restarts disagree (" +
                                  std::to_string(values[0]) + " vs " + std::to_string(values[1]) +
                                  ")");
  }

  BmaxResult out;
  out.method = BmaxMethod::optimizer;
  out.value = best_value;
  const Vec3 a_prime = unit(best_point(0), best_point(1));
  if (free_axis) out.alice_frame = frame_with_axis(unit(best_point(6), best_point(7)), a_prime);
  out.argmax = {spinspace::direction_from_cartesian(out.alice_frame * a_prime),
                Direction::from_angles(best_point(2), best_point(3)),
                Direction::from_angles(best_point(4), best_point(5))};
  return out;
}

std::vector<double> violation_quantifier(const std::vector<double>& bmax_series) {
  if (bmax_series.empty()) throw DegenerateNormalization("violation_quantifier: empty series");
  const double top = *std::max_element(bmax_series.begin(), bmax_series.end());
  if (!(top > 2.0 + 1e-9)) {
    throw DegenerateNormalization("violation_quantifier: max B_max = " + std::to_string(top) +
                                  " does not exceed 2");
  }
  std::vector<double> out;
  out.reserve(bmax_series.size());
  for (double b : bmax_series) out.push_back((b - 2.0) / (top - 2.0));
  return out;
}

}  // namespace spinlhv::chsh
