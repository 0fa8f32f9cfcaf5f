#include "spinlhv/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "spinlhv/quadrature.hpp"

namespace spinlhv::classical {
namespace {

constexpr double kInvFourPi = 1.0 / (4.0 * kPi);
constexpr double kMaxHalfPanelPhase = 24.0;

// wp_delta(q, p; x0) split as (offset + amplitude cos(q - q0)) / 4pi, so that
// the q dependence can be evaluated along a row with fixed p.
struct SpinFactor {
  double offset;
  double amplitude;
  double q0;

  SpinFactor(double p, const PhasePoint& x0, double delta)
      : offset(1.0 + delta * p * x0.p()),
        amplitude(delta * std::sqrt((1.0 - p * p) * (1.0 - x0.p() * x0.p()))),
        q0(x0.q()) {}

  // cos is 2pi-periodic, so q needs no wrapping here.
  double operator()(double q) const { return (offset + amplitude * std::cos(q - q0)) * kInvFourPi; }
};

void check_delta(double delta, bool quasi) {
  if (!std::isfinite(delta) || delta < 0.0 || (!quasi && delta > 1.0)) {
    throw std::domain_error("DistributionSpec: delta = " + std::to_string(delta) +
                            (quasi ? " must be >= 0" : " must lie in [0, 1]"));
  }
}

PhaseSpaceSummary summarize_once(const DistributionSpec& spec, double tau,
                                 const QuadratureSpec& quad) {
  const auto rule_q = quadrature::periodic_trapezoid(quad.n_q);
  const auto rule_p = quadrature::composite_gauss_legendre(quad.n_p, momentum_panels(tau));
  const std::size_t nq = rule_q.size();
  const std::size_t np = rule_p.size();
  const double wq = rule_q.weights.front();
  const double delta = spec.delta();
  const PhasePoint& x0A = spec.center(Subsystem::A);
  const PhasePoint& x0B = spec.center(Subsystem::B);

  std::vector<double> cos_q(nq), sin_q(nq);
  for (std::size_t i = 0; i < nq; ++i) {
    cos_q[i] = std::cos(rule_q.nodes[i]);
    sin_q[i] = std::sin(rule_q.nodes[i]);
  }
  std::vector<double> root(np);
  // Backward flow shifts q_A by -tau p_B and q_B by -tau p_A. With the angle
  // addition formula the rows need only the per-node phase cos/sin.
  std::vector<double> cos_shift_a(np), sin_shift_a(np), cos_shift_b(np), sin_shift_b(np);
  for (std::size_t k = 0; k < np; ++k) {
    const double p = rule_p.nodes[k];
    root[k] = std::sqrt(1.0 - p * p);
    cos_shift_a[k] = std::cos(x0A.q() + tau * p);
    sin_shift_a[k] = std::sin(x0A.q() + tau * p);
    cos_shift_b[k] = std::cos(x0B.q() + tau * p);
    sin_shift_b[k] = std::sin(x0B.q() + tau * p);
  }

  // Marginals on the (q, p) grid, column-major in p.
  std::vector<double> marg_a(nq * np, 0.0), marg_b(nq * np, 0.0);
  std::vector<double> row_a(nq), row_b(nq);

  PhaseSpaceSummary out;
  for (std::size_t ka = 0; ka < np; ++ka) {
    const double pa = rule_p.nodes[ka];
    const double wa = rule_p.weights[ka];
    const SpinFactor factor_a(pa, x0A, delta);
    for (std::size_t kb = 0; kb < np; ++kb) {
      const double pb = rule_p.nodes[kb];
      const double wb = rule_p.weights[kb];
      const SpinFactor factor_b(pb, x0B, delta);
      const double ac = factor_a.amplitude * cos_shift_a[kb];
      const double as = factor_a.amplitude * sin_shift_a[kb];
      const double bc = factor_b.amplitude * cos_shift_b[ka];
      const double bs = factor_b.amplitude * sin_shift_b[ka];
      for (std::size_t i = 0; i < nq; ++i) {
        row_a[i] = (factor_a.offset + ac * cos_q[i] + as * sin_q[i]) * kInvFourPi;
        row_b[i] = (factor_b.offset + bc * cos_q[i] + bs * sin_q[i]) * kInvFourPi;
      }
      double na = 0.0, nb = 0.0, sa = 0.0, sb = 0.0;
      double ca = 0.0, sna = 0.0, cb = 0.0, snb = 0.0;
      for (std::size_t i = 0; i < nq; ++i) {
        na += row_a[i];
        nb += row_b[i];
        sa += row_a[i] * row_a[i];
        sb += row_b[i] * row_b[i];
        ca += row_a[i] * cos_q[i];
        sna += row_a[i] * sin_q[i];
        cb += row_b[i] * cos_q[i];
        snb += row_b[i] * sin_q[i];
      }
      na *= wq;
      nb *= wq;
      sa *= wq;
      sb *= wq;
      const Vec3 fa(root[ka] * ca * wq, root[ka] * sna * wq, pa * na);
      const Vec3 fb(root[kb] * cb * wq, root[kb] * snb * wq, pb * nb);

      double* col_a = &marg_a[ka * nq];
      double* col_b = &marg_b[kb * nq];
      for (std::size_t i = 0; i < nq; ++i) {
        col_a[i] += wb * nb * row_a[i];
        col_b[i] += wa * na * row_b[i];
      }
      const double w = wa * wb;
      out.total += w * na * nb;
      out.joint_square += w * sa * sb;
      out.correlations += w * fa * fb.transpose();
      out.moment_a += w * nb * fa;
      out.moment_b += w * na * fb;
    }
  }
  for (std::size_t k = 0; k < np; ++k) {
    double acc_a = 0.0, acc_b = 0.0;
    for (std::size_t i = 0; i < nq; ++i) {
      acc_a += marg_a[k * nq + i] * marg_a[k * nq + i];
      acc_b += marg_b[k * nq + i] * marg_b[k * nq + i];
    }
    out.marginal_square_a += rule_p.weights[k] * wq * acc_a;
    out.marginal_square_b += rule_p.weights[k] * wq * acc_b;
  }
  return out;
}

double max_shift(const PhaseSpaceSummary& x, const PhaseSpaceSummary& y) {
  double shift = std::max({std::abs(x.total - y.total), std::abs(x.joint_square - y.joint_square),
                           std::abs(x.marginal_square_a - y.marginal_square_a),
                           std::abs(x.marginal_square_b - y.marginal_square_b)});
  shift = std::max(shift, (x.correlations - y.correlations).cwiseAbs().maxCoeff());
  shift = std::max(shift, (x.moment_a - y.moment_a).cwiseAbs().maxCoeff());
  shift = std::max(shift, (x.moment_b - y.moment_b).cwiseAbs().maxCoeff());
  return shift;
}

[[noreturn]] void not_converged(const char* what, double shift, const QuadratureSpec& quad,
                                double tau) {
  throw QuadratureNotConverged(std::string(what) + ": doubling (n_q, n_p) = (" +
                                   std::to_string(quad.n_q) + ", " + std::to_string(quad.n_p) +
                                   ") moved the result by " + std::to_string(shift) +
                                   " at tau = " + std::to_string(tau),
                               shift);
}

double marginal_once(const DistributionSpec& spec, Subsystem s, const PhasePoint& x, double tau,
                     const QuadratureSpec& quad) {
  const auto rule_q = quadrature::periodic_trapezoid(quad.n_q);
  const auto rule_p = quadrature::composite_gauss_legendre(quad.n_p, momentum_panels(tau));
  const Subsystem other = s == Subsystem::A ? Subsystem::B : Subsystem::A;
  const SpinFactor own(x.p(), spec.center(s), spec.delta());
  double acc = 0.0;
  for (std::size_t k = 0; k < rule_p.size(); ++k) {
    const double p_other = rule_p.nodes[k];
    const SpinFactor factor_other(p_other, spec.center(other), spec.delta());
    double n_other = 0.0;
    for (double q : rule_q.nodes) n_other += factor_other(q - tau * x.p());
    n_other *= rule_q.weights.front();
    acc += rule_p.weights[k] * own(x.q() - tau * p_other) * n_other;
  }
  return acc;
}

}  // namespace

DistributionSpec::DistributionSpec(double delta, PhasePoint x0A, PhasePoint x0B)
    : DistributionSpec(delta, x0A, x0B, false) {}

DistributionSpec::DistributionSpec(double delta, PhasePoint x0A, PhasePoint x0B, bool quasi)
    : delta_(delta), x0A_(x0A), x0B_(x0B) {
  check_delta(delta, quasi);
}

DistributionSpec DistributionSpec::quasi(double delta, PhasePoint x0A, PhasePoint x0B) {
  return DistributionSpec(delta, x0A, x0B, true);
}

double f_kernel(const PhasePoint& x, const PhasePoint& x0) {
  return x.p() * x0.p() +
         std::cos(x.q() - x0.q()) * std::sqrt((1.0 - x.p() * x.p()) * (1.0 - x0.p() * x0.p()));
}

double pdelta(const PhasePoint& x, const PhasePoint& x0, double delta) {
  return (1.0 + delta * f_kernel(x, x0)) * kInvFourPi;
}

double min_pdelta_on_grid(double delta, const PhasePoint& x0, int n) {
  if (n < 2) throw std::invalid_argument("min_pdelta_on_grid: need n >= 2");
  double lowest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double q = kTwoPi * i / (n - 1);
    for (int k = 0; k < n; ++k) {
      const double p = -1.0 + 2.0 * k / (n - 1);
      lowest = std::min(lowest, pdelta(PhasePoint(q, p), x0, delta));
    }
  }
  return lowest;
}

Eigen::Matrix4d flow_matrix(double tau) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 3) = tau;
  m(2, 1) = tau;
  return m;
}

PhaseVector flow(const PhaseVector& x, double tau) {
  return {x(0) + tau * x(3), x(1), x(2) + tau * x(1), x(3)};
}

double evolved_density(const DistributionSpec& spec, const PhaseVector& x, double tau) {
  const PhaseVector back = flow(x, -tau);
  return pdelta(PhasePoint(back(0), back(1)), spec.center(Subsystem::A), spec.delta()) *
         pdelta(PhasePoint(back(2), back(3)), spec.center(Subsystem::B), spec.delta());
}

void QuadratureSpec::validate() const {
  if (n_q < 8 || n_q % 2 != 0) {
    throw std::invalid_argument("QuadratureSpec: n_q must be even and >= 8, got " +
                                std::to_string(n_q));
  }
  if (n_p < 4) {
    throw std::invalid_argument("QuadratureSpec: n_p must be >= 4, got " + std::to_string(n_p));
  }
  if (gate_tolerance && !(*gate_tolerance > 0.0)) {
    throw std::invalid_argument("QuadratureSpec: gate tolerance must be positive");
  }
}

int momentum_panels(double tau) {
  return std::max(1, static_cast<int>(std::ceil(std::abs(tau) / kMaxHalfPanelPhase)));
}

double integrate_phase_space(const std::function<double(const PhaseVector&)>& integrand,
                             const QuadratureSpec& quad, double shear) {
  quad.validate();
  const auto once = [&](const QuadratureSpec& spec) {
    const auto rule_q = quadrature::periodic_trapezoid(spec.n_q);
    const auto rule_p = quadrature::composite_gauss_legendre(spec.n_p, momentum_panels(shear));
    const double wq = rule_q.weights.front();
    double acc = 0.0;
    for (std::size_t ka = 0; ka < rule_p.size(); ++ka) {
      for (std::size_t kb = 0; kb < rule_p.size(); ++kb) {
        double inner = 0.0;
        for (double qa : rule_q.nodes) {
          for (double qb : rule_q.nodes) {
            inner += integrand(PhaseVector(qa, rule_p.nodes[ka], qb, rule_p.nodes[kb]));
          }
        }
        acc += rule_p.weights[ka] * rule_p.weights[kb] * inner;
      }
    }
    return acc * wq * wq;
  };
  const double result = once(quad);
  if (quad.gate_tolerance) {
    const double shift = std::abs(once(quad.doubled()) - result);
    if (shift > *quad.gate_tolerance) not_converged("integrate_phase_space", shift, quad, shear);
  }
  return result;
}

PhaseSpaceSummary summarize(const DistributionSpec& spec, double tau, const QuadratureSpec& quad) {
  quad.validate();
  PhaseSpaceSummary out = summarize_once(spec, tau, quad);
  if (quad.gate_tolerance) {
    const double shift = max_shift(out, summarize_once(spec, tau, quad.doubled()));
    if (shift > *quad.gate_tolerance) not_converged("summarize", shift, quad, tau);
  }
  return out;
}

double classical_purity(const DistributionSpec& spec, PurityTarget target, double tau,
                        const QuadratureSpec& quad) {
  const PhaseSpaceSummary now = summarize(spec, tau, quad);
  const PhaseSpaceSummary initial = summarize(spec, 0.0, quad);
  switch (target) {
    case PurityTarget::A:
      return now.marginal_square_a / initial.marginal_square_a;
    case PurityTarget::B:
      return now.marginal_square_b / initial.marginal_square_b;
    case PurityTarget::joint:
      break;
  }
  return now.joint_square / initial.joint_square;
}

double marginal_density(const DistributionSpec& spec, Subsystem s, const PhasePoint& x, double tau,
                        const QuadratureSpec& quad) {
  quad.validate();
  const double result = marginal_once(spec, s, x, tau, quad);
  if (quad.gate_tolerance) {
    const double shift = std::abs(marginal_once(spec, s, x, tau, quad.doubled()) - result);
    if (shift > *quad.gate_tolerance) not_converged("marginal_density", shift, quad, tau);
  }
  return result;
}

double ccl_from_summaries(const PhaseSpaceSummary& now, const PhaseSpaceSummary& initial) {
  // No free Hamiltonian: the interaction-free marginal stays at its initial
  // value, so its purity relative to tau = 0 is identically 1.
  const double reference_a = initial.marginal_square_a / initial.marginal_square_a;
  const double reference_b = initial.marginal_square_b / initial.marginal_square_b;
  const double ca = 1.0 - (now.marginal_square_a / initial.marginal_square_a) / reference_a;
  const double cb = 1.0 - (now.marginal_square_b / initial.marginal_square_b) / reference_b;
  return 0.5 * (ca + cb);
}

double ccl_numeric(const DistributionSpec& spec, double tau, const QuadratureSpec& quad) {
  return ccl_from_summaries(summarize(spec, tau, quad), summarize(spec, 0.0, quad));
}

CorrelationMatrix classical_correlation_matrix(const DistributionSpec& spec, double tau,
                                               const QuadratureSpec& quad) {
  return {summarize(spec, tau, quad).correlations};
}

double covariance(const PhaseSpaceSummary& summary, const Direction& nA, const Direction& nB) {
  const Vec3 a = spinspace::direction_to_cartesian(nA);
  const Vec3 b = spinspace::direction_to_cartesian(nB);
  return a.dot(summary.correlations * b) - a.dot(summary.moment_a) * b.dot(summary.moment_b);
}

double correlation_function_cl(const DistributionSpec& spec, double tau, const Direction& nA,
                               const Direction& nB, const QuadratureSpec& quad) {
  return covariance(summarize(spec, tau, quad), nA, nB);
}

}  // namespace spinlhv::classical
