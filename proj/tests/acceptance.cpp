// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "spinlhv/chsh.hpp"
#include "spinlhv/classical.hpp"
#include "spinlhv/quantum.hpp"
#include "spinlhv/reference.hpp"
#include "spinlhv/spinspace.hpp"
#include "spinlhv/stats.hpp"

using namespace spinlhv;
using spinspace::CoherentLabel;
using spinspace::Direction;
using spinspace::PhasePoint;

namespace {

namespace tol {
constexpr double cq_abs = 1e-12;
constexpr double ccl_rel = 5e-6;
constexpr double cq_max = 1e-9;
constexpr double ccl_asymptote = 1e-4;
constexpr double short_time_rel = 1e-3;
constexpr double tsirelson_slack = 1e-9;
constexpr double spearman_min = 0.9999;
constexpr double lhv_slack = 1e-9;
constexpr double husimi_abs = 1e-10;
constexpr double marginal_abs = 5e-6;
constexpr double cov_cl_abs = 5e-6;
constexpr double cov_q_abs = 1e-10;
constexpr double optimizer_abs = 1e-6;
constexpr double near_revival = 0.05;
}  // namespace tol

struct Outcome {
  bool passed;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.passed) ++failures;
  std::printf("%s %2d %s: %s\n", o.passed ? "PASS" : "FAIL", id, name, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::mt19937_64 rng(20240611);
double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int k = 0; k < n; ++k) g[k] = lo + (hi - lo) * k / (n - 1);
  return g;
}

double revival_distance(double tau) {
  return std::abs(tau - kTwoPi * std::round(tau / kTwoPi));
}

Mat3 quantum_t(const CoherentLabel& w, double tau) {
  return quantum::pauli_correlation_matrix(quantum::evolve(quantum::product_state(w, w), tau)).entries;
}

const classical::QuadratureSpec kGated{};
const classical::QuadratureSpec kPlain = classical::QuadratureSpec{}.ungated();
const Direction kX{kPi / 2, 0.0};
const Direction kY{kPi / 2, kPi / 2};
const Direction kZ{0.0, 0.0};

}  // namespace

int main() {
  report(1, "entanglement closed form", [] {
    double worst = 0.0;
    const auto taus = grid(0.0, 6.0 * kPi, 1000);
    for (int i = 0; i < 20; ++i) {
      const auto a = spinspace::w_from_phase_point(PhasePoint(uniform(0, kTwoPi), uniform(-0.99, 0.99)));
      const auto b = spinspace::w_from_phase_point(PhasePoint(uniform(0, kTwoPi), uniform(-0.99, 0.99)));
      for (double tau : taus) {
        worst = std::max(worst, std::abs(quantum::cq_numeric(a, b, tau) - reference::cq_closed_w(a.w, b.w, tau)));
      }
    }
    return Outcome{worst <= tol::cq_abs, fmt("max |numeric - closed| = %.3g (tol %.0e)", worst, tol::cq_abs)};
  });

  report(2, "classical inseparability closed form", [] {
    double worst = 0.0;
    const auto taus = grid(4.0 * kPi / 200, 4.0 * kPi, 200);
    for (int i = 0; i < 20; ++i) {
      const double delta = uniform(0.05, 1.0);
      const PhasePoint a(uniform(0, kTwoPi), uniform(-0.95, 0.95));
      const PhasePoint b(uniform(0, kTwoPi), uniform(-0.95, 0.95));
      const classical::DistributionSpec spec(delta, a, b);
      const auto initial = classical::summarize(spec, 0.0, kPlain);
      for (double tau : taus) {
        const double got = classical::ccl_from_summaries(classical::summarize(spec, tau, kPlain), initial);
        const double want = reference::ccl_closed(delta, a.p(), b.p(), tau);
        worst = std::max(worst, std::abs(got - want) / want);
      }
      // Spot-check the default rule against its doubled version.
      classical::summarize(spec, taus.back(), kGated);
    }
    return Outcome{worst <= tol::ccl_rel, fmt("max relative error = %.3g (tol %.0e)", worst, tol::ccl_rel)};
  });

  report(3, "maximum values", [] {
    const auto one = CoherentLabel::finite(1.0);
    double cq_max = 0.0;
    for (double tau : grid(0.0, 6.0 * kPi, 601)) cq_max = std::max(cq_max, quantum::cq_numeric(one, one, tau));
    const classical::DistributionSpec spec(1.0, PhasePoint(0.0, 0.0), PhasePoint(0.0, 0.0));
    const double ccl = classical::ccl_numeric(spec, 500.0, kGated);
    const bool ok = std::abs(cq_max - 0.5) <= tol::cq_max && std::abs(ccl - 0.25) <= tol::ccl_asymptote;
    return Outcome{ok, fmt("max C_q = %.15g, C_cl(500) = %.10g", cq_max, ccl)};
  });

  report(4, "short-time mimicry", [] {
    const double tau = 1e-3;
    double worst_q = 0.0, worst_cl = 0.0;
    for (int tested = 0; tested < 10;) {
      const PhasePoint a(uniform(0, kTwoPi), uniform(-1, 1));
      const PhasePoint b(uniform(0, kTwoPi), uniform(-1, 1));
      const auto w = reference::short_time_coeffs(a.p(), b.p());
      if (w.omega_q <= 0.01 || w.omega_cl <= 0.01) continue;
      const double q = quantum::cq_numeric(spinspace::w_from_phase_point(a), spinspace::w_from_phase_point(b), tau);
      const double cl = classical::ccl_numeric(classical::DistributionSpec(1.0, a, b), tau, kGated);
      worst_q = std::max(worst_q, std::abs(q / (tau * tau) - w.omega_q) / w.omega_q);
      worst_cl = std::max(worst_cl, std::abs(cl / (tau * tau) - w.omega_cl) / w.omega_cl);
      ++tested;
    }
    const bool ok = worst_q <= tol::short_time_rel && worst_cl <= tol::short_time_rel;
    return Outcome{ok, fmt("max relative deviation: quantum %.3g, classical %.3g", worst_q, worst_cl)};
  });

  report(5, "quantum nonlocality", [] {
    const auto w = CoherentLabel::finite(std::sqrt(0.5));
    double min_away = INFINITY, max_all = 0.0;
    for (double tau : grid(0.0, 6.0 * kPi, 600)) {
      const double b = chsh::bmax_closed_form(quantum_t(w, tau)).value;
      max_all = std::max(max_all, b);
      if (revival_distance(tau) > tol::near_revival) min_away = std::min(min_away, b);
    }
    // Cross-check the closed form with the optimizer under a = z at the peak.
    const double opt = chsh::bmax_optimize(quantum_t(w, kPi), 1).value;
    const double peak = chsh::bmax_closed_form(quantum_t(w, kPi)).value;
    const bool ok = min_away > 2.0 && max_all <= 2.0 * std::sqrt(2.0) + tol::tsirelson_slack &&
                    std::abs(opt - peak) <= tol::optimizer_abs;
    return Outcome{ok, fmt("min B_max away from 2 pi n = %.10g, max B_max = %.10g", min_away, max_all)};
  });

  report(6, "Gisin monotonicity", [] {
    const auto w = CoherentLabel::finite(std::sqrt(0.5));
    std::vector<double> taus, cq, bmax;
    for (int k = 1; k <= 500; ++k) taus.push_back(kTwoPi * k / 501);
    for (double tau : taus) {
      cq.push_back(quantum::cq_numeric(w, w, tau));
      bmax.push_back(chsh::bmax_closed_form(quantum_t(w, tau)).value);
    }
    const double cq_max = *std::max_element(cq.begin(), cq.end());
    for (double& c : cq) c /= cq_max;
    const double rho = stats::spearman(cq, chsh::violation_quantifier(bmax));
    return Outcome{rho >= tol::spearman_min, fmt("Spearman(epsilon, V) = %.12g", rho)};
  });

  report(7, "LHV locality", [] {
    double worst = 0.0;
    const PhasePoint equator(0.0, 0.0);
    for (double delta : {0.2, 0.6, 1.0}) {
      const classical::DistributionSpec spec(delta, equator, equator);
      for (double tau : grid(0.0, 6.0 * kPi, 600)) {
        worst = std::max(worst, chsh::bmax_closed_form(classical::summarize(spec, tau, kPlain).correlations).value);
      }
      for (double tau : {kPi, 4.0 * kPi, 6.0 * kPi}) {
        const Mat3 t = classical::summarize(spec, tau, kGated).correlations;
        worst = std::max(worst, chsh::bmax_optimize(t, 2).value);
      }
    }
    return Outcome{worst <= 2.0 + tol::lhv_slack, fmt("max classical B_max = %.10g", worst)};
  });

  report(8, "interference damping", [] {
    const double delta = 1.0, q0 = 0.0;
    const auto w = CoherentLabel::finite(1.0);
    const classical::DistributionSpec spec(delta, PhasePoint(q0, 0.0), PhasePoint(q0, 0.0));
    const PhasePoint points[] = {{0.0, 0.0}, {0.4, 0.5}, {2.0, -0.3}, {3.5, 0.9}, {5.5, -0.95}};
    double worst_q = 0.0, worst_cl = 0.0;
    for (int n = 0; n <= 8; ++n) {
      const double tau = n * kPi / 2;
      const auto g = reference::gamma_factors(n, delta);
      const auto rho = quantum::reduce(quantum::evolve(quantum::product_state(w, w), tau), Subsystem::A);
      for (const PhasePoint& x : points) {
        const double shape = std::sqrt(1.0 - x.p() * x.p()) * std::cos(x.q() - q0) / (4.0 * kPi);
        const double base = 1.0 / (4.0 * kPi);
        worst_q = std::max(worst_q, std::abs(quantum::husimi_reduced(rho, x) - (base + g.gamma_q * shape)));
        worst_cl = std::max(
            worst_cl,
            std::abs(classical::marginal_density(spec, Subsystem::A, x, tau, kGated) - (base + g.gamma_cl * shape)));
      }
    }
    const bool ok = worst_q <= tol::husimi_abs && worst_cl <= tol::marginal_abs;
    return Outcome{ok, fmt("max deviation: Husimi %.3g, classical marginal %.3g", worst_q, worst_cl)};
  });

  report(9, "correlation matrix", [] {
    const auto w = CoherentLabel::finite(1.0);
    const classical::DistributionSpec spec(1.0, PhasePoint(0.0, 0.0), PhasePoint(0.0, 0.0));
    double worst_q = 0.0, worst_cl = 0.0;
    for (double tau : {0.5, 1.0, kPi, kTwoPi, 5.0}) {
      const auto uv = reference::corr_uv_closed(tau, 1.0);
      const auto psi = quantum::evolve(quantum::product_state(w, w), tau);
      const auto s = classical::summarize(spec, tau, kGated);
      const struct {
        Direction a, b;
        double q, cl;
      } entries[] = {{kX, kX, uv.u_q, uv.u_cl}, {kY, kZ, uv.v_q, uv.v_cl}, {kZ, kY, uv.v_q, uv.v_cl},
                     {kX, kY, 0.0, 0.0},        {kZ, kZ, 0.0, 0.0},        {kX, kZ, 0.0, 0.0}};
      for (const auto& e : entries) {
        worst_q = std::max(worst_q, std::abs(quantum::correlation_function_q(psi, e.a, e.b) - e.q));
        worst_cl = std::max(worst_cl, std::abs(classical::covariance(s, e.a, e.b) - e.cl));
      }
    }
    const bool ok = worst_q <= tol::cov_q_abs && worst_cl <= tol::cov_cl_abs;
    return Outcome{ok, fmt("max deviation: quantum %.3g, classical %.3g", worst_q, worst_cl)};
  });

  report(10, "Wigner negativity", [] {
    const PhasePoint x0(uniform(0, kTwoPi), uniform(-1, 1));
    const double wigner = classical::min_pdelta_on_grid(std::sqrt(3.0), x0);
    double lowest = INFINITY;
    for (double d : {0.2, 0.6, 1.0}) lowest = std::min(lowest, classical::min_pdelta_on_grid(d, x0));
    return Outcome{wigner < 0.0 && lowest >= 0.0,
                   fmt("min for delta = sqrt 3: %.6g; min over delta <= 1: %.6g", wigner, lowest)};
  });

  report(11, "optimizer soundness", [] {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      Mat3 t;
      for (int k = 0; k < 9; ++k) t(k) = u(gen);
      const double opt = chsh::bmax_optimize(t, 5000 + i, {.alice = chsh::AliceAxis::free}).value;
      worst = std::max(worst, std::abs(opt - chsh::bmax_closed_form(t).value));
    }
    return Outcome{worst <= tol::optimizer_abs, fmt("max |optimizer - closed form| = %.3g over 200 matrices", worst)};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
