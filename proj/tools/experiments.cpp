#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "spinlhv/chsh.hpp"
#include "spinlhv/quadrature.hpp"
#include "spinlhv/quantum.hpp"
#include "spinlhv/reference.hpp"
#include "spinlhv/stats.hpp"

namespace spinlhv::tools {
namespace {

using classical::DistributionSpec;
using classical::PhaseSpaceSummary;
using spinspace::PhasePoint;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kCrossCheckTolerance = 1e-6;

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + text + "'");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size() || !std::isfinite(v)) throw UsageError("not a finite number: '" + text + "'");
  return v;
}

quantum::TwoQubitState evolved_state(const ExperimentConfig& c, double tau) {
  return quantum::evolve(quantum::product_state(c.w0A, c.w0B), tau);
}

Mat3 quantum_matrix(const ExperimentConfig& c, double tau) {
  return quantum::pauli_correlation_matrix(evolved_state(c, tau)).entries;
}

DistributionSpec make_spec(double delta, const ExperimentConfig& c) {
  const PhasePoint x0A = spinspace::phase_point_from_w(c.w0A);
  const PhasePoint x0B = spinspace::phase_point_from_w(c.w0B);
  return delta > 1.0 ? DistributionSpec::quasi(delta, x0A, x0B) : DistributionSpec(delta, x0A, x0B);
}

// Optimizer with a = z, cross-checked against the unconstrained closed form.
double checked_bmax(const Mat3& t, std::uint64_t seed, int restarts, const char* engine,
                    double tau) {
  chsh::BmaxResult opt;
  try {
    opt = chsh::bmax_optimize(t, seed, {restarts, chsh::AliceAxis::fixed_z});
  } catch (const chsh::OptimizerLandscapeError& e) {
    throw RunFailure(std::string(engine) + " at tau = " + num(tau) + ": " + e.what());
  }
  const double closed = chsh::bmax_closed_form(t).value;
  if (std::abs(opt.value - closed) > kCrossCheckTolerance) {
    throw RunFailure(std::string(engine) + " at tau = " + num(tau) + ": optimizer with a = z gives " +
                     num(opt.value) + ", closed form gives " + num(closed));
  }
  return opt.value;
}

PhaseSpaceSummary checked_summary(const DistributionSpec& spec, double tau,
                                  const classical::QuadratureSpec& quad) {
  try {
    return classical::summarize(spec, tau, quad);
  } catch (const classical::QuadratureNotConverged& e) {
    throw RunFailure(e.what());
  }
}

double quantum_cq_max(const ExperimentConfig& c) {
  // sin^2(tau/2) peaks at tau = pi for every initial product state.
  return quantum::cq_numeric(c.w0A, c.w0B, kPi);
}

void write_echo(const ExperimentConfig& c, std::ostream& out) { out << c.echo() << '\n'; }

}  // namespace

CoherentLabel parse_label(const std::string& raw) {
  std::string text;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) text += ch;
  if (text == "inf" || text == "infinity") return CoherentLabel::infinity();
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 2) throw UsageError("expected q0:p0, got '" + raw + "'");
    const double q = parse_number(parts[0]);
    const double p = parse_number(parts[1]);
    if (std::abs(p) > 1.0) throw UsageError("p0 must lie in [-1, 1], got '" + raw + "'");
    return spinspace::w_from_phase_point(PhasePoint(q, p));
  }
  if (text.find(',') != std::string::npos) {
    const auto parts = split(text, ',');
    if (parts.size() != 2) throw UsageError("expected re,im, got '" + raw + "'");
    return CoherentLabel::finite({parse_number(parts[0]), parse_number(parts[1])});
  }
  return CoherentLabel::finite({parse_number(text), 0.0});
}

std::string format_label(const CoherentLabel& w) {
  if (w.at_infinity) return "inf";
  return num(w.w.real()) + "," + num(w.w.imag());
}

std::string delta_tag(double delta) {
  char buf[40];
  if (std::abs(delta * 10.0 - std::round(delta * 10.0)) < 1e-12) {
    std::snprintf(buf, sizeof buf, "%.1f", delta);
  } else {
    std::snprintf(buf, sizeof buf, "%.10g", delta);
  }
  std::string tag = "d";
  for (const char* p = buf; *p; ++p)
    if (*p != '.') tag += *p;
  return tag;
}

void ExperimentConfig::validate() const {
  if (steps < 2) throw UsageError("--steps must be >= 2, got " + std::to_string(steps));
  if (!std::isfinite(tau_max) || tau_max < 0.0) throw UsageError("--tau-max must be finite and >= 0");
  if (restarts < 8) throw UsageError("--restarts must be >= 8, got " + std::to_string(restarts));
  try {
    quad.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--quad: ") + e.what());
  }
  for (double d : deltas) {
    if (!std::isfinite(d) || d < 0.0) throw UsageError("--delta values must be finite and >= 0");
    if (d > 1.0 && scenario != "check") {
      throw UsageError("--delta values must lie in [0, 1] for " + scenario + ", got " + num(d));
    }
  }
  for (double v : {tau, alpha, p0A, p0B})
    if (!std::isfinite(v)) throw UsageError("numeric options must be finite");
  for (const auto& w : {w0A, w0B})
    if (!w.at_infinity && !(std::isfinite(w.w.real()) && std::isfinite(w.w.imag())))
      throw UsageError("w0 must be finite or inf");
}

std::vector<double> ExperimentConfig::tau_grid() const {
  std::vector<double> grid(steps);
  for (int k = 0; k < steps; ++k) grid[k] = tau_max * k / (steps - 1);
  grid.back() = tau_max;
  return grid;
}

std::string ExperimentConfig::echo() const {
  std::ostringstream s;
  s << "# scenario=" << scenario << "; w0A=" << format_label(w0A) << "; w0B=" << format_label(w0B)
    << "; delta=";
  for (std::size_t i = 0; i < deltas.size(); ++i) s << (i ? "|" : "") << num(deltas[i]);
  s << "; tau_max=" << num(tau_max) << "; steps=" << steps << "; quad=" << quad.n_q << ","
    << quad.n_p << "; gate="
    << (quad.gate_tolerance ? num(*quad.gate_tolerance) : std::string("off"))
    << "; fast=" << (fast ? "true (convergence gate disabled)" : "false") << "; seed=" << seed
    << "; restarts=" << restarts;
  if (scenario == "eval") {
    s << "; tau=" << num(tau) << "; alpha=" << num(alpha) << "; p0A=" << num(p0A)
      << "; p0B=" << num(p0B) << "; n=" << n;
  }
  s << "; out=" << (out.empty() ? "-" : out);
  return s.str();
}

ExperimentConfig fig1_defaults() {
  ExperimentConfig c;
  c.scenario = "fig1";
  c.w0A = c.w0B = CoherentLabel::finite({std::sqrt(0.5), 0.0});
  return c;
}

ExperimentConfig fig2_defaults() {
  ExperimentConfig c;
  c.scenario = "fig2";
  c.w0A = c.w0B = CoherentLabel::finite({1.0, 0.0});
  c.deltas = {0.2, 0.6, 1.0};
  return c;
}

ExperimentConfig check_defaults() {
  ExperimentConfig c = fig2_defaults();
  c.scenario = "check";
  return c;
}

ExperimentConfig eval_defaults() {
  ExperimentConfig c;
  c.scenario = "eval";
  c.w0A = c.w0B = CoherentLabel::finite({1.0, 0.0});
  c.deltas = {1.0};
  return c;
}

void run_fig1(const ExperimentConfig& c, std::ostream& csv) {
  c.validate();
  const auto grid = c.tau_grid();
  const double cq_max = quantum_cq_max(c);
  std::vector<double> cq(grid.size()), eps(grid.size()), bmax(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    cq[k] = quantum::cq_numeric(c.w0A, c.w0B, grid[k]);
    eps[k] = cq_max > 0.0 ? cq[k] / cq_max : kNaN;
    bmax[k] = checked_bmax(quantum_matrix(c, grid[k]), c.seed + k, c.restarts, "quantum", grid[k]);
  }
  std::vector<double> violation(grid.size(), kNaN);
  std::string note;
  try {
    violation = chsh::violation_quantifier(bmax);
  } catch (const chsh::DegenerateNormalization& e) {
    note = std::string("# violation_V undefined: ") + e.what();
  }
  write_echo(c, csv);
  if (!note.empty()) csv << note << '\n';
  csv << "tau,cq,epsilon,bmax_quantum,violation_V\n";
  for (std::size_t k = 0; k < grid.size(); ++k) {
    csv << num(grid[k]) << ',' << num(cq[k]) << ',' << num(eps[k]) << ',' << num(bmax[k]) << ','
        << num(violation[k]) << '\n';
  }
}

void run_fig2(const ExperimentConfig& c, std::ostream& csv) {
  c.validate();
  if (c.deltas.empty()) throw UsageError("fig2 needs at least one --delta value");
  const auto grid = c.tau_grid();
  std::vector<DistributionSpec> specs;
  std::vector<PhaseSpaceSummary> initial;
  for (double d : c.deltas) {
    specs.push_back(make_spec(d, c));
    initial.push_back(checked_summary(specs.back(), 0.0, c.quad));
  }

  std::ostringstream rows;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double tau = grid[k];
    const std::uint64_t row_seed = c.seed + 16 * k;
    std::vector<double> ccl, bmax_cl;
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const PhaseSpaceSummary now = checked_summary(specs[i], tau, c.quad);
      ccl.push_back(classical::ccl_from_summaries(now, initial[i]));
      bmax_cl.push_back(checked_bmax(now.correlations, row_seed + 1 + i, c.restarts, "classical", tau));
    }
    rows << num(tau) << ',' << num(quantum::cq_numeric(c.w0A, c.w0B, tau));
    for (double v : ccl) rows << ',' << num(v);
    rows << ',' << num(checked_bmax(quantum_matrix(c, tau), row_seed, c.restarts, "quantum", tau));
    for (double v : bmax_cl) rows << ',' << num(v);
    rows << '\n';
  }

  write_echo(c, csv);
  csv << "tau,cq";
  for (double d : c.deltas) csv << ",ccl_" << delta_tag(d);
  csv << ",bmax_quantum";
  for (double d : c.deltas) csv << ",bmax_cl_" << delta_tag(d);
  csv << '\n' << rows.str();
}

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

class CheckSuite {
 public:
  CheckSuite(std::ostream& report, std::ostream& csv) : report_(report), csv_(csv) {
    csv_ << "module,invariant,status,detail\n";
  }

  void run(const std::string& module, const std::string& name, const std::function<Outcome()>& body) {
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, e.what()};
    }
    rows_.push_back({module, name, o.passed, o.detail});
    report_ << (o.passed ? "PASS " : "FAIL ") << module << '.' << name << "  " << o.detail << '\n';
    csv_ << module << ',' << csv_field(name) << ',' << (o.passed ? "pass" : "fail") << ','
         << csv_field(o.detail) << '\n';
  }

  std::vector<CheckRow> rows() const { return rows_; }

 private:
  std::ostream& report_;
  std::ostream& csv_;
  std::vector<CheckRow> rows_;
};

std::string worst(double value, double tolerance) {
  return "worst " + num(value) + " (tolerance " + num(tolerance) + ")";
}

double relative_gap(double x, double ref) {
  // Absolute floor for values that vanish identically (tau = 0, delta = 0).
  return std::abs(x - ref) / std::max(std::abs(ref), 1e-9);
}

}  // namespace

std::vector<CheckRow> run_check(const ExperimentConfig& c, std::ostream& report, std::ostream& csv) {
  c.validate();
  csv << c.echo() << '\n';
  CheckSuite suite(report, csv);
  std::mt19937_64 rng(c.seed);
  const auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  const auto random_label = [&]() {
    return CoherentLabel::finite({uniform(-2.0, 2.0), uniform(-2.0, 2.0)});
  };

  suite.run("spinspace", "unit_norm", [&] {
    double w = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const PhasePoint x(uniform(0, kTwoPi), uniform(-1, 1));
      w = std::max(w, std::abs(spinspace::classical_spin(x).norm() - 1.0));
      const spinspace::Direction d{uniform(0, kPi), uniform(0, kTwoPi)};
      w = std::max(w, std::abs(spinspace::direction_to_cartesian(d).norm() - 1.0));
    }
    return Outcome{w <= 1e-14, worst(w, 1e-14)};
  });
  suite.run("spinspace", "w_round_trip", [&] {
    double w = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const PhasePoint x(uniform(0, kTwoPi), uniform(-0.999, 0.999));
      const PhasePoint y = spinspace::phase_point_from_w(spinspace::w_from_phase_point(x));
      w = std::max({w, spinspace::circular_distance(x.q(), y.q()), std::abs(x.p() - y.p())});
    }
    return Outcome{w <= 1e-12, worst(w, 1e-12)};
  });
  suite.run("spinspace", "stereographic_consistency", [&] {
    double w = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double theta = uniform(0.01, kPi - 0.01);
      const double phi = uniform(0, kTwoPi);
      const cplx label = std::polar(1.0 / std::tan(0.5 * theta), -phi);
      const Vec3 j = spinspace::classical_spin(spinspace::phase_point_from_w(CoherentLabel::finite(label)));
      w = std::max(w, (j - spinspace::direction_to_cartesian({theta, phi})).cwiseAbs().maxCoeff());
    }
    return Outcome{w <= 1e-12, worst(w, 1e-12)};
  });

  suite.run("quantum", "coherent_normalization", [&] {
    double w = 0.0;
    for (int two_j : {1, 2, 10, 40, 100})
      for (int i = 0; i < 20; ++i)
        w = std::max(w, std::abs(quantum::coherent_state(random_label(), quantum::SpinJ(two_j))
                                     .amplitudes.squaredNorm() - 1.0));
    return Outcome{w <= 1e-12, worst(w, 1e-12)};
  });
  suite.run("quantum", "classical_limit", [&] {
    double w = 0.0;
    double last_ratio = 0.0;
    for (int two_j : {1, 2, 10, 40}) {
      const quantum::SpinJ j(two_j);
      const CoherentLabel label = random_label();
      const Vec3 mean = quantum::spin_expectation(label, j).matrix_elements / j.value();
      w = std::max(w, (mean - spinspace::classical_spin(spinspace::phase_point_from_w(label)))
                          .cwiseAbs().maxCoeff());
      const double ratio = quantum::spin_variance(label, j) / (j.value() * j.value());
      w = std::max(w, std::abs(ratio - 1.0 / j.value()));
      last_ratio = ratio;
    }
    return Outcome{w <= 1e-10, worst(w, 1e-10) + "; variance/j^2 at j=20: " + num(last_ratio)};
  });
  suite.run("quantum", "unitarity", [&] {
    double w = 0.0;
    for (int i = 0; i < 20; ++i) {
      const auto psi = quantum::product_state(random_label(), random_label());
      for (int k = 0; k < 50; ++k)
        w = std::max(w, std::abs(quantum::evolve(psi, uniform(-50, 50)).amplitudes.norm() - 1.0));
    }
    return Outcome{w <= 1e-13, worst(w, 1e-13)};
  });
  suite.run("quantum", "cq_closed_form", [&] {
    double w = 0.0;
    for (int i = 0; i < 20; ++i) {
      const CoherentLabel a = random_label(), b = random_label();
      for (int k = 0; k < 1000; ++k) {
        const double tau = 6.0 * kPi * k / 999.0;
        w = std::max(w, std::abs(quantum::cq_numeric(a, b, tau) - reference::cq_closed_w(a.w, b.w, tau)));
      }
    }
    return Outcome{w <= 1e-12, worst(w, 1e-12)};
  });
  suite.run("quantum", "cq_swap_and_periodicity", [&] {
    double w = 0.0;
    for (int i = 0; i < 20; ++i) {
      const CoherentLabel a = random_label(), b = random_label();
      const double tau = uniform(0, 20);
      const double base = quantum::cq_numeric(a, b, tau);
      w = std::max({w, std::abs(base - quantum::cq_numeric(b, a, tau)),
                    std::abs(base - quantum::cq_numeric(a, b, tau + 4.0 * kPi)),
                    std::abs(quantum::cq_numeric(a, b, kTwoPi * (i % 4)))});
    }
    return Outcome{w <= 1e-12, worst(w, 1e-12)};
  });
  suite.run("quantum", "husimi_normalization", [&] {
    const auto rq = quadrature::periodic_trapezoid(64);
    const auto rp = quadrature::gauss_legendre(64);
    double w = 0.0;
    for (int i = 0; i < 5; ++i) {
      const auto psi = quantum::evolve(quantum::product_state(random_label(), random_label()),
                                       uniform(0, 10));
      const auto rho = quantum::reduce(psi, Subsystem::A);
      double total = 0.0;
      for (std::size_t a = 0; a < rq.size(); ++a)
        for (std::size_t b = 0; b < rp.size(); ++b)
          total += rq.weights[a] * rp.weights[b] *
                   quantum::husimi_reduced(rho, PhasePoint(rq.nodes[a], rp.nodes[b]));
      w = std::max(w, std::abs(total - 1.0));
    }
    return Outcome{w <= 1e-8, worst(w, 1e-8)};
  });

  // Classical invariants on the configured quadrature and deltas.
  const std::vector<double> taus = {0.0, 1.0, kPi, 10.0, 50.0};
  for (double delta : c.deltas) {
    const std::string tag = "[delta=" + num(delta) + "]";
    const PhasePoint x0A(uniform(0, kTwoPi), uniform(-0.9, 0.9));
    const PhasePoint x0B(uniform(0, kTwoPi), uniform(-0.9, 0.9));
    const auto spec = [&](PhasePoint a, PhasePoint b) {
      return delta > 1.0 ? DistributionSpec::quasi(delta, a, b) : DistributionSpec(delta, a, b);
    };

    suite.run("classical", "nonnegativity" + tag, [&] {
      const double lowest = classical::min_pdelta_on_grid(delta, x0A);
      return Outcome{lowest >= 0.0, "min pdelta on 201x201 grid = " + num(lowest)};
    });
    std::vector<PhaseSpaceSummary> sums;
    suite.run("classical", "normalization" + tag, [&] {
      double w = 0.0;
      for (double tau : taus) {
        sums.push_back(classical::summarize(spec(x0A, x0B), tau, c.quad));
        w = std::max(w, std::abs(sums.back().total - 1.0));
      }
      return Outcome{w <= 1e-8, worst(w, 1e-8)};
    });
    if (sums.size() != taus.size()) continue;
    suite.run("classical", "liouville_invariance" + tag, [&] {
      double w = 0.0;
      for (const auto& s : sums) w = std::max(w, std::abs(s.joint_square - sums.front().joint_square));
      return Outcome{w <= 1e-8, worst(w, 1e-8)};
    });
    suite.run("classical", "marginal_purity" + tag, [&] {
      const DistributionSpec s0 = spec(PhasePoint(x0A.q(), 0.0), PhasePoint(x0B.q(), 0.0));
      const PhaseSpaceSummary start = classical::summarize(s0, 0.0, c.quad);
      double previous_a = 1.0, previous_b = 1.0;
      double rise = 0.0;
      for (int k = 1; k <= 20; ++k) {
        const PhaseSpaceSummary now = classical::summarize(s0, 0.5 * kPi * k / 20, c.quad);
        const double pa = now.marginal_square_a / start.marginal_square_a;
        const double pb = now.marginal_square_b / start.marginal_square_b;
        rise = std::max({rise, pa - previous_a, pb - previous_b});
        previous_a = pa;
        previous_b = pb;
      }
      return Outcome{rise <= 1e-8, "largest increase " + num(rise) + " (tolerance 1e-08)"};
    });
    suite.run("classical", "ccl_closed_form" + tag, [&] {
      double w = 0.0;
      for (int i = 0; i < 3; ++i) {
        const PhasePoint a(uniform(0, kTwoPi), uniform(-1, 1));
        const PhasePoint b(uniform(0, kTwoPi), uniform(-1, 1));
        const DistributionSpec s = spec(a, b);
        const PhaseSpaceSummary start = classical::summarize(s, 0.0, c.quad);
        for (int k = 1; k <= 8; ++k) {
          const double tau = 4.0 * kPi * k / 8;
          const double numeric = classical::ccl_from_summaries(classical::summarize(s, tau, c.quad), start);
          w = std::max(w, relative_gap(numeric, reference::ccl_closed(delta, a.p(), b.p(), tau)));
        }
      }
      return Outcome{w <= 5e-6, worst(w, 5e-6)};
    });
    suite.run("classical", "permutation_and_q0_symmetry" + tag, [&] {
      double w = 0.0;
      for (double tau : {1.0, kPi, 10.0}) {
        const double base = classical::ccl_numeric(spec(x0A, x0B), tau, c.quad);
        const double swapped = classical::ccl_numeric(spec(x0B, x0A), tau, c.quad);
        const double shifted = classical::ccl_numeric(
            spec(PhasePoint(x0A.q() + 1.3, x0A.p()), PhasePoint(x0B.q() - 0.4, x0B.p())), tau, c.quad);
        w = std::max({w, std::abs(base - swapped), std::abs(base - shifted)});
      }
      return Outcome{w <= 1e-8, worst(w, 1e-8)};
    });
    suite.run("chsh", "lhv_bound" + tag, [&] {
      double top = 0.0;
      for (const auto& s : sums) top = std::max(top, chsh::bmax_closed_form(s.correlations).value);
      return Outcome{top <= 2.0 + 1e-9, "largest classical B_max " + num(top)};
    });
  }
  suite.run("classical", "wigner_negativity", [&] {
    const double lowest = classical::min_pdelta_on_grid(std::sqrt(3.0), PhasePoint(0.0, 0.0));
    return Outcome{lowest < 0.0, "min pdelta at delta=sqrt(3): " + num(lowest)};
  });
  suite.run("classical", "asymptote_tau500", [&] {
    const DistributionSpec s(1.0, PhasePoint(0.0, 0.0), PhasePoint(0.0, 0.0));
    const double v = classical::ccl_numeric(s, 500.0, c.quad);
    const double gap = std::abs(v - reference::ccl_limit(1.0, 0.0));
    return Outcome{gap < 1e-4, "C_cl(500) = " + num(v) + ", gap " + num(gap)};
  });

  suite.run("chsh", "algebraic_identity", [&] {
    double w = 0.0;
    for (int i = 0; i < 10000; ++i) {
      // Dyadic inputs with 21 significant bits: every sum below is exact.
      const double u = std::ldexp(std::floor(uniform(-1, 1) * 0x1.0p20), -10);
      const double v = std::ldexp(std::floor(uniform(-1, 1) * 0x1.0p20), -10);
      w = std::max(w, std::abs(std::abs(u + v) + std::abs(u - v) - 2.0 * std::max(std::abs(u), std::abs(v))));
    }
    return Outcome{w == 0.0, "worst " + num(w)};
  });
  suite.run("chsh", "tsirelson_and_violation", [&] {
    ExperimentConfig q = fig1_defaults();
    q.steps = 600;
    double top = 0.0;
    double lowest_away = std::numeric_limits<double>::infinity();
    for (double tau : q.tau_grid()) {
      const double b = chsh::bmax_closed_form(quantum_matrix(q, tau)).value;
      top = std::max(top, b);
      double away = std::numeric_limits<double>::infinity();
      for (int n = 0; n <= 3; ++n) away = std::min(away, std::abs(tau - kTwoPi * n));
      if (away > 0.05) lowest_away = std::min(lowest_away, b);
    }
    const bool ok = top <= 2.0 * std::sqrt(2.0) + 1e-9 && lowest_away > 2.0;
    return Outcome{ok, "max " + num(top) + ", min away from 2 pi n " + num(lowest_away)};
  });
  suite.run("chsh", "optimizer_consistency", [&] {
    double w = 0.0;
    for (int i = 0; i < 20; ++i) {
      Mat3 t;
      for (int k = 0; k < 9; ++k) t.data()[k] = uniform(-1, 1);
      const double opt = chsh::bmax_optimize(t, c.seed + i, {c.restarts, chsh::AliceAxis::free}).value;
      w = std::max(w, std::abs(opt - chsh::bmax_closed_form(t).value));
    }
    return Outcome{w <= 1e-6, worst(w, 1e-6)};
  });

  suite.run("reference", "short_time_law", [&] {
    const double tau = 1e-3;
    double w = 0.0;
    int used = 0;
    for (int i = 0; i < 40 && used < 10; ++i) {
      const double pa = uniform(-0.8, 0.8), pb = uniform(-0.8, 0.8);
      const auto omega = reference::short_time_coeffs(pa, pb);
      if (omega.omega_q <= 0.01 || omega.omega_cl <= 0.01) continue;
      ++used;
      const double cq = quantum::cq_numeric(spinspace::w_from_phase_point(PhasePoint(0.0, pa)),
                                            spinspace::w_from_phase_point(PhasePoint(0.0, pb)), tau);
      const DistributionSpec s(1.0, PhasePoint(0.0, pa), PhasePoint(0.0, pb));
      const double ccl = classical::ccl_numeric(s, tau, c.quad);
      w = std::max({w, std::abs(cq / (tau * tau) - omega.omega_q) / omega.omega_q,
                    std::abs(ccl / (tau * tau) - omega.omega_cl) / omega.omega_cl});
    }
    return Outcome{w < 1e-3 && used == 10, worst(w, 1e-3)};
  });
  suite.run("reference", "monotone_mimicry", [&] {
    double lowest = 1.0;
    for (int i = 0; i < 20; ++i) {
      const double pa = uniform(-0.95, 0.95), pb = uniform(-0.95, 0.95), delta = uniform(0.05, 1.0);
      const double limit = reference::ccl_limit(delta, reference::SeparabilityParams::from_momenta(pa, pb).alpha);
      std::vector<double> eps, frac;
      for (int k = 1; k <= 200; ++k) {
        const double tau = kPi * k / 200;
        eps.push_back(std::pow(std::sin(0.5 * tau), 2));
        frac.push_back(reference::ccl_closed(delta, pa, pb, tau) / limit);
      }
      lowest = std::min(lowest, stats::spearman(eps, frac));
    }
    return Outcome{lowest >= 0.999, "lowest Spearman " + num(lowest)};
  });
  suite.run("reference", "limit_normalization", [&] {
    double excess = -1.0;
    for (double delta : c.deltas)
      for (int k = 0; k <= 200; ++k)
        excess = std::max(excess, reference::ccl_closed(delta, 0.0, 0.0, kPi * k / 200) -
                                      reference::ccl_limit(delta, 0.0));
    return Outcome{excess <= 1e-9, "max C_cl - C_cl(inf) on [0, pi] = " + num(excess)};
  });

  const auto rows = suite.rows();
  const auto failed = std::count_if(rows.begin(), rows.end(), [](const CheckRow& r) { return !r.passed; });
  report << rows.size() << " invariants, " << failed << " failed\n";
  return rows;
}

const std::vector<std::string>& eval_quantities() {
  static const std::vector<std::string> names = {"cq",      "ccl",     "bmax_q", "bmax_cl",  "gamma_q",
                                                 "gamma_cl", "u_q",    "v_q",    "u_cl",     "v_cl",
                                                 "ccl_limit", "omega_q", "omega_cl"};
  return names;
}

double eval(const ExperimentConfig& c, const std::string& quantity) {
  c.validate();
  const double delta = c.deltas.empty() ? 1.0 : c.deltas.front();
  if (quantity == "cq") return quantum::cq_numeric(c.w0A, c.w0B, c.tau);
  if (quantity == "ccl") {
    try {
      return classical::ccl_numeric(make_spec(delta, c), c.tau, c.quad);
    } catch (const classical::QuadratureNotConverged& e) {
      throw RunFailure(e.what());
    }
  }
  if (quantity == "bmax_q") return checked_bmax(quantum_matrix(c, c.tau), c.seed, c.restarts, "quantum", c.tau);
  if (quantity == "bmax_cl") {
    const auto s = checked_summary(make_spec(delta, c), c.tau, c.quad);
    return checked_bmax(s.correlations, c.seed, c.restarts, "classical", c.tau);
  }
  if (quantity == "gamma_q" || quantity == "gamma_cl") {
    if (c.n < 0) throw UsageError("--n must be >= 0");
    const auto g = reference::gamma_factors(c.n, delta);
    return quantity == "gamma_q" ? g.gamma_q : g.gamma_cl;
  }
  const auto uv = reference::corr_uv_closed(c.tau, delta);
  if (quantity == "u_q") return uv.u_q;
  if (quantity == "v_q") return uv.v_q;
  if (quantity == "u_cl") return uv.u_cl;
  if (quantity == "v_cl") return uv.v_cl;
  if (quantity == "ccl_limit") return reference::ccl_limit(delta, c.alpha);
  if (quantity == "omega_q") return reference::short_time_coeffs(c.p0A, c.p0B, delta).omega_q;
  if (quantity == "omega_cl") return reference::short_time_coeffs(c.p0A, c.p0B, delta).omega_cl;
  throw UsageError("unknown quantity '" + quantity + "'");
}

}  // namespace spinlhv::tools
