#pragma once

// Experiment drivers behind the spinlhv command-line tool. Each driver writes
// plain CSV (one '#' line echoing the resolved configuration, one header line,
// then rows) to the stream it is given.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinlhv/classical.hpp"
#include "spinlhv/spinspace.hpp"

namespace spinlhv::tools {

using spinspace::CoherentLabel;

// Bad configuration values; the tool maps this to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A run that completed but must be reported as failed (optimizer landscape
// warning, quadrature gate, engine cross-check); exit code 1.
class RunFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string scenario;
  CoherentLabel w0A;
  CoherentLabel w0B;
  std::vector<double> deltas;
  double tau_max = 6.0 * kPi;
  int steps = 601;  // rows, endpoints included
  classical::QuadratureSpec quad;
  bool fast = false;
  std::uint64_t seed = 20240611;
  int restarts = 16;
  std::string out;  // empty: standard output

  // eval only
  double tau = 0.0;
  double alpha = 0.0;
  double p0A = 0.0;
  double p0B = 0.0;
  int n = 0;

  // Throws UsageError. Deltas outside [0, 1] are accepted only by `check`,
  // which routes them through the quasi-density constructor.
  void validate() const;
  std::vector<double> tau_grid() const;
  std::string echo() const;
};

// "re,im", "q0:p0", a bare real, or "inf" for the north pole.
CoherentLabel parse_label(const std::string& text);
std::string format_label(const CoherentLabel& w);

ExperimentConfig fig1_defaults();
ExperimentConfig fig2_defaults();
ExperimentConfig check_defaults();
ExperimentConfig eval_defaults();

// Column suffix for a delta value: 0.2 -> "d02", 1.0 -> "d10", 0.25 -> "d025".
std::string delta_tag(double delta);

void run_fig1(const ExperimentConfig& config, std::ostream& csv);
void run_fig2(const ExperimentConfig& config, std::ostream& csv);

struct CheckRow {
  std::string module;
  std::string invariant;
  bool passed;
  std::string detail;
};

// Runs the invariant suite; writes one line per invariant to `report` and one
// CSV row per invariant to `csv`. Returns the rows.
std::vector<CheckRow> run_check(const ExperimentConfig& config, std::ostream& report,
                                std::ostream& csv);

const std::vector<std::string>& eval_quantities();

// Throws UsageError for an unknown quantity.
double eval(const ExperimentConfig& config, const std::string& quantity);

}  // namespace spinlhv::tools
