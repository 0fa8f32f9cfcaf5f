// spinlhv: figure data, invariant checks and single-point evaluations for the
// quantum and classical two-spin engines.
//
//   spinlhv fig1|fig2 [options]        CSV series
//   spinlhv check [options]            invariant suite, exit 0 iff all pass
//   spinlhv eval QUANTITY [options]    one scalar, 17 significant digits
//
// Options may also come from --config FILE (key=value lines, '#' comments);
// command-line flags take precedence. Exit codes: 0 ok, 1 failure, 2 usage.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "experiments.hpp"

namespace {

using spinlhv::tools::ExperimentConfig;
using spinlhv::tools::UsageError;

struct RawOptions {
  std::optional<std::string> w0, w0A, w0B, delta, quad;
  std::optional<double> tau_max, tau, alpha, p0A, p0B;
  std::optional<int> steps, restarts, n;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool fast = false;
  std::string config;
  std::string quantity;
};

void add_common(CLI::App* sub, RawOptions& raw) {
  sub->add_option("--w0", raw.w0, "Both initial labels: re,im | q0:p0 | real | inf");
  sub->add_option("--w0A", raw.w0A, "Initial label of spin A");
  sub->add_option("--w0B", raw.w0B, "Initial label of spin B");
  sub->add_option("--delta", raw.delta, "Comma-separated delta values");
  sub->add_option("--tau-max", raw.tau_max, "Upper end of the tau grid");
  sub->add_option("--steps", raw.steps, "Number of tau grid points, endpoints included");
  sub->add_option("--quad", raw.quad, "Quadrature nodes n_q,n_p");
  sub->add_option("--seed", raw.seed, "Optimizer seed");
  sub->add_option("--restarts", raw.restarts, "Optimizer restarts (>= 8)");
  sub->add_option("--out", raw.out, "Output file (default: standard output)");
  sub->add_flag("--fast", raw.fast, "Quadrature 32,32 without the convergence gate");
  sub->add_option("--config", raw.config, "key=value file; flags override it");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad number in list: '" + item + "'");
    }
  }
  if (values.empty()) throw UsageError("empty list: '" + text + "'");
  return values;
}

// key=value lines turned into --key=value arguments.
std::vector<std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::vector<std::string> args;
  std::string line;
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line without '=': " + line);
    std::string key = line.substr(start, eq - start);
    std::string value = line.substr(eq + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    value.erase(value.find_last_not_of(" \t\r") + 1);
    if (key == "fast") {
      if (value == "true" || value == "1") args.push_back("--fast");
      continue;
    }
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

std::optional<std::string> find_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return std::nullopt;
}

ExperimentConfig resolve(const std::string& scenario, const RawOptions& raw) {
  using namespace spinlhv::tools;
  ExperimentConfig c = scenario == "fig1"   ? fig1_defaults()
                       : scenario == "fig2" ? fig2_defaults()
                       : scenario == "check" ? check_defaults()
                                             : eval_defaults();
  if (raw.w0) c.w0A = c.w0B = parse_label(*raw.w0);
  if (raw.w0A) c.w0A = parse_label(*raw.w0A);
  if (raw.w0B) c.w0B = parse_label(*raw.w0B);
  if (raw.delta) c.deltas = parse_list(*raw.delta);
  if (raw.tau_max) c.tau_max = *raw.tau_max;
  if (raw.steps) c.steps = *raw.steps;
  if (raw.seed) c.seed = *raw.seed;
  if (raw.restarts) c.restarts = *raw.restarts;
  if (raw.tau) c.tau = *raw.tau;
  if (raw.alpha) c.alpha = *raw.alpha;
  if (raw.p0A) c.p0A = *raw.p0A;
  if (raw.p0B) c.p0B = *raw.p0B;
  if (raw.n) c.n = *raw.n;
  c.out = raw.out == "-" ? "" : raw.out;
  if (raw.fast) {
    c.fast = true;
    c.quad = {32, 32, std::nullopt};
  }
  if (raw.quad) {
    const auto nodes = parse_list(*raw.quad);
    if (nodes.size() != 2) throw UsageError("--quad expects n_q,n_p");
    c.quad.n_q = static_cast<int>(nodes[0]);
    c.quad.n_p = static_cast<int>(nodes[1]);
    if (nodes[0] != c.quad.n_q || nodes[1] != c.quad.n_p) throw UsageError("--quad expects integers");
  }
  c.validate();
  return c;
}

int run(const std::string& scenario, const RawOptions& raw) {
  using namespace spinlhv::tools;
  const ExperimentConfig c = resolve(scenario, raw);

  if (scenario == "eval") {
    const double v = eval(c, raw.quantity);
    std::printf("%.17g\n", v);
    return 0;
  }

  std::ofstream file;
  if (!c.out.empty()) {
    file.open(c.out);
    if (!file) throw UsageError("cannot write '" + c.out + "'");
  }
  std::ostream& out = c.out.empty() ? std::cout : file;

  if (scenario == "check") {
    std::ostringstream discard;
    const auto rows = run_check(c, std::cout, c.out.empty() ? static_cast<std::ostream&>(discard) : file);
    for (const auto& r : rows)
      if (!r.passed) return 1;
    return 0;
  }
  // Rows are assembled in memory, so a failed run leaves no partial CSV.
  std::ostringstream buffer;
  if (scenario == "fig1") {
    run_fig1(c, buffer);
  } else {
    run_fig2(c, buffer);
  }
  out << buffer.str();
  return out ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum and classical two-spin dynamics with CHSH maximization"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  RawOptions raw;
  CLI::App* fig1 = app.add_subcommand("fig1", "B_max, entanglement and violation quantifier vs tau");
  CLI::App* fig2 = app.add_subcommand("fig2", "Entanglement, classical inseparability and B_max vs tau");
  CLI::App* check = app.add_subcommand("check", "Run the invariant suite");
  CLI::App* evalc = app.add_subcommand("eval", "Evaluate one named quantity");
  for (CLI::App* sub : {fig1, fig2, check, evalc}) {
    sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    add_common(sub, raw);
  }
  std::string names;
  for (const auto& q : spinlhv::tools::eval_quantities()) names += (names.empty() ? "" : ", ") + q;
  evalc->add_option("quantity", raw.quantity, "One of: " + names)->required();
  evalc->add_option("--tau", raw.tau, "Time");
  evalc->add_option("--alpha", raw.alpha, "alpha for ccl_limit");
  evalc->add_option("--p0A", raw.p0A, "p0A for omega_q, omega_cl");
  evalc->add_option("--p0B", raw.p0B, "p0B for omega_q, omega_cl");
  evalc->add_option("--n", raw.n, "Index for gamma_q, gamma_cl");

  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
  try {
    // File values go right after the subcommand so later flags win.
    if (const auto path = find_config(argc, argv); path && !args.empty()) {
      const auto extra = read_config(*path);
      args.insert(args.end() - 1, extra.rbegin(), extra.rend());
    }
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "spinlhv: " << e.what() << '\n';
    return 2;
  }

  const std::string scenario = app.get_subcommands().front()->get_name();
  try {
    return run(scenario, raw);
  } catch (const UsageError& e) {
    std::cerr << "spinlhv: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "spinlhv: " << e.what() << '\n';
    return 1;
  }
}
