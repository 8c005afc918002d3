// localflow command-line tool.
//
//   localflow flow      --initial FILE (--target FILE | --target-theta T) [--trace FILE]
//   localflow schmidt   --state FILE [--out FILE] [--max-steps N]
//   localflow scan      --theta-steps K --phi-steps K [--out FILE]
//   localflow reproduce SCENARIO [--out-dir DIR]
//
// Exit codes: 0 success, 1 I/O or validation error, 2 flow did not reach a
// strict maximum, 3 reproduction mismatch.

#include "localflow/flow.hpp"
#include "localflow/landscape.hpp"
#include "localflow/reproduce.hpp"
#include "localflow/schmidt.hpp"
#include "localflow/state_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>

namespace lf = localflow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitFlow = 2;
constexpr int kExitMismatch = 3;

struct Common {
  std::uint64_t seed = 0;
  int max_qubits = 8;
};

lf::PureState load_state(const std::string& path, const Common& common) {
  lf::PureState psi = lf::read_state_file(path);
  if (psi.qubits() > common.max_qubits) {
    throw std::invalid_argument(path + ": " + std::to_string(psi.qubits()) +
                                " qubits exceeds --max-qubits " + std::to_string(common.max_qubits));
  }
  return psi;
}

void print_matrix(std::ostream& os, const lf::Matrix& m) {
  os << std::fixed << std::setprecision(6);
  for (lf::Index r = 0; r < m.rows(); ++r) {
    for (lf::Index c = 0; c < m.cols(); ++c) {
      const lf::Complex z = m(r, c);
      os << (c ? "  " : "") << std::setw(9) << z.real() << (z.imag() < 0 ? "-" : "+") << std::setw(8)
         << std::abs(z.imag()) << 'i';
    }
    os << '\n';
  }
  os << std::defaultfloat;
}

void write_trace_file(const std::string& path, const lf::FlowTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  lf::write_trace_csv(out, trace);
}

struct FlowArgs {
  std::string initial;
  std::string target;
  std::optional<double> target_theta;
  std::string trace;
  double tol = 1e-10;
  int max_steps = 20000;
};

int cmd_flow(const FlowArgs& a, const Common& common) {
  const lf::PureState psi0 = load_state(a.initial, common);
  lf::DensityMatrix target;
  if (a.target_theta) {
    if (psi0.qubits() != 2) throw std::invalid_argument("--target-theta needs a two-qubit initial state");
    target = lf::schmidt_state_2q(*a.target_theta);
  } else {
    const lf::PureState t = load_state(a.target, common);
    if (t.qubits() != psi0.qubits()) throw std::invalid_argument("initial and target qubit counts differ");
    target = lf::DensityMatrix::pure(t);
  }
  lf::FlowConfig cfg;
  cfg.seed = common.seed;
  cfg.grad_tol = a.tol;
  cfg.max_steps = a.max_steps;
  cfg.validate();

  const lf::DensityMatrix rho0 = lf::DensityMatrix::pure(psi0);
  const lf::FlowTrace trace = lf::run_flow(rho0, target, lf::UnitaryOp::identity(psi0.qubits()), cfg);
  if (!a.trace.empty()) write_trace_file(a.trace, trace);

  std::cout << std::setprecision(12) << "final_fidelity = " << trace.final_fidelity() << '\n'
            << "outcome = " << lf::to_string(trace.outcome) << '\n'
            << "steps = " << trace.steps << '\n'
            << "kicks = " << trace.kicks_used << '\n'
            << "limiting_state =\n";
  print_matrix(std::cout, lf::limiting_state(trace, rho0).matrix());
  return trace.outcome == lf::FlowOutcome::converged_max ? kExitOk : kExitFlow;
}

struct SchmidtArgs {
  std::string state;
  std::string out;
  int restarts = 8;
  int max_steps = 20000;
};

int cmd_schmidt(const SchmidtArgs& a, const Common& common) {
  const lf::PureState psi = load_state(a.state, common);
  if (psi.qubits() > 3) {
    std::cerr << "warning: landscape completeness is unproven for " << psi.qubits() << " qubits\n";
  }
  lf::FlowConfig cfg;
  cfg.seed = common.seed;
  cfg.max_steps = a.max_steps;
  cfg.validate();
  lf::ExtractOptions opts;
  opts.restarts = a.restarts;
  try {
    const lf::SchmidtForm form = lf::extract_schmidt(psi, cfg, opts);
    if (a.out.empty()) {
      lf::write_schmidt_form(std::cout, form);
    } else {
      std::ofstream out(a.out);
      if (!out) throw std::runtime_error("cannot write " + a.out);
      lf::write_schmidt_form(out, form);
    }
    for (const auto& w : form.warnings) std::cerr << "warning: " << w << '\n';
    return kExitOk;
  } catch (const lf::FlowError& e) {
    const std::string path = (a.out.empty() ? std::string("schmidt") : a.out) + ".trace.csv";
    write_trace_file(path, e.trace());
    std::cerr << "error: " << e.what() << "\ntrace: " << path << '\n';
    return kExitFlow;
  }
}

struct ScanArgs {
  int theta_steps = 11;
  int phi_steps = 11;
  std::string out;
};

void scan_row(std::ostream& os, std::string_view family, double theta, double param,
              const std::array<double, 6>& h) {
  os << family << ',' << theta << ',' << param;
  for (double v : h) os << ',' << v;
  const auto spec = lf::spectrum_from_values(std::vector<double>(h.begin(), h.end()));
  os << ',' << lf::to_string(spec.signature) << '\n';
}

// Interior grid (i + 1) pi / (K + 1), i = 0..K-1; the x family uses K points on [0, 1].
int cmd_scan(const ScanArgs& a) {
  if (a.theta_steps < 2 || a.phi_steps < 2) throw std::invalid_argument("grid sizes must be at least 2");
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw std::runtime_error("cannot write " + a.out);
  }
  std::ostream& os = a.out.empty() ? std::cout : file;
  os << std::setprecision(17) << "family,theta,param,h1,h2,h3,h4,h5,h6,signature\n";
  const double pi = std::numbers::pi;
  for (int i = 0; i < a.theta_steps; ++i) {
    const double theta = (i + 1) * pi / (a.theta_steps + 1);
    for (int j = 0; j < a.phi_steps; ++j) {
      const double phi = (j + 1) * pi / (a.phi_steps + 1);
      scan_row(os, "pair", theta, phi, lf::hessian_spectrum_schmidt_pair(theta, phi));
    }
  }
  for (int i = 0; i < a.theta_steps; ++i) {
    const double theta = (i + 1) * pi / (a.theta_steps + 1);
    for (int j = 0; j < a.phi_steps; ++j) {
      const double x = static_cast<double>(j) / (a.phi_steps - 1);
      scan_row(os, "submanifold", theta, x, lf::hessian_spectrum_submanifold(theta, x));
    }
  }
  return kExitOk;
}

struct ReproduceArgs {
  std::string scenario;
  std::string out_dir = "reproduce_out";
};

int cmd_reproduce(const ReproduceArgs& a, const Common& common) {
  const lf::ReproduceReport rep = lf::reproduce(a.scenario, a.out_dir, common.seed);
  std::cout << "scenario " << rep.scenario << '\n';
  for (const auto& n : rep.notes) std::cout << "  note: " << n << '\n';
  std::cout << std::setprecision(10);
  for (const auto& c : rep.checks) {
    using R = lf::ReproduceCheck::Relation;
    std::cout << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << ": value " << c.value;
    if (c.relation == R::below) {
      std::cout << " < " << c.expected;
    } else if (c.relation == R::above) {
      std::cout << " > " << c.expected;
    } else {
      std::cout << ", expected " << c.expected << " +/- " << c.tolerance;
    }
    std::cout << '\n';
  }
  for (const auto& f : rep.files) std::cout << "  wrote " << f.string() << '\n';
  if (rep.passed()) {
    std::cout << "PASS " << rep.scenario << '\n';
    return kExitOk;
  }
  std::cout << "FAIL " << rep.scenario << " mismatches:";
  for (const auto& c : rep.checks) {
    if (!c.pass) std::cout << "\n  " << c.name;
  }
  std::cout << '\n';
  return kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local-unitary gradient flow, fidelity landscape and Schmidt forms"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--seed", common.seed, "Seed for kicks and restarts")->capture_default_str();
  app.add_option("--max-qubits", common.max_qubits, "Largest accepted qubit count")->capture_default_str();

  FlowArgs fa;
  auto* flow = app.add_subcommand("flow", "Run the local gradient flow");
  flow->add_option("--initial", fa.initial, "Initial state file")->required();
  auto* tgt = flow->add_option("--target", fa.target, "Target state file");
  auto* tth = flow->add_option("--target-theta", fa.target_theta, "Two-qubit Schmidt target angle");
  tgt->excludes(tth);
  flow->add_option("--trace", fa.trace, "Trace CSV output");
  flow->add_option("--tol", fa.tol, "Gradient-norm tolerance")->capture_default_str();
  flow->add_option("--max-steps", fa.max_steps, "Accepted-step budget")->capture_default_str();
  flow->add_option("--seed", common.seed, "Seed for kicks");

  SchmidtArgs sa;
  auto* schmidt = app.add_subcommand("schmidt", "Canonical form and Bures entanglement");
  schmidt->add_option("--state", sa.state, "State file")->required();
  schmidt->add_option("--out", sa.out, "Report output (default stdout)");
  schmidt->add_option("--restarts", sa.restarts, "Flow runs for three or more qubits")->capture_default_str();
  schmidt->add_option("--max-steps", sa.max_steps, "Accepted-step budget per flow run")->capture_default_str();
  schmidt->add_option("--seed", common.seed, "Seed for restarts and kicks");

  ScanArgs ca;
  auto* scan = app.add_subcommand("scan", "Closed-form critical-point Hessian spectra");
  scan->add_option("--theta-steps", ca.theta_steps, "Target-angle grid size")->capture_default_str();
  scan->add_option("--phi-steps", ca.phi_steps, "Critical-angle / x grid size")->capture_default_str();
  scan->add_option("--out", ca.out, "CSV output (default stdout)");

  ReproduceArgs ra;
  auto* rep = app.add_subcommand("reproduce", "Scripted worked examples");
  std::vector<std::string> names;
  for (auto s : lf::reproduce_scenarios()) names.emplace_back(s);
  rep->add_option("scenario", ra.scenario, "Scenario name")->required()->check(CLI::IsMember(names));
  rep->add_option("--out-dir", ra.out_dir, "Output directory")->capture_default_str();
  rep->add_option("--seed", common.seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*flow) {
      if (fa.target.empty() && !fa.target_theta) throw std::invalid_argument("one of --target or --target-theta is required");
      return cmd_flow(fa, common);
    }
    if (*schmidt) return cmd_schmidt(sa, common);
    if (*scan) return cmd_scan(ca);
    if (*rep) return cmd_reproduce(ra, common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
