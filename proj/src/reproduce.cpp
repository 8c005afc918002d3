#include "localflow/reproduce.hpp"

#include "localflow/state_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace localflow {

namespace {

using std::numbers::pi;

constexpr double kTargetTheta = pi / 4.0;

Matrix pauli_pair(int a, int b) { return kron(Matrix(pauli(a)), Matrix(pauli(b))); }

// exp(i angle P) for a Pauli product P with P^2 = I.
Matrix pauli_rotation(int a, int b, double angle) {
  const Matrix p = pauli_pair(a, b);
  return std::cos(angle) * Matrix::Identity(p.rows(), p.cols()) + Complex(0.0, std::sin(angle)) * p;
}

ReproduceCheck near(std::string name, double value, double expected, double tol) {
  return {std::move(name), value, expected, tol, std::abs(value - expected) <= tol};
}

ReproduceCheck below(std::string name, double value, double bound) {
  return {std::move(name), value, bound, 0.0, value < bound, ReproduceCheck::Relation::below};
}

ReproduceCheck above(std::string name, double value, double bound) {
  return {std::move(name), value, bound, 0.0, value > bound, ReproduceCheck::Relation::above};
}

ReproduceCheck truth(std::string name, bool ok) { return {std::move(name), ok ? 1.0 : 0.0, 1.0, 0.0, ok}; }

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << std::setprecision(17);
  return out;
}

double min_increment(const FlowTrace& t) {
  double m = 0.0;
  for (std::size_t i = 1; i < t.samples.size(); ++i) {
    m = std::min(m, t.samples[i].fidelity - t.samples[i - 1].fidelity);
  }
  return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Fidelity of a two-qubit state with the Schmidt state of the matching
// orientation, rho_S(theta0) or rho_S(pi - theta0), whichever is larger.
double schmidt_approach(const DensityMatrix& rho, double theta0) {
  const UnitaryOp id = UnitaryOp::identity(2);
  return std::max(fidelity(rho, id, schmidt_state_2q(theta0)),
                  fidelity(rho, id, schmidt_state_2q(pi - theta0)));
}

ReproduceReport run_fig1(const std::filesystem::path& dir, std::uint64_t seed) {
  ReproduceReport rep;
  rep.scenario = "fig1";
  const DensityMatrix rho0 = DensityMatrix::pure(separable_example_state());
  const DensityMatrix target = schmidt_state_2q(kTargetTheta);
  FlowConfig cfg;
  cfg.seed = seed;
  const FlowTrace trace = run_flow(rho0, target, UnitaryOp::identity(2), cfg);

  const auto path = dir / "fig1_trace.csv";
  auto out = open_out(path);
  write_trace_csv(out, trace);
  rep.files.push_back(path);

  rep.notes.push_back("initial state exp(i/(4 pi) s0 x s1)|uu>, target rho_S(pi/4)");
  rep.checks.push_back(truth("outcome converged_max", trace.outcome == FlowOutcome::converged_max));
  rep.checks.push_back(near("final fidelity = cos^2(pi/8)", trace.final_fidelity(),
                            optimal_fidelity(kTargetTheta), 1e-5));
  rep.checks.push_back(above("trace monotone (smallest increment)", min_increment(trace), -1e-12));
  const DensityMatrix lim = limiting_state(trace, rho0);
  rep.checks.push_back(near("limiting state is |uu>", lim.matrix()(0, 0).real(), 1.0, 1e-6));
  return rep;
}

ReproduceReport run_fig2(const std::filesystem::path& dir, std::uint64_t seed) {
  ReproduceReport rep;
  rep.scenario = "fig2";
  for (const auto& c : entangled_angle_candidates()) {
    std::ostringstream s;
    s << "reading '" << c.label << "': sigma1^2 = " << std::setprecision(8) << c.sigma1_squared;
    rep.notes.push_back(s.str());
  }
  const AngleReading reading = resolve_entangled_angles();
  {
    std::ostringstream s;
    s << std::setprecision(17) << "resolved angles: local = " << reading.local_angle
      << ", entangling = " << reading.entangling_angle << " (" << reading.label << ")";
    rep.notes.push_back(s.str());
  }
  const PureState psi0 = entangled_example_state(reading);
  const DensityMatrix rho0 = DensityMatrix::pure(psi0);
  const double theta0 = schmidt_oracle_2q(psi0).theta;

  FlowConfig cfg;
  cfg.seed = seed;

  // Limiting state for the pi/4 target.
  {
    const FlowTrace trace = run_flow(rho0, schmidt_state_2q(kTargetTheta), UnitaryOp::identity(2), cfg);
    const auto path = dir / "fig2_limit_trace.csv";
    auto out = open_out(path);
    write_trace_csv(out, trace);
    rep.files.push_back(path);
    const Matrix lim = limiting_state(trace, rho0).matrix();
    rep.checks.push_back(truth("pi/4 target: outcome converged_max",
                               trace.outcome == FlowOutcome::converged_max));
    rep.checks.push_back(near("limit corner (0,0)", lim(0, 0).real(), 0.793893, 1e-4));
    rep.checks.push_back(near("limit corner (0,3)", lim(0, 3).real(), 0.404508, 1e-4));
    rep.checks.push_back(near("limit corner (3,0)", lim(3, 0).real(), 0.404508, 1e-4));
    rep.checks.push_back(near("limit corner (3,3)", lim(3, 3).real(), 0.206107, 1e-4));
    Matrix rest = lim;
    rest(0, 0) = rest(0, 3) = rest(3, 0) = rest(3, 3) = 0.0;
    rep.checks.push_back(below("limit off-support entries", rest.cwiseAbs().maxCoeff(), 1e-4));
  }

  // Approach to the Schmidt state across target angles.
  const std::vector<int> checkpoints = {0, 5, 10, 20, 50, 100, 200, 500, 1000};
  const int grid = 24;
  auto curves = open_out(dir / "fig2_curves.csv");
  auto summary = open_out(dir / "fig2_summary.csv");
  curves << "theta_target,steps,fidelity_to_schmidt\n";
  summary << "theta_target,outcome,steps,final_fidelity_to_schmidt,initial_fidelity_to_schmidt\n";
  rep.files.push_back(dir / "fig2_curves.csv");
  rep.files.push_back(dir / "fig2_summary.csv");
  const double initial = schmidt_approach(rho0, theta0);

  for (int i = 0; i <= grid; ++i) {
    const double theta = pi * i / grid;
    const DensityMatrix target = schmidt_state_2q(theta);
    for (int k : checkpoints) {
      double fs = initial;
      if (k > 0) {
        FlowConfig c = cfg;
        c.max_steps = k;
        c.saddle_kicks = false;
        fs = schmidt_approach(limiting_state(run_flow(rho0, target, UnitaryOp::identity(2), c), rho0),
                              theta0);
      }
      curves << theta << ',' << k << ',' << fs << '\n';
    }
    const FlowTrace full = run_flow(rho0, target, UnitaryOp::identity(2), cfg);
    const double fs = schmidt_approach(limiting_state(full, rho0), theta0);
    curves << theta << ',' << full.steps << ',' << fs << '\n';
    summary << theta << ',' << to_string(full.outcome) << ',' << full.steps << ',' << fs << ','
            << initial << '\n';

    std::ostringstream label;
    label << "theta_target = " << i << " pi/" << grid;
    const bool degenerate = i == 0 || 2 * i == grid || i == grid;
    if (degenerate) {
      rep.checks.push_back(truth(label.str() + ": outcome != converged_max",
                                 full.outcome != FlowOutcome::converged_max));
      rep.checks.push_back(above(label.str() + ": shortfall from Schmidt state", 1.0 - fs, 1e-3));
    } else {
      rep.checks.push_back(truth(label.str() + ": outcome converged_max",
                                 full.outcome == FlowOutcome::converged_max));
      rep.checks.push_back(near(label.str() + ": reaches Schmidt state", fs, 1.0, 1e-6));
    }
  }
  return rep;
}

ReproduceReport run_example_2q(const std::filesystem::path& dir, std::uint64_t seed) {
  ReproduceReport rep;
  rep.scenario = "example-2q-phase";
  const PureState psi = extra_phase_example_state();
  FlowConfig cfg;
  cfg.seed = seed;
  const SchmidtForm form = extract_schmidt(psi, cfg);

  const auto path = dir / "example_2q_phase.txt";
  auto out = open_out(path);
  write_schmidt_form(out, form);
  rep.files.push_back(path);

  // Expected separable critical state and its diagonalization.
  Matrix2 a;
  a << 0.5, -0.5, -0.5, 0.5;
  Matrix2 b;
  b << 0.5, Complex(0, -0.5), Complex(0, 0.5), 0.5;
  const Matrix rho_c_expected = kron(Matrix(a), Matrix(b));
  const Matrix rho_c = form.optimal_product.amplitudes() * form.optimal_product.amplitudes().adjoint();
  rep.checks.push_back(below("rho_c matches the separable critical state", max_abs_diff(rho_c, rho_c_expected),
                             1e-6));
  const Matrix t = form.diagonalizer.matrix();
  const Matrix up = DensityMatrix::pure(PureState::all_up(2)).matrix();
  rep.checks.push_back(below("T^dagger rho_c T = |uu><uu|", max_abs_diff(t.adjoint() * rho_c * t, up), 1e-6));

  const Vector& d = form.diagonalized_state.amplitudes();
  const Complex off = d(0) * std::conj(d(3));
  const double c8 = std::cos(pi / 8.0);
  const double s8 = std::sin(pi / 8.0);
  rep.checks.push_back(near("intermediate off-diagonal argument = -pi/2", std::arg(off), -pi / 2.0, 1e-6));
  rep.checks.push_back(near("intermediate off-diagonal magnitude = cos(pi/8) sin(pi/8)", std::abs(off),
                            c8 * s8, 1e-6));
  rep.checks.push_back(near("intermediate (0,0) = cos^2(pi/8)", std::norm(d(0)), c8 * c8, 1e-6));

  const Matrix final_rho = form.canonical_state.amplitudes() * form.canonical_state.amplitudes().adjoint();
  rep.checks.push_back(below("canonical state equals rho_S(pi/4)",
                             max_abs_diff(final_rho, schmidt_state_2q(kTargetTheta).matrix()), 1e-6));
  return rep;
}

ReproduceReport run_example_3q(const std::filesystem::path& dir, std::uint64_t seed) {
  ReproduceReport rep;
  rep.scenario = "example-3q";
  const PureState psi = three_qubit_example_state();
  FlowConfig cfg;
  cfg.seed = seed;
  const SchmidtForm form = extract_schmidt(psi, cfg);

  const auto path = dir / "example_3q.txt";
  auto out = open_out(path);
  write_schmidt_form(out, form);
  rep.files.push_back(path);

  const Vector& c = form.canonical_state.amplitudes();
  const std::array<double, 5> expected = {0.986657, 0.128, 0.0347616, 0.085024, 0.0411138};
  const std::array<const char*, 5> names = {"|uuu|", "|udd|", "|dud|", "|ddu|", "|ddd|"};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    rep.checks.push_back(near(std::string("canonical magnitude ") + names[i], form.lambdas[i], expected[i], 1e-4));
  }
  for (Index idx : missing_basis_indices(3)) {
    rep.checks.push_back(below("missing component " + std::to_string(idx), std::abs(c(idx)), 1e-4));
  }
  for (Index idx : {Index{5}, Index{6}, Index{7}}) {
    rep.checks.push_back(below("component " + std::to_string(idx) + " is real nonnegative",
                               std::abs(c(idx).imag()) + std::max(0.0, -c(idx).real()), 1e-8));
  }
  rep.checks.push_back(near("|-0.0138602 + 0.0387071 i| = 0.0411138",
                            std::abs(Complex(-0.0138602, 0.0387071)), 0.0411138, 1e-6));
  // Pre-cleanup spinor magnitudes are independent of the phase conventions.
  const std::array<std::pair<Index, Complex>, 5> intermediate = {{
      {0, Complex(0.986657, 0.0)},
      {3, Complex(-0.125609, -0.0245643)},
      {5, Complex(0.0151643, -0.0312796)},
      {6, Complex(0.0703562, 0.0477398)},
      {7, Complex(-0.0138602, 0.0387071)},
  }};
  for (const auto& [idx, v] : intermediate) {
    rep.checks.push_back(near("intermediate magnitude " + std::to_string(idx),
                              std::abs(form.diagonalized_state[idx]), std::abs(v), 1e-4));
  }
  rep.checks.push_back(truth("lambda_1 strictly dominant", form.strictly_dominant));
  rep.checks.push_back(near("Bures value 2(1 - lambda_1)", bures_entanglement_nq(form).value, 0.026686, 1e-5));
  {
    std::ostringstream s;
    s << std::setprecision(10) << "phase_phi = " << form.phase_phi << ", flow runs = " << form.flow_runs;
    rep.notes.push_back(s.str());
  }
  return rep;
}

}  // namespace

PureState separable_example_state() {
  const Vector v = pauli_rotation(0, 1, 1.0 / (4.0 * pi)).col(0);
  return PureState::normalized(v);
}

std::vector<AngleReading> entangled_angle_candidates() {
  std::vector<AngleReading> c = {
      {"local 1/(pi/4), entangling 7/(10 pi)", 4.0 / pi, 7.0 / (10.0 * pi), 0.0},
      {"local 1/(pi/4), entangling 7 pi/10", 4.0 / pi, 7.0 * pi / 10.0, 0.0},
      {"local pi/4, entangling 7/(10 pi)", pi / 4.0, 7.0 / (10.0 * pi), 0.0},
      {"local pi/4, entangling 7 pi/10", pi / 4.0, 7.0 * pi / 10.0, 0.0},
      {"local pi/4, entangling 3 pi/20", pi / 4.0, 3.0 * pi / 20.0, 0.0},
      {"local pi/4, entangling 7 pi/20", pi / 4.0, 7.0 * pi / 20.0, 0.0},
  };
  for (auto& r : c) {
    const double s1 = schmidt_oracle_2q(entangled_example_state(r)).coefficients(0);
    r.sigma1_squared = s1 * s1;
  }
  return c;
}

AngleReading resolve_entangled_angles() {
  for (const auto& r : entangled_angle_candidates()) {
    if (std::abs(r.sigma1_squared - 0.793893) < 1e-5) return r;
  }
  throw std::runtime_error("no angle reading reproduces the reference Schmidt weight");
}

PureState entangled_example_state(const AngleReading& reading) {
  const Matrix u = pauli_rotation(2, 0, reading.local_angle) * pauli_rotation(2, 2, reading.entangling_angle);
  return PureState::normalized(u.col(0));
}

PureState extra_phase_example_state() {
  const Matrix u = pauli_rotation(2, 0, pi / 4.0) * pauli_rotation(0, 1, pi / 4.0);
  return PureState::normalized(u * schmidt_vector_2q(kTargetTheta).amplitudes());
}

PureState three_qubit_example_state() {
  Vector v(8);
  v << Complex(0.3, 0.1), 0.2, 0.3, 0.3, 0.4, 0.2, 0.5, std::sqrt(1.0 - 0.77);
  return PureState(v);
}

bool ReproduceReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ReproduceCheck& c) { return c.pass; });
}

std::vector<std::string_view> reproduce_scenarios() {
  return {"fig1", "fig2", "example-2q-phase", "example-3q"};
}

ReproduceReport reproduce(std::string_view scenario, const std::filesystem::path& out_dir,
                          std::uint64_t seed) {
  std::filesystem::create_directories(out_dir);
  if (scenario == "fig1") return run_fig1(out_dir, seed);
  if (scenario == "fig2") return run_fig2(out_dir, seed);
  if (scenario == "example-2q-phase") return run_example_2q(out_dir, seed);
  if (scenario == "example-3q") return run_example_3q(out_dir, seed);
  throw std::invalid_argument("unknown scenario '" + std::string(scenario) + "'");
}

}  // namespace localflow
