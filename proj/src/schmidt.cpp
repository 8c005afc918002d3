#include "localflow/schmidt.hpp"

#include "localflow/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace localflow {

namespace {

constexpr double kFactorUnitaryTol = 1e-12;
constexpr double kTieTol = 1e-9;
constexpr double kAngleSlack = 1e-12;
constexpr double kTinyAmplitude = 1e-14;

double arg_or_zero(Complex c) { return std::abs(c) < kTinyAmplitude ? 0.0 : std::arg(c); }

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  return a == -std::numbers::pi ? std::numbers::pi : a;
}

int bit_of(Index b, int n, int qubit) { return static_cast<int>((b >> (n - 1 - qubit)) & 1); }

// Factor column phases: first entry with nonzero magnitude real positive.
void fix_column_phases(Matrix2& f) {
  for (int c = 0; c < 2; ++c) {
    for (int r = 0; r < 2; ++r) {
      if (std::abs(f(r, c)) > 1e-12) {
        f.col(c) *= std::conj(f(r, c)) / std::abs(f(r, c));
        break;
      }
    }
  }
}

Vector product_vector(const std::vector<Eigen::Vector2cd>& factors) {
  Vector v = Vector::Ones(1);
  for (const auto& f : factors) {
    Vector next(v.size() * 2);
    for (Index i = 0; i < v.size(); ++i) {
      next(2 * i) = v(i) * f(0);
      next(2 * i + 1) = v(i) * f(1);
    }
    v = std::move(next);
  }
  return v;
}

// v[x] = sum over b with b_k = x of psi_b * prod_{j != k} conj(f_j[b_j]).
Eigen::Vector2cd contract_except(const Vector& psi, int n, const std::vector<Eigen::Vector2cd>& f,
                                 int k) {
  Eigen::Vector2cd v = Eigen::Vector2cd::Zero();
  for (Index b = 0; b < psi.size(); ++b) {
    Complex w = psi(b);
    for (int j = 0; j < n; ++j) {
      if (j != k) w *= std::conj(f[static_cast<std::size_t>(j)](bit_of(b, n, j)));
    }
    v(bit_of(b, n, k)) += w;
  }
  return v;
}

Eigen::Vector2cd dominant_unfolding_vector(const Vector& psi, int n, int k) {
  Matrix gram = Matrix::Zero(2, 2);
  const Index bit = Index{1} << (n - 1 - k);
  for (Index b = 0; b < psi.size(); ++b) {
    if (b & bit) continue;
    const Complex a0 = psi(b);
    const Complex a1 = psi(b | bit);
    gram(0, 0) += a0 * std::conj(a0);
    gram(0, 1) += a0 * std::conj(a1);
    gram(1, 0) += a1 * std::conj(a0);
    gram(1, 1) += a1 * std::conj(a1);
  }
  const HermitianEigen eig = hermitian_eig(gram);
  return eig.vectors.col(1);
}

}  // namespace

LocalUnitary::LocalUnitary(std::vector<Matrix2> factors) : factors_(std::move(factors)) {
  for (const auto& f : factors_) {
    if ((f.adjoint() * f - Matrix2::Identity()).norm() > kFactorUnitaryTol) {
      throw std::invalid_argument("LocalUnitary: factor is not unitary");
    }
  }
}

LocalUnitary LocalUnitary::identity(int n) {
  return LocalUnitary(std::vector<Matrix2>(static_cast<std::size_t>(n), Matrix2::Identity()));
}

LocalUnitary LocalUnitary::adjoint() const {
  std::vector<Matrix2> f;
  f.reserve(factors_.size());
  for (const auto& m : factors_) f.push_back(m.adjoint());
  return LocalUnitary(std::move(f));
}

// ---------------------------------------------------------------------------

PureState schmidt_vector_2q(double theta) {
  if (!(theta >= -kAngleSlack && theta <= std::numbers::pi + kAngleSlack)) {
    throw std::invalid_argument("Schmidt angle must lie in [0, pi]");
  }
  Vector v = Vector::Zero(4);
  v(0) = std::cos(theta / 2.0);
  v(3) = std::sin(theta / 2.0);
  return PureState(trusted, std::move(v));
}

DensityMatrix schmidt_state_2q(double theta) { return DensityMatrix::pure(schmidt_vector_2q(theta)); }

double optimal_fidelity(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return theta <= std::numbers::pi / 2.0 ? c * c : s * s;
}

double bures_entanglement_2q(double theta) { return 2.0 * (1.0 - std::sqrt(optimal_fidelity(theta))); }

BuresResult bures_entanglement_nq(const SchmidtForm& form) {
  if (form.lambdas.empty()) throw std::invalid_argument("bures_entanglement_nq: empty Schmidt form");
  const double l1 = form.lambdas.front();
  double rest = 0.0;
  for (std::size_t i = 1; i < form.lambdas.size(); ++i) rest = std::max(rest, form.lambdas[i]);
  return {2.0 * (1.0 - l1), l1 > rest + kTieTol};
}

SchmidtOracle2q schmidt_oracle_2q(const PureState& psi) {
  if (psi.qubits() != 2) throw std::invalid_argument("schmidt_oracle_2q: two-qubit state required");
  Matrix2 m;
  m << psi[0], psi[1], psi[2], psi[3];
  Eigen::JacobiSVD<Matrix2> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SchmidtOracle2q out;
  out.coefficients = svd.singularValues();
  out.theta = 2.0 * std::acos(std::min(1.0, out.coefficients(0)));
  out.frame = LocalUnitary({svd.matrixU(), svd.matrixV().conjugate()});
  return out;
}

Rank1Result rank1_oracle_nq(const PureState& psi, int restarts, std::uint64_t seed) {
  const int n = psi.qubits();
  if (n < 2) throw std::invalid_argument("rank1_oracle_nq: at least two qubits required");
  const Vector& amps = psi.amplitudes();
  Rng rng(seed);
  std::normal_distribution<double> g;

  Rank1Result best;
  best.lambda1 = -1.0;
  const int runs = std::max(1, restarts);
  for (int r = 0; r < runs; ++r) {
    std::vector<Eigen::Vector2cd> f(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      if (r == 0) {
        f[static_cast<std::size_t>(k)] = dominant_unfolding_vector(amps, n, k);
      } else {
        Eigen::Vector2cd v(Complex(g(rng), g(rng)), Complex(g(rng), g(rng)));
        f[static_cast<std::size_t>(k)] = v.normalized();
      }
    }
    double lambda = 0.0;
    for (int sweep = 0; sweep < 5000; ++sweep) {
      const double previous = lambda;
      for (int k = 0; k < n; ++k) {
        const Eigen::Vector2cd v = contract_except(amps, n, f, k);
        lambda = v.norm();
        if (lambda > 0.0) f[static_cast<std::size_t>(k)] = v / lambda;
      }
      if (lambda - previous < 1e-16 && sweep > 0) break;
    }
    if (lambda > best.lambda1) {
      best.lambda1 = lambda;
      best.factors = f;
    }
  }
  best.product_state = PureState::normalized(product_vector(best.factors));
  best.lambda1 = std::abs(best.product_state.amplitudes().dot(amps));
  return best;
}

// ---------------------------------------------------------------------------

LocalUnitary product_diagonalizer(const DensityMatrix& rhoC) {
  const int n = rhoC.qubits();
  std::vector<Matrix2> factors;
  factors.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const HermitianEigen eig = hermitian_eig(partial_trace(rhoC, k).matrix());
    Matrix2 t;
    t.col(0) = eig.vectors.col(1);  // eigenvalue ~1 maps to |up>
    t.col(1) = eig.vectors.col(0);
    fix_column_phases(t);
    factors.push_back(t);
  }
  return LocalUnitary(std::move(factors));
}

SchmidtForm canonicalize(const PureState& psi, const LocalUnitary& frame) {
  const int n = psi.qubits();
  if (frame.qubits() != n) throw std::invalid_argument("canonicalize: qubit count mismatch");
  const Index d = psi.dim();

  SchmidtForm form;
  form.n = n;
  form.diagonalizer = frame;
  Vector c = frame.matrix().adjoint() * psi.amplitudes();
  form.diagonalized_state = PureState(trusted, c);

  const double global = -arg_or_zero(c(0));
  c *= std::polar(1.0, global);

  std::vector<double> alpha(static_cast<std::size_t>(n), 0.0);
  if (n == 2) {
    alpha[0] = -arg_or_zero(c(3));
  } else if (n >= 3) {
    // Targets: |down..down> and, for each qubit k >= 1, |down..down> with
    // qubit k up. Component b gains sum_k alpha_k bit_k(b).
    const double arg_all = arg_or_zero(c(d - 1));
    double rest = 0.0;
    for (int k = 1; k < n; ++k) {
      const Index idx = (d - 1) ^ (Index{1} << (n - 1 - k));
      alpha[static_cast<std::size_t>(k)] = wrap_angle(arg_or_zero(c(idx)) - arg_all);
      rest += alpha[static_cast<std::size_t>(k)];
    }
    alpha[0] = wrap_angle(-arg_all - rest);
  }
  for (Index b = 0; b < d; ++b) {
    double phase = 0.0;
    for (int k = 0; k < n; ++k) phase += alpha[static_cast<std::size_t>(k)] * bit_of(b, n, k);
    c(b) *= std::polar(1.0, phase);
  }
  form.phase_corrections = {alpha, wrap_angle(global)};
  form.canonical_state = PureState(trusted, c);

  if (n == 2) {
    form.lambdas = {std::abs(c(0)), std::abs(c(3))};
  } else if (n == 3) {
    form.lambdas = {std::abs(c(0)), std::abs(c(3)), std::abs(c(5)), std::abs(c(6)), std::abs(c(7))};
    double phi = arg_or_zero(c(3));
    if (phi < 0.0) phi += 2.0 * std::numbers::pi;
    form.phase_phi = phi;
    form.verified = std::all_of(form.lambdas.begin(), form.lambdas.end(),
                                [](double l) { return l > kTieTol; });
  } else {
    const auto missing = missing_basis_indices(n);
    form.lambdas.push_back(std::abs(c(0)));
    for (Index b = 1; b < d; ++b) {
      if (std::find(missing.begin(), missing.end(), b) == missing.end()) {
        form.lambdas.push_back(std::abs(c(b)));
      }
    }
  }
  form.strictly_dominant = bures_entanglement_nq(form).reliable;
  return form;
}

SchmidtForm extract_schmidt(const PureState& psi, const FlowConfig& cfg, const ExtractOptions& opts) {
  const int n = psi.qubits();
  if (n < 2) throw std::invalid_argument("extract_schmidt: at least two qubits required");
  cfg.validate();

  if (n == 2) {
    const SchmidtOracle2q oracle = schmidt_oracle_2q(psi);
    if (std::abs(oracle.theta - std::numbers::pi / 2.0) < opts.bell_margin) {
      SchmidtForm form = canonicalize(psi, oracle.frame);
      form.via_svd = true;
      form.optimal_product = PureState(trusted, oracle.frame.matrix().col(0));
      form.max_fidelity = oracle.coefficients(0) * oracle.coefficients(0);
      form.warnings.push_back("state is close to maximally entangled; used the SVD oracle");
      return form;
    }
  }

  const DensityMatrix rho_i = DensityMatrix::pure(PureState::all_up(n));
  const DensityMatrix rho_t = DensityMatrix::pure(psi);
  Rng rng(cfg.seed);
  const int runs = std::max(1, opts.restarts);

  std::optional<FlowTrace> best;
  FlowTrace last;
  int used = 0;
  for (int r = 0; r < runs; ++r) {
    const UnitaryOp u0 = r == 0 ? UnitaryOp::identity(n) : random_local_unitary(n, rng);
    FlowConfig c = cfg;
    c.seed = cfg.seed + static_cast<std::uint64_t>(r);
    FlowTrace trace = run_flow(rho_i, rho_t, u0, c);
    ++used;
    if (trace.outcome == FlowOutcome::converged_max &&
        (!best || trace.final_fidelity() > best->final_fidelity())) {
      best = std::move(trace);
    } else {
      last = std::move(trace);
    }
    // Two-qubit landscapes have no traps; one strict maximum is global.
    if (n == 2 && best) break;
  }
  if (!best) {
    throw FlowError("local gradient flow did not reach a strict maximum", std::move(last));
  }

  const DensityMatrix rho_c = limiting_state(*best, rho_i);
  SchmidtForm form = canonicalize(psi, product_diagonalizer(rho_c));
  form.optimal_product = PureState::normalized(best->final_unitary.matrix().adjoint().col(0));
  form.max_fidelity = best->final_fidelity();
  form.flow_runs = used;
  if (n >= 3 && !form.strictly_dominant) {
    form.warnings.push_back("lambda_1 is not strictly dominant; maximum may not be global");
  }
  if (n == 3 && !form.verified) {
    form.warnings.push_back("some canonical coefficients vanish; extra critical states may exist");
  }
  if (n >= 4) {
    form.warnings.push_back("landscape completeness is unproven for more than three qubits");
  }
  return form;
}

std::vector<Index> missing_basis_indices(int n) {
  if (n < 2) throw std::invalid_argument("missing_basis_indices: at least two qubits required");
  std::vector<Index> out;
  for (int k = 0; k < n; ++k) out.push_back(Index{1} << (n - 1 - k));
  return out;
}

long long entanglement_param_count(int n) {
  if (n < 1 || n > 60) throw std::invalid_argument("entanglement_param_count: n out of range");
  return (1LL << (n + 1)) - 2 - 3LL * n;
}

}  // namespace localflow
