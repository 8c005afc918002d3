#pragma once

// Schmidt and generalized Schmidt canonical forms reached through the local
// gradient flow, the fidelity-based Bures entanglement measure, and two
// independent oracles (two-qubit SVD and seeded alternating rank-1
// approximation) used to cross-check the flow.

#include "localflow/flow.hpp"
#include "localflow/tensor.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace localflow {

/// Tensor product of single-qubit unitaries, factor 0 on qubit 0.
class LocalUnitary {
 public:
  LocalUnitary() = default;
  /// Throws if any factor deviates from unitarity by more than 1e-12.
  explicit LocalUnitary(std::vector<Matrix2> factors);

  static LocalUnitary identity(int n);

  int qubits() const { return static_cast<int>(factors_.size()); }
  const std::vector<Matrix2>& factors() const { return factors_; }
  Matrix matrix() const { return kron_factors(factors_); }
  UnitaryOp op() const { return UnitaryOp(trusted, matrix()); }
  LocalUnitary adjoint() const;

 private:
  std::vector<Matrix2> factors_;
};

struct PhaseCorrections {
  std::vector<double> qubit_phases;  // gate diag(1, e^{i alpha_k}) on qubit k
  double global_phase = 0.0;
};

struct SchmidtForm {
  int n = 0;
  PureState canonical_state;
  /// n = 2: (lambda_1, lambda_2); n = 3: magnitudes on |uuu>, |udd>, |dud>,
  /// |ddu>, |ddd>; n >= 4: |all up| followed by every component outside the
  /// missing single-excitation set, in index order.
  std::vector<double> lambdas;
  double phase_phi = 0.0;  // n = 3: argument of the |up down down> component, [0, 2 pi)
  LocalUnitary diagonalizer;  // T with T^dagger rho_c T = |up..up><up..up|
  PhaseCorrections phase_corrections;
  PureState diagonalized_state;  // T^dagger psi before any phase cleanup
  PureState optimal_product;     // rho_c as a ket
  double max_fidelity = 0.0;     // |<psi|optimal_product>|^2
  bool strictly_dominant = false;
  bool via_svd = false;          // two-qubit near-maximally-entangled route
  bool verified = true;          // n = 3 with some lambda_j == 0 is unverified
  int flow_runs = 0;
  std::vector<std::string> warnings;
};

struct BuresResult {
  double value = 0.0;
  bool reliable = true;  // false when lambda_1 is not strictly dominant
};

/// Thrown by extract_schmidt when no flow run reaches a strict maximum.
class FlowError : public std::runtime_error {
 public:
  FlowError(const std::string& what, FlowTrace trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const FlowTrace& trace() const { return trace_; }

 private:
  FlowTrace trace_;
};

/// cos(theta/2)|up up> + sin(theta/2)|down down>, theta in [0, pi].
PureState schmidt_vector_2q(double theta);
DensityMatrix schmidt_state_2q(double theta);

/// cos^2(theta/2) for theta <= pi/2, sin^2(theta/2) otherwise.
double optimal_fidelity(double theta);
/// 2(1 - sqrt(optimal_fidelity(theta))).
double bures_entanglement_2q(double theta);
/// 2(1 - lambda_1), flagged unreliable unless lambda_1 strictly dominates.
BuresResult bures_entanglement_nq(const SchmidtForm& form);

struct SchmidtOracle2q {
  double theta = 0.0;            // 2 arccos(sigma_1), in [0, pi/2]
  Eigen::Vector2d coefficients;  // sigma_1 >= sigma_2
  LocalUnitary frame;            // frame^dagger psi = sigma_1|uu> + sigma_2|dd>
};

/// Singular values of the 2x2 amplitude matrix.
SchmidtOracle2q schmidt_oracle_2q(const PureState& psi);

struct Rank1Result {
  double lambda1 = 0.0;
  PureState product_state;
  std::vector<Eigen::Vector2cd> factors;
};

/// Best product-state overlap max |<product|psi>| by alternating single-factor
/// updates. Restart 0 starts from the dominant singular vectors of each
/// one-qubit unfolding, the rest from seeded random product states.
Rank1Result rank1_oracle_nq(const PureState& psi, int restarts, std::uint64_t seed);

struct ExtractOptions {
  /// Flow runs for n >= 3: one from the identity plus seeded random local
  /// starting unitaries; the best strict maximum wins.
  int restarts = 8;
  /// Two-qubit inputs whose Schmidt angle lies within this margin of pi/2
  /// bypass the flow and use the SVD oracle.
  double bell_margin = 0.05;
};

/// Flow-based canonical form of psi. Throws FlowError if no run converges to
/// a strict maximum.
SchmidtForm extract_schmidt(const PureState& psi, const FlowConfig& cfg,
                            const ExtractOptions& opts = {});

/// Canonical form given a local frame whose first basis vector is the
/// optimal product state (steps after the flow: rotate, fix global phase,
/// solve the local phase system).
SchmidtForm canonicalize(const PureState& psi, const LocalUnitary& frame);

/// Local frame T with T^dagger rho_c T = |up..up><up..up| for a product state
/// rho_c, from the eigenvectors of each one-qubit reduced state.
LocalUnitary product_diagonalizer(const DensityMatrix& rhoC);

/// |down up .. up>, |up down .. up>, ..., |up .. up down>: indices 2^(n-1), ..., 1.
std::vector<Index> missing_basis_indices(int n);

/// 2^(n+1) - 2 - 3n.
long long entanglement_param_count(int n);

}  // namespace localflow
