#pragma once

// Fidelity landscape over local unitaries: the fidelity functional, its
// gradient (full and restricted to single-qubit directions), the Hessian
// quadratic form and its spectrum on the local tangent basis, and the
// closed-form two-qubit critical-point spectra.
//
// The bracket normalization is fixed to N = 1, so for pure states the
// fidelity is the squared overlap |<psi0|U|psiT>|^2.

#include "localflow/tensor.hpp"

#include <array>
#include <string_view>
#include <vector>

namespace localflow {

enum class Signature { maximum, minimum, saddle, degenerate };

std::string_view to_string(Signature s);

/// Eigenvalue tolerance used for signature labels.
inline constexpr double kSignatureTol = 1e-9;
/// Local-gradient norm below which a point counts as critical.
inline constexpr double kCriticalGradTol = 1e-8;

struct HessianSpectrum {
  Eigen::VectorXd eigenvalues;  // ascending
  Signature signature = Signature::degenerate;
  double gradient_norm = 0.0;
  /// False when the point was not critical (gradient_norm > kCriticalGradTol).
  bool reliable = true;
};

/// Signature of a list of eigenvalues:
///   maximum    all <= tol and at least one < -tol
///   minimum    all >= -tol and at least one > tol
///   saddle     both signs beyond tol
///   degenerate otherwise
Signature classify_signature(const Eigen::VectorXd& eigenvalues, double tol = kSignatureTol);
/// Sorts ascending and attaches the signature.
HessianSpectrum spectrum_from_values(std::vector<double> values, double tol = kSignatureTol);

/// i * sigma_j on qubit k, ordered by qubit then j in {1, 2, 3}; 3n elements.
std::vector<TangentDirection> local_tangent_basis(int n);

/// Re Tr[x] (the bracket with N = 1).
double bracket0(const Matrix& x);
/// Re Tr[a^dagger b], the metric pairing tangent directions with gradients.
double tangent_pairing(const TangentDirection& a, const TangentDirection& b);

/// F = <U^dagger rho0 U rhoT>_0.
double fidelity(const DensityMatrix& rho0, const UnitaryOp& u, const DensityMatrix& rhoT);

/// G = [U^dagger rho0 U, rhoT]. The flow dU/ds = U G ascends F and
/// dF along U e^{tA} equals tangent_pairing(G, A).
TangentDirection gradient_full(const DensityMatrix& rho0, const UnitaryOp& u,
                               const DensityMatrix& rhoT);

/// Hilbert-Schmidt projection onto span{i S_kj}: drops every multi-qubit
/// Pauli component and the identity component.
TangentDirection project_local(const TangentDirection& a);

/// P([U^dagger rho0 U, rhoT]).
TangentDirection gradient_local(const DensityMatrix& rho0, const UnitaryOp& u,
                                const DensityMatrix& rhoT);

/// Second derivative of F along U e^{tA} at t = 0:
///   <{rhoT, R} A^2>_0 - 2 <R A rhoT A>_0  with R = U^dagger rho0 U.
double hessian_quadratic(const DensityMatrix& rho0, const UnitaryOp& u, const DensityMatrix& rhoT,
                         const TangentDirection& a);
/// Critical-point form 2(<rhoT R A^2>_0 - <R A rhoT A>_0). Equal to
/// hessian_quadratic wherever the real part of Tr[[R, rhoT] A^2] vanishes,
/// which holds for every anti-Hermitian A.
double hessian_quadratic_critical(const DensityMatrix& rho0, const UnitaryOp& u,
                                  const DensityMatrix& rhoT, const TangentDirection& a);

/// Symmetric 3n x 3n matrix H_ab = (Q(a+b) - Q(a-b)) / 4 over local_tangent_basis.
Eigen::MatrixXd local_hessian(const DensityMatrix& rho0, const UnitaryOp& u,
                              const DensityMatrix& rhoT);
/// Spectrum and signature of local_hessian. `reliable` is cleared when the
/// local gradient norm exceeds kCriticalGradTol.
HessianSpectrum hessian_matrix_local(const DensityMatrix& rho0, const UnitaryOp& u,
                                     const DensityMatrix& rhoT);

/// Dimension of the local directions A with [A, rho] = 0, i.e. the
/// single-qubit rotations that leave rho unchanged.
int local_stabilizer_dimension(const DensityMatrix& rho, double tol = 1e-8);

/// Closed-form local Hessian spectrum at the critical state rho_S(phi) for
/// target rho_S(theta), in the order (0, a, a, b, c, c).
std::array<double, 6> hessian_spectrum_schmidt_pair(double theta, double phi);
/// Closed-form spectrum on the critical submanifold
/// x|down up><down up| + (1-x)|up down><up down|: (1-r, 1-r, 0, 1+r, 1+r, 0).
std::array<double, 6> hessian_spectrum_submanifold(double theta, double x);

/// x|down up><down up| + (1-x)|up down><up down|.
DensityMatrix submanifold_state(double x);

/// ||P[rhoC, rho_S(theta)]||_F for two-qubit rhoC.
double critical_residual(const DensityMatrix& rhoC, double theta);

}  // namespace localflow
