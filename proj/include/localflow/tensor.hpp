#pragma once

// Dense complex linear algebra over qubit registers.
//
// Basis convention: qubit 0 is the most significant bit of a basis index,
// |up> = (1, 0) is bit 0 and |down> = (0, 1) is bit 1. For two qubits the
// ordering is |up up>, |up down>, |down up>, |down down>.

#include <Eigen/Dense>

#include <complex>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace localflow {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Matrix2 = Eigen::Matrix2cd;
using Index = Eigen::Index;

/// Tag for constructors that skip invariant validation. Only for values that
/// satisfy the invariant by construction (commutators, conjugations, ...).
struct trusted_t {
  explicit trusted_t() = default;
};
inline constexpr trusted_t trusted{};

/// 2^n, throwing std::invalid_argument for n < 1 or n > 30.
Index dim_for_qubits(int n);
/// Inverse of dim_for_qubits; throws if dim is not a power of two >= 2.
int qubits_for_dim(Index dim);

/// Normalized amplitude vector over an n-qubit register.
class PureState {
 public:
  PureState() = default;
  /// Throws if the length is not 2^n or the norm deviates from 1 by more than 1e-12.
  explicit PureState(Vector amplitudes);
  PureState(trusted_t, Vector amplitudes);

  /// Rescales to unit norm; throws on a zero vector.
  static PureState normalized(Vector amplitudes);
  static PureState basis(int n, Index index);
  static PureState all_up(int n) { return basis(n, 0); }

  int qubits() const { return n_; }
  Index dim() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex operator[](Index i) const { return amplitudes_(i); }

 private:
  int n_ = 0;
  Vector amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  /// Validates Hermiticity and trace (1e-12) and eigenvalues >= -1e-10.
  explicit DensityMatrix(Matrix entries);
  DensityMatrix(trusted_t, Matrix entries);

  static DensityMatrix pure(const PureState& psi);

  int qubits() const { return n_; }
  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  double purity() const;

 private:
  int n_ = 0;
  Matrix entries_;
};

/// Element of U(2^n).
class UnitaryOp {
 public:
  UnitaryOp() = default;
  /// Throws if ||U^dagger U - I||_F > 1e-10.
  explicit UnitaryOp(Matrix entries);
  UnitaryOp(trusted_t, Matrix entries);

  static UnitaryOp identity(int n);

  int qubits() const { return n_; }
  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  UnitaryOp adjoint() const { return UnitaryOp(trusted, entries_.adjoint()); }
  /// ||U^dagger U - I||_F
  double unitarity_error() const;

  friend UnitaryOp operator*(const UnitaryOp& a, const UnitaryOp& b) {
    return UnitaryOp(trusted, a.entries_ * b.entries_);
  }

 private:
  int n_ = 0;
  Matrix entries_;
};

/// Anti-Hermitian matrix, an element of the Lie algebra u(2^n).
class TangentDirection {
 public:
  TangentDirection() = default;
  /// Throws if ||A + A^dagger||_F > 1e-12.
  explicit TangentDirection(Matrix entries);
  TangentDirection(trusted_t, Matrix entries);

  static TangentDirection zero(int n);

  int qubits() const { return n_; }
  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  double norm() const { return entries_.norm(); }

  friend TangentDirection operator+(const TangentDirection& a, const TangentDirection& b) {
    return TangentDirection(trusted, a.entries_ + b.entries_);
  }
  friend TangentDirection operator-(const TangentDirection& a, const TangentDirection& b) {
    return TangentDirection(trusted, a.entries_ - b.entries_);
  }
  friend TangentDirection operator*(double s, const TangentDirection& a) {
    return TangentDirection(trusted, s * a.entries_);
  }

 private:
  int n_ = 0;
  Matrix entries_;
};

/// Tensor product of Pauli letters, letter 0..3 meaning sigma_0..sigma_3.
class PauliString {
 public:
  explicit PauliString(std::vector<std::uint8_t> letters);
  /// Letters from the base-4 digits of index, qubit 0 most significant.
  static PauliString from_index(int n, std::uint64_t index);
  /// sigma_j at qubit, identity elsewhere.
  static PauliString single(int n, int qubit, int j);

  int qubits() const { return static_cast<int>(letters_.size()); }
  const std::vector<std::uint8_t>& letters() const { return letters_; }
  std::uint64_t index() const;
  Matrix matrix() const;
  /// Tr[x * P] in O(2^n).
  Complex trace_with(const Matrix& x) const;
  /// "IXYZ" spelling, qubit 0 first.
  std::string str() const;

  auto operator<=>(const PauliString&) const = default;

 private:
  std::vector<std::uint8_t> letters_;
};

struct PauliTerm {
  PauliString string;
  Complex coefficient;
};

const Matrix2& pauli(int j);

Matrix kron(const Matrix& a, const Matrix& b);
/// Kronecker product of a list of 2x2 factors, first factor on qubit 0.
Matrix kron_factors(const std::vector<Matrix2>& factors);
/// op acting on `qubit` of an n-qubit register, identity elsewhere.
Matrix embed_single(int n, int qubit, const Matrix2& op);
Matrix commutator(const Matrix& a, const Matrix& b);

/// Coefficients c_P = Tr[x P] / 2^n for all 4^n strings, in index order.
std::vector<PauliTerm> pauli_coefficients(const Matrix& x, int n);
Matrix pauli_reconstruct(const std::vector<PauliTerm>& terms, int n);

/// exp(a), computed from the eigendecomposition of the Hermitian matrix i*a.
UnitaryOp expm_antihermitian(const TangentDirection& a);
/// Validating overload; throws std::invalid_argument if a is not anti-Hermitian.
UnitaryOp expm_antihermitian(const Matrix& a);

struct HermitianEigen {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;          // column k pairs with values(k)
};

/// Cyclic Jacobi eigensolver. Throws std::invalid_argument unless
/// ||h - h^dagger||_F <= 1e-10.
HermitianEigen hermitian_eig(const Matrix& h);

/// Reduced 2x2 state of one qubit (0-based, qubit 0 most significant).
DensityMatrix partial_trace(const DensityMatrix& rho, int keep);

}  // namespace localflow
