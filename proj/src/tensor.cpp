#include "localflow/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace localflow {

namespace {

constexpr double kStateNormTol = 1e-12;
constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kPsdTol = 1e-10;
constexpr double kUnitaryTol = 1e-10;
constexpr double kEigInputTol = 1e-10;
constexpr double kJacobiOffTol = 1e-13;
constexpr double kDegenerateGap = 1e-9;

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square");
  }
}

// Column-wise update A <- A J and row-wise A <- J^dagger A for the 2x2
// block rotation J acting on indices (p, q).
void apply_rotation(Matrix& a, Matrix& v, Index p, Index q, Complex jpp, Complex jpq,
                    Complex jqp, Complex jqq) {
  const Index d = a.rows();
  for (Index r = 0; r < d; ++r) {
    const Complex ap = a(r, p);
    const Complex aq = a(r, q);
    a(r, p) = ap * jpp + aq * jqp;
    a(r, q) = ap * jpq + aq * jqq;
    const Complex vp = v(r, p);
    const Complex vq = v(r, q);
    v(r, p) = vp * jpp + vq * jqp;
    v(r, q) = vp * jpq + vq * jqq;
  }
  for (Index c = 0; c < d; ++c) {
    const Complex ap = a(p, c);
    const Complex aq = a(q, c);
    a(p, c) = std::conj(jpp) * ap + std::conj(jqp) * aq;
    a(q, c) = std::conj(jpq) * ap + std::conj(jqq) * aq;
  }
}

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (Index c = 0; c < a.cols(); ++c) {
    for (Index r = 0; r < a.rows(); ++r) {
      if (r != c) s += std::norm(a(r, c));
    }
  }
  return std::sqrt(s);
}

HermitianEigen jacobi_eig(const Matrix& h) {
  const Index d = h.rows();
  Matrix a = 0.5 * (h + h.adjoint());
  Matrix v = Matrix::Identity(d, d);
  const double scale = std::max(1.0, a.norm());

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_diagonal_norm(a) < kJacobiOffTol * scale) break;
    for (Index p = 0; p < d - 1; ++p) {
      for (Index q = p + 1; q < d; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r < 1e-300) continue;
        const Complex phase = apq / r;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J = diag(1, e^{-i phi}) * [[c, s], [-s, c]]
        const Complex cphase = std::conj(phase);
        apply_rotation(a, v, p, q, c, s, -s * cphase, c * cphase);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return a(i, i).real() < a(j, j).real(); });

  HermitianEigen out;
  out.values.resize(d);
  out.vectors.resize(d, d);
  for (Index k = 0; k < d; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }

  // Modified Gram-Schmidt inside each near-degenerate cluster.
  Index start = 0;
  while (start < d) {
    Index end = start + 1;
    while (end < d && out.values(end) - out.values(end - 1) < kDegenerateGap) ++end;
    for (Index k = start; k < end; ++k) {
      for (Index j = start; j < k; ++j) {
        const Complex proj = out.vectors.col(j).dot(out.vectors.col(k));
        out.vectors.col(k) -= proj * out.vectors.col(j);
      }
      out.vectors.col(k).normalize();
    }
    start = end;
  }
  return out;
}

}  // namespace

Index dim_for_qubits(int n) {
  if (n < 1 || n > 30) throw std::invalid_argument("qubit count must be in [1, 30]");
  return Index{1} << n;
}

int qubits_for_dim(Index dim) {
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
  }
  int n = 0;
  while ((Index{1} << n) < dim) ++n;
  return n;
}

// ---------------------------------------------------------------------------

PureState::PureState(Vector amplitudes) : PureState(trusted, std::move(amplitudes)) {
  if (std::abs(amplitudes_.squaredNorm() - 1.0) > kStateNormTol) {
    throw std::invalid_argument("state is not normalized");
  }
}

PureState::PureState(trusted_t, Vector amplitudes)
    : n_(qubits_for_dim(amplitudes.size())), amplitudes_(std::move(amplitudes)) {}

PureState PureState::normalized(Vector amplitudes) {
  const double nrm = amplitudes.norm();
  if (!(nrm > 0.0)) throw std::invalid_argument("cannot normalize a zero vector");
  amplitudes /= nrm;
  return PureState(trusted, std::move(amplitudes));
}

PureState PureState::basis(int n, Index index) {
  const Index d = dim_for_qubits(n);
  if (index < 0 || index >= d) throw std::out_of_range("basis index out of range");
  Vector v = Vector::Zero(d);
  v(index) = 1.0;
  return PureState(trusted, std::move(v));
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix entries) : DensityMatrix(trusted, std::move(entries)) {
  if ((entries_ - entries_.adjoint()).norm() > kHermitianTol) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  if (std::abs(entries_.trace() - Complex(1.0)) > kTraceTol) {
    throw std::invalid_argument("density matrix trace is not 1");
  }
  if (hermitian_eig(entries_).values.minCoeff() < -kPsdTol) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
}

DensityMatrix::DensityMatrix(trusted_t, Matrix entries) : entries_(std::move(entries)) {
  require_square(entries_, "DensityMatrix");
  n_ = qubits_for_dim(entries_.rows());
}

DensityMatrix DensityMatrix::pure(const PureState& psi) {
  return DensityMatrix(trusted, psi.amplitudes() * psi.amplitudes().adjoint());
}

double DensityMatrix::purity() const { return (entries_ * entries_).trace().real(); }

// ---------------------------------------------------------------------------

UnitaryOp::UnitaryOp(Matrix entries) : UnitaryOp(trusted, std::move(entries)) {
  if (unitarity_error() > kUnitaryTol) throw std::invalid_argument("matrix is not unitary");
}

UnitaryOp::UnitaryOp(trusted_t, Matrix entries) : entries_(std::move(entries)) {
  require_square(entries_, "UnitaryOp");
  n_ = qubits_for_dim(entries_.rows());
}

UnitaryOp UnitaryOp::identity(int n) {
  const Index d = dim_for_qubits(n);
  return UnitaryOp(trusted, Matrix::Identity(d, d));
}

double UnitaryOp::unitarity_error() const {
  return (entries_.adjoint() * entries_ - Matrix::Identity(dim(), dim())).norm();
}

// ---------------------------------------------------------------------------

TangentDirection::TangentDirection(Matrix entries) : TangentDirection(trusted, std::move(entries)) {
  if ((entries_ + entries_.adjoint()).norm() > kHermitianTol) {
    throw std::invalid_argument("tangent direction is not anti-Hermitian");
  }
}

TangentDirection::TangentDirection(trusted_t, Matrix entries) : entries_(std::move(entries)) {
  require_square(entries_, "TangentDirection");
  n_ = qubits_for_dim(entries_.rows());
}

TangentDirection TangentDirection::zero(int n) {
  const Index d = dim_for_qubits(n);
  return TangentDirection(trusted, Matrix::Zero(d, d));
}

// ---------------------------------------------------------------------------

PauliString::PauliString(std::vector<std::uint8_t> letters) : letters_(std::move(letters)) {
  if (letters_.empty()) throw std::invalid_argument("Pauli string must be non-empty");
  for (auto l : letters_) {
    if (l > 3) throw std::invalid_argument("Pauli letter must be 0..3");
  }
}

PauliString PauliString::from_index(int n, std::uint64_t index) {
  std::vector<std::uint8_t> letters(static_cast<std::size_t>(n));
  for (int k = n - 1; k >= 0; --k) {
    letters[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(index & 3u);
    index >>= 2;
  }
  return PauliString(std::move(letters));
}

PauliString PauliString::single(int n, int qubit, int j) {
  if (qubit < 0 || qubit >= n) throw std::out_of_range("qubit index out of range");
  std::vector<std::uint8_t> letters(static_cast<std::size_t>(n), 0);
  letters[static_cast<std::size_t>(qubit)] = static_cast<std::uint8_t>(j);
  return PauliString(std::move(letters));
}

std::uint64_t PauliString::index() const {
  std::uint64_t idx = 0;
  for (auto l : letters_) idx = (idx << 2) | l;
  return idx;
}

Matrix PauliString::matrix() const {
  Matrix m = pauli(letters_[0]);
  for (std::size_t k = 1; k < letters_.size(); ++k) m = kron(m, pauli(letters_[k]));
  return m;
}

Complex PauliString::trace_with(const Matrix& x) const {
  const int n = qubits();
  const Index d = Index{1} << n;
  if (x.rows() != d || x.cols() != d) throw std::invalid_argument("Pauli trace: dimension mismatch");
  Index flip = 0;
  for (int k = 0; k < n; ++k) {
    const auto l = letters_[static_cast<std::size_t>(k)];
    if (l == 1 || l == 2) flip |= Index{1} << (n - 1 - k);
  }
  // Tr[x P] = sum_r x(r, c) P(c, r) with c = r ^ flip.
  Complex acc = 0.0;
  for (Index r = 0; r < d; ++r) {
    const Index c = r ^ flip;
    Complex p = 1.0;
    for (int k = 0; k < n; ++k) {
      const int bit_row = static_cast<int>((c >> (n - 1 - k)) & 1);
      const auto l = letters_[static_cast<std::size_t>(k)];
      if (l == 2) {
        p *= bit_row == 0 ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
      } else if (l == 3 && bit_row == 1) {
        p = -p;
      }
    }
    acc += x(r, c) * p;
  }
  return acc;
}

std::string PauliString::str() const {
  static constexpr char kNames[] = {'I', 'X', 'Y', 'Z'};
  std::string s;
  for (auto l : letters_) s.push_back(kNames[l]);
  return s;
}

const Matrix2& pauli(int j) {
  static const Matrix2 sigma[4] = {
      (Matrix2() << 1, 0, 0, 1).finished(),
      (Matrix2() << 0, 1, 1, 0).finished(),
      (Matrix2() << 0, Complex(0, -1), Complex(0, 1), 0).finished(),
      (Matrix2() << 1, 0, 0, -1).finished(),
  };
  if (j < 0 || j > 3) throw std::out_of_range("Pauli index must be 0..3");
  return sigma[j];
}

Matrix kron(const Matrix& a, const Matrix& b) {
  require_square(a, "kron");
  require_square(b, "kron");
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix kron_factors(const std::vector<Matrix2>& factors) {
  if (factors.empty()) throw std::invalid_argument("kron_factors: no factors");
  Matrix m = factors[0];
  for (std::size_t k = 1; k < factors.size(); ++k) m = kron(m, Matrix(factors[k]));
  return m;
}

Matrix embed_single(int n, int qubit, const Matrix2& op) {
  if (qubit < 0 || qubit >= n) throw std::out_of_range("qubit index out of range");
  std::vector<Matrix2> factors(static_cast<std::size_t>(n), Matrix2::Identity());
  factors[static_cast<std::size_t>(qubit)] = op;
  return kron_factors(factors);
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

std::vector<PauliTerm> pauli_coefficients(const Matrix& x, int n) {
  const Index d = dim_for_qubits(n);
  if (x.rows() != d || x.cols() != d) {
    throw std::invalid_argument("pauli_coefficients: matrix is not 2^n x 2^n");
  }
  const std::uint64_t count = std::uint64_t{1} << (2 * n);
  std::vector<PauliTerm> terms;
  terms.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    PauliString p = PauliString::from_index(n, idx);
    const Complex c = p.trace_with(x) / static_cast<double>(d);
    terms.push_back({std::move(p), c});
  }
  return terms;
}

Matrix pauli_reconstruct(const std::vector<PauliTerm>& terms, int n) {
  const Index d = dim_for_qubits(n);
  Matrix out = Matrix::Zero(d, d);
  for (const auto& t : terms) {
    if (t.string.qubits() != n) throw std::invalid_argument("pauli_reconstruct: qubit mismatch");
    out += t.coefficient * t.string.matrix();
  }
  return out;
}

UnitaryOp expm_antihermitian(const TangentDirection& a) {
  // a = -i H with H = i a Hermitian, so exp(a) = V exp(-i Lambda) V^dagger.
  const Matrix h = Complex(0.0, 1.0) * a.matrix();
  const HermitianEigen eig = jacobi_eig(h);
  const Index d = a.dim();
  Vector phases(d);
  for (Index k = 0; k < d; ++k) phases(k) = std::polar(1.0, -eig.values(k));
  return UnitaryOp(trusted, eig.vectors * phases.asDiagonal() * eig.vectors.adjoint());
}

UnitaryOp expm_antihermitian(const Matrix& a) { return expm_antihermitian(TangentDirection(a)); }

HermitianEigen hermitian_eig(const Matrix& h) {
  require_square(h, "hermitian_eig");
  if ((h - h.adjoint()).norm() > kEigInputTol) {
    throw std::invalid_argument("hermitian_eig: matrix is not Hermitian");
  }
  return jacobi_eig(h);
}

DensityMatrix partial_trace(const DensityMatrix& rho, int keep) {
  const int n = rho.qubits();
  if (keep < 0 || keep >= n) throw std::out_of_range("partial_trace: qubit index out of range");
  const Index d = rho.dim();
  const int shift = n - 1 - keep;
  const Index bit = Index{1} << shift;
  Matrix out = Matrix::Zero(2, 2);
  for (Index r = 0; r < d; ++r) {
    if (r & bit) continue;  // enumerate the rest with the kept bit cleared
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        out(a, b) += rho.matrix()(r | (a ? bit : 0), r | (b ? bit : 0));
      }
    }
  }
  return DensityMatrix(trusted, std::move(out));
}

}  // namespace localflow
