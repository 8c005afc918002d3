#include "localflow/landscape.hpp"

#include "localflow/schmidt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace localflow {

namespace {

void require_same_dim(const DensityMatrix& rho0, const UnitaryOp& u, const DensityMatrix& rhoT) {
  if (rho0.dim() != u.dim() || rhoT.dim() != u.dim()) {
    throw std::invalid_argument("landscape: dimension mismatch between states and unitary");
  }
}

Matrix moved_state(const DensityMatrix& rho0, const UnitaryOp& u) {
  return u.matrix().adjoint() * rho0.matrix() * u.matrix();
}

double quadratic_form(const Matrix& r, const Matrix& rhoT, const Matrix& a) {
  const Matrix a2 = a * a;
  return bracket0((rhoT * r + r * rhoT) * a2) - 2.0 * bracket0(r * a * rhoT * a);
}

}  // namespace

std::string_view to_string(Signature s) {
  switch (s) {
    case Signature::maximum: return "maximum";
    case Signature::minimum: return "minimum";
    case Signature::saddle: return "saddle";
    case Signature::degenerate: return "degenerate";
  }
  return "degenerate";
}

Signature classify_signature(const Eigen::VectorXd& eigenvalues, double tol) {
  bool any_neg = false;
  bool any_pos = false;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    if (eigenvalues(i) < -tol) any_neg = true;
    if (eigenvalues(i) > tol) any_pos = true;
  }
  if (any_neg && any_pos) return Signature::saddle;
  if (any_neg) return Signature::maximum;
  if (any_pos) return Signature::minimum;
  return Signature::degenerate;
}

HessianSpectrum spectrum_from_values(std::vector<double> values, double tol) {
  std::sort(values.begin(), values.end());
  HessianSpectrum s;
  s.eigenvalues = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Index>(values.size()));
  s.signature = classify_signature(s.eigenvalues, tol);
  return s;
}

std::vector<TangentDirection> local_tangent_basis(int n) {
  std::vector<TangentDirection> basis;
  basis.reserve(static_cast<std::size_t>(3 * n));
  for (int k = 0; k < n; ++k) {
    for (int j = 1; j <= 3; ++j) {
      basis.emplace_back(trusted, Complex(0.0, 1.0) * embed_single(n, k, pauli(j)));
    }
  }
  return basis;
}

double bracket0(const Matrix& x) {
  if (x.rows() != x.cols()) throw std::invalid_argument("bracket0: matrix must be square");
  return x.trace().real();
}

double tangent_pairing(const TangentDirection& a, const TangentDirection& b) {
  return (a.matrix().adjoint() * b.matrix()).trace().real();
}

double fidelity(const DensityMatrix& rho0, const UnitaryOp& u, const DensityMatrix& rhoT) {
  require_same_dim(rho0, u, rhoT);
  return bracket0(moved_state(rho0, u) * rhoT.matrix());
}

TangentDirection gradient_full(const DensityMatrix& rho0, const UnitaryOp& u,
                               const DensityMatrix& rhoT) {
  require_same_dim(rho0, u, rhoT);
  return TangentDirection(trusted, commutator(moved_state(rho0, u), rhoT.matrix()));
}

TangentDirection project_local(const TangentDirection& a) {
  const int n = a.qubits();
  const Index d = a.dim();
  Matrix out = Matrix::Zero(d, d);
  for (int k = 0; k < n; ++k) {
    for (int j = 1; j <= 3; ++j) {
      const PauliString s = PauliString::single(n, k, j);
      const Complex c = s.trace_with(a.matrix()) / static_cast<double>(d);
      // anti-Hermitian input gives purely imaginary c; drop roundoff in Re c.
      out += Complex(0.0, c.imag()) * embed_single(n, k, pauli(j));
    }
  }
  return TangentDirection(trusted, std::move(out));
}

TangentDirection gradient_local(const DensityMatrix& rho0, const UnitaryOp& u,
                                const DensityMatrix& rhoT) {
  return project_local(gradient_full(rho0, u, rhoT));
}

double hessian_quadratic(const DensityMatrix& rho0, const UnitaryOp& u, const DensityMatrix& rhoT,
                         const TangentDirection& a) {
  require_same_dim(rho0, u, rhoT);
  return quadratic_form(moved_state(rho0, u), rhoT.matrix(), a.matrix());
}

double hessian_quadratic_critical(const DensityMatrix& rho0, const UnitaryOp& u,
                                  const DensityMatrix& rhoT, const TangentDirection& a) {
  require_same_dim(rho0, u, rhoT);
  const Matrix r = moved_state(rho0, u);
  const Matrix& t = rhoT.matrix();
  const Matrix& am = a.matrix();
  return 2.0 * (bracket0(t * r * am * am) - bracket0(r * am * t * am));
}

Eigen::MatrixXd local_hessian(const DensityMatrix& rho0, const UnitaryOp& u,
                              const DensityMatrix& rhoT) {
  require_same_dim(rho0, u, rhoT);
  const Matrix r = moved_state(rho0, u);
  const Matrix& t = rhoT.matrix();
  const auto basis = local_tangent_basis(u.qubits());
  const Index m = static_cast<Index>(basis.size());
  Eigen::MatrixXd h(m, m);
  for (Index a = 0; a < m; ++a) {
    const Matrix& ba = basis[static_cast<std::size_t>(a)].matrix();
    h(a, a) = quadratic_form(r, t, ba);
    for (Index b = a + 1; b < m; ++b) {
      const Matrix& bb = basis[static_cast<std::size_t>(b)].matrix();
      const double v = 0.25 * (quadratic_form(r, t, ba + bb) - quadratic_form(r, t, ba - bb));
      h(a, b) = v;
      h(b, a) = v;
    }
  }
  return h;
}

HessianSpectrum hessian_matrix_local(const DensityMatrix& rho0, const UnitaryOp& u,
                                     const DensityMatrix& rhoT) {
  const Eigen::MatrixXd h = local_hessian(rho0, u, rhoT);
  const HermitianEigen eig = hermitian_eig(h.cast<Complex>());
  HessianSpectrum s;
  s.eigenvalues = eig.values;
  s.signature = classify_signature(s.eigenvalues);
  s.gradient_norm = gradient_local(rho0, u, rhoT).norm();
  s.reliable = s.gradient_norm <= kCriticalGradTol;
  return s;
}

int local_stabilizer_dimension(const DensityMatrix& rho, double tol) {
  const auto basis = local_tangent_basis(rho.qubits());
  std::vector<Matrix> images;
  images.reserve(basis.size());
  for (const auto& b : basis) images.push_back(commutator(b.matrix(), rho.matrix()));
  const Index m = static_cast<Index>(images.size());
  Matrix gram(m, m);
  for (Index a = 0; a < m; ++a) {
    for (Index b = 0; b < m; ++b) {
      gram(a, b) = (images[static_cast<std::size_t>(a)].adjoint() * images[static_cast<std::size_t>(b)])
                       .trace()
                       .real();
    }
  }
  const HermitianEigen eig = hermitian_eig(gram);
  int count = 0;
  for (Index i = 0; i < m; ++i) {
    if (eig.values(i) < tol) ++count;
  }
  return count;
}

std::array<double, 6> hessian_spectrum_schmidt_pair(double theta, double phi) {
  const double base = -1.0 - std::cos(theta - phi);
  const double sines = std::sin(theta) + std::sin(phi);
  const double a = base - sines;
  const double b = -4.0 * std::sin(theta) * std::sin(phi);
  const double c = base + sines;
  return {0.0, a, a, b, c, c};
}

std::array<double, 6> hessian_spectrum_submanifold(double theta, double x) {
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  const double r = std::sqrt((1.0 - 2.0 * x) * (1.0 - 2.0 * x) * ct * ct + st * st);
  return {1.0 - r, 1.0 - r, 0.0, 1.0 + r, 1.0 + r, 0.0};
}

DensityMatrix submanifold_state(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("submanifold_state: x must be in [0, 1]");
  Matrix m = Matrix::Zero(4, 4);
  m(2, 2) = x;        // |down up>
  m(1, 1) = 1.0 - x;  // |up down>
  return DensityMatrix(trusted, std::move(m));
}

double critical_residual(const DensityMatrix& rhoC, double theta) {
  if (rhoC.qubits() != 2) throw std::invalid_argument("critical_residual: two-qubit state required");
  const DensityMatrix target = schmidt_state_2q(theta);
  const TangentDirection c(trusted, commutator(rhoC.matrix(), target.matrix()));
  return project_local(c).norm();
}

}  // namespace localflow
