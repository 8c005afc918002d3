#include "localflow/random.hpp"

#include "localflow/landscape.hpp"

namespace localflow {

PureState random_pure_state(int n, Rng& rng) {
  std::normal_distribution<double> g;
  const Index d = dim_for_qubits(n);
  Vector v(d);
  for (Index i = 0; i < d; ++i) v(i) = Complex(g(rng), g(rng));
  return PureState::normalized(std::move(v));
}

PureState random_product_state(int n, Rng& rng) {
  std::normal_distribution<double> g;
  Vector v = Vector::Ones(1);
  for (int k = 0; k < n; ++k) {
    Vector q(2);
    q << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
    q.normalize();
    Vector next(v.size() * 2);
    for (Index i = 0; i < v.size(); ++i) {
      next(2 * i) = v(i) * q(0);
      next(2 * i + 1) = v(i) * q(1);
    }
    v = std::move(next);
  }
  return PureState::normalized(std::move(v));
}

Matrix2 random_su2(Rng& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector4d x;
  for (int i = 0; i < 4; ++i) x(i) = g(rng);
  x.normalize();
  const Complex alpha(x(0), x(1));
  const Complex beta(x(2), x(3));
  Matrix2 u;
  u << alpha, -std::conj(beta), beta, std::conj(alpha);
  return u;
}

std::vector<Matrix2> random_local_factors(int n, Rng& rng) {
  std::vector<Matrix2> f;
  f.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) f.push_back(random_su2(rng));
  return f;
}

UnitaryOp random_local_unitary(int n, Rng& rng) {
  return UnitaryOp(trusted, kron_factors(random_local_factors(n, rng)));
}

TangentDirection random_local_tangent(int n, Rng& rng, double norm) {
  std::normal_distribution<double> g;
  const auto basis = local_tangent_basis(n);
  Matrix m = Matrix::Zero(basis.front().dim(), basis.front().dim());
  for (const auto& b : basis) m += g(rng) * b.matrix();
  const double nrm = m.norm();
  if (nrm > 0.0) m *= norm / nrm;
  return TangentDirection(trusted, std::move(m));
}

}  // namespace localflow
