#include "localflow/random.hpp"
#include "localflow/schmidt.hpp"
#include "localflow/tensor.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace localflow;
using std::numbers::pi;

namespace {

const Complex I(0.0, 1.0);

Matrix s(int j) { return pauli(j); }

Matrix random_matrix(Index d, Rng& rng) {
  std::normal_distribution<double> g;
  Matrix m(d, d);
  for (Index r = 0; r < d; ++r)
    for (Index c = 0; c < d; ++c) m(r, c) = Complex(g(rng), g(rng));
  return m;
}

Matrix random_hermitian(Index d, Rng& rng) {
  const Matrix m = random_matrix(d, rng);
  return 0.5 * (m + m.adjoint());
}

}  // namespace

TEST(Kron, IdentityOfIdentities) {
  EXPECT_LT((kron(s(0), s(0)) - Matrix::Identity(4, 4)).norm(), 1e-15);
}

TEST(Kron, DiagonalPaulis) {
  Eigen::Vector4cd d(1, 1, -1, -1);
  EXPECT_LT((kron(s(3), s(0)) - Matrix(d.asDiagonal())).norm(), 1e-15);
}

TEST(Kron, SigmaYSigmaYOnUpUp) {
  const Vector out = kron(s(2), s(2)) * PureState::all_up(2).amplitudes();
  Vector expected = Vector::Zero(4);
  expected(3) = -1.0;
  EXPECT_LT((out - expected).norm(), 1e-15);
}

TEST(Kron, DimensionsMultiply) {
  EXPECT_EQ(kron(Matrix::Identity(2, 2), Matrix::Identity(4, 4)).rows(), 8);
}

TEST(PauliCoefficients, BasisElement) {
  const auto terms = pauli_coefficients(kron(s(3), s(0)), 2);
  ASSERT_EQ(terms.size(), 16u);
  for (const auto& t : terms) {
    const double expected = t.string.str() == "ZI" ? 1.0 : 0.0;
    EXPECT_NEAR(std::abs(t.coefficient - expected), 0.0, 1e-15) << t.string.str();
  }
}

TEST(PauliCoefficients, Identity) {
  const auto terms = pauli_coefficients(Matrix::Identity(4, 4), 2);
  for (const auto& t : terms) {
    EXPECT_NEAR(std::abs(t.coefficient - (t.string.str() == "II" ? 1.0 : 0.0)), 0.0, 1e-15);
  }
}

TEST(PauliCoefficients, UpUpProjector) {
  const auto terms = pauli_coefficients(DensityMatrix::pure(PureState::all_up(2)).matrix(), 2);
  for (const auto& t : terms) {
    const std::string n = t.string.str();
    const bool quarter = n == "II" || n == "ZI" || n == "IZ" || n == "ZZ";
    EXPECT_NEAR(std::abs(t.coefficient - (quarter ? 0.25 : 0.0)), 0.0, 1e-15) << n;
  }
}

TEST(PauliCoefficients, DimensionMismatchThrows) {
  EXPECT_THROW(pauli_coefficients(Matrix::Identity(4, 4), 3), std::invalid_argument);
}

TEST(PauliCoefficients, ReconstructionOfRandomMatrices) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix x = random_matrix(4, rng);
    EXPECT_LT((pauli_reconstruct(pauli_coefficients(x, 2), 2) - x).norm(), 1e-12);
  }
}

TEST(PauliString, TraceOrthogonality) {
  for (std::uint64_t a = 0; a < 16; ++a) {
    const Matrix pa = PauliString::from_index(2, a).matrix();
    EXPECT_LT((pa - pa.adjoint()).norm(), 1e-15);
    EXPECT_LT((pa * pa - Matrix::Identity(4, 4)).norm(), 1e-15);
    for (std::uint64_t b = 0; b < 16; ++b) {
      const Complex tr = (pa * PauliString::from_index(2, b).matrix()).trace();
      EXPECT_NEAR(std::abs(tr - (a == b ? 4.0 : 0.0)), 0.0, 1e-14);
    }
  }
}

TEST(PauliString, IndexRoundTripAndTraceWith) {
  Rng rng(3);
  const Matrix x = random_matrix(8, rng);
  for (std::uint64_t idx = 0; idx < 64; ++idx) {
    const PauliString p = PauliString::from_index(3, idx);
    EXPECT_EQ(p.index(), idx);
    EXPECT_NEAR(std::abs(p.trace_with(x) - (x * p.matrix()).trace()), 0.0, 1e-12);
  }
  EXPECT_EQ(PauliString::single(3, 1, 2).str(), "IYI");
}

TEST(Expm, ZeroIsIdentity) {
  EXPECT_LT((expm_antihermitian(TangentDirection::zero(2)).matrix() - Matrix::Identity(4, 4)).norm(),
            1e-15);
}

TEST(Expm, QuarterTurnSigmaX) {
  const UnitaryOp u = expm_antihermitian(TangentDirection(I * (pi / 2.0) * s(1)));
  const Matrix ref = I * s(1);
  EXPECT_LT((u.matrix() - ref).cwiseAbs().maxCoeff(), 1e-15 + std::abs(std::cos(pi / 2.0)));
}

TEST(Expm, SigmaYSigmaYOnUpUp) {
  const UnitaryOp u = expm_antihermitian(TangentDirection(I * (pi / 8.0) * kron(s(2), s(2))));
  const Vector out = u.matrix() * PureState::all_up(2).amplitudes();
  Vector expected = Vector::Zero(4);
  expected(0) = std::cos(pi / 8.0);
  expected(3) = -I * std::sin(pi / 8.0);
  EXPECT_LT((out - expected).norm(), 1e-14);
}

TEST(Expm, MatchesPadeOracleAndIsUnitary) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = I * random_hermitian(8, rng);
    const UnitaryOp u = expm_antihermitian(TangentDirection(a));
    const Matrix ref = a.exp();
    EXPECT_LT((u.matrix() - ref).norm(), 1e-11);
    EXPECT_LT((u.matrix().adjoint() * u.matrix() - Matrix::Identity(8, 8)).norm(), 1e-12);
  }
}

TEST(Expm, RejectsNonAntiHermitian) {
  EXPECT_THROW(expm_antihermitian(Matrix(s(1))), std::invalid_argument);
}

TEST(HermitianEig, Diagonal) {
  Eigen::Vector4cd d(1, 0, 0, 0);
  const auto e = hermitian_eig(Matrix(d.asDiagonal()));
  EXPECT_NEAR(e.values(0), 0.0, 1e-15);
  EXPECT_NEAR(e.values(2), 0.0, 1e-15);
  EXPECT_NEAR(e.values(3), 1.0, 1e-15);
}

TEST(HermitianEig, SigmaX) {
  const auto e = hermitian_eig(s(1));
  EXPECT_NEAR(e.values(0), -1.0, 1e-14);
  EXPECT_NEAR(e.values(1), 1.0, 1e-14);
}

TEST(HermitianEig, SchmidtProjector) {
  const auto e = hermitian_eig(schmidt_state_2q(pi / 4.0).matrix());
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(e.values(k), 0.0, 1e-13);
  EXPECT_NEAR(e.values(3), 1.0, 1e-13);
  const Complex overlap = e.vectors.col(3).dot(schmidt_vector_2q(pi / 4.0).amplitudes());
  EXPECT_NEAR(std::abs(overlap), 1.0, 1e-12);
}

TEST(HermitianEig, MatchesEigenSolverOnRandomInputs) {
  Rng rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const Index d = trial % 2 ? 16 : 8;
    const Matrix h = random_hermitian(d, rng);
    const auto e = hermitian_eig(h);
    Eigen::SelfAdjointEigenSolver<Matrix> ref(h);
    EXPECT_LT((e.values - ref.eigenvalues()).cwiseAbs().maxCoeff(), 1e-11);
    EXPECT_LT((h * e.vectors - e.vectors * e.values.asDiagonal()).norm(), 1e-10);
    EXPECT_LT((e.vectors.adjoint() * e.vectors - Matrix::Identity(d, d)).norm(), 1e-12);
  }
}

TEST(HermitianEig, DegenerateClusterStaysOrthonormal) {
  Rng rng(2);
  const UnitaryOp v = random_local_unitary(3, rng);
  Eigen::VectorXcd d(8);
  d << 1, 1, 1, 2, 2, 3, 3, 3;
  const Matrix h = v.matrix() * d.asDiagonal() * v.matrix().adjoint();
  const auto e = hermitian_eig(h);
  EXPECT_LT((e.vectors.adjoint() * e.vectors - Matrix::Identity(8, 8)).norm(), 1e-12);
  EXPECT_LT((h * e.vectors - e.vectors * e.values.asDiagonal()).norm(), 1e-10);
}

TEST(HermitianEig, RejectsNonHermitian) {
  Matrix m = s(1);
  m(0, 1) = 2.0;
  EXPECT_THROW(hermitian_eig(m), std::invalid_argument);
}

TEST(PartialTrace, ProductUpUp) {
  const auto r = partial_trace(DensityMatrix::pure(PureState::all_up(2)), 1);
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  EXPECT_LT((r.matrix() - expected).norm(), 1e-15);
}

TEST(PartialTrace, BellReductionIsMixed) {
  for (int k = 0; k < 2; ++k) {
    EXPECT_LT((partial_trace(schmidt_state_2q(pi / 2.0), k).matrix() - 0.5 * Matrix::Identity(2, 2)).norm(),
              1e-15);
  }
}

TEST(PartialTrace, SchmidtFamilyDiagonal) {
  for (double theta : {0.3, 1.1, 2.4}) {
    const Matrix r = partial_trace(schmidt_state_2q(theta), 0).matrix();
    EXPECT_NEAR(r(0, 0).real(), std::pow(std::cos(theta / 2), 2), 1e-14);
    EXPECT_NEAR(r(1, 1).real(), std::pow(std::sin(theta / 2), 2), 1e-14);
    EXPECT_NEAR(std::abs(r(0, 1)), 0.0, 1e-15);
    const double purity = std::pow(std::cos(theta / 2), 4) + std::pow(std::sin(theta / 2), 4);
    EXPECT_NEAR((r * r).trace().real(), purity, 1e-12);
  }
}

TEST(PartialTrace, ProductStatesArePure) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = DensityMatrix::pure(random_product_state(3, rng));
    for (int k = 0; k < 3; ++k) {
      const Matrix r = partial_trace(rho, k).matrix();
      EXPECT_NEAR((r * r).trace().real(), 1.0, 1e-12);
    }
  }
}

TEST(PartialTrace, IndexOutOfRange) {
  EXPECT_THROW(partial_trace(DensityMatrix::pure(PureState::all_up(2)), 2), std::out_of_range);
}

TEST(Types, ValidationRejectsBadInputs) {
  EXPECT_THROW(PureState(Vector::Ones(4)), std::invalid_argument);
  EXPECT_THROW(PureState(Vector::Ones(3) / std::sqrt(3.0)), std::invalid_argument);
  EXPECT_THROW(DensityMatrix(Matrix::Identity(4, 4)), std::invalid_argument);
  EXPECT_THROW(UnitaryOp(Matrix(2.0 * Matrix::Identity(2, 2))), std::invalid_argument);
  EXPECT_THROW(TangentDirection(Matrix(s(1))), std::invalid_argument);
}

TEST(Types, BasisConvention) {
  // qubit 0 is the most significant bit, |up> is bit 0
  const Vector v = kron(Matrix(s(1)), Matrix::Identity(2, 2)) * PureState::all_up(2).amplitudes();
  EXPECT_NEAR(std::abs(v(2)), 1.0, 1e-15);
  EXPECT_NEAR(DensityMatrix::pure(PureState::basis(2, 3)).purity(), 1.0, 1e-15);
}
