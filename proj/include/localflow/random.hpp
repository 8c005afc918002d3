#pragma once

// Seeded sampling helpers. All randomized behavior in the library draws from
// an explicitly passed Rng so runs are reproducible given a seed.

#include "localflow/tensor.hpp"

#include <random>

namespace localflow {

using Rng = std::mt19937_64;

/// Gaussian amplitudes, normalized (Haar-distributed pure state).
PureState random_pure_state(int n, Rng& rng);
/// Tensor product of n independent random single-qubit states.
PureState random_product_state(int n, Rng& rng);
/// Haar-random element of SU(2).
Matrix2 random_su2(Rng& rng);
std::vector<Matrix2> random_local_factors(int n, Rng& rng);
UnitaryOp random_local_unitary(int n, Rng& rng);
/// Gaussian combination of the local tangent basis scaled to Frobenius norm `norm`.
TangentDirection random_local_tangent(int n, Rng& rng, double norm);

}  // namespace localflow
