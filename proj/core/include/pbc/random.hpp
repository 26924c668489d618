#pragma once

#include <cstdint>
#include <random>

#include "pbc/operator.hpp"

namespace pbc {

using Rng = std::mt19937_64;

// Independent stream for task `stream` under a run seed.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

Vector random_state_vector(Rng& rng, int d);
Matrix random_unitary(Rng& rng, int d);
// Mixed state: partial trace of a random pure state on d x env.
DensityOperator random_density(Rng& rng, int d, int env = 0, Dims dims = {});
DensityOperator random_pure(Rng& rng, int d, Dims dims = {});
// Random PSD matrix with trace `scale`.
HermitianOperator random_psd(Rng& rng, int d, double scale = 1.0);
// Random diagonal density matrix with Dirichlet-like weights.
DensityOperator random_diagonal_density(Rng& rng, int d);
// Stinespring dilation of a Haar isometry with `kraus` outputs.
QuantumChannel random_channel(Rng& rng, int din, int dout, int kraus = 2);

}  // namespace pbc
