#pragma once

#include "mcr/types.hpp"

#include <random>

namespace mcr {

using Rng = std::mt19937_64;

/// Entries with real and imaginary parts uniform in [-1, 1].
Vector random_vector(Rng& rng, int n);
Vector random_real_vector(Rng& rng, int n);
Matrix random_matrix(Rng& rng, int rows, int cols);
/// Haar-ish random unitary via QR of a random complex matrix.
Matrix random_unitary(Rng& rng, int n);

}  // namespace mcr
