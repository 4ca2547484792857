#pragma once

#include <cstdint>
#include <random>

#include "nlg/algebra.hpp"

namespace nlg {

using Rng = std::mt19937_64;

Matrix random_gaussian(Index rows, Index cols, Rng& rng);
Matrix haar_unitary(Index d, Rng& rng);
// Hermitian with unit tau-norm.
Matrix random_hermitian(Index d, Rng& rng);
// exp(i h) for Hermitian h.
Matrix exp_i_hermitian(const Matrix& h, double t);

// Projective measurement with ranks as equal as possible, randomly rotated.
Measurement random_projective(Index d, std::size_t outcomes, Rng& rng);
Measurement random_povm(Index d, std::size_t outcomes, Rng& rng);
// Arbitrary operators, no constraint.
Measurement random_operator_set(Index d, std::size_t outcomes, Rng& rng);

std::vector<std::string> index_labels(std::size_t n);

}  // namespace nlg
