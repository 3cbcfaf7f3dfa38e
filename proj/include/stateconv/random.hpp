#pragma once

// Seeded random instances shared by tests, the property suite and the CLI.

#include "stateconv/matrix_core.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace stateconv {

using Rng = std::mt19937_64;

/// Deterministic generator for (seed, stream...) via std::seed_seq.
Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream = {});

double uniform(Rng& rng, double lo, double hi);
int uniform_int(Rng& rng, int lo, int hi);  // inclusive

CMatrix random_real(Rng& rng, Eigen::Index rows, Eigen::Index cols);
CMatrix random_complex(Rng& rng, Eigen::Index rows, Eigen::Index cols);
CMatrix random_hermitian(Rng& rng, Eigen::Index n);
CVector random_unit(Rng& rng, Eigen::Index dim);
CMatrix random_unitary(Rng& rng, Eigen::Index n);
/// Orthogonal projector onto a random subspace of the given rank.
CMatrix random_projector(Rng& rng, Eigen::Index n, Eigen::Index rank);
/// 0/1 matrix with each entry set with probability p.
CMatrix random_mask(Rng& rng, Eigen::Index rows, Eigen::Index cols, double p);

}  // namespace stateconv
