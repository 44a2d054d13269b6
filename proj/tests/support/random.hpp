#pragma once

#include "gramentropy/spectra.hpp"

#include <cstdint>
#include <random>

namespace gramentropy::testkit {

using Rng = std::mt19937_64;

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);
Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double lo = 0.0, double hi = 1.0);

/// Haar-ish orthogonal matrix from the QR factorisation of a Gaussian matrix.
Matrix random_orthogonal(Eigen::Index n, Rng& rng);

/// G G^T / tr(G G^T) with G an n x rank Gaussian matrix.
Matrix random_unit_trace_psd(Eigen::Index n, Eigen::Index rank, Rng& rng);

/// Same with elementwise nonnegative G, so every entry is nonnegative.
Matrix random_nonnegative_density(Eigen::Index n, Eigen::Index rank, Rng& rng);

/// Point on the probability simplex.
Vector random_simplex(Eigen::Index n, Rng& rng);

/// U diag(spectrum) U^T with a random orthogonal U.
Matrix with_spectrum(const Vector& spectrum, Rng& rng);

/// (1/n) exp(-|x_i - x_j|^2 / (2 sigma^2)), written out entry by entry.
Matrix direct_gaussian_gram(const Matrix& x, double sigma);

/// Random symmetric direction with zero trace and unit Frobenius norm.
Matrix traceless_direction(Eigen::Index n, Rng& rng);

/// Unit-diagonal PSD matrix with positive entries that is not infinitely
/// divisible: -log A fails the centred negative-definiteness test and some
/// Hadamard power in {0.1, 0.25, 0.5, 0.75} has an eigenvalue below -1e-8.
/// Found by sampling rank-2 Gram matrices of positive vectors.
Matrix find_non_id_witness(std::uint64_t seed);

}  // namespace gramentropy::testkit
