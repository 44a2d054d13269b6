#pragma once

#include "gramentropy/spectra.hpp"

#include <optional>
#include <string>

namespace gramentropy {

/// Gaussian kernel bandwidth.
class KernelConfig {
public:
  explicit KernelConfig(double sigma);
  [[nodiscard]] double sigma() const { return sigma_; }

private:
  double sigma_;
};

/// Squared distances: symmetric, nonnegative, zero diagonal. Roundoff
/// negatives above -1e-12 * max(1, max|D|) are clamped to zero.
class DistanceMatrix {
public:
  explicit DistanceMatrix(Matrix entries);
  [[nodiscard]] Eigen::Index size() const { return entries_.rows(); }
  [[nodiscard]] const Matrix& matrix() const { return entries_; }
  [[nodiscard]] double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

private:
  Matrix entries_;
};

/// Pairwise squared Euclidean distances between the rows of X.
Matrix pairwise_sq_distances(const Matrix& x);

/// (1/n) exp(-||x_i - x_j||^2 / (2 sigma^2)) without validation. Rows of X are
/// samples.
Matrix gaussian_kernel_matrix(const Matrix& x, double sigma);

/// Unit-trace Gaussian Gram matrix of the rows of X.
DensityMatrix gaussian_gram(const Matrix& x, const KernelConfig& config);

/// A_ij / sqrt(A_ii A_jj). Requires a strictly positive diagonal.
SymmetricMatrix normalize_id(const SymmetricMatrix& a);

/// Elementwise -log(A_ij). Requires strictly positive entries.
SymmetricMatrix negative_log(const SymmetricMatrix& a);

/// Elementwise exp(-B_ij).
SymmetricMatrix exp_negative(const SymmetricMatrix& b);

/// Diagnostic record of an infinite-divisibility test.
struct DivisibilityReport {
  bool infinitely_divisible = false;
  /// Largest eigenvalue of J(-log A)J; <= tol iff divisible.
  double log_route_max_eigenvalue = 0.0;
  /// Smallest eigenvalue over the sampled fractional Hadamard powers.
  double power_route_min_eigenvalue = 0.0;
  /// Exponent achieving power_route_min_eigenvalue.
  double power_route_worst_exponent = 0.0;
  /// True iff every sampled Hadamard power passed psd_check.
  bool power_route_passed = false;
};

/// Exponents probed by the Hadamard-power route.
inline constexpr double kSampledHadamardExponents[] = {0.1, 0.25, 0.5, 0.75};

/// Runs both infinite-divisibility routes. The decision is taken from the log
/// route; the power route can only falsify. Entries must be strictly
/// positive (DomainError otherwise) and A must be PSD (NotPsdError).
DivisibilityReport check_infinite_divisibility(const SymmetricMatrix& a, double tol);

bool is_infinitely_divisible(const SymmetricMatrix& a, double tol);

/// D_ij = B_ij - (B_ii + B_jj) / 2 for conditionally negative definite B.
/// `tol` bounds the largest eigenvalue of JBJ (relative to max(1, max|B|)).
DistanceMatrix negdef_to_distances(const SymmetricMatrix& b, double tol = 1e-8);

/// D_ij = -A_ij + (A_ii + A_jj) / 2 for PSD A.
DistanceMatrix posdef_to_distances(const SymmetricMatrix& a);

/// Double-centred Gram matrix -1/2 J D J.
SymmetricMatrix centered_gram(const DistanceMatrix& d);

/// Numerical rank of the centred Gram matrix at threshold 1e-9 * lambda_max.
Eigen::Index embedding_rank(const DistanceMatrix& d);

/// Classical multidimensional scaling: n x k coordinates whose squared
/// pairwise distances reproduce D (exactly when k >= rank). k defaults to
/// embedding_rank(D). Throws NotHilbertianError when -1/2 JDJ is not PSD.
Matrix embed_from_distances(const DistanceMatrix& d, std::optional<Eigen::Index> k = std::nullopt);

}  // namespace gramentropy
