#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <utility>

namespace gramentropy {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense real symmetric matrix. Construction checks that every entry is finite
/// and that |a_ij - a_ji| <= 1e-12 * max(1, max|a|); the stored matrix is the
/// exact symmetrisation (A + A^T) / 2.
class SymmetricMatrix {
public:
  explicit SymmetricMatrix(Matrix entries);

  static SymmetricMatrix identity(Eigen::Index n);
  static SymmetricMatrix constant(Eigen::Index n, double value);
  static SymmetricMatrix diagonal(const Vector& diag);

  [[nodiscard]] Eigen::Index size() const { return entries_.rows(); }
  [[nodiscard]] const Matrix& matrix() const { return entries_; }
  [[nodiscard]] double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }
  [[nodiscard]] double trace() const { return entries_.trace(); }
  [[nodiscard]] double max_abs() const;

private:
  Matrix entries_;
};

/// Eigenvalues sorted in non-increasing order; column k of `vectors` belongs to
/// `values[k]`.
struct EigenSystem {
  Vector values;
  Matrix vectors;

  [[nodiscard]] Eigen::Index size() const { return values.size(); }
  [[nodiscard]] Matrix reconstruct() const;
};

/// Symmetric eigendecomposition. Deterministic for a given input.
EigenSystem eig_sym(const SymmetricMatrix& a);
/// Eigenvalues only, non-increasing.
Vector eigvals_sym(const SymmetricMatrix& a);

/// Tolerance below which negative eigenvalues are treated as roundoff:
/// 1e-10 * max(1, lambda_max).
double clamp_tolerance(const Vector& descending_eigenvalues);

/// Clamps eigenvalues in (-clamp_tol, 0) to zero; throws NotPsdError if any
/// eigenvalue lies below -clamp_tol.
Vector clamp_spectrum(const Vector& descending_eigenvalues);

/// U diag(f(lambda)) U^T for a scalar function f applied to each eigenvalue.
template <typename F>
SymmetricMatrix apply_spectral(const EigenSystem& es, F&& f) {
  Vector mapped = es.values.unaryExpr(std::forward<F>(f));
  return SymmetricMatrix(es.vectors * mapped.asDiagonal() * es.vectors.transpose());
}


/// Unit-trace positive semidefinite matrix (|tr - 1| <= 1e-10 and
/// lambda_min >= -1e-10). Keeps the eigendecomposition computed during
/// validation so spectral functionals do not decompose twice.
class DensityMatrix {
public:
  explicit DensityMatrix(SymmetricMatrix base);
  explicit DensityMatrix(Matrix entries) : DensityMatrix(SymmetricMatrix(std::move(entries))) {}

  /// (1/n) I
  static DensityMatrix maximally_mixed(Eigen::Index n);

  [[nodiscard]] Eigen::Index size() const { return base_.size(); }
  [[nodiscard]] const SymmetricMatrix& symmetric() const { return base_; }
  [[nodiscard]] const Matrix& matrix() const { return base_.matrix(); }
  [[nodiscard]] double operator()(Eigen::Index i, Eigen::Index j) const { return base_(i, j); }
  [[nodiscard]] const EigenSystem& eigen() const { return eigen_; }

private:
  SymmetricMatrix base_;
  EigenSystem eigen_;
};

/// A^r for PSD A and r > 0; negative roundoff eigenvalues are clamped to zero
/// and 0^r = 0.
SymmetricMatrix matrix_power(const SymmetricMatrix& a, double r);

SymmetricMatrix hadamard(const SymmetricMatrix& a, const SymmetricMatrix& b);

/// Elementwise power a_ij^r. Every entry must be strictly positive.
SymmetricMatrix hadamard_power(const SymmetricMatrix& a, double r);

SymmetricMatrix kron(const SymmetricMatrix& a, const SymmetricMatrix& b);

/// True iff q majorizes p: the sorted partial sums of q dominate those of p
/// (tolerance 1e-10 per partial sum). Requires equal lengths and
/// |sum(p) - sum(q)| <= 1e-8.
bool majorizes(const Vector& q, const Vector& p);

/// True iff lambda_min >= -tol * max(1, lambda_max).
bool psd_check(const SymmetricMatrix& a, double tol);

/// I - (1/n) 11^T.
Matrix centering_matrix(Eigen::Index n);

/// Largest eigenvalue of J B J, J the centering matrix. Non-positive iff B is
/// (conditionally) negative definite on the subspace sum(alpha) = 0.
double centered_max_eigenvalue(const SymmetricMatrix& b);

/// True iff every eigenvalue of J B J is <= tol.
bool centered_negdef_check(const SymmetricMatrix& b, double tol);

}  // namespace gramentropy
