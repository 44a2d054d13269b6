#pragma once

#include "gramentropy/spectra.hpp"

namespace gramentropy {

/// Entropy order alpha: alpha > 0 and |alpha - 1| >= 1e-6.
class EntropyOrder {
public:
  explicit EntropyOrder(double alpha);
  [[nodiscard]] double value() const { return alpha_; }

private:
  double alpha_;
};

/// Entropy in bits.
struct EntropyValue {
  double bits = 0.0;
};

/// Smallest eigenvalue accepted by the gradient when alpha < 1.
inline constexpr double kGradientFloor = 1e-12;

/// (1/(1-alpha)) log2 sum_i lambda_i^alpha over clamped eigenvalues. The
/// eigenvalues are not required to sum to one.
double renyi_from_spectrum(const Vector& descending_eigenvalues, EntropyOrder order);

/// Matrix-based Renyi alpha-entropy of a unit-trace PSD matrix.
EntropyValue renyi_entropy(const DensityMatrix& a, EntropyOrder order);

/// Same functional on a PSD matrix with 0 < tr(A) <= 1 (sub-normalised). Only
/// meaningful for continuity studies of S(pA), 0 < p <= 1.
EntropyValue renyi_entropy_subnormalized(const SymmetricMatrix& a, EntropyOrder order);

/// S((A o B) / tr(A o B)).
EntropyValue joint_entropy(const DensityMatrix& a, const DensityMatrix& b, EntropyOrder order);

/// joint_entropy(A, B) - renyi_entropy(B). Requires A_ii = 1/n (tolerance
/// 1e-8) and nonnegative entries in both arguments; the result then lies in
/// [0, S(A)].
EntropyValue conditional_entropy(const DensityMatrix& a, const DensityMatrix& b,
                                 EntropyOrder order);

/// A^{o r} o B^{o (1-r)} for r in [0, 1]; entries must be strictly positive.
SymmetricMatrix hadamard_geometric_average(const SymmetricMatrix& a, const SymmetricMatrix& b,
                                           double r);

/// Gradient of A -> (1/(1-alpha)) log2 tr(A^alpha) with respect to the
/// entries of a PSD matrix A:
///
///   alpha / ((1 - alpha) tr(A^alpha) ln 2) * U Lambda^{alpha-1} U^T
///
/// For alpha > 1 zero eigenvalues contribute zero; for alpha < 1 every
/// eigenvalue must be at least kGradientFloor.
SymmetricMatrix entropy_gradient(const SymmetricMatrix& a, EntropyOrder order);
SymmetricMatrix entropy_gradient(const EigenSystem& es, EntropyOrder order);

/// As entropy_gradient, but U Lambda^{alpha-1} U^T keeps only the m leading
/// eigenpairs. tr(A^alpha) still uses the full spectrum.
SymmetricMatrix entropy_gradient_truncated(const SymmetricMatrix& a, EntropyOrder order,
                                           Eigen::Index m);
SymmetricMatrix entropy_gradient_truncated(const EigenSystem& es, EntropyOrder order,
                                           Eigen::Index m);

/// -log2 tr(K K); agrees with renyi_entropy(K, 2).
EntropyValue second_order_entropy_trace(const DensityMatrix& k);

}  // namespace gramentropy
