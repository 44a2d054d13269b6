#include "gramentropy/entropy.hpp"

#include "gramentropy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace gramentropy {

namespace {

constexpr double kDegenerateTrace = 1e-14;
constexpr double kDiagonalTol = 1e-8;
// Eigenvalues this small (relative to max(1, lambda_max)) are roundoff of a
// zero eigenvalue; for alpha < 1 they would otherwise dominate lambda^alpha.
constexpr double kRoundoffBand = 1e-13;

Vector entropy_spectrum(const Vector& values) {
  Vector v = clamp_spectrum(values);
  if (v.size() == 0) return v;
  const double band = kRoundoffBand * std::max(1.0, v(0));
  for (double& x : v) {
    if (x <= band) x = 0.0;
  }
  return v;
}

double power_sum(const Vector& clamped, double alpha) {
  double s = 0.0;
  for (double x : clamped) {
    if (x > 0.0) s += std::pow(x, alpha);
  }
  return s;
}

void require_nonnegative(const DensityMatrix& m, const char* where) {
  if (m.size() > 0 && m.matrix().minCoeff() < 0.0) {
    std::ostringstream os;
    os << where << ": entries must be nonnegative";
    throw PreconditionError(os.str());
  }
}

}  // namespace

EntropyOrder::EntropyOrder(double alpha) : alpha_(alpha) {
  if (!std::isfinite(alpha) || alpha <= 0.0 || std::abs(alpha - 1.0) < 1e-6) {
    std::ostringstream os;
    os << "entropy order must satisfy alpha > 0 and alpha != 1 (got " << alpha << ")";
    throw InputError(os.str());
  }
}

double renyi_from_spectrum(const Vector& values, EntropyOrder order) {
  const double alpha = order.value();
  const double s = power_sum(entropy_spectrum(values), alpha);
  if (!(s > 0.0)) {
    throw DegenerateError("renyi entropy: tr(A^alpha) vanishes");
  }
  return std::log2(s) / (1.0 - alpha);
}

EntropyValue renyi_entropy(const DensityMatrix& a, EntropyOrder order) {
  return {renyi_from_spectrum(a.eigen().values, order)};
}

EntropyValue renyi_entropy_subnormalized(const SymmetricMatrix& a, EntropyOrder order) {
  const double tr = a.trace();
  if (!(tr > 0.0) || tr > 1.0 + 1e-10) {
    throw InputError("renyi_entropy_subnormalized: trace must lie in (0, 1]");
  }
  return {renyi_from_spectrum(eigvals_sym(a), order)};
}

EntropyValue joint_entropy(const DensityMatrix& a, const DensityMatrix& b, EntropyOrder order) {
  const SymmetricMatrix product = hadamard(a.symmetric(), b.symmetric());
  const double tr = product.trace();
  if (tr <= kDegenerateTrace) {
    throw DegenerateError("joint_entropy: tr(A o B) vanishes");
  }
  return renyi_entropy(DensityMatrix(Matrix(product.matrix() / tr)), order);
}

EntropyValue conditional_entropy(const DensityMatrix& a, const DensityMatrix& b,
                                 EntropyOrder order) {
  const double target = 1.0 / static_cast<double>(a.size());
  if ((a.matrix().diagonal().array() - target).abs().maxCoeff() > kDiagonalTol) {
    throw PreconditionError("conditional_entropy: first argument must have diagonal 1/n");
  }
  require_nonnegative(a, "conditional_entropy");
  require_nonnegative(b, "conditional_entropy");
  return {joint_entropy(a, b, order).bits - renyi_entropy(b, order).bits};
}

SymmetricMatrix hadamard_geometric_average(const SymmetricMatrix& a, const SymmetricMatrix& b,
                                           double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw InputError("hadamard_geometric_average: weight must lie in [0, 1]");
  }
  if (a.size() != b.size()) {
    detail::throw_dimension_mismatch("hadamard_geometric_average", a.size(), a.size(), b.size(),
                                     b.size());
  }
  return hadamard(hadamard_power(a, r), hadamard_power(b, 1.0 - r));
}

SymmetricMatrix entropy_gradient(const SymmetricMatrix& a, EntropyOrder order) {
  return entropy_gradient(eig_sym(a), order);
}

SymmetricMatrix entropy_gradient(const EigenSystem& es, EntropyOrder order) {
  return entropy_gradient_truncated(es, order, es.size());
}

SymmetricMatrix entropy_gradient_truncated(const SymmetricMatrix& a, EntropyOrder order,
                                           Eigen::Index m) {
  return entropy_gradient_truncated(eig_sym(a), order, m);
}

SymmetricMatrix entropy_gradient_truncated(const EigenSystem& es, EntropyOrder order,
                                           Eigen::Index m) {
  const Eigen::Index n = es.size();
  if (m < 1 || m > n) {
    throw InputError("entropy_gradient_truncated: m must lie in [1, n]");
  }
  const double alpha = order.value();
  const Vector clamped = clamp_spectrum(es.values);
  if (alpha < 1.0 && clamped(n - 1) < kGradientFloor) {
    std::ostringstream os;
    os << "entropy_gradient: eigenvalue " << clamped(n - 1)
       << " below gradient floor for alpha < 1";
    throw DegenerateError(os.str());
  }
  const Vector values = entropy_spectrum(es.values);
  const double tr = power_sum(values, alpha);
  if (tr <= kDegenerateTrace) {
    throw DegenerateError("entropy_gradient: tr(A^alpha) vanishes");
  }
  const double scale = alpha / ((1.0 - alpha) * tr * std::numbers::ln2);
  Vector weights(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    weights(k) = values(k) > 0.0 ? scale * std::pow(values(k), alpha - 1.0) : 0.0;
  }
  const auto u = es.vectors.leftCols(m);
  Matrix g = u * weights.asDiagonal() * u.transpose();
  return SymmetricMatrix(0.5 * (g + g.transpose()));
}

EntropyValue second_order_entropy_trace(const DensityMatrix& k) {
  // tr(K K) = sum_ij K_ij^2 for symmetric K.
  const double tr = k.matrix().squaredNorm();
  if (!(tr > 0.0)) {
    throw DegenerateError("second_order_entropy_trace: tr(KK) vanishes");
  }
  return {-std::log2(tr)};
}

}  // namespace gramentropy
