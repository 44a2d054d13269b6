#include "gramentropy/idkernels.hpp"

#include "gramentropy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gramentropy {

KernelConfig::KernelConfig(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InputError("kernel bandwidth sigma must be positive and finite");
  }
}

DistanceMatrix::DistanceMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    detail::throw_dimension_mismatch("DistanceMatrix", entries_.rows(), entries_.cols(),
                                     entries_.cols(), entries_.rows());
  }
  if (!entries_.allFinite()) throw InputError("DistanceMatrix: non-finite entry");
  if (entries_.size() == 0) return;
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  const double tol = 1e-12 * scale;
  if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > tol) {
    throw InputError("DistanceMatrix: not symmetric");
  }
  if (entries_.diagonal().cwiseAbs().maxCoeff() > tol) {
    throw InputError("DistanceMatrix: diagonal must be zero");
  }
  if (entries_.minCoeff() < -tol) {
    throw InputError("DistanceMatrix: negative squared distance");
  }
  entries_ = (0.5 * (entries_ + entries_.transpose())).cwiseMax(0.0).eval();
  entries_.diagonal().setZero();
}

Matrix pairwise_sq_distances(const Matrix& x) {
  const Eigen::Index n = x.rows();
  Matrix d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = (x.row(i) - x.row(j)).squaredNorm();
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

Matrix gaussian_kernel_matrix(const Matrix& x, double sigma) {
  const double n = static_cast<double>(x.rows());
  const double inv = -1.0 / (2.0 * sigma * sigma);
  return (pairwise_sq_distances(x).array() * inv).exp().matrix() / n;
}

DensityMatrix gaussian_gram(const Matrix& x, const KernelConfig& config) {
  if (x.rows() < 1) throw InputError("gaussian_gram: need at least one sample");
  if (!x.allFinite()) throw InputError("gaussian_gram: non-finite feature");
  return DensityMatrix(gaussian_kernel_matrix(x, config.sigma()));
}

SymmetricMatrix normalize_id(const SymmetricMatrix& a) {
  const Vector diag = a.matrix().diagonal();
  if (a.size() > 0 && diag.minCoeff() <= 0.0) {
    throw DomainError("normalize_id: diagonal must be strictly positive");
  }
  const Vector inv_sqrt = diag.cwiseSqrt().cwiseInverse();
  Matrix out = inv_sqrt.asDiagonal() * a.matrix() * inv_sqrt.asDiagonal();
  out.diagonal().setOnes();
  return SymmetricMatrix(std::move(out));
}

SymmetricMatrix negative_log(const SymmetricMatrix& a) {
  if (a.size() > 0 && a.matrix().minCoeff() <= 0.0) {
    throw DomainError("negative_log: entries must be strictly positive");
  }
  return SymmetricMatrix(-a.matrix().array().log().matrix());
}

SymmetricMatrix exp_negative(const SymmetricMatrix& b) {
  return SymmetricMatrix((-b.matrix().array()).exp().matrix());
}

DivisibilityReport check_infinite_divisibility(const SymmetricMatrix& a, double tol) {
  const SymmetricMatrix b = negative_log(a);  // DomainError on nonpositive entries
  if (!psd_check(a, tol)) {
    throw NotPsdError("check_infinite_divisibility: matrix is not positive semidefinite");
  }
  DivisibilityReport report;
  report.log_route_max_eigenvalue = centered_max_eigenvalue(b);
  report.infinitely_divisible = report.log_route_max_eigenvalue <= tol;

  report.power_route_min_eigenvalue = std::numeric_limits<double>::infinity();
  report.power_route_passed = true;
  for (double r : kSampledHadamardExponents) {
    const SymmetricMatrix powered = hadamard_power(a, r);
    const Vector values = eigvals_sym(powered);
    const double lmin = values(values.size() - 1);
    if (lmin < report.power_route_min_eigenvalue) {
      report.power_route_min_eigenvalue = lmin;
      report.power_route_worst_exponent = r;
    }
    if (lmin < -tol * std::max(1.0, values(0))) report.power_route_passed = false;
  }
  return report;
}

bool is_infinitely_divisible(const SymmetricMatrix& a, double tol) {
  return check_infinite_divisibility(a, tol).infinitely_divisible;
}

DistanceMatrix negdef_to_distances(const SymmetricMatrix& b, double tol) {
  const double scale = std::max(1.0, b.max_abs());
  const double worst = centered_max_eigenvalue(b);
  if (worst > tol * scale) {
    std::ostringstream os;
    os << "negdef_to_distances: matrix is not negative definite on the centred subspace "
          "(largest eigenvalue "
       << worst << ")";
    throw InputError(os.str());
  }
  const Vector diag = b.matrix().diagonal();
  const Eigen::Index n = b.size();
  Matrix d = b.matrix() - 0.5 * (diag.replicate(1, n) + diag.transpose().replicate(n, 1));
  d.diagonal().setZero();
  return DistanceMatrix(std::move(d));
}

DistanceMatrix posdef_to_distances(const SymmetricMatrix& a) {
  if (!psd_check(a, 1e-10)) {
    throw NotPsdError("posdef_to_distances: matrix is not positive semidefinite");
  }
  const Vector diag = a.matrix().diagonal();
  const Eigen::Index n = a.size();
  Matrix d = -a.matrix() + 0.5 * (diag.replicate(1, n) + diag.transpose().replicate(n, 1));
  d.diagonal().setZero();
  return DistanceMatrix(std::move(d));
}

SymmetricMatrix centered_gram(const DistanceMatrix& d) {
  const Matrix j = centering_matrix(d.size());
  const Matrix g = -0.5 * j * d.matrix() * j;
  return SymmetricMatrix(0.5 * (g + g.transpose()));
}

Eigen::Index embedding_rank(const DistanceMatrix& d) {
  if (d.size() == 0) return 0;
  const Vector values = eigvals_sym(centered_gram(d));
  if (values(0) <= 0.0) return 0;
  const double threshold = 1e-9 * values(0);
  return static_cast<Eigen::Index>((values.array() > threshold).count());
}

Matrix embed_from_distances(const DistanceMatrix& d, std::optional<Eigen::Index> k) {
  const Eigen::Index n = d.size();
  if (n == 0) return Matrix(0, k.value_or(0));
  EigenSystem es = eig_sym(centered_gram(d));
  const double tol = clamp_tolerance(es.values);
  if (es.values(n - 1) < -tol) {
    std::ostringstream os;
    os << "embed_from_distances: centred Gram matrix has eigenvalue " << es.values(n - 1)
       << "; distances are not squared Hilbertian";
    throw NotHilbertianError(os.str());
  }
  Eigen::Index dims = 0;
  if (k) {
    if (*k < 0 || *k > n) throw InputError("embed_from_distances: k must lie in [0, n]");
    dims = *k;
  } else if (es.values(0) > 0.0) {
    dims = static_cast<Eigen::Index>((es.values.array() > 1e-9 * es.values(0)).count());
  }
  const Vector scale = es.values.head(dims).cwiseMax(0.0).cwiseSqrt();
  return es.vectors.leftCols(dims) * scale.asDiagonal();
}

}  // namespace gramentropy
