#include "gramentropy/spectra.hpp"

#include "gramentropy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace gramentropy {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kClampRel = 1e-10;
constexpr double kMajorizationSumTol = 1e-8;
constexpr double kMajorizationPartialTol = 1e-10;

void require_square(const Matrix& m, const char* where) {
  if (m.rows() != m.cols()) {
    detail::throw_dimension_mismatch(where, m.rows(), m.cols(), m.cols(), m.rows());
  }
}

void require_same_size(const SymmetricMatrix& a, const SymmetricMatrix& b, const char* where) {
  if (a.size() != b.size()) {
    detail::throw_dimension_mismatch(where, a.size(), a.size(), b.size(), b.size());
  }
}

// Eigen returns ascending eigenvalues; flip to non-increasing order.
EigenSystem descending(const Eigen::SelfAdjointEigenSolver<Matrix>& solver) {
  EigenSystem es;
  es.values = solver.eigenvalues().reverse();
  es.vectors = solver.eigenvectors().rowwise().reverse();
  return es;
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(Matrix entries) : entries_(std::move(entries)) {
  require_square(entries_, "SymmetricMatrix");
  if (!entries_.allFinite()) {
    throw InputError("SymmetricMatrix: non-finite entry");
  }
  const double scale = std::max(1.0, max_abs());
  const double asym = entries_.size() == 0 ? 0.0 : (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * scale) {
    std::ostringstream os;
    os << "SymmetricMatrix: asymmetry " << asym << " exceeds tolerance";
    throw InputError(os.str());
  }
  entries_ = 0.5 * (entries_ + entries_.transpose()).eval();
}

SymmetricMatrix SymmetricMatrix::identity(Eigen::Index n) {
  return SymmetricMatrix(Matrix::Identity(n, n));
}

SymmetricMatrix SymmetricMatrix::constant(Eigen::Index n, double value) {
  return SymmetricMatrix(Matrix::Constant(n, n, value));
}

SymmetricMatrix SymmetricMatrix::diagonal(const Vector& diag) {
  return SymmetricMatrix(Matrix(diag.asDiagonal()));
}

double SymmetricMatrix::max_abs() const {
  return entries_.size() == 0 ? 0.0 : entries_.cwiseAbs().maxCoeff();
}

Matrix EigenSystem::reconstruct() const {
  return vectors * values.asDiagonal() * vectors.transpose();
}

EigenSystem eig_sym(const SymmetricMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw InputError("eig_sym: eigensolver did not converge");
  }
  return descending(solver);
}

Vector eigvals_sym(const SymmetricMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw InputError("eigvals_sym: eigensolver did not converge");
  }
  return solver.eigenvalues().reverse();
}

double clamp_tolerance(const Vector& values) {
  const double lmax = values.size() == 0 ? 0.0 : values(0);
  return kClampRel * std::max(1.0, lmax);
}

Vector clamp_spectrum(const Vector& values) {
  if (values.size() == 0) return values;
  const double tol = clamp_tolerance(values);
  const double lmin = values(values.size() - 1);
  if (lmin < -tol) {
    std::ostringstream os;
    os << "matrix is not positive semidefinite: smallest eigenvalue " << lmin;
    throw NotPsdError(os.str());
  }
  return values.cwiseMax(0.0);
}

DensityMatrix::DensityMatrix(SymmetricMatrix base) : base_(std::move(base)), eigen_(eig_sym(base_)) {
  if (std::abs(base_.trace() - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << base_.trace() << " is not 1";
    throw InputError(os.str());
  }
  if (size() > 0 && eigen_.values(size() - 1) < -1e-10) {
    std::ostringstream os;
    os << "DensityMatrix: smallest eigenvalue " << eigen_.values(size() - 1) << " < -1e-10";
    throw NotPsdError(os.str());
  }
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index n) {
  return DensityMatrix(Matrix(Matrix::Identity(n, n) / static_cast<double>(n)));
}

SymmetricMatrix matrix_power(const SymmetricMatrix& a, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw InputError("matrix_power: exponent must be positive and finite");
  }
  EigenSystem es = eig_sym(a);
  es.values = clamp_spectrum(es.values);
  return apply_spectral(es, [r](double x) { return x > 0.0 ? std::pow(x, r) : 0.0; });
}

SymmetricMatrix hadamard(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  require_same_size(a, b, "hadamard");
  return SymmetricMatrix(a.matrix().cwiseProduct(b.matrix()));
}

SymmetricMatrix hadamard_power(const SymmetricMatrix& a, double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw InputError("hadamard_power: exponent must be nonnegative and finite");
  }
  if (a.size() > 0 && a.matrix().minCoeff() <= 0.0) {
    throw DomainError("hadamard_power: entries must be strictly positive");
  }
  return SymmetricMatrix(a.matrix().array().pow(r).matrix());
}

SymmetricMatrix kron(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  const Eigen::Index na = a.size();
  const Eigen::Index nb = b.size();
  Matrix out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < na; ++j) {
      out.block(i * nb, j * nb, nb, nb) = a(i, j) * b.matrix();
    }
  }
  return SymmetricMatrix(std::move(out));
}

bool majorizes(const Vector& q, const Vector& p) {
  if (q.size() != p.size()) {
    detail::throw_dimension_mismatch("majorizes", q.size(), 1, p.size(), 1);
  }
  if (std::abs(q.sum() - p.sum()) > kMajorizationSumTol) {
    throw InputError("majorizes: vectors must have equal sums");
  }
  std::vector<double> qs(q.data(), q.data() + q.size());
  std::vector<double> ps(p.data(), p.data() + p.size());
  std::sort(qs.begin(), qs.end(), std::greater<>());
  std::sort(ps.begin(), ps.end(), std::greater<>());
  double sq = 0.0;
  double sp = 0.0;
  for (std::size_t k = 0; k < qs.size(); ++k) {
    sq += qs[k];
    sp += ps[k];
    if (sq < sp - kMajorizationPartialTol) return false;
  }
  return true;
}

bool psd_check(const SymmetricMatrix& a, double tol) {
  if (a.size() == 0) return true;
  const Vector values = eigvals_sym(a);
  return values(values.size() - 1) >= -tol * std::max(1.0, values(0));
}

Matrix centering_matrix(Eigen::Index n) {
  return Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
}

double centered_max_eigenvalue(const SymmetricMatrix& b) {
  if (b.size() == 0) return 0.0;
  const Matrix j = centering_matrix(b.size());
  const Matrix centred = j * b.matrix() * j;
  return eigvals_sym(SymmetricMatrix(0.5 * (centred + centred.transpose())))(0);
}

bool centered_negdef_check(const SymmetricMatrix& b, double tol) {
  return centered_max_eigenvalue(b) <= tol;
}

}  // namespace gramentropy
