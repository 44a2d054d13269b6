#include "gramentropy/gradcheck.hpp"

#include "gramentropy/ceml.hpp"
#include "gramentropy/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gramentropy {

namespace {

Matrix random_orthogonal(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(n, n);
}

Matrix density_from_spectrum(const Vector& spectrum, std::mt19937_64& rng) {
  const Matrix q = random_orthogonal(spectrum.size(), rng);
  const Vector w = spectrum / spectrum.sum();
  Matrix a = q * w.asDiagonal() * q.transpose();
  a = 0.5 * (a + a.transpose()).eval();
  a.diagonal().array() += (1.0 - a.trace()) / static_cast<double>(a.rows());
  return a;
}

double raw_entropy(const Matrix& m, EntropyOrder order) {
  return renyi_from_spectrum(eigvals_sym(SymmetricMatrix(m)), order);
}

double entropy_case(const Matrix& a, EntropyOrder order, std::uint64_t seed, double h) {
  const Matrix e = random_traceless_direction(a.rows(), seed);
  const double analytic = entropy_gradient(SymmetricMatrix(a), order).matrix().cwiseProduct(e).sum();
  const double fd = (raw_entropy(a + h * e, order) - raw_entropy(a - h * e, order)) / (2.0 * h);
  return std::abs(analytic - fd) / std::max(std::abs(fd), 1e-6);
}

double ceml_case(double alpha, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const Eigen::Index n = 30;
  const Eigen::Index d = 4;
  const Eigen::Index p = 2;
  Matrix x(n, d);
  std::vector<Label> labels(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    labels[static_cast<std::size_t>(i)] = static_cast<Label>(i % 3);
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = normal(rng) + (j == 0 ? 1.5 * static_cast<double>(i % 3) : 0.0);
  }
  const Dataset data(std::move(x), std::move(labels));
  Matrix a(d, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < d; ++i) a(i, j) = normal(rng);
  a = project_trace(a, p);
  const double sigma = 1.0;
  const EntropyOrder order(alpha);
  const Matrix g = ceml_gradient(a, data, order, sigma);
  Matrix fd(d, p);
  const double h = 1e-6;
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      Matrix plus = a;
      Matrix minus = a;
      plus(i, j) += h;
      minus(i, j) -= h;
      fd(i, j) = (ceml_objective(plus, data, order, sigma).bits -
                  ceml_objective(minus, data, order, sigma).bits) /
                 (2.0 * h);
    }
  }
  const double denom = g.norm() * fd.norm();
  return denom > 0.0 ? g.cwiseProduct(fd).sum() / denom : 1.0;
}

}  // namespace

Matrix random_density(Eigen::Index n, std::uint64_t seed, double floor) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(floor, 1.0);
  Vector spectrum(n);
  for (Eigen::Index i = 0; i < n; ++i) spectrum(i) = unif(rng);
  return density_from_spectrum(spectrum, rng);
}

Matrix random_traceless_direction(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal;
  Matrix e(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) e(i, j) = normal(rng);
  e = 0.5 * (e + e.transpose()).eval();
  e.diagonal().array() -= e.trace() / static_cast<double>(n);
  return e / e.norm();
}

GradcheckReport run_gradcheck(const GradcheckOptions& options) {
  GradcheckReport report;
  std::uint64_t counter = options.seed * 1000003ULL;
  for (int n : options.sizes) {
    for (double alpha : options.alphas) {
      const EntropyOrder order(alpha);
      for (int c = 0; c < options.entropy_cases; ++c) {
        const Matrix a = random_density(n, ++counter);
        GradcheckCase gc{"entropy", n, alpha, entropy_case(a, order, ++counter, 1e-6), false};
        gc.passed = gc.value <= options.entropy_tol;
        report.max_entropy_rel_error = std::max(report.max_entropy_rel_error, gc.value);
        report.passed = report.passed && gc.passed;
        report.cases.push_back(gc);
      }
      if (options.adversarial && alpha > 1.0) {
        // Half the spectrum four orders of magnitude below the rest.
        std::mt19937_64 rng(++counter);
        std::uniform_real_distribution<double> unif(0.5, 1.0);
        Vector spectrum(n);
        for (int i = 0; i < n; ++i) spectrum(i) = unif(rng) * (i % 2 ? 1e-4 : 1.0);
        const Matrix a = density_from_spectrum(spectrum, rng);
        GradcheckCase gc{"entropy-near-singular", n, alpha,
                         entropy_case(a, order, ++counter, 1e-8), false};
        gc.passed = gc.value <= options.entropy_tol;
        report.max_entropy_rel_error = std::max(report.max_entropy_rel_error, gc.value);
        report.passed = report.passed && gc.passed;
        report.cases.push_back(gc);
      }
    }
  }
  for (double alpha : options.alphas) {
    if (alpha <= 1.0) continue;
    for (int c = 0; c < options.ceml_cases; ++c) {
      GradcheckCase gc{"ceml", 30, alpha, ceml_case(alpha, ++counter), false};
      gc.passed = gc.value >= options.ceml_min_cosine;
      report.min_ceml_cosine = std::min(report.min_ceml_cosine, gc.value);
      report.passed = report.passed && gc.passed;
      report.cases.push_back(gc);
    }
  }
  return report;
}

}  // namespace gramentropy
