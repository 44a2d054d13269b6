#pragma once

#include "gramentropy/spectra.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gramentropy {

struct GradcheckOptions {
  std::uint64_t seed = 0;
  std::vector<int> sizes = {4, 8, 16};
  std::vector<double> alphas = {0.5, 1.01, 2.0, 5.0};
  /// Entropy-gradient cases per (size, alpha) pair.
  int entropy_cases = 5;
  /// CEML cases per alpha > 1.
  int ceml_cases = 5;
  /// Adds near-rank-deficient matrices for alpha > 1.
  bool adversarial = true;
  double entropy_tol = 1e-5;
  double ceml_min_cosine = 0.999;
};

struct GradcheckCase {
  std::string suite;
  int n = 0;
  double alpha = 0.0;
  /// Relative error for the entropy suite, cosine similarity for CEML.
  double value = 0.0;
  bool passed = false;
};

struct GradcheckReport {
  std::vector<GradcheckCase> cases;
  double max_entropy_rel_error = 0.0;
  double min_ceml_cosine = 1.0;
  bool passed = true;
};

/// Compares the analytic entropy and CEML gradients against central finite
/// differences on seeded random instances.
GradcheckReport run_gradcheck(const GradcheckOptions& options);

/// Random symmetric positive definite matrix with unit trace and eigenvalues
/// bounded away from zero by roughly `floor / n`.
Matrix random_density(Eigen::Index n, std::uint64_t seed, double floor = 0.05);

/// Random symmetric direction with zero trace and unit Frobenius norm.
Matrix random_traceless_direction(Eigen::Index n, std::uint64_t seed);

}  // namespace gramentropy
