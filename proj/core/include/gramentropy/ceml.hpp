#pragma once

#include "gramentropy/entropy.hpp"
#include "gramentropy/errors.hpp"
#include "gramentropy/spectra.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace gramentropy {

using Label = int;

/// Labelled samples: one row of `features` per sample.
class Dataset {
public:
  Dataset(Matrix features, std::vector<Label> labels);

  [[nodiscard]] Eigen::Index size() const { return features_.rows(); }
  [[nodiscard]] Eigen::Index dim() const { return features_.cols(); }
  [[nodiscard]] const Matrix& features() const { return features_; }
  [[nodiscard]] const std::vector<Label>& labels() const { return labels_; }
  [[nodiscard]] std::vector<Label> classes() const;

  /// Rows selected by index, in the given order.
  [[nodiscard]] Dataset subset(const std::vector<Eigen::Index>& rows) const;

  friend bool operator==(const Dataset& a, const Dataset& b);

private:
  Matrix features_;
  std::vector<Label> labels_;
};

/// Learned projection A (d x p); distances are (x - x')^T A A^T (x - x').
class MetricModel {
public:
  MetricModel(Matrix projection, EntropyOrder alpha, double sigma);

  [[nodiscard]] const Matrix& projection() const { return projection_; }
  [[nodiscard]] EntropyOrder alpha() const { return alpha_; }
  [[nodiscard]] double sigma() const { return sigma_; }
  [[nodiscard]] Eigen::Index input_dim() const { return projection_.rows(); }
  [[nodiscard]] Eigen::Index p() const { return projection_.cols(); }

private:
  Matrix projection_;
  EntropyOrder alpha_;
  double sigma_;
};

struct TrainConfig {
  double alpha = 1.01;
  double sigma = 1.0;
  Eigen::Index p = 1;
  double step_size = 0.5;
  int max_iters = 300;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  /// Keep only this many leading eigenpairs in the entropy gradients.
  std::optional<Eigen::Index> truncate_m;
  int max_halvings = 30;

  /// Throws InputError on non-positive fields.
  void validate() const;
};

struct TrainReport {
  /// Objective (bits) at the initial point and after every accepted step.
  std::vector<double> objective_trace;
  int iterations_run = 0;
  double final_objective = 0.0;
  bool converged = false;
};

struct TrainResult {
  MetricModel model;
  TrainReport report;
};

/// Raised when the objective becomes non-finite during training.
class DivergenceError : public Error {
public:
  DivergenceError(const std::string& what, TrainReport report)
      : Error(what), report_(std::move(report)) {}
  [[nodiscard]] const TrainReport& report() const { return report_; }

private:
  TrainReport report_;
};

/// L_ij = 1/n if labels agree, else 0.
DensityMatrix label_gram(const std::vector<Label>& labels);

/// Conditional entropy of the labels given the projected samples Y = X A:
/// S(nK o L) - S(K) with K the unit-trace Gaussian Gram matrix of Y.
EntropyValue ceml_objective(const Matrix& a, const Dataset& data, EntropyOrder alpha,
                            double sigma);

/// Gradient of ceml_objective with respect to A:
///
///   (2 / sigma^2) X^T (P - diag(P 1)) X A,
///   P = (nL o grad S(nK o L) - grad S(K)) o K.
///
/// With truncate_m set, both entropy gradients keep only the m leading
/// eigenpairs.
Matrix ceml_gradient(const Matrix& a, const Dataset& data, EntropyOrder alpha, double sigma,
                     std::optional<Eigen::Index> truncate_m = std::nullopt);

/// A * sqrt(p / tr(A^T A)).
Matrix project_trace(const Matrix& a, Eigen::Index p);

/// Projected gradient descent with step halving on objective increase.
TrainResult train(const Dataset& data, const TrainConfig& config);

/// Rows of X mapped through the model: X A.
Matrix transform(const MetricModel& model, const Matrix& x);

}  // namespace gramentropy
