#pragma once

#include "gramentropy/ceml.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gramentropy {

struct CVResult {
  double mean_error = 0.0;
  std::vector<double> per_run_errors;
  int runs = 0;
  int folds = 0;
};

struct CVOptions {
  int folds = 2;
  int runs = 10;
  int k = 4;
  std::uint64_t seed = 0;
  /// Upper bound on worker threads; 0 means GRAMENTROPY_THREADS or hardware
  /// concurrency.
  unsigned threads = 0;
};

/// Two-class planar data: classes interleave along the horizontal axis
/// (separable, each class multimodal) and overlap along the vertical axis
/// (unimodal per class).
struct SyntheticSpec {
  int n_per_class = 50;
  int modes_per_class = 2;
  /// Horizontal distance between neighbouring modes of different classes.
  double mode_spacing = 4.0;
  /// Horizontal standard deviation within a mode.
  double mode_spread = 0.6;
  /// Vertical distance between the class means (unit vertical variance).
  double vertical_gap = 1.5;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Majority vote among the k nearest training rows (Euclidean). Ties are
/// broken by smallest summed distance, then smallest label.
std::vector<Label> knn_classify(const Matrix& train_x, const std::vector<Label>& train_labels,
                                const Matrix& test_x, int k);

/// Same, in the space projected by `model`.
std::vector<Label> knn_classify(const Matrix& train_x, const std::vector<Label>& train_labels,
                                const Matrix& test_x, int k, const MetricModel& model);

double error_rate(const std::vector<Label>& predicted, const std::vector<Label>& truth);

/// Seeded stratified assignment of samples to folds: fold_of[i] in [0, folds).
std::vector<int> stratified_folds(const std::vector<Label>& labels, int folds, std::uint64_t seed);

/// Seed for run `run` derived from the base seed.
std::uint64_t run_seed(std::uint64_t seed, int run);

/// Learns a transform on the training part of a split and returns the
/// projection used by kNN (or nullopt for the identity).
using MetricFitter =
    std::function<std::optional<Matrix>(const Dataset& train, std::uint64_t run_seed)>;

/// Generic repeated stratified k-fold protocol. Each fold is held out once
/// and the fitter sees the remaining folds. A run's error is the fraction of
/// misclassified held-out predictions.
CVResult cross_validate_with(const Dataset& data, const MetricFitter& fitter,
                             const CVOptions& options);

/// CEML metric learned on every training fold.
CVResult cross_validate(const Dataset& data, const TrainConfig& config,
                        const CVOptions& options = {});

/// Identity metric on standardised features.
CVResult baseline_euclidean(const Dataset& data, const CVOptions& options = {});

/// Mahalanobis metric with A A^T = inverse covariance of the training fold.
/// A ridge of 1e-6 * tr(Sigma) / d is added when Sigma is singular.
CVResult baseline_inverse_covariance(const Dataset& data, const CVOptions& options = {});

/// Inverse square root of the (ridged if needed) covariance of X's rows.
Matrix inverse_covariance_factor(const Matrix& x);

struct StandardizeResult {
  Dataset data;
  /// Indices of dropped zero-variance features (original numbering).
  std::vector<Eigen::Index> dropped;
  std::vector<std::string> warnings;
};

/// Per-feature mean 0 and (population) variance 1; constant features are
/// dropped.
StandardizeResult standardize(const Dataset& data);

Dataset synth_bimodal(const SyntheticSpec& spec);

enum class Direction { Horizontal, Vertical };

/// Angle in degrees in [0, 90] between a 2 x 1 projection and the
/// horizontal axis.
double direction_angle(const Matrix& a);

/// Horizontal iff the angle is below 45 degrees.
Direction classify_direction(double angle_degrees);

const char* to_string(Direction d);

struct AlphaStudyRow {
  double alpha = 0.0;
  int horizontal = 0;
  int vertical = 0;
  std::vector<double> angles;
  std::vector<double> final_objectives;
};

struct AlphaStudyOptions {
  std::vector<double> alphas = {1.01, 1.3, 2.0, 5.0};
  int repeats = 60;
  SyntheticSpec data;
  /// alpha, p and seed are overridden per run.
  TrainConfig train;
  unsigned threads = 0;
};

/// Default training settings of the direction study.
TrainConfig alpha_study_train_defaults();

/// Trains a 1-D projection `repeats` times per alpha (seeds 0..repeats-1) on
/// one synthetic dataset and counts horizontal / vertical solutions.
std::vector<AlphaStudyRow> alpha_study(const AlphaStudyOptions& options);

}  // namespace gramentropy
