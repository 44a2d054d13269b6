#include "properties.hpp"
#include "random.hpp"

#include "gramentropy/ceml.hpp"
#include "gramentropy/entropy.hpp"
#include "gramentropy/errors.hpp"
#include "gramentropy/eval.hpp"
#include "gramentropy/idkernels.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace gramentropy;
using gramentropy::testkit::Rng;

namespace {

Dataset random_dataset(Eigen::Index n, Eigen::Index d, int classes, Rng& rng) {
  std::uniform_int_distribution<int> label(0, classes - 1);
  std::vector<Label> labels(static_cast<std::size_t>(n));
  for (auto& l : labels) l = label(rng);
  return Dataset(testkit::gaussian_matrix(n, d, rng), labels);
}

}  // namespace

TEST(Dataset, Validates) {
  EXPECT_THROW(Dataset(Matrix::Zero(3, 2), {0, 1}), InputError);
  EXPECT_THROW(Dataset(Matrix::Zero(1, 2), {0}), InputError);
  EXPECT_THROW(Dataset(Matrix::Zero(2, 2), {0, -1}), InputError);
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = std::nan("");
  EXPECT_THROW(Dataset(bad, {0, 1}), InputError);
  const Dataset ok(Matrix::Zero(3, 2), {2, 0, 2});
  EXPECT_EQ(ok.classes(), (std::vector<Label>{0, 2}));
  EXPECT_EQ(ok.subset({2, 1}).labels(), (std::vector<Label>{2, 0}));
}

TEST(LabelGram, Examples) {
  Matrix expected(3, 3);
  expected << 1, 1, 0, 1, 1, 0, 0, 0, 1;
  expected /= 3.0;
  EXPECT_LE((label_gram({0, 0, 1}).matrix() - expected).cwiseAbs().maxCoeff(), 1e-16);
  EXPECT_NEAR(renyi_entropy(label_gram({4, 4, 4, 4}), EntropyOrder(2.0)).bits, 0.0, 1e-12);
  EXPECT_NEAR(renyi_entropy(label_gram({0, 1, 2, 3}), EntropyOrder(2.0)).bits, 2.0, 1e-12);
}

TEST(MetricModel, EnforcesTraceConstraint) {
  EXPECT_NO_THROW(MetricModel(Matrix::Identity(3, 2), EntropyOrder(2.0), 1.0));
  EXPECT_THROW(MetricModel(2.0 * Matrix::Identity(3, 2), EntropyOrder(2.0), 1.0), InputError);
  EXPECT_THROW(MetricModel(Matrix::Identity(3, 2), EntropyOrder(2.0), 0.0), InputError);
}

TEST(CemlObjective, SameLabelsGiveZero) {
  Rng rng(1);
  const Dataset data(testkit::gaussian_matrix(12, 3, rng), std::vector<Label>(12, 5));
  const Matrix a = project_trace(testkit::gaussian_matrix(3, 2, rng), 2);
  EXPECT_EQ(ceml_objective(a, data, EntropyOrder(1.01), 1.0).bits, 0.0);
  EXPECT_EQ(ceml_gradient(a, data, EntropyOrder(1.01), 1.0), Matrix::Zero(3, 2));
}

TEST(CemlObjective, DistinctLabelsMatchClosedForm) {
  Rng rng(2);
  const Matrix x = testkit::gaussian_matrix(9, 2, rng);
  std::vector<Label> labels(9);
  for (int i = 0; i < 9; ++i) labels[static_cast<std::size_t>(i)] = i;
  const Dataset data(x, labels);
  const Matrix a = project_trace(testkit::gaussian_matrix(2, 1, rng), 1);
  const double alpha = 2.0;
  const DensityMatrix k = gaussian_gram(x * a, KernelConfig(1.0));
  const double expected = std::log2(9.0) - renyi_entropy(k, EntropyOrder(alpha)).bits;
  EXPECT_NEAR(ceml_objective(a, data, EntropyOrder(alpha), 1.0).bits, expected, 1e-10);
  EXPECT_GE(expected, 0.0);
}

TEST(CemlObjective, SeparatedClustersNearZero) {
  Rng rng(3);
  Matrix x = 0.05 * testkit::gaussian_matrix(20, 2, rng);
  std::vector<Label> labels(20);
  for (int i = 0; i < 20; ++i) {
    labels[static_cast<std::size_t>(i)] = i % 2;
    x(i, 0) += 10.0 * (i % 2);
  }
  const Matrix a = Matrix::Identity(2, 1);
  EXPECT_NEAR(ceml_objective(a, Dataset(x, labels), EntropyOrder(1.01), 0.5).bits, 0.0, 1e-6);
}

TEST(CemlObjective, BoundsAndScaleConsistency) {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset data = random_dataset(15, 3, 3, rng);
    const Matrix a = project_trace(testkit::gaussian_matrix(3, 2, rng), 2);
    const EntropyOrder order(trial % 2 ? 2.0 : 1.01);
    const double f = ceml_objective(a, data, order, 0.8).bits;
    EXPECT_GE(f, -1e-8);
    EXPECT_LE(f, renyi_entropy(label_gram(data.labels()), order).bits + 1e-8);
    for (double c : {0.5, 2.0}) {
      EXPECT_NEAR(ceml_objective(c * a, data, order, c * 0.8).bits, f, 1e-10);
    }
  }
}

TEST(CemlObjective, DimensionMismatch) {
  Rng rng(5);
  const Dataset data = random_dataset(6, 3, 2, rng);
  EXPECT_THROW(ceml_objective(Matrix::Identity(2, 1), data, EntropyOrder(2.0), 1.0), InputError);
}

TEST(CemlGradient, FiniteDifferences) {
  const auto r = testkit::check_ceml_gradients(8, 707);
  EXPECT_TRUE(r.passed) << r.first_failure;
}

TEST(ProjectTrace, Examples) {
  const Matrix a = Matrix::Identity(3, 2);
  EXPECT_EQ(project_trace(a, 2), a);
  EXPECT_LE((project_trace(2.0 * a, 2) - a).cwiseAbs().maxCoeff(), 1e-15);
  Rng rng(6);
  const Matrix r = project_trace(testkit::gaussian_matrix(5, 3, rng), 3);
  EXPECT_NEAR((r.transpose() * r).trace(), 3.0, 1e-12);
  EXPECT_THROW(project_trace(Matrix::Zero(3, 2), 2), DegenerateError);
}

TEST(Train, SameLabelsConvergeImmediately) {
  Rng rng(7);
  const Dataset data(testkit::gaussian_matrix(10, 2, rng), std::vector<Label>(10, 1));
  const TrainResult r = train(data, TrainConfig{});
  EXPECT_EQ(r.report.iterations_run, 1);
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.final_objective, 0.0);
}

TEST(Train, MonotoneDeterministicAndFeasible) {
  const Dataset data = synth_bimodal(SyntheticSpec{.n_per_class = 25});
  TrainConfig config;
  config.sigma = 6.5;
  config.seed = 4;
  const TrainResult a = train(data, config);
  const TrainResult b = train(data, config);
  EXPECT_EQ(a.model.projection(), b.model.projection());
  EXPECT_EQ(a.report.objective_trace, b.report.objective_trace);
  const auto& trace = a.report.objective_trace;
  for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_LE(trace[i], trace[i - 1] + 1e-10);
  EXPECT_NEAR(a.model.projection().squaredNorm(), 1.0, 1e-8);
  EXPECT_EQ(a.report.final_objective, trace.back());
}

TEST(Train, TangentialGradientVanishesAtSolution) {
  const Dataset data = synth_bimodal(SyntheticSpec{});
  TrainConfig config;
  config.sigma = 6.5;
  config.tol = 1e-12;
  config.max_iters = 2000;
  const EntropyOrder order(config.alpha);
  Rng rng(0);
  const Matrix a0 = project_trace(testkit::gaussian_matrix(2, 1, rng), 1);
  const auto tangential = [&](const Matrix& a) {
    const Matrix g = ceml_gradient(a, data, order, config.sigma);
    return (g - a * (a.cwiseProduct(g).sum() / a.squaredNorm())).norm();
  };
  const TrainResult r = train(data, config);
  EXPECT_LE(tangential(r.model.projection()), 1e-3 * tangential(a0));
}

TEST(Train, TruncatedGradientReachesSimilarObjective) {
  const Dataset data = synth_bimodal(SyntheticSpec{});
  TrainConfig config;
  config.sigma = 6.5;
  config.seed = 2;
  const double full = train(data, config).report.final_objective;
  config.truncate_m = 10;
  const double truncated = train(data, config).report.final_objective;
  EXPECT_LE(std::abs(truncated - full), 0.05 * std::abs(full));
}

TEST(Train, RejectsInvalidConfig) {
  Rng rng(8);
  const Dataset data = random_dataset(8, 2, 2, rng);
  TrainConfig c;
  c.p = 3;
  EXPECT_THROW(train(data, c), InputError);
  c = TrainConfig{};
  c.step_size = 0.0;
  EXPECT_THROW(train(data, c), InputError);
  c = TrainConfig{};
  c.alpha = 1.0;
  EXPECT_THROW(train(data, c), InputError);
  c = TrainConfig{};
  c.max_iters = 0;
  EXPECT_THROW(train(data, c), InputError);
}

TEST(Transform, Examples) {
  Rng rng(9);
  const Matrix x = testkit::gaussian_matrix(6, 4, rng);
  const MetricModel select(Matrix::Identity(4, 2), EntropyOrder(2.0), 1.0);
  EXPECT_EQ(transform(select, x), x.leftCols(2));
  EXPECT_EQ(transform(select, Matrix(0, 4)).rows(), 0);
  EXPECT_EQ(transform(select, Matrix(0, 4)).cols(), 2);
  EXPECT_THROW(transform(select, Matrix::Zero(2, 3)), InputError);

  const Matrix a = project_trace(testkit::gaussian_matrix(4, 2, rng), 2);
  const MetricModel m(a, EntropyOrder(2.0), 1.0);
  const Matrix y = transform(m, x);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const Vector diff = (x.row(i) - x.row(j)).transpose();
      const double mahalanobis = diff.dot(a * a.transpose() * diff);
      EXPECT_NEAR((y.row(i) - y.row(j)).squaredNorm(), mahalanobis, 1e-10);
    }
  }
}
