#include "gramentropy/eval.hpp"

#include "gramentropy/errors.hpp"
#include "gramentropy/parallel.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

namespace gramentropy {

namespace {

struct Neighbour {
  double dist;
  Eigen::Index index;
};

Label vote(const std::vector<Neighbour>& nearest, const std::vector<Label>& train_labels) {
  struct Tally {
    int count = 0;
    double dist_sum = 0.0;
  };
  std::map<Label, Tally> tally;
  for (const auto& nb : nearest) {
    auto& t = tally[train_labels[static_cast<std::size_t>(nb.index)]];
    ++t.count;
    t.dist_sum += nb.dist;
  }
  // std::map iterates labels in increasing order, so strict comparisons keep
  // the lowest label among exact ties.
  auto best = tally.begin();
  for (auto it = std::next(tally.begin()); it != tally.end(); ++it) {
    if (it->second.count > best->second.count ||
        (it->second.count == best->second.count && it->second.dist_sum < best->second.dist_sum)) {
      best = it;
    }
  }
  return best->first;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// One stratified draw per sample: the i-th value is the normal quantile of a
// uniform point jittered inside [i/m, (i+1)/m), then the order is shuffled.
std::vector<double> stratified_normal(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const boost::math::normal standard;
  std::vector<double> out(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    double u = (i + unif(rng)) / m;
    u = std::clamp(u, 1e-12, 1.0 - 1e-12);
    out[static_cast<std::size_t>(i)] = boost::math::quantile(standard, u);
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace

std::vector<Label> knn_classify(const Matrix& train_x, const std::vector<Label>& train_labels,
                                const Matrix& test_x, int k) {
  const Eigen::Index n = train_x.rows();
  if (n == 0) throw InputError("knn_classify: empty training set");
  if (static_cast<std::size_t>(n) != train_labels.size()) {
    throw InputError("knn_classify: label count does not match training rows");
  }
  if (k < 1 || k > n) throw InputError("knn_classify: k must lie in [1, training size]");
  if (test_x.rows() > 0 && test_x.cols() != train_x.cols()) {
    detail::throw_dimension_mismatch("knn_classify", test_x.rows(), test_x.cols(), n, train_x.cols());
  }
  std::vector<Label> predicted;
  predicted.reserve(static_cast<std::size_t>(test_x.rows()));
  std::vector<Neighbour> all(static_cast<std::size_t>(n));
  for (Eigen::Index t = 0; t < test_x.rows(); ++t) {
    for (Eigen::Index i = 0; i < n; ++i) {
      all[static_cast<std::size_t>(i)] = {(train_x.row(i) - test_x.row(t)).norm(), i};
    }
    std::partial_sort(all.begin(), all.begin() + k, all.end(), [](const Neighbour& a, const Neighbour& b) {
      return a.dist < b.dist || (a.dist == b.dist && a.index < b.index);
    });
    predicted.push_back(vote({all.begin(), all.begin() + k}, train_labels));
  }
  return predicted;
}

std::vector<Label> knn_classify(const Matrix& train_x, const std::vector<Label>& train_labels,
                                const Matrix& test_x, int k, const MetricModel& model) {
  return knn_classify(transform(model, train_x), train_labels, transform(model, test_x), k);
}

double error_rate(const std::vector<Label>& predicted, const std::vector<Label>& truth) {
  if (predicted.size() != truth.size()) throw InputError("error_rate: length mismatch");
  if (truth.empty()) return 0.0;
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) wrong += predicted[i] != truth[i];
  return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

std::vector<int> stratified_folds(const std::vector<Label>& labels, int folds, std::uint64_t seed) {
  if (folds < 2) throw InputError("stratified_folds: need at least two folds");
  std::map<Label, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  std::mt19937_64 rng(seed);
  std::vector<int> fold_of(labels.size(), 0);
  std::size_t offset = 0;
  for (auto& [label, members] : by_class) {
    if (members.size() < static_cast<std::size_t>(folds)) {
      std::ostringstream os;
      os << "stratified_folds: class " << label << " has " << members.size()
         << " samples, fewer than " << folds << " folds";
      throw InputError(os.str());
    }
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t j = 0; j < members.size(); ++j) {
      fold_of[members[j]] = static_cast<int>((offset + j) % static_cast<std::size_t>(folds));
    }
    offset += members.size();
  }
  return fold_of;
}

std::uint64_t run_seed(std::uint64_t seed, int run) {
  return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(run));
}

CVResult cross_validate_with(const Dataset& data, const MetricFitter& fitter,
                             const CVOptions& options) {
  if (options.runs < 1) throw InputError("cross_validate: runs must be positive");
  if (options.k < 1) throw InputError("cross_validate: k must be positive");
  const auto n = static_cast<std::size_t>(data.size());
  // Fail on small classes before spawning workers.
  (void)stratified_folds(data.labels(), options.folds, options.seed);

  CVResult result;
  result.runs = options.runs;
  result.folds = options.folds;
  result.per_run_errors.assign(static_cast<std::size_t>(options.runs), 0.0);

  parallel_for(static_cast<std::size_t>(options.runs), worker_count(options.threads),
               [&](std::size_t run) {
                 const std::uint64_t seed = run_seed(options.seed, static_cast<int>(run));
                 const std::vector<int> fold_of = stratified_folds(data.labels(), options.folds, seed);
                 std::size_t wrong = 0;
                 for (int f = 0; f < options.folds; ++f) {
                   std::vector<Eigen::Index> train_rows;
                   std::vector<Eigen::Index> test_rows;
                   for (std::size_t i = 0; i < n; ++i) {
                     (fold_of[i] == f ? test_rows : train_rows).push_back(static_cast<Eigen::Index>(i));
                   }
                   const Dataset train_set = data.subset(train_rows);
                   const Dataset test_set = data.subset(test_rows);
                   const std::optional<Matrix> projection = fitter(train_set, seed);
                   const int k = std::min<int>(options.k, static_cast<int>(train_set.size()));
                   const auto predicted =
                       projection ? knn_classify(train_set.features() * *projection, train_set.labels(),
                                                 test_set.features() * *projection, k)
                                  : knn_classify(train_set.features(), train_set.labels(),
                                                 test_set.features(), k);
                   for (std::size_t i = 0; i < predicted.size(); ++i) {
                     wrong += predicted[i] != test_set.labels()[i];
                   }
                 }
                 result.per_run_errors[run] = static_cast<double>(wrong) / static_cast<double>(n);
               });

  result.mean_error = std::accumulate(result.per_run_errors.begin(), result.per_run_errors.end(), 0.0) /
                      static_cast<double>(options.runs);
  return result;
}

CVResult cross_validate(const Dataset& data, const TrainConfig& config, const CVOptions& options) {
  config.validate();
  return cross_validate_with(
      data,
      [&config](const Dataset& train_set, std::uint64_t seed) -> std::optional<Matrix> {
        TrainConfig c = config;
        c.seed = splitmix64(config.seed ^ seed);
        return train(train_set, c).model.projection();
      },
      options);
}

CVResult baseline_euclidean(const Dataset& data, const CVOptions& options) {
  return cross_validate_with(
      standardize(data).data,
      [](const Dataset&, std::uint64_t) -> std::optional<Matrix> { return std::nullopt; }, options);
}

Matrix inverse_covariance_factor(const Matrix& x) {
  const Eigen::Index d = x.cols();
  const Matrix centred = x.rowwise() - x.colwise().mean();
  Matrix cov = centred.transpose() * centred / static_cast<double>(std::max<Eigen::Index>(x.rows() - 1, 1));
  cov = 0.5 * (cov + cov.transpose()).eval();
  Vector values = eigvals_sym(SymmetricMatrix(cov));
  const double lmax = values(0);
  if (!(values(d - 1) > 1e-12 * std::max(1.0, lmax))) {
    const double tr = cov.trace();
    cov.diagonal().array() += 1e-6 * (tr > 0.0 ? tr / static_cast<double>(d) : 1.0);
  }
  const EigenSystem es = eig_sym(SymmetricMatrix(cov));
  return apply_spectral(es, [](double v) { return 1.0 / std::sqrt(v); }).matrix();
}

CVResult baseline_inverse_covariance(const Dataset& data, const CVOptions& options) {
  return cross_validate_with(
      data,
      [](const Dataset& train_set, std::uint64_t) -> std::optional<Matrix> {
        return inverse_covariance_factor(train_set.features());
      },
      options);
}

StandardizeResult standardize(const Dataset& data) {
  const Matrix& x = data.features();
  const double n = static_cast<double>(x.rows());
  std::vector<Eigen::Index> kept;
  std::vector<Eigen::Index> dropped;
  std::vector<std::string> warnings;
  Vector mean = x.colwise().mean();
  Vector stdev(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    stdev(j) = std::sqrt((x.col(j).array() - mean(j)).square().sum() / n);
    if (stdev(j) <= 1e-12 * std::max(1.0, std::abs(mean(j)))) {
      dropped.push_back(j);
      warnings.push_back("feature " + std::to_string(j) + " has zero variance; dropped");
    } else {
      kept.push_back(j);
    }
  }
  if (kept.empty()) throw InputError("standardize: every feature is constant");
  Matrix out(x.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    const Eigen::Index j = kept[c];
    out.col(static_cast<Eigen::Index>(c)) = (x.col(j).array() - mean(j)) / stdev(j);
  }
  return {Dataset(std::move(out), data.labels()), std::move(dropped), std::move(warnings)};
}

void SyntheticSpec::validate() const {
  if (n_per_class < 2) throw InputError("SyntheticSpec: n_per_class must be at least 2");
  if (modes_per_class < 1) throw InputError("SyntheticSpec: modes_per_class must be positive");
  if (!(mode_spacing > 0.0)) throw InputError("SyntheticSpec: mode_spacing must be positive");
  if (!(mode_spread >= 0.0)) throw InputError("SyntheticSpec: mode_spread must be nonnegative");
  if (!(vertical_gap >= 0.0)) throw InputError("SyntheticSpec: vertical_gap must be nonnegative");
}

Dataset synth_bimodal(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const int m = spec.n_per_class;
  Matrix x(2 * m, 2);
  std::vector<Label> labels(static_cast<std::size_t>(2 * m));
  // Mode centres interleave the classes along the horizontal axis:
  // class c, mode j sits at (2j + c - (2M - 1) / 2) * spacing.
  const double half_span = (2.0 * spec.modes_per_class - 1.0) / 2.0;
  for (int c = 0; c < 2; ++c) {
    const std::vector<double> vertical = stratified_normal(m, rng);
    const std::vector<double> horizontal = stratified_normal(m, rng);
    for (int i = 0; i < m; ++i) {
      const int row = c * m + i;
      const int mode = i % spec.modes_per_class;
      const double centre = (2.0 * mode + c - half_span) * spec.mode_spacing;
      x(row, 0) = centre + spec.mode_spread * horizontal[static_cast<std::size_t>(i)];
      x(row, 1) = (c - 0.5) * spec.vertical_gap + vertical[static_cast<std::size_t>(i)];
      labels[static_cast<std::size_t>(row)] = c;
    }
  }
  return Dataset(std::move(x), std::move(labels));
}

double direction_angle(const Matrix& a) {
  if (a.rows() != 2 || a.cols() != 1) {
    detail::throw_dimension_mismatch("direction_angle", a.rows(), a.cols(), 2, 1);
  }
  if (a.squaredNorm() == 0.0) throw DegenerateError("direction_angle: zero projection");
  return std::atan2(std::abs(a(1, 0)), std::abs(a(0, 0))) * 180.0 / std::numbers::pi;
}

Direction classify_direction(double angle_degrees) {
  return angle_degrees < 45.0 ? Direction::Horizontal : Direction::Vertical;
}

const char* to_string(Direction d) {
  return d == Direction::Horizontal ? "horizontal" : "vertical";
}

TrainConfig alpha_study_train_defaults() {
  TrainConfig c;
  c.sigma = 6.5;
  c.p = 1;
  return c;
}

std::vector<AlphaStudyRow> alpha_study(const AlphaStudyOptions& options) {
  if (options.repeats < 1) throw InputError("alpha_study: repeats must be positive");
  for (double a : options.alphas) (void)EntropyOrder(a);
  const Dataset data = synth_bimodal(options.data);
  const std::size_t per_alpha = static_cast<std::size_t>(options.repeats);
  const std::size_t total = per_alpha * options.alphas.size();
  std::vector<double> angles(total);
  std::vector<double> objectives(total);
  parallel_for(total, worker_count(options.threads), [&](std::size_t job) {
    TrainConfig c = options.train;
    c.alpha = options.alphas[job / per_alpha];
    c.p = 1;
    c.seed = job % per_alpha;
    const TrainResult r = train(data, c);
    angles[job] = direction_angle(r.model.projection());
    objectives[job] = r.report.final_objective;
  });
  std::vector<AlphaStudyRow> rows;
  for (std::size_t ai = 0; ai < options.alphas.size(); ++ai) {
    AlphaStudyRow row;
    row.alpha = options.alphas[ai];
    for (std::size_t r = 0; r < per_alpha; ++r) {
      const double angle = angles[ai * per_alpha + r];
      row.angles.push_back(angle);
      row.final_objectives.push_back(objectives[ai * per_alpha + r]);
      (classify_direction(angle) == Direction::Horizontal ? row.horizontal : row.vertical) += 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace gramentropy
