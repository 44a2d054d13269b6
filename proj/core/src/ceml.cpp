#include "gramentropy/ceml.hpp"

#include "gramentropy/idkernels.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace gramentropy {

Dataset::Dataset(Matrix features, std::vector<Label> labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (static_cast<std::size_t>(features_.rows()) != labels_.size()) {
    std::ostringstream os;
    os << "Dataset: " << features_.rows() << " feature rows but " << labels_.size() << " labels";
    throw InputError(os.str());
  }
  if (features_.rows() < 2) throw InputError("Dataset: need at least two samples");
  if (features_.cols() < 1) throw InputError("Dataset: need at least one feature");
  if (!features_.allFinite()) throw InputError("Dataset: non-finite feature value");
  if (std::any_of(labels_.begin(), labels_.end(), [](Label l) { return l < 0; })) {
    throw InputError("Dataset: labels must be nonnegative integers");
  }
}

std::vector<Label> Dataset::classes() const {
  std::set<Label> s(labels_.begin(), labels_.end());
  return {s.begin(), s.end()};
}

Dataset Dataset::subset(const std::vector<Eigen::Index>& rows) const {
  Matrix f(static_cast<Eigen::Index>(rows.size()), dim());
  std::vector<Label> l;
  l.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    f.row(static_cast<Eigen::Index>(i)) = features_.row(rows[i]);
    l.push_back(labels_[static_cast<std::size_t>(rows[i])]);
  }
  return Dataset(std::move(f), std::move(l));
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.labels_ == b.labels_ && a.features_.rows() == b.features_.rows() &&
         a.features_.cols() == b.features_.cols() && a.features_ == b.features_;
}

MetricModel::MetricModel(Matrix projection, EntropyOrder alpha, double sigma)
    : projection_(std::move(projection)), alpha_(alpha), sigma_(sigma) {
  if (projection_.cols() < 1 || projection_.rows() < 1) {
    throw InputError("MetricModel: projection must be non-empty");
  }
  if (!projection_.allFinite()) throw InputError("MetricModel: non-finite projection");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InputError("MetricModel: sigma must be positive");
  const double p = static_cast<double>(projection_.cols());
  if (std::abs(projection_.squaredNorm() - p) > 1e-8) {
    std::ostringstream os;
    os << "MetricModel: tr(A^T A) = " << projection_.squaredNorm() << " differs from p = " << p;
    throw InputError(os.str());
  }
}

void TrainConfig::validate() const {
  (void)EntropyOrder(alpha);
  (void)KernelConfig(sigma);
  if (p < 1) throw InputError("TrainConfig: p must be at least 1");
  if (!(step_size > 0.0)) throw InputError("TrainConfig: step size must be positive");
  if (max_iters < 1) throw InputError("TrainConfig: max_iters must be positive");
  if (!(tol > 0.0)) throw InputError("TrainConfig: tol must be positive");
  if (truncate_m && *truncate_m < 1) throw InputError("TrainConfig: truncation m must be positive");
  if (max_halvings < 0) throw InputError("TrainConfig: max_halvings must be nonnegative");
}

DensityMatrix label_gram(const std::vector<Label>& labels) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  if (n < 1) throw InputError("label_gram: need at least one label");
  Matrix l(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      l(i, j) = labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)]
                    ? 1.0 / static_cast<double>(n)
                    : 0.0;
    }
  }
  return DensityMatrix(std::move(l));
}

namespace {

void check_shapes(const Matrix& a, const Dataset& data, const char* where) {
  if (a.rows() != data.dim() || a.cols() < 1) {
    detail::throw_dimension_mismatch(where, a.rows(), a.cols(), data.dim(), a.cols());
  }
}

Matrix same_label_mask(const std::vector<Label>& labels) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  Matrix mask(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      mask(i, j) = labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)] ? 1.0 : 0.0;
    }
  }
  return mask;
}

// Everything the objective and its gradient share at one point A. The joint
// matrix nK o L is K masked to same-label pairs, since nL is that 0/1 mask.
class CemlProblem {
public:
  CemlProblem(const Dataset& data, EntropyOrder alpha, double sigma)
      : data_(data), alpha_(alpha), sigma_(KernelConfig(sigma).sigma()),
        mask_(same_label_mask(data.labels())) {}

  [[nodiscard]] double objective(const Matrix& a) const {
    const Matrix k = kernel(a);
    const Matrix joint = k.cwiseProduct(mask_);
    return renyi_from_spectrum(eigvals_sym(SymmetricMatrix(joint)), alpha_) -
           renyi_from_spectrum(eigvals_sym(SymmetricMatrix(k)), alpha_);
  }

  [[nodiscard]] Matrix gradient(const Matrix& a, std::optional<Eigen::Index> m) const {
    const Matrix k = kernel(a);
    const EigenSystem es_k = eig_sym(SymmetricMatrix(k));
    const EigenSystem es_joint = eig_sym(SymmetricMatrix(k.cwiseProduct(mask_)));
    const Eigen::Index n = k.rows();
    const Eigen::Index keep = m ? std::min<Eigen::Index>(*m, n) : n;
    const Matrix grad_joint = entropy_gradient_truncated(es_joint, alpha_, keep).matrix();
    const Matrix grad_k = entropy_gradient_truncated(es_k, alpha_, keep).matrix();
    const Matrix p = (mask_.cwiseProduct(grad_joint) - grad_k).cwiseProduct(k);
    const Vector row_sums = p.rowwise().sum();
    Matrix laplacian = p;
    laplacian.diagonal() -= row_sums;
    const Matrix& x = data_.features();
    return (2.0 / (sigma_ * sigma_)) * (x.transpose() * (laplacian * (x * a)));
  }

private:
  [[nodiscard]] Matrix kernel(const Matrix& a) const {
    return gaussian_kernel_matrix(data_.features() * a, sigma_);
  }

  const Dataset& data_;
  EntropyOrder alpha_;
  double sigma_;
  Matrix mask_;
};

}  // namespace

EntropyValue ceml_objective(const Matrix& a, const Dataset& data, EntropyOrder alpha,
                            double sigma) {
  check_shapes(a, data, "ceml_objective");
  return {CemlProblem(data, alpha, sigma).objective(a)};
}

Matrix ceml_gradient(const Matrix& a, const Dataset& data, EntropyOrder alpha, double sigma,
                     std::optional<Eigen::Index> truncate_m) {
  check_shapes(a, data, "ceml_gradient");
  if (truncate_m && *truncate_m < 1) throw InputError("ceml_gradient: truncation m must be positive");
  return CemlProblem(data, alpha, sigma).gradient(a, truncate_m);
}

Matrix project_trace(const Matrix& a, Eigen::Index p) {
  if (p < 1) throw InputError("project_trace: p must be positive");
  const double norm2 = a.squaredNorm();
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw DegenerateError("project_trace: cannot rescale a zero matrix");
  }
  return a * std::sqrt(static_cast<double>(p) / norm2);
}

TrainResult train(const Dataset& data, const TrainConfig& config) {
  config.validate();
  if (config.p > data.dim()) {
    throw InputError("train: projection dimension p exceeds feature dimension d");
  }
  const EntropyOrder alpha(config.alpha);
  const CemlProblem problem(data, alpha, config.sigma);

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a(data.dim(), config.p);
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = normal(rng);
  }
  a = project_trace(a, config.p);

  TrainReport report;
  double f = problem.objective(a);
  report.objective_trace.push_back(f);
  if (!std::isfinite(f)) {
    report.final_objective = f;
    throw DivergenceError("train: non-finite objective at initialisation", report);
  }

  for (int it = 1; it <= config.max_iters; ++it) {
    report.iterations_run = it;
    const Matrix g = problem.gradient(a, config.truncate_m);
    double step = config.step_size;
    bool accepted = false;
    Matrix candidate;
    double f_candidate = f;
    for (int h = 0; h <= config.max_halvings; ++h, step *= 0.5) {
      candidate = project_trace(a - step * g, config.p);
      f_candidate = problem.objective(candidate);
      if (!std::isfinite(f_candidate)) {
        report.final_objective = f;
        throw DivergenceError("train: objective became non-finite", report);
      }
      if (f_candidate <= f) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // No descent along -g at any tried step: a stationary point for this
      // step schedule.
      report.converged = true;
      break;
    }
    const double decrease = f - f_candidate;
    a = std::move(candidate);
    f = f_candidate;
    report.objective_trace.push_back(f);
    if (decrease < config.tol) {
      report.converged = true;
      break;
    }
  }
  report.final_objective = f;
  return {MetricModel(std::move(a), alpha, config.sigma), std::move(report)};
}

Matrix transform(const MetricModel& model, const Matrix& x) {
  if (x.cols() != model.input_dim() && x.rows() > 0) {
    detail::throw_dimension_mismatch("transform", x.rows(), x.cols(), x.rows(), model.input_dim());
  }
  if (x.rows() == 0) return Matrix(0, model.p());
  return x * model.projection();
}

}  // namespace gramentropy
