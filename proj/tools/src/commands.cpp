#include "commands.hpp"

#include "manifest.hpp"

#include "gramentropy/ceml.hpp"
#include "gramentropy/entropy.hpp"
#include "gramentropy/eval.hpp"
#include "gramentropy/gradcheck.hpp"
#include "gramentropy/idkernels.hpp"
#include "gramentropy/io.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>

namespace gramentropy::cli {

namespace {

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

// Prints the document (manifest appended) and mirrors it to `out` if set.
void emit(json doc, const RunManifest& manifest, const std::string& out = {}) {
  doc["manifest"] = manifest.to_json();
  const std::string text = doc.dump(2) + "\n";
  std::cout << text;
  if (!out.empty()) write_text(out, text);
}

struct TrainFlags {
  TrainConfig config;
  long truncate_m = 0;

  void add(CLI::App* sub) {
    sub->add_option("--alpha", config.alpha, "Entropy order")->capture_default_str();
    sub->add_option("--sigma", config.sigma, "Gaussian kernel bandwidth")->capture_default_str();
    sub->add_option("--p", config.p, "Projection dimension")->capture_default_str();
    sub->add_option("--step", config.step_size, "Initial step size")->capture_default_str();
    sub->add_option("--max-iters", config.max_iters, "Iteration cap")->capture_default_str();
    sub->add_option("--tol", config.tol, "Stop when the objective decrease falls below this")
        ->capture_default_str();
    sub->add_option("--truncate-m", truncate_m,
                    "Keep only the m leading eigenpairs in the gradient (0 = all)");
  }

  [[nodiscard]] TrainConfig resolved() const {
    TrainConfig c = config;
    if (truncate_m > 0) c.truncate_m = truncate_m;
    return c;
  }
};

json train_config_json(const TrainConfig& c) {
  json j = {{"alpha", c.alpha},         {"sigma", c.sigma}, {"p", c.p},
            {"step", c.step_size},      {"max_iters", c.max_iters},
            {"tol", c.tol},             {"seed", c.seed}};
  j["truncate_m"] = c.truncate_m ? json(*c.truncate_m) : json(nullptr);
  return j;
}

json report_json(const TrainReport& r) {
  return {{"iterations_run", r.iterations_run},
          {"final_objective", r.final_objective},
          {"converged", r.converged},
          {"objective_trace", r.objective_trace}};
}

void add_spec_flags(CLI::App* sub, SyntheticSpec& spec) {
  sub->add_option("--n-per-class", spec.n_per_class, "Samples per class")->capture_default_str();
  sub->add_option("--modes", spec.modes_per_class, "Horizontal modes per class")->capture_default_str();
  sub->add_option("--spacing", spec.mode_spacing, "Distance between neighbouring modes")
      ->capture_default_str();
  sub->add_option("--spread", spec.mode_spread, "Horizontal std within a mode")->capture_default_str();
  sub->add_option("--gap", spec.vertical_gap, "Vertical distance between class means")
      ->capture_default_str();
}

json spec_json(const SyntheticSpec& s) {
  return {{"n_per_class", s.n_per_class}, {"modes_per_class", s.modes_per_class},
          {"mode_spacing", s.mode_spacing}, {"mode_spread", s.mode_spread},
          {"vertical_gap", s.vertical_gap}, {"seed", s.seed}};
}

json cv_json(const CVResult& r) {
  return {{"mean_error", r.mean_error},
          {"per_run_errors", r.per_run_errors},
          {"runs", r.runs},
          {"folds", r.folds}};
}

Dataset maybe_standardize(Dataset data, bool enabled) {
  if (!enabled) return data;
  StandardizeResult s = standardize(data);
  for (const auto& w : s.warnings) std::cerr << "gramentropy: warning: " << w << '\n';
  return std::move(s.data);
}

// ---------------------------------------------------------------- entropy

void add_entropy(CLI::App& app, std::function<int()>& run) {
  struct Args {
    std::string gram, features, out;
    double alpha = 0.0;
    double sigma = 0.0;
    bool normalize = false;
  };
  auto a = std::make_shared<Args>();
  auto* sub = app.add_subcommand("entropy", "Renyi entropy of a Gram matrix (bits)");
  auto* g = sub->add_option("--gram", a->gram, "Unit-trace PSD Gram matrix CSV")->check(CLI::ExistingFile);
  auto* f = sub->add_option("--features", a->features, "Sample-per-row feature CSV")->check(CLI::ExistingFile);
  g->excludes(f);
  sub->add_option("--alpha", a->alpha, "Entropy order")->required();
  sub->add_option("--sigma", a->sigma, "Kernel bandwidth for --features");
  sub->add_flag("--normalize", a->normalize, "Divide the Gram matrix by its trace first");
  sub->add_option("--out", a->out, "Also write the JSON here");
  sub->callback([a, &run] {
    run = [a] {
      if (a->gram.empty() == a->features.empty()) {
        throw InputError("entropy: pass exactly one of --gram or --features");
      }
      RunManifest manifest("entropy");
      const EntropyOrder order(a->alpha);
      json config = {{"alpha", a->alpha}};
      Matrix k;
      if (!a->gram.empty()) {
        manifest.add_input(a->gram);
        k = read_matrix_csv(std::filesystem::path(a->gram));
        if (a->normalize) {
          const double tr = k.trace();
          if (!(tr > 0.0)) throw InputError("entropy: cannot normalise a Gram matrix with trace <= 0");
          k /= tr;
        }
        config["gram"] = a->gram;
        config["normalize"] = a->normalize;
      } else {
        if (!(a->sigma > 0.0)) throw InputError("entropy: --features needs --sigma > 0");
        manifest.add_input(a->features);
        const Matrix x = read_matrix_csv(std::filesystem::path(a->features));
        k = gaussian_gram(x, KernelConfig(a->sigma)).matrix();
        config["features"] = a->features;
        config["sigma"] = a->sigma;
      }
      manifest.set_config(config);
      const DensityMatrix rho{SymmetricMatrix(k)};
      const EntropyValue s = renyi_entropy(rho, order);
      emit({{"entropy_bits", s.bits}, {"n", rho.size()}, {"alpha", a->alpha}}, manifest, a->out);
      return kExitOk;
    };
  });
}

// --------------------------------------------------------------- check-id

void add_check_id(CLI::App& app, std::function<int()>& run) {
  struct Args {
    std::string matrix, out;
    double tol = 1e-8;
  };
  auto a = std::make_shared<Args>();
  auto* sub = app.add_subcommand("check-id", "Test a kernel matrix for infinite divisibility");
  sub->add_option("matrix", a->matrix, "Symmetric matrix CSV")->required()->check(CLI::ExistingFile);
  sub->add_option("--tol", a->tol, "Eigenvalue tolerance")->capture_default_str();
  sub->add_option("--out", a->out, "Also write the JSON here");
  sub->callback([a, &run] {
    run = [a] {
      RunManifest manifest("check-id");
      manifest.add_input(a->matrix);
      manifest.set_config({{"matrix", a->matrix}, {"tol", a->tol}});
      const SymmetricMatrix m(read_matrix_csv(std::filesystem::path(a->matrix)));
      const DivisibilityReport r = check_infinite_divisibility(m, a->tol);
      emit({{"infinitely_divisible", r.infinitely_divisible},
            {"worst_eigenvalue", r.log_route_max_eigenvalue},
            {"route", "log"},
            {"power_route",
             {{"passed", r.power_route_passed},
              {"min_eigenvalue", r.power_route_min_eigenvalue},
              {"worst_exponent", r.power_route_worst_exponent}}}},
           manifest, a->out);
      return r.infinitely_divisible ? kExitOk : kExitFalse;
    };
  });
}

// -------------------------------------------------------------- gradcheck

void add_gradcheck(CLI::App& app, std::function<int()>& run) {
  struct Args {
    GradcheckOptions options;
    bool no_adversarial = false;
    std::string out;
  };
  auto a = std::make_shared<Args>();
  auto* sub = app.add_subcommand("gradcheck", "Finite-difference check of the analytic gradients");
  sub->add_option("--seed", a->options.seed, "Base seed")->capture_default_str();
  sub->add_option("--sizes", a->options.sizes, "Matrix sizes")->delimiter(',')->capture_default_str();
  sub->add_option("--alphas", a->options.alphas, "Entropy orders")->delimiter(',')->capture_default_str();
  sub->add_option("--entropy-cases", a->options.entropy_cases, "Cases per (size, alpha)")
      ->capture_default_str();
  sub->add_option("--ceml-cases", a->options.ceml_cases, "CEML cases per alpha > 1")
      ->capture_default_str();
  sub->add_flag("--no-adversarial", a->no_adversarial, "Skip near-rank-deficient cases");
  sub->add_option("--out", a->out, "Also write the JSON here");
  sub->callback([a, &run] {
    run = [a] {
      GradcheckOptions o = a->options;
      o.adversarial = !a->no_adversarial;
      for (double alpha : o.alphas) (void)EntropyOrder(alpha);
      for (int n : o.sizes) {
        if (n < 2) throw InputError("gradcheck: sizes must be at least 2");
      }
      RunManifest manifest("gradcheck");
      manifest.set_seed(o.seed);
      manifest.set_config({{"sizes", o.sizes},
                           {"alphas", o.alphas},
                           {"entropy_cases", o.entropy_cases},
                           {"ceml_cases", o.ceml_cases},
                           {"adversarial", o.adversarial},
                           {"entropy_tol", o.entropy_tol},
                           {"ceml_min_cosine", o.ceml_min_cosine}});
      const GradcheckReport r = run_gradcheck(o);

      json failures = json::array();
      for (const auto& c : r.cases) {
        if (!c.passed) failures.push_back({{"suite", c.suite}, {"n", c.n}, {"alpha", c.alpha}, {"value", c.value}});
      }
      const auto count = [&](const std::string& suite) {
        return std::count_if(r.cases.begin(), r.cases.end(), [&](const auto& c) { return c.suite.rfind(suite, 0) == 0; });
      };
      emit({{"passed", r.passed},
            {"entropy_cases", count("entropy")},
            {"ceml_cases", count("ceml")},
            {"max_entropy_rel_error", r.max_entropy_rel_error},
            {"min_ceml_cosine", r.min_ceml_cosine},
            {"failures", failures}},
           manifest, a->out);
      if (!r.passed) {
        std::cerr << "gramentropy: gradcheck failed; worst entropy relative error "
                  << r.max_entropy_rel_error << ", worst CEML cosine " << r.min_ceml_cosine << '\n';
        return kExitFalse;
      }
      return kExitOk;
    };
  });
}

// ------------------------------------------------------------------ train

void add_train(CLI::App& app, std::function<int()>& run) {
  struct Args {
    std::string data, out;
    TrainFlags flags;
    std::uint64_t seed = 0;
    bool standardize = false;
  };
  auto a = std::make_shared<Args>();
  auto* sub = app.add_subcommand("train", "Learn a CEML projection");
  sub->add_option("data", a->data, "Dataset CSV (label in the last column)")->required()->check(CLI::ExistingFile);
  a->flags.add(sub);
  sub->add_option("--seed", a->seed, "Initialisation seed")->capture_default_str();
  sub->add_flag("--standardize", a->standardize, "Standardise features first");
  sub->add_option("--out", a->out, "Model file to write");
  sub->callback([a, &run] {
    run = [a] {
      TrainConfig config = a->flags.resolved();
      config.seed = a->seed;
      RunManifest manifest("train");
      manifest.add_input(a->data);
      manifest.set_seed(a->seed);
      json cfg = train_config_json(config);
      cfg["data"] = a->data;
      cfg["standardize"] = a->standardize;
      cfg["out"] = a->out;
      manifest.set_config(cfg);

      const Dataset data = maybe_standardize(read_dataset_csv(std::filesystem::path(a->data)), a->standardize);
      TrainResult result = [&] {
        try {
          return train(data, config);
        } catch (const DivergenceError& e) {
          emit({{"error", e.what()}, {"report", report_json(e.report())}}, manifest);
          throw;
        }
      }();
      if (!a->out.empty()) save_model(std::filesystem::path(a->out), result.model);

      json doc = {{"report", report_json(result.report)},
                  {"model",
                   {{"d", result.model.input_dim()},
                    {"p", result.model.p()},
                    {"alpha", result.model.alpha().value()},
                    {"sigma", result.model.sigma()},
                    {"projection", matrix_json(result.model.projection())}}}};
      if (result.model.input_dim() == 2 && result.model.p() == 1) {
        const double angle = direction_angle(result.model.projection());
        doc["direction"] = {{"angle_degrees", angle}, {"class", to_string(classify_direction(angle))}};
      }
      emit(std::move(doc), manifest);
      return kExitOk;
    };
  });
}

// ------------------------------------------------------------------- eval

void add_eval(CLI::App& app, std::function<int()>& run) {
  struct Args {
    std::string data, model, method = "ceml", out;
    TrainFlags flags;
    CVOptions cv;
    bool compare = false;
    bool standardize = false;
  };
  auto a = std::make_shared<Args>();
  auto* sub = app.add_subcommand("eval", "Repeated stratified k-fold kNN evaluation");
  sub->add_option("data", a->data, "Dataset CSV (label in the last column)")->required()->check(CLI::ExistingFile);
  auto* model = sub->add_option("--model", a->model, "Evaluate a fixed model file")->check(CLI::ExistingFile);
  auto* method = sub->add_option("--method", a->method, "ceml, euclidean or inverse-covariance")
                     ->check(CLI::IsMember({"ceml", "euclidean", "inverse-covariance"}))
                     ->capture_default_str();
  model->excludes(method);
  a->flags.add(sub);
  sub->add_option("--k", a->cv.k, "Neighbours")->capture_default_str();
  sub->add_option("--folds", a->cv.folds, "Folds")->capture_default_str();
  sub->add_option("--runs", a->cv.runs, "Repetitions")->capture_default_str();
  sub->add_option("--seed", a->cv.seed, "Base seed")->capture_default_str();
  sub->add_flag("--compare", a->compare, "Also report the Euclidean baseline");
  sub->add_flag("--standardize", a->standardize, "Standardise features first");
  sub->add_option("--out", a->out, "Also write the JSON here");
  sub->callback([a, &run] {
    run = [a] {
      RunManifest manifest("eval");
      manifest.add_input(a->data);
      manifest.set_seed(a->cv.seed);
      const TrainConfig config = a->flags.resolved();
      json cfg = {{"data", a->data},
                  {"k", a->cv.k},
                  {"folds", a->cv.folds},
                  {"runs", a->cv.runs},
                  {"standardize", a->standardize},
                  {"compare", a->compare}};
      std::string label = a->method;
      if (!a->model.empty()) {
        manifest.add_input(a->model);
        cfg["model"] = a->model;
        label = "model";
      } else {
        cfg["method"] = a->method;
        if (a->method == "ceml") cfg["train"] = train_config_json(config);
      }
      manifest.set_config(cfg);

      const Dataset data = maybe_standardize(read_dataset_csv(std::filesystem::path(a->data)), a->standardize);
      CVResult result;
      if (!a->model.empty()) {
        const MetricModel m = load_model(std::filesystem::path(a->model));
        if (m.input_dim() != data.dim()) {
          detail::throw_dimension_mismatch("eval --model", m.input_dim(), m.p(), data.dim(), m.p());
        }
        result = cross_validate_with(
            data, [&m](const Dataset&, std::uint64_t) -> std::optional<Matrix> { return m.projection(); }, a->cv);
      } else if (a->method == "ceml") {
        result = cross_validate(data, config, a->cv);
      } else if (a->method == "euclidean") {
        result = baseline_euclidean(data, a->cv);
      } else {
        result = baseline_inverse_covariance(data, a->cv);
      }
      json doc = {{"dataset", a->data}, {"method", label}};
      doc.update(cv_json(result));
      doc["config"] = cfg;
      if (a->compare) {
        json base = {{"dataset", a->data}, {"method", "euclidean"}};
        base.update(cv_json(baseline_euclidean(data, a->cv)));
        doc["euclidean"] = std::move(base);
      }
      emit(std::move(doc), manifest, a->out);
      return kExitOk;
    };
  });
}

// ------------------------------------------------------------ alpha-study

void add_alpha_study(CLI::App& app, std::function<int()>& run) {
  struct Args {
    AlphaStudyOptions options;
    std::string out;
  };
  auto a = std::make_shared<Args>();
  a->options.train = alpha_study_train_defaults();
  auto* sub = app.add_subcommand("alpha-study", "Direction of 1-D CEML solutions versus alpha");
  sub->add_option("--alphas", a->options.alphas, "Entropy orders")->delimiter(',')->capture_default_str();
  sub->add_option("--repeats", a->options.repeats, "Seeded runs per alpha")->capture_default_str();
  sub->add_option("--sigma", a->options.train.sigma, "Kernel bandwidth")->capture_default_str();
  sub->add_option("--step", a->options.train.step_size, "Initial step size")->capture_default_str();
  sub->add_option("--max-iters", a->options.train.max_iters, "Iteration cap")->capture_default_str();
  sub->add_option("--tol", a->options.train.tol, "Objective decrease tolerance")->capture_default_str();
  sub->add_option("--seed", a->options.data.seed, "Synthetic data seed")->capture_default_str();
  add_spec_flags(sub, a->options.data);
  sub->add_option("--out", a->out, "Per-run CSV (alpha,run,angle_degrees,direction,final_objective)");
  sub->callback([a, &run] {
    run = [a] {
      const AlphaStudyOptions& o = a->options;
      RunManifest manifest("alpha-study");
      manifest.set_seed(o.data.seed);
      manifest.set_config({{"alphas", o.alphas},
                           {"repeats", o.repeats},
                           {"data", spec_json(o.data)},
                           {"train", train_config_json(o.train)},
                           {"out", a->out}});
      const std::vector<AlphaStudyRow> rows = alpha_study(o);

      json table = json::array();
      for (const auto& r : rows) {
        const double mean_obj = std::accumulate(r.final_objectives.begin(), r.final_objectives.end(), 0.0) /
                                static_cast<double>(r.final_objectives.size());
        table.push_back({{"alpha", r.alpha},
                         {"horizontal", r.horizontal},
                         {"vertical", r.vertical},
                         {"mean_final_objective", mean_obj}});
      }
      if (!a->out.empty()) {
        std::ofstream csv(a->out);
        if (!csv) throw InputError("cannot write " + a->out);
        csv << "alpha,run,angle_degrees,direction,final_objective\n";
        for (const auto& r : rows) {
          for (std::size_t i = 0; i < r.angles.size(); ++i) {
            csv << format_real(r.alpha) << ',' << i << ',' << format_real(r.angles[i]) << ','
                << to_string(classify_direction(r.angles[i])) << ',' << format_real(r.final_objectives[i])
                << '\n';
          }
        }
      }
      emit({{"table", table}}, manifest);
      return kExitOk;
    };
  });
}

// ------------------------------------------------------------------ synth

void add_synth(CLI::App& app, std::function<int()>& run) {
  struct Args {
    SyntheticSpec spec;
    std::string out;
  };
  auto a = std::make_shared<Args>();
  auto* sub = app.add_subcommand("synth", "Write the two-class planar dataset");
  add_spec_flags(sub, a->spec);
  sub->add_option("--seed", a->spec.seed, "Data seed")->capture_default_str();
  sub->add_option("--out", a->out, "Output CSV")->required();
  sub->callback([a, &run] {
    run = [a] {
      RunManifest manifest("synth");
      manifest.set_seed(a->spec.seed);
      json cfg = spec_json(a->spec);
      cfg["out"] = a->out;
      manifest.set_config(cfg);
      const Dataset d = synth_bimodal(a->spec);
      write_dataset_csv(std::filesystem::path(a->out), d);
      emit({{"rows", d.size()}, {"output", a->out}, {"sha256", sha256_file(a->out)}}, manifest);
      return kExitOk;
    };
  });
}

}  // namespace

void register_commands(CLI::App& app, std::function<int()>& run) {
  add_entropy(app, run);
  add_check_id(app, run);
  add_gradcheck(app, run);
  add_train(app, run);
  add_eval(app, run);
  add_alpha_study(app, run);
  add_synth(app, run);
}

}  // namespace gramentropy::cli
