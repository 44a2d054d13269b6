#include "properties.hpp"

#include "gramentropy/eval.hpp"
#include "gramentropy/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace gramentropy;
using namespace gramentropy::testkit;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

Outcome from_check(const CheckResult& r) {
  std::ostringstream os;
  os << r.cases << " cases";
  if (!r.passed) os << "; " << r.first_failure;
  if (!r.note.empty()) os << "; " << r.note;
  return {r.passed, os.str()};
}

Outcome alpha_trend() {
  AlphaStudyOptions o;
  o.train = alpha_study_train_defaults();
  const auto rows = alpha_study(o);
  std::ostringstream os;
  int inversions = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    os << (i ? ", " : "") << "alpha=" << rows[i].alpha << " H/V " << rows[i].horizontal << "/" << rows[i].vertical;
    if (i > 0 && rows[i].horizontal > rows[i - 1].horizontal) ++inversions;
  }
  const bool ok = rows.front().horizontal >= 48 && rows.back().vertical >= 48 && inversions <= 1;
  return {ok, os.str()};
}

Outcome uci() {
  TrainConfig config;
  config.p = 3;
  config.alpha = 1.01;
  config.sigma = std::sqrt(3.0);
  CVOptions cv;
  cv.k = 4;
  cv.folds = 2;
  cv.runs = 10;
  bool ok = true;
  bool strictly_better = false;
  std::ostringstream os;
  const char* sep = "";
  for (const char* name : {"iris", "wine"}) {
    const Dataset raw = read_dataset_csv(std::filesystem::path(GRAMENTROPY_DATA_DIR) / (std::string(name) + ".csv"));
    const Dataset data = standardize(raw).data;
    const double ceml = cross_validate(data, config, cv).mean_error;
    const double euclid = baseline_euclidean(data, cv).mean_error;
    ok = ok && ceml <= euclid + 0.02;
    strictly_better = strictly_better || ceml < euclid;
    os << sep << name << " ceml " << ceml << " vs euclidean " << euclid;
    sep = "; ";
  }
  return {ok && strictly_better, os.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "entropy axioms", 120.0, [] { return from_check(check_entropy_axioms(500, 1)); }},
      {2, "joint/conditional entropy and majorization", 60.0,
       [] { return from_check(check_joint_conditional(200, 2)); }},
      {3, "infinite divisibility", 60.0, [] { return from_check(check_divisibility(50, 3)); }},
      {4, "gradient oracles", 120.0,
       [] {
         const CheckResult e = check_entropy_gradients(100, 4);
         const CheckResult c = check_ceml_gradients(20, 40);
         Outcome o{e.passed && c.passed, ""};
         o.detail = "entropy " + from_check(e).detail + ", ceml " + from_check(c).detail;
         return o;
       }},
      {5, "alpha study direction counts", 600.0, alpha_trend},
      {6, "UCI protocol against the Euclidean baseline", 300.0, uci},
      {7, "second-order trace identity", 10.0, [] { return from_check(check_second_order_identity(100, 7)); }},
      {8, "embedding round trip", 30.0, [] { return from_check(check_embedding_round_trip(20, 8)); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.budget_seconds;
    const bool passed = o.passed && in_time;
    failures += !passed;
    std::printf("%s criterion %d: %s (%.1fs of %.0fs) %s%s\n", passed ? "PASS" : "FAIL", c.id, c.name, seconds,
                c.budget_seconds, o.detail.c_str(), in_time ? "" : " [over time budget]");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
