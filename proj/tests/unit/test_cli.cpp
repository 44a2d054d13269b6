#include "random.hpp"

#include "gramentropy/entropy.hpp"
#include "gramentropy/eval.hpp"
#include "gramentropy/idkernels.hpp"
#include "gramentropy/io.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace gramentropy;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int status = -1;
  std::string out;
  json doc;
};

CliRun cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " GRAMENTROPY_CLI_PATH " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.doc = json::parse(r.out, nullptr, false);
  return r;
}

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gramentropy_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write_matrix(const std::string& name, const Matrix& m) const {
    write_matrix_csv(fs::path(path(name)), m);
    return path(name);
  }

  static json without_duration(json doc) {
    doc["manifest"].erase("duration_seconds");
    return doc;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, EntropyExamples) {
  CliRun r = cli("entropy --gram " + write_matrix("i4.csv", Matrix::Identity(4, 4) / 4.0) + " --alpha 2");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_DOUBLE_EQ(r.doc["entropy_bits"].get<double>(), 2.0);
  EXPECT_EQ(r.doc["n"], 4);
  EXPECT_EQ(r.doc["manifest"]["command"], "entropy");
  EXPECT_EQ(r.doc["manifest"]["inputs"].size(), 1u);

  r = cli("entropy --gram " + write_matrix("ones.csv", Matrix::Constant(5, 5, 0.2)) + " --alpha 2");
  ASSERT_EQ(r.status, 0);
  EXPECT_NEAR(r.doc["entropy_bits"].get<double>(), 0.0, 1e-12);
}

TEST_F(CliTest, EntropyFromFeaturesMatchesLibrary) {
  testkit::Rng rng(1);
  const Matrix x = testkit::gaussian_matrix(20, 3, rng);
  const std::string file = write_matrix("x.csv", x);
  const Matrix reread = read_matrix_csv(fs::path(file));
  const double expected =
      renyi_entropy(gaussian_gram(reread, KernelConfig(std::sqrt(3.0))), EntropyOrder(1.01)).bits;
  const CliRun r = cli("entropy --features " + file + " --sigma 1.7320508075688772 --alpha 1.01");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.doc["entropy_bits"].get<double>(), expected);
}

TEST_F(CliTest, EntropyErrors) {
  {
    std::ofstream bad(path("bad.csv"));
    bad << "1,2\nx,4\n";
  }
  EXPECT_EQ(cli("entropy --gram " + path("bad.csv") + " --alpha 2").status, 2);
  Matrix indefinite(2, 2);
  indefinite << 1.5, 0.0, 0.0, -0.5;
  EXPECT_EQ(cli("entropy --gram " + write_matrix("neg.csv", indefinite) + " --alpha 2").status, 3);
  EXPECT_EQ(cli("entropy --gram " + path("missing.csv") + " --alpha 2").status, 2);
  EXPECT_EQ(cli("entropy --gram " + write_matrix("i.csv", Matrix::Identity(2, 2) / 2.0) + " --alpha 1").status, 2);
  EXPECT_EQ(cli("entropy --bogus-flag").status, 2);
}

TEST_F(CliTest, CheckIdExamples) {
  CliRun r = cli("check-id " + write_matrix("ones.csv", Matrix::Ones(4, 4)));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.doc["infinitely_divisible"], true);
  EXPECT_EQ(r.doc["route"], "log");

  testkit::Rng rng(2);
  const Matrix g = 10.0 * testkit::direct_gaussian_gram(testkit::gaussian_matrix(10, 2, rng), 1.0);
  EXPECT_EQ(cli("check-id " + write_matrix("gauss.csv", g)).status, 0);

  r = cli("check-id " + write_matrix("witness.csv", testkit::find_non_id_witness(1)));
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.doc["infinitely_divisible"], false);
  EXPECT_GT(r.doc["worst_eigenvalue"].get<double>(), 0.0);

  Matrix zero_entry = Matrix::Identity(2, 2);
  EXPECT_EQ(cli("check-id " + write_matrix("z.csv", zero_entry)).status, 3);
  EXPECT_EQ(cli("check-id " + path("missing.csv")).status, 2);
}

TEST_F(CliTest, GradcheckPasses) {
  CliRun r = cli("gradcheck --sizes 4,8 --entropy-cases 3 --ceml-cases 2");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(r.doc["passed"], true);
  EXPECT_LE(r.doc["max_entropy_rel_error"].get<double>(), 1e-5);
  EXPECT_GE(r.doc["min_ceml_cosine"].get<double>(), 0.999);

  r = cli("gradcheck --alphas 2 --entropy-cases 3 --ceml-cases 2");
  EXPECT_EQ(r.status, 0);
  r = cli("gradcheck --alphas 1.01 --sizes 6 --entropy-cases 2 --ceml-cases 1");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.doc["manifest"]["config"]["adversarial"], true);
}

TEST_F(CliTest, TrainSameLabels) {
  testkit::Rng rng(3);
  const Dataset d(testkit::gaussian_matrix(10, 3, rng), std::vector<Label>(10, 0));
  write_dataset_csv(fs::path(path("same.csv")), d);
  const CliRun r = cli("train " + path("same.csv"));
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.doc["report"]["final_objective"].get<double>(), 0.0);
  EXPECT_EQ(r.doc["report"]["iterations_run"], 1);
}

TEST_F(CliTest, TrainSyntheticReportsDirection) {
  ASSERT_EQ(cli("synth --n-per-class 30 --out " + path("s.csv")).status, 0);
  const CliRun r = cli("train " + path("s.csv") + " --alpha 1.01 --p 1 --sigma 6.5 --seed 3");
  ASSERT_EQ(r.status, 0);
  ASSERT_TRUE(r.doc.contains("direction"));
  EXPECT_LT(r.doc["direction"]["angle_degrees"].get<double>(), 45.0);
  EXPECT_EQ(r.doc["direction"]["class"], "horizontal");
}

TEST_F(CliTest, TrainIrisModelRoundTrips) {
  const std::string iris = GRAMENTROPY_DATA_DIR "/iris.csv";
  const CliRun r = cli("train " + iris + " --standardize --p 3 --alpha 1.01 --sigma 1.7320508075688772 --max-iters 30 --out " +
                    path("m.txt"));
  ASSERT_EQ(r.status, 0) << r.out;
  const MetricModel m = load_model(fs::path(path("m.txt")));
  save_model(fs::path(path("m2.txt")), m);
  std::ifstream a(path("m.txt")), b(path("m2.txt"));
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(m.p(), 3);
  EXPECT_EQ(m.projection()(0, 0), r.doc["model"]["projection"][0][0].get<double>());
}

TEST_F(CliTest, EvalBaselinesCompareAndDeterminism) {
  testkit::Rng rng(4);
  Matrix x = testkit::gaussian_matrix(40, 2, rng);
  std::vector<Label> labels(40);
  for (int i = 0; i < 40; ++i) {
    labels[static_cast<std::size_t>(i)] = i % 2;
    x(i, 0) += 20.0 * (i % 2);
  }
  write_dataset_csv(fs::path(path("blobs.csv")), Dataset(x, labels));
  CliRun r = cli("eval " + path("blobs.csv") + " --method euclidean");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.doc["mean_error"].get<double>(), 0.0);
  EXPECT_EQ(r.doc["per_run_errors"].size(), 10u);

  const std::string iris = GRAMENTROPY_DATA_DIR "/iris.csv";
  const std::string args = "eval " + iris + " --standardize --p 3 --sigma 1.7320508075688772 --runs 2 --max-iters 20 --compare";
  const CliRun first = cli(args);
  ASSERT_EQ(first.status, 0) << first.out;
  EXPECT_EQ(first.doc["method"], "ceml");
  EXPECT_TRUE(first.doc.contains("euclidean"));
  EXPECT_TRUE(first.doc["euclidean"].contains("mean_error"));
  const CliRun second = cli(args, "GRAMENTROPY_THREADS=1");
  EXPECT_EQ(without_duration(first.doc), without_duration(second.doc));

  r = cli("eval " + iris + " --method inverse-covariance --runs 2");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(cli("eval " + iris + " --method nonsense").status, 2);
}

TEST_F(CliTest, EvalWithModelFile) {
  const std::string iris = GRAMENTROPY_DATA_DIR "/iris.csv";
  ASSERT_EQ(cli("train " + iris + " --p 2 --max-iters 5 --out " + path("m.txt")).status, 0);
  const CliRun r = cli("eval " + iris + " --model " + path("m.txt") + " --runs 2");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.doc["method"], "model");
  EXPECT_EQ(r.doc["manifest"]["inputs"].size(), 2u);
  EXPECT_EQ(cli("eval " + std::string(GRAMENTROPY_DATA_DIR "/wine.csv") + " --model " + path("m.txt")).status, 2);
}

TEST_F(CliTest, AlphaStudySmall) {
  const CliRun r = cli("alpha-study --alphas 1.01,5 --repeats 3 --out " + path("study.csv"));
  ASSERT_EQ(r.status, 0);
  ASSERT_EQ(r.doc["table"].size(), 2u);
  EXPECT_EQ(r.doc["table"][0]["horizontal"].get<int>() + r.doc["table"][0]["vertical"].get<int>(), 3);
  std::ifstream csv(path("study.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) ++lines;
  EXPECT_EQ(lines, 7);
}

TEST_F(CliTest, SynthDigestRowsAndRoundTrip) {
  const CliRun a = cli("synth --out " + path("a.csv"));
  const CliRun b = cli("synth --out " + path("b.csv"));
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.doc["sha256"], b.doc["sha256"]);
  EXPECT_EQ(a.doc["rows"], 100);
  EXPECT_TRUE(read_dataset_csv(fs::path(path("a.csv"))) == synth_bimodal(SyntheticSpec{}));

  const CliRun big = cli("synth --n-per-class 100 --out " + path("c.csv"));
  EXPECT_EQ(big.doc["rows"], 200);
  EXPECT_EQ(read_dataset_csv(fs::path(path("c.csv"))).size(), 200);

  EXPECT_EQ(cli("synth --n-per-class 0 --out " + path("d.csv")).status, 2);
  EXPECT_EQ(cli("synth").status, 2);
}
