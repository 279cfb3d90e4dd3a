#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "sgdlab/core/error.hpp"
#include "sgdlab/core/hash.hpp"
#include "sgdlab/expcli/config.hpp"
#include "sgdlab/expcli/runner.hpp"
#include "sgdlab/expcli/sharpness.hpp"

namespace fs = std::filesystem;
using namespace sgdlab;

namespace {

const char* kEscape = R"(
kind: escape-time
seed: 3
landscape:
  kind: double-well
  barrier_height: 0.25
schedule:
  kind: constant
  gamma: 0.25
  batch: 1
params:
  trajectories: 20
  dt: 0.05
)";

const char* kStationary = R"(
kind: stationary-prob
seed: 4
landscape:
  kind: multiwell
  wells:
    - {location: [-0.5], eigenvalues: [4.5]}
    - {location: [0.5], eigenvalues: [12.5]}
params:
  eta: 6
  epsilon: 0.1
)";

std::vector<std::string> problems_of(const nlohmann::json& doc) {
  try {
    config_from_json(doc);
  } catch (const ValidationError& e) {
    return e.problems();
  }
  return {};
}

bool has_problem(const std::vector<std::string>& problems, const std::string& field) {
  return std::any_of(problems.begin(), problems.end(),
                     [&](const std::string& p) { return p.rfind(field, 0) == 0; });
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sgdlab_unit_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST(Config, KindNamesRoundTrip) {
  for (const char* name : {"simulate-sde", "simulate-sgd", "fokker-planck", "escape-time", "escape-sweep",
                           "stationary-prob", "occupation-ratio", "appendix-h", "verify-noise",
                           "check-assumptions", "sharpness-toy"}) {
    EXPECT_EQ(to_string(experiment_kind_from_string(name)), name);
  }
  EXPECT_THROW(experiment_kind_from_string("nope"), std::invalid_argument);
}

TEST(Config, YamlAndJsonAgree) {
  const auto a = config_from_json(parse_config_text(kEscape));
  const auto b = config_from_json(parse_config_text(a.resolved().dump()));
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_EQ(a.kind, ExperimentKind::EscapeTime);
  EXPECT_EQ(a.seed, 3u);
  // Defaults are filled in.
  EXPECT_TRUE(a.params.contains("from"));
  EXPECT_TRUE(a.params.contains("to"));
}

TEST(Config, QuotedScalarsStayStrings) {
  const auto j = parse_config_text("a: '12'\nb: 12\nc: true\n");
  EXPECT_TRUE(j.at("a").is_string());
  EXPECT_TRUE(j.at("b").is_number_integer());
  EXPECT_TRUE(j.at("c").is_boolean());
}

TEST(Config, NonPositiveGammaNamesField) {
  auto doc = parse_config_text(kEscape);
  doc["schedule"]["gamma"] = 0.0;
  EXPECT_TRUE(has_problem(problems_of(doc), "schedule.gamma"));
  doc["schedule"]["gamma"] = -0.5;
  EXPECT_TRUE(has_problem(problems_of(doc), "schedule.gamma"));
}

TEST(Config, ListsEveryProblem) {
  auto doc = parse_config_text(kEscape);
  doc.erase("seed");
  doc["params"]["dt"] = 5.0;
  doc["params"]["bogus"] = 1;
  doc["params"]["to"] = 7;
  const auto p = problems_of(doc);
  EXPECT_TRUE(has_problem(p, "seed"));
  EXPECT_TRUE(has_problem(p, "params.dt"));
  EXPECT_TRUE(has_problem(p, "params.bogus"));
  EXPECT_TRUE(has_problem(p, "params.to"));
}

TEST(Config, KindSpecificRequirements) {
  auto doc = parse_config_text(kStationary);
  doc["params"].erase("eta");
  EXPECT_TRUE(has_problem(problems_of(doc), "params.eta"));

  auto unknown = parse_config_text(kStationary);
  unknown["kind"] = "teleport";
  EXPECT_TRUE(has_problem(problems_of(unknown), "kind"));

  auto extra = parse_config_text(kStationary);
  extra["schedule"] = {{"kind", "constant"}, {"gamma", 0.1}, {"batch", 1}};
  EXPECT_TRUE(has_problem(problems_of(extra), "schedule"));
}

TEST(Config, EmpiricalLandscapeIsSeeded) {
  const nlohmann::json spec = {{"kind", "empirical"}, {"regression", "logistic"}, {"samples", 200},
                               {"dimension", 3},      {"l2", 0.01},               {"data_seed", 5}};
  const auto a = build_empirical(spec);
  const auto b = build_empirical(spec);
  EXPECT_EQ(a.targets(), b.targets());
  EXPECT_EQ(a.true_weights(), b.true_weights());
  EXPECT_EQ(a.dimension(), 3);
}

TEST_F(TempDir, RunWritesManifestWithChecksums) {
  const auto config = config_from_json(parse_config_text(kStationary));
  RunOptions opt;
  opt.output_dir = dir_;
  const fs::path run = run_experiment(config, opt);
  EXPECT_EQ(run.parent_path(), dir_);
  EXPECT_EQ(run.filename().string().rfind("stationary-prob-", 0), 0u);
  EXPECT_TRUE(fs::exists(run / "config.resolved.json"));

  const auto manifest = nlohmann::json::parse(slurp(run / "manifest.json"));
  EXPECT_EQ(manifest.at("status"), "ok");
  EXPECT_EQ(manifest.at("config_hash"), config.hash());
  EXPECT_EQ(manifest.at("seed"), 4);
  ASSERT_FALSE(manifest.at("files").empty());
  for (const auto& f : manifest.at("files")) {
    const auto path = run / f.at("path").get<std::string>();
    EXPECT_EQ(sha256_hex(slurp(path)), f.at("sha256").get<std::string>());
  }

  auto report = report_run(run);
  EXPECT_TRUE(report.at("checksums_ok").get<bool>());
  std::ofstream(run / "probabilities.csv", std::ios::app) << "tampered\n";
  report = report_run(run);
  EXPECT_FALSE(report.at("checksums_ok").get<bool>());
}

TEST_F(TempDir, RepeatedRunsGetDistinctDirectoriesAndSameBytes) {
  const auto config = config_from_json(parse_config_text(kEscape));
  RunOptions one, two;
  one.output_dir = two.output_dir = dir_;
  one.workers = 1;
  two.workers = 3;
  const auto a = run_experiment(config, one);
  const auto b = run_experiment(config, two);
  EXPECT_NE(a, b);
  EXPECT_EQ(slurp(a / "escape_samples.csv"), slurp(b / "escape_samples.csv"));
}

TEST_F(TempDir, CensoredRunCarriesWarnings) {
  auto doc = parse_config_text(kEscape);
  doc["params"]["t_max"] = 0.1;
  const auto config = config_from_json(doc);
  RunOptions opt;
  opt.output_dir = dir_;
  const auto run = run_experiment(config, opt);
  const auto manifest = nlohmann::json::parse(slurp(run / "manifest.json"));
  EXPECT_EQ(manifest.at("status"), "ok");
  EXPECT_FALSE(manifest.at("warnings").empty());
}

TEST(Sharpness, DeterministicAcrossWorkers) {
  SharpnessToyConfig c;
  c.dimension = 4;
  c.samples = 256;
  c.epochs = 4;
  c.seeds = 3;
  c.pairs = {{0.05, 16}, {0.2, 16}};
  c.master_seed = 1;
  c.data_seed = 2;
  c.workers = 1;
  const auto a = sharpness_toy(c);
  c.workers = 3;
  const auto b = sharpness_toy(c);
  ASSERT_EQ(a.curves.size(), 6u);
  for (std::size_t i = 0; i < a.curves.size(); ++i) {
    EXPECT_EQ(a.curves[i].frobenius, b.curves[i].frobenius);
    EXPECT_EQ(a.curves[i].loss, b.curves[i].loss);
    EXPECT_EQ(a.curves[i].frobenius.size(), 5u);
  }
  std::ostringstream out;
  a.write_csv(out);
  EXPECT_EQ(out.str().substr(0, 10), "gamma,batc");
}

TEST(Sharpness, OverlapOfIdenticalPairs) {
  SharpnessToyConfig c;
  c.dimension = 3;
  c.samples = 128;
  c.epochs = 3;
  c.seeds = 4;
  c.pairs = {{0.1, 8}, {0.1, 8}};
  const auto r = sharpness_toy(c);
  const auto o = curve_overlap(r, 0, 1);
  EXPECT_TRUE(o.within_spread);
  EXPECT_EQ(o.gap.size(), 4u);
}
