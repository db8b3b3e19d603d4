#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spdset/experiment.hpp"
#include "spdset/synth.hpp"

namespace spdset {
namespace {

namespace fs = std::filesystem;

ExperimentResult result_with(std::vector<double> accuracies) {
  ExperimentResult res;
  for (std::size_t i = 0; i < accuracies.size(); ++i) {
    SplitOutcome s;
    s.index = static_cast<int>(i);
    s.accuracy = accuracies[i];
    s.train_sets = 4;
    s.test_sets = 2;
    res.splits.push_back(s);
  }
  res.accuracies = std::move(accuracies);
  res.mean = sample_mean(res.accuracies);
  res.std_dev = sample_std(res.accuracies);
  return res;
}

TEST(Stats, SampleStd) {
  EXPECT_DOUBLE_EQ(sample_mean({50.0, 100.0}), 75.0);
  EXPECT_NEAR(sample_std({50.0, 100.0}), 35.3553390593, 1e-9);
  EXPECT_EQ(sample_std({42.0}), 0.0);
}

TEST(Results, FormatsTwoDecimals) {
  const std::string text = format_results(result_with({50.0, 100.0}));
  EXPECT_NE(text.find("mean: 75.00\n"), std::string::npos);
  EXPECT_NE(text.find("std: 35.36\n"), std::string::npos);
  EXPECT_NE(text.find("summary: 75.00±35.36\n"), std::string::npos);
  EXPECT_NE(text.find("n-1"), std::string::npos);
}

TEST(Results, EmptyIsRefused) {
  try {
    format_results(ExperimentResult{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidResult);
  }
}

TEST(Results, RoundTripRecomputesStatistics) {
  const ExperimentResult res = result_with({93.3333333333333, 86.6666666666667, 100.0, 73.3333333333333});
  std::istringstream in(format_results(res));
  const auto kv = parse_results(in);
  std::vector<double> acc;
  for (int i = 0; i < 4; ++i) acc.push_back(std::stod(kv.at("split." + std::to_string(i) + ".accuracy")));
  EXPECT_NEAR(sample_mean(acc), res.mean, 1e-9);
  EXPECT_NEAR(sample_std(acc), res.std_dev, 1e-9);
  EXPECT_EQ(kv.at("splits_succeeded"), "4");
}

TEST(Config, ParsesKeysAndRejectsUnknown) {
  std::istringstream in(
      "# comment\n"
      "descriptor = covds\n"
      "classifier: nn-stein\n"
      "splits = 3\n"
      "resize_to = 32x16\n"
      "orders = 1, 3\n"
      "beta = 14\n"
      "svm_C = 2.5\n");
  const ExperimentConfig cfg = parse_config(in);
  EXPECT_EQ(cfg.descriptor, DescriptorKind::CovDs);
  EXPECT_EQ(cfg.classifier, ClassifierKind::NnStein);
  EXPECT_EQ(cfg.splits, 3);
  EXPECT_EQ(cfg.resize_h, 32);
  EXPECT_EQ(cfg.resize_w, 16);
  EXPECT_EQ(cfg.pipeline.orders, (std::vector<int>{1, 3}));
  EXPECT_DOUBLE_EQ(cfg.pipeline.beta, 14.0);
  EXPECT_DOUBLE_EQ(cfg.svm_c, 2.5);

  for (const char* bad : {"colour = red\n", "splits = many\n", "rotation = 45\n", "splits = 0\n", "no separator\n"}) {
    std::istringstream b(bad);
    try {
      parse_config(b);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidConfig) << bad;
    }
  }
}

TEST(Config, EchoParsesBack) {
  ExperimentConfig cfg;
  cfg.pipeline.beta = 0.05;
  cfg.k_orders = 1;
  cfg.seed = 99;
  std::ostringstream text;
  for (const auto& [k, v] : config_entries(cfg)) text << k << " = " << v << '\n';
  std::istringstream in(text.str());
  const ExperimentConfig back = parse_config(in);
  EXPECT_EQ(config_entries(back), config_entries(cfg));
}

class ExperimentTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = fs::temp_directory_path() / "spdset_experiment_test";
    fs::remove_all(root_);
    write_synthetic_dataset(root_, {3, 4, 4, 12, 12, 5});
  }
  static void TearDownTestSuite() { fs::remove_all(root_); }

  static ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.splits = 3;
    cfg.train_per_class = 2;
    cfg.seed = 17;
    cfg.resize_h = cfg.resize_w = 12;
    cfg.threads = 2;
    return cfg;
  }

  static fs::path root_;
};

fs::path ExperimentTest::root_;

TEST_F(ExperimentTest, SplitSelectionDependsOnlyOnSeedAndIndex) {
  const DatasetManifest m = load_dataset(root_);
  const auto a = select_training(m, 3, 2, 2);
  EXPECT_EQ(a, select_training(m, 3, 2, 2));
  EXPECT_EQ(a.size(), 6u);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(m.sets[a[2 * c + k]].label, static_cast<int>(c));
  }
  bool differs = false;
  for (int s = 0; s < 8; ++s) differs |= select_training(m, 3, s, 2) != a;
  EXPECT_TRUE(differs);
}

TEST_F(ExperimentTest, AlignmentUsesOnlyTrainingSets) {
  const DatasetManifest m = load_dataset(root_);
  const ExperimentResult res = run_experiment(small_config(), m);
  ASSERT_EQ(res.splits.size(), 3u);
  for (const SplitOutcome& s : res.splits) {
    ASSERT_TRUE(s.accuracy.has_value()) << s.error;
    EXPECT_EQ(s.alignment_size, s.train_sets);
    EXPECT_EQ(s.train_sets, 6u);
    EXPECT_EQ(s.test_sets, 6u);
    EXPECT_GE(*s.accuracy, 0.0);
    EXPECT_LE(*s.accuracy, 100.0);
    ASSERT_TRUE(s.weights.has_value());
    EXPECT_EQ(s.weights->retained(), 2);
    EXPECT_EQ(s.train_indices, select_training(m, 17, s.index, 2));
  }
  EXPECT_NEAR(res.mean, sample_mean(res.accuracies), 1e-9);
}

TEST_F(ExperimentTest, ThreadCountDoesNotChangeOutput) {
  const DatasetManifest m = load_dataset(root_);
  ExperimentConfig one = small_config();
  one.threads = 1;
  ExperimentConfig many = small_config();
  many.threads = 4;
  EXPECT_EQ(format_results(run_experiment(one, m)), format_results(run_experiment(many, m)));
}

TEST_F(ExperimentTest, EveryClassifierRuns) {
  const DatasetManifest m = load_dataset(root_);
  for (ClassifierKind c : {ClassifierKind::NnAirm, ClassifierKind::NnStein, ClassifierKind::NnJeffrey,
                           ClassifierKind::NnLem, ClassifierKind::KerSvm}) {
    for (DescriptorKind d : {DescriptorKind::CovDs, DescriptorKind::CovDsS}) {
      ExperimentConfig cfg = small_config();
      cfg.splits = 1;
      cfg.classifier = c;
      cfg.descriptor = d;
      const ExperimentResult res = run_experiment(cfg, m);
      EXPECT_EQ(res.accuracies.size(), 1u) << to_string(c) << " " << to_string(d);
    }
  }
}

TEST_F(ExperimentTest, TrainingOnEverySetIsRejected) {
  const DatasetManifest m = load_dataset(root_);
  ExperimentConfig cfg = small_config();
  cfg.train_per_class = 4;
  try {
    run_experiment(cfg, m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientSets);
  }
}

TEST_F(ExperimentTest, EmitWritesParsableFile) {
  const DatasetManifest m = load_dataset(root_);
  const fs::path out = root_ / "result.txt";
  emit_results(run_experiment(small_config(), m), out);
  std::ifstream in(out);
  const auto kv = parse_results(in);
  EXPECT_EQ(kv.at("config.splits"), "3");
  EXPECT_EQ(kv.count("time.train_s"), 0u);
  EXPECT_THROW(emit_results(result_with({1.0}), root_ / "missing_dir" / "x.txt"), Error);
}

}  // namespace
}  // namespace spdset
