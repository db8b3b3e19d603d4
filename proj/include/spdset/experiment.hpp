#pragma once

// Randomized train/test evaluation over a dataset manifest, configured by a
// flat key-value file, with a human-diffable key-value result document.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spdset/dataset.hpp"
#include "spdset/descriptor.hpp"

namespace spdset {

enum class DescriptorKind { CovDs, CovDsS };
enum class ClassifierKind { NnAirm, NnStein, NnJeffrey, NnLem, KerSvm };

const char* to_string(DescriptorKind kind) noexcept;
const char* to_string(ClassifierKind kind) noexcept;

struct ExperimentConfig {
  PipelineConfig pipeline;
  DescriptorKind descriptor = DescriptorKind::CovDsS;
  ClassifierKind classifier = ClassifierKind::KerSvm;
  int splits = 10;
  int train_per_class = 5;
  std::uint64_t seed = 0;
  /// Orders kept after binarizing the learned weights.
  int k_orders = 2;
  double svm_c = 1.0;
  int rotation = 0;
  int resize_h = 24;
  int resize_w = 24;
  /// Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
  int threads = 0;
  /// Include wall-clock phase timings in the result file (makes it non-reproducible).
  bool report_timings = false;

  PreprocessConfig preprocess() const { return {resize_h, resize_w, rotation}; }
  void validate() const;
};

/// Parses `key = value` lines ('#' starts a comment; ':' is accepted in place
/// of '='). Keys not present keep their defaults; unknown keys throw InvalidConfig.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Applies one key/value pair.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);
/// Canonical key/value echo, in a fixed key order.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg);

struct SplitOutcome {
  int index = 0;
  std::optional<double> accuracy;
  std::string error;
  std::size_t train_sets = 0;
  std::size_t test_sets = 0;
  /// Number of image sets the weight-learning problem was built from (0 when skipped).
  std::size_t alignment_size = 0;
  std::vector<std::size_t> train_indices;
  std::optional<KernelWeights> weights;
};

struct PhaseTimings {
  double generation_s = 0.0;
  double train_s = 0.0;
  double test_s = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<SplitOutcome> splits;
  /// Accuracies (%) of the successful splits, in split order.
  std::vector<double> accuracies;
  double mean = 0.0;
  /// Sample standard deviation (n − 1 denominator); 0 for a single split.
  double std_dev = 0.0;
  PhaseTimings timings;
};

/// Training indices (into manifest.sets) for one split. Depends only on
/// (seed, split index, manifest order).
std::vector<std::size_t> select_training(const DatasetManifest& manifest, std::uint64_t seed,
                                         int split_index, int train_per_class);

ExperimentResult run_experiment(const ExperimentConfig& cfg, const DatasetManifest& manifest);

double sample_mean(const std::vector<double>& v);
double sample_std(const std::vector<double>& v);

/// Serializes the result; throws InvalidResult when no split succeeded.
std::string format_results(const ExperimentResult& res);
void emit_results(const ExperimentResult& res, const std::filesystem::path& path);

/// Reads a result document back as ordered key/value pairs.
std::map<std::string, std::string> parse_results(std::istream& in);

}  // namespace spdset
