// spdset: image-set classification experiments with sub-image-set SPD kernel descriptors.
//
//   spdset run --config <file> --data <root> --out <file>
//   spdset validate --data <root>
//   spdset synth --out <root> --classes K --sets M --frames N --seed S
//
// Exit codes: 0 ok, 1 usage, 2 data error, 3 numerical error.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "spdset/dataset.hpp"
#include "spdset/experiment.hpp"
#include "spdset/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(const spdset::Error& e) {
  if (e.is_numerical()) return kExitNumerical;
  if (e.code() == spdset::ErrorCode::InvalidConfig) return kExitUsage;
  return kExitData;
}

void print_warnings(const spdset::DatasetManifest& m) {
  for (const auto& w : m.warnings) std::cerr << "warning: " << w << '\n';
}

int cmd_run(const std::string& config_path, const std::string& data, const std::string& out_path,
            int threads) {
  spdset::ExperimentConfig cfg = spdset::load_config(config_path);
  if (threads >= 0) cfg.threads = threads;
  const spdset::DatasetManifest manifest = spdset::load_dataset(data);
  print_warnings(manifest);
  const spdset::ExperimentResult res = spdset::run_experiment(cfg, manifest);
  spdset::emit_results(res, out_path);
  for (const auto& s : res.splits) {
    if (!s.accuracy) std::cerr << "split " << s.index << " failed: " << s.error << '\n';
  }
  std::fprintf(stderr, "accuracy %.2f ± %.2f over %zu splits (generation %.2fs, train %.2fs, test %.2fs)\n",
               res.mean, res.std_dev, res.accuracies.size(), res.timings.generation_s,
               res.timings.train_s, res.timings.test_s);
  return kExitOk;
}

int cmd_validate(const std::string& data) {
  const spdset::DatasetManifest m = spdset::load_dataset(data);
  print_warnings(m);
  std::size_t frames = 0;
  for (const auto& s : m.sets) frames += s.frames.size();
  std::cout << "classes: " << m.classes.size() << "\nsets: " << m.sets.size()
            << "\nframes: " << frames << "\nmin_sets_per_class: " << m.min_sets_per_class() << '\n';
  for (std::size_t c = 0; c < m.classes.size(); ++c) {
    std::cout << "class." << m.classes[c] << ": " << m.sets_by_class[c].size() << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Image-set classification with sub-image-set SPD kernel descriptors"};
  app.require_subcommand(1);

  std::string config_path, data, out_path;
  int threads = -1;
  auto* run = app.add_subcommand("run", "Run a randomized-split experiment");
  run->add_option("--config", config_path, "Experiment config (key = value)")->required();
  run->add_option("--data", data, "Dataset root: <class>/<set>/<frames>")->required();
  run->add_option("--out", out_path, "Result file")->required();
  run->add_option("--threads", threads, "Override the config's thread count");

  std::string validate_data;
  auto* validate = app.add_subcommand("validate", "Scan a dataset and report its layout");
  validate->add_option("--data", validate_data, "Dataset root")->required();

  spdset::SynthConfig synth_cfg;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a synthetic texture dataset");
  synth->add_option("--out", synth_out, "Output root")->required();
  synth->add_option("--classes", synth_cfg.classes, "Number of classes")->check(CLI::PositiveNumber);
  synth->add_option("--sets", synth_cfg.sets, "Image sets per class")->check(CLI::PositiveNumber);
  synth->add_option("--frames", synth_cfg.frames, "Frames per set")->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_cfg.seed, "Random seed");
  synth->add_option("--size", synth_cfg.height, "Frame height and width")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(config_path, data, out_path, threads);
    if (*validate) return cmd_validate(validate_data);
    if (*synth) {
      synth_cfg.width = synth_cfg.height;
      spdset::write_synthetic_dataset(synth_out, synth_cfg);
      return kExitOk;
    }
  } catch (const spdset::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
