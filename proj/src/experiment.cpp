#include "spdset/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "spdset/alignment.hpp"
#include "spdset/classifiers.hpp"
#include "spdset/parallel.hpp"
#include "spdset/random.hpp"

namespace spdset {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Shortest representation that round-trips.
std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string format_fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expect) {
  throw Error(ErrorCode::InvalidConfig, "key '" + key + "': cannot read '" + value + "' as " + expect);
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value, "a number");
  return out;
}

long long parse_int(const std::string& key, const std::string& value) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value, "an integer");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value, "a boolean");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(static_cast<int>(parse_int(key, trim(item))));
  if (out.empty()) bad_value(key, value, "a comma-separated integer list");
  return out;
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) out += format_double(v[i]);
    else out += std::to_string(v[i]);
  }
  return out;
}

std::optional<MetricKind> metric_of(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::NnAirm: return MetricKind::AIRM;
    case ClassifierKind::NnStein: return MetricKind::Stein;
    case ClassifierKind::NnJeffrey: return MetricKind::Jeffrey;
    case ClassifierKind::NnLem: return MetricKind::LEM;
    case ClassifierKind::KerSvm: return std::nullopt;
  }
  return std::nullopt;
}

// Per-set descriptor material computed once and shared by every split.
struct SetMaterial {
  std::optional<SpdMatrix> covds;     // DescriptorKind::CovDs
  std::optional<OrderedGrams> locals; // DescriptorKind::CovDsS
  std::string error;
  ErrorCode error_code = ErrorCode::InvalidInput;
};

}  // namespace

const char* to_string(DescriptorKind kind) noexcept {
  return kind == DescriptorKind::CovDs ? "covds" : "covds-s";
}

const char* to_string(ClassifierKind kind) noexcept {
  switch (kind) {
    case ClassifierKind::NnAirm: return "nn-airm";
    case ClassifierKind::NnStein: return "nn-stein";
    case ClassifierKind::NnJeffrey: return "nn-jeffrey";
    case ClassifierKind::NnLem: return "nn-lem";
    case ClassifierKind::KerSvm: return "ker-svm";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidConfig, why); };
  if (splits < 1) fail("splits must be >= 1");
  if (train_per_class < 1) fail("train_per_class must be >= 1");
  if (k_orders < 1) fail("k_orders must be >= 1");
  if (!(svm_c > 0.0)) fail("svm_C must be > 0");
  if (rotation != 0 && rotation != 90 && rotation != 180 && rotation != 270) {
    fail("rotation must be 0, 90, 180 or 270");
  }
  if (resize_h < 1 || resize_w < 1) fail("resize_to must be positive");
  if (pipeline.win < 1 || pipeline.stride < 1) fail("win and stride must be >= 1");
  if (pipeline.win > resize_h || pipeline.win > resize_w) fail("win exceeds the resized frame");
  if (!(pipeline.beta > 0.0)) fail("beta must be > 0");
  if (!(pipeline.lambda_frac >= 0.0) || !(pipeline.lambda_abs >= 0.0)) fail("lambdas must be >= 0");
  if (!(pipeline.eig_floor > 0.0)) fail("eig_floor must be > 0");
  if (pipeline.orders.empty()) fail("orders must not be empty");
  for (int r : pipeline.orders) {
    if (r < 0 || r > pipeline.kernel.max_order) fail("orders must lie in [0, 3]");
  }
  if (descriptor == DescriptorKind::CovDsS && pipeline.kernel.family == KernelFamily::LogEArc &&
      k_orders > static_cast<int>(pipeline.orders.size())) {
    fail("k_orders exceeds the number of orders");
  }
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  PipelineConfig& p = cfg.pipeline;
  if (key == "descriptor") {
    if (value == "covds") cfg.descriptor = DescriptorKind::CovDs;
    else if (value == "covds-s") cfg.descriptor = DescriptorKind::CovDsS;
    else bad_value(key, value, "covds | covds-s");
  } else if (key == "classifier") {
    if (value == "nn-airm") cfg.classifier = ClassifierKind::NnAirm;
    else if (value == "nn-stein") cfg.classifier = ClassifierKind::NnStein;
    else if (value == "nn-jeffrey") cfg.classifier = ClassifierKind::NnJeffrey;
    else if (value == "nn-lem") cfg.classifier = ClassifierKind::NnLem;
    else if (value == "ker-svm") cfg.classifier = ClassifierKind::KerSvm;
    else bad_value(key, value, "nn-airm | nn-stein | nn-jeffrey | nn-lem | ker-svm");
  } else if (key == "splits") {
    cfg.splits = static_cast<int>(parse_int(key, value));
  } else if (key == "train_per_class") {
    cfg.train_per_class = static_cast<int>(parse_int(key, value));
  } else if (key == "seed") {
    const long long s = parse_int(key, value);
    if (s < 0) bad_value(key, value, "an unsigned integer");
    cfg.seed = static_cast<std::uint64_t>(s);
  } else if (key == "k_orders") {
    cfg.k_orders = static_cast<int>(parse_int(key, value));
  } else if (key == "svm_C") {
    cfg.svm_c = parse_double(key, value);
  } else if (key == "rotation") {
    cfg.rotation = static_cast<int>(parse_int(key, value));
  } else if (key == "resize_to") {
    const auto x = value.find('x');
    if (x == std::string::npos) bad_value(key, value, "HxW");
    cfg.resize_h = static_cast<int>(parse_int(key, value.substr(0, x)));
    cfg.resize_w = static_cast<int>(parse_int(key, value.substr(x + 1)));
  } else if (key == "threads") {
    cfg.threads = static_cast<int>(parse_int(key, value));
  } else if (key == "report_timings") {
    cfg.report_timings = parse_bool(key, value);
  } else if (key == "win") {
    p.win = static_cast<int>(parse_int(key, value));
  } else if (key == "stride") {
    p.stride = static_cast<int>(parse_int(key, value));
  } else if (key == "beta") {
    p.beta = parse_double(key, value);
  } else if (key == "lambda_frac") {
    p.lambda_frac = parse_double(key, value);
  } else if (key == "lambda_abs") {
    p.lambda_abs = parse_double(key, value);
  } else if (key == "orders") {
    p.orders = parse_int_list(key, value);
  } else if (key == "eig_floor") {
    p.eig_floor = parse_double(key, value);
  } else if (key == "kernel") {
    const auto family = parse_kernel_family(value);
    if (!family) bad_value(key, value, "loge-arc | loge-linear | loge-pol | loge-exp | loge-gau");
    p.kernel.family = *family;
  } else if (key == "kernel_gamma" || key == "kernel_c" || key == "kernel_degree") {
    p.kernel.params[key.substr(7)] = parse_double(key, value);
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'");
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto sep = line.find_first_of("=:");
    if (sep == std::string::npos) {
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(lineno) + ": expected key = value");
    }
    set_config_value(cfg, trim(line.substr(0, sep)), trim(line.substr(sep + 1)));
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read config " + path.string());
  return parse_config(in);
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg) {
  const PipelineConfig& p = cfg.pipeline;
  std::vector<std::pair<std::string, std::string>> out{
      {"descriptor", to_string(cfg.descriptor)},
      {"classifier", to_string(cfg.classifier)},
      {"splits", std::to_string(cfg.splits)},
      {"train_per_class", std::to_string(cfg.train_per_class)},
      {"seed", std::to_string(cfg.seed)},
      {"k_orders", std::to_string(cfg.k_orders)},
      {"svm_C", format_double(cfg.svm_c)},
      {"rotation", std::to_string(cfg.rotation)},
      {"resize_to", std::to_string(cfg.resize_h) + "x" + std::to_string(cfg.resize_w)},
      {"win", std::to_string(p.win)},
      {"stride", std::to_string(p.stride)},
      {"beta", format_double(p.beta)},
      {"lambda_frac", format_double(p.lambda_frac)},
      {"lambda_abs", format_double(p.lambda_abs)},
      {"orders", join(p.orders)},
      {"eig_floor", format_double(p.eig_floor)},
      {"kernel", to_string(p.kernel.family)},
  };
  for (const auto& [name, value] : p.kernel.params) out.emplace_back("kernel_" + name, format_double(value));
  return out;
}

std::vector<std::size_t> select_training(const DatasetManifest& manifest, std::uint64_t seed,
                                         int split_index, int train_per_class) {
  Rng rng(Rng::derive_seed(seed, static_cast<std::uint64_t>(split_index)));
  std::vector<std::size_t> train;
  for (const auto& members : manifest.sets_by_class) {
    if (static_cast<std::size_t>(train_per_class) >= members.size()) {
      throw Error(ErrorCode::InsufficientSets,
                  "train_per_class " + std::to_string(train_per_class) +
                      " leaves no test set in a class with " + std::to_string(members.size()) + " sets");
    }
    std::vector<std::size_t> order = members;
    rng.shuffle(order);
    order.resize(static_cast<std::size_t>(train_per_class));
    std::sort(order.begin(), order.end());
    train.insert(train.end(), order.begin(), order.end());
  }
  return train;
}

double sample_mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = sample_mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const DatasetManifest& manifest) {
  cfg.validate();
  if (manifest.sets.empty()) throw Error(ErrorCode::EmptyDataset, "manifest has no image sets");
  if (static_cast<std::size_t>(cfg.train_per_class) >= manifest.min_sets_per_class()) {
    throw Error(ErrorCode::InsufficientSets,
                "train_per_class " + std::to_string(cfg.train_per_class) +
                    " must be below the smallest class size " +
                    std::to_string(manifest.min_sets_per_class()));
  }
  const unsigned threads = resolve_threads(cfg.threads);
  ExperimentResult result;
  result.config = cfg;

  // Generation: every set's descriptor material, independent of the split.
  const auto gen_start = Clock::now();
  const std::size_t set_count = manifest.sets.size();
  std::vector<SetMaterial> material(set_count);
  parallel_for(set_count, threads, [&](std::size_t i) {
    try {
      const ImageSet set = load_image_set(manifest.sets[i], cfg.preprocess());
      if (cfg.descriptor == DescriptorKind::CovDs) {
        material[i].covds = traditional_covds(set, cfg.pipeline.lambda_frac);
      } else {
        material[i].locals = local_grams(set, cfg.pipeline);
      }
    } catch (const Error& e) {
      material[i].error = e.what();
      material[i].error_code = e.code();
    }
  });
  result.timings.generation_s = seconds_since(gen_start);

  const bool learn_weights = cfg.descriptor == DescriptorKind::CovDsS &&
                             cfg.pipeline.kernel.family == KernelFamily::LogEArc &&
                             cfg.pipeline.orders.size() > 1;
  const auto metric = metric_of(cfg.classifier);

  std::vector<SplitOutcome> outcomes(static_cast<std::size_t>(cfg.splits));
  std::vector<PhaseTimings> split_times(outcomes.size());
  std::vector<ErrorCode> split_codes(outcomes.size(), ErrorCode::InvalidInput);
  parallel_for(outcomes.size(), threads, [&](std::size_t s) {
    SplitOutcome& out = outcomes[s];
    out.index = static_cast<int>(s);
    try {
      auto t0 = Clock::now();
      out.train_indices = select_training(manifest, cfg.seed, out.index, cfg.train_per_class);
      std::vector<char> is_train(set_count, 0);
      for (std::size_t i : out.train_indices) is_train[i] = 1;
      for (std::size_t i = 0; i < set_count; ++i) {
        if (!material[i].error.empty()) throw Error(material[i].error_code, material[i].error);
      }

      KernelWeights weights = KernelWeights::uniform(cfg.pipeline.orders);
      if (learn_weights) {
        std::vector<OrderedGrams> train_locals;
        std::vector<int> labels;
        for (std::size_t i : out.train_indices) {
          train_locals.push_back(*material[i].locals);
          labels.push_back(manifest.sets[i].label);
        }
        const AlignmentProblem problem = build_problem(train_locals, labels);
        out.alignment_size = static_cast<std::size_t>(problem.target.dim());
        weights = binarize_weights(solve_weights(problem), cfg.k_orders);
      }
      if (cfg.descriptor == DescriptorKind::CovDsS) out.weights = weights;

      auto representation = [&](std::size_t i) -> SpdMatrix {
        if (cfg.descriptor == DescriptorKind::CovDs) return *material[i].covds;
        const OrderedGrams& locals = *material[i].locals;
        if (cfg.pipeline.kernel.family != KernelFamily::LogEArc) {
          return finalize_representation(locals.grams.front(), cfg.pipeline.eig_floor);
        }
        return finalize_representation(combine_grams(locals, weights), cfg.pipeline.eig_floor);
      };

      std::vector<LabeledSample> train;
      for (std::size_t i : out.train_indices) train.push_back({representation(i), manifest.sets[i].label});
      std::optional<SvmModel> model;
      if (!metric) model = svm_train(train, cfg.svm_c);
      split_times[s].train_s = seconds_since(t0);

      t0 = Clock::now();
      std::size_t correct = 0;
      for (std::size_t i = 0; i < set_count; ++i) {
        if (is_train[i]) continue;
        const SpdMatrix query = representation(i);
        const int predicted = metric ? nn_classify(train, query, *metric) : svm_predict(*model, query);
        correct += predicted == manifest.sets[i].label ? 1 : 0;
        ++out.test_sets;
      }
      out.train_sets = out.train_indices.size();
      out.accuracy = 100.0 * static_cast<double>(correct) / static_cast<double>(out.test_sets);
      split_times[s].test_s = seconds_since(t0);
    } catch (const Error& e) {
      out.error = e.what();
      split_codes[s] = e.code();
    }
  });

  std::size_t failed = 0;
  for (std::size_t s = 0; s < outcomes.size(); ++s) {
    result.timings.train_s += split_times[s].train_s;
    result.timings.test_s += split_times[s].test_s;
    if (outcomes[s].accuracy) result.accuracies.push_back(*outcomes[s].accuracy);
    else ++failed;
  }
  if (2 * failed > outcomes.size()) {
    std::size_t first = 0;
    while (outcomes[first].accuracy) ++first;
    throw Error(split_codes[first], std::to_string(failed) + " of " + std::to_string(outcomes.size()) +
                                        " splits failed; first: " + outcomes[first].error);
  }
  result.splits = std::move(outcomes);
  result.mean = sample_mean(result.accuracies);
  result.std_dev = sample_std(result.accuracies);
  return result;
}

std::string format_results(const ExperimentResult& res) {
  if (res.accuracies.empty()) throw Error(ErrorCode::InvalidResult, "no successful splits to report");
  std::ostringstream out;
  out << "# spdset experiment result\n";
  out << "# accuracies in percent; std is the sample standard deviation (n-1 denominator)\n";
  for (const auto& [key, value] : config_entries(res.config)) out << "config." << key << ": " << value << '\n';
  for (const SplitOutcome& s : res.splits) {
    const std::string prefix = "split." + std::to_string(s.index) + ".";
    if (s.accuracy) {
      out << prefix << "accuracy: " << format_double(*s.accuracy) << '\n';
      out << prefix << "train_sets: " << s.train_sets << '\n';
      out << prefix << "test_sets: " << s.test_sets << '\n';
      out << prefix << "alignment_size: " << s.alignment_size << '\n';
      if (s.weights) {
        std::vector<double> raw(s.weights->raw.data(), s.weights->raw.data() + s.weights->raw.size());
        out << prefix << "weights_raw: " << join(raw) << '\n';
        out << prefix << "weights_mask: " << join(s.weights->mask) << '\n';
      }
    } else {
      out << prefix << "error: " << s.error << '\n';
    }
  }
  out << "splits_succeeded: " << res.accuracies.size() << '\n';
  out << "splits_failed: " << res.splits.size() - res.accuracies.size() << '\n';
  out << "mean: " << format_fixed2(res.mean) << '\n';
  out << "std: " << format_fixed2(res.std_dev) << '\n';
  out << "summary: " << format_fixed2(res.mean) << "±" << format_fixed2(res.std_dev) << '\n';
  if (res.config.report_timings) {
    out << "time.generation_s: " << format_double(res.timings.generation_s) << '\n';
    out << "time.train_s: " << format_double(res.timings.train_s) << '\n';
    out << "time.test_s: " << format_double(res.timings.test_s) << '\n';
  }
  return out.str();
}

void emit_results(const ExperimentResult& res, const std::filesystem::path& path) {
  const std::string text = format_results(res);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

std::map<std::string, std::string> parse_results(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto sep = line.find(": ");
    if (sep == std::string::npos) continue;
    out[line.substr(0, sep)] = line.substr(sep + 2);
  }
  return out;
}

}  // namespace spdset
