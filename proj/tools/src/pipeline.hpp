#pragma once

#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "xenorisk/corpus/cohorts.hpp"
#include "xenorisk/corpus/corpus.hpp"
#include "xenorisk/features/feature_matrix.hpp"
#include "xenorisk/model/ablation.hpp"
#include "xenorisk/model/training.hpp"

namespace xenorisk::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::string in;
  std::string blocks;
  std::string task;
  std::optional<double> threshold;
  std::optional<std::size_t> threads;
};

// State of one subcommand invocation: resolved configuration, input lookup
// and the manifest of everything read and written.
class Run {
 public:
  Run(std::string command, std::vector<std::string> args, const Options& options, std::ostream& log);

  const std::string& command() const { return command_; }
  const json& config() const { return config_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t threads() const { return threads_; }
  const fs::path& out_dir() const { return out_dir_; }
  std::ostream& log() { return log_; }
  // sha256 of the effective config, excluding the thread count
  std::string config_hash() const;

  // Config key, else `<in>/<file>`, else `<data>/<file>` when allowed. A path
  // named in the config must exist.
  std::optional<fs::path> find(const std::string& key, const std::string& file, bool data_fallback);
  // As find(), throwing DataError naming what was looked for.
  fs::path require(const std::string& key, const std::string& file, bool data_fallback);

  fs::path output(const std::string& name);
  void note_input(const fs::path& p);

  template <typename T>
  T get(const std::string& key, T fallback) const {
    const auto it = config_.find(key);
    if (it == config_.end() || it->is_null()) return fallback;
    try {
      return it->get<T>();
    } catch (const json::exception&) {
      throw_bad_value(key);
    }
  }
  const json* section(const std::string& key) const;

  void write_manifest();

 private:
  [[noreturn]] void throw_bad_value(const std::string& key) const;
  fs::path resolve(const std::string& value) const;

  std::string command_;
  std::vector<std::string> args_;
  json config_;
  fs::path config_dir_;
  fs::path in_dir_;
  fs::path out_dir_;
  fs::path data_dir_;
  std::uint64_t seed_ = 0;
  std::size_t threads_ = 0;
  std::ostream& log_;
  std::vector<fs::path> inputs_;
  std::vector<fs::path> outputs_;
};

Instant split_instant(const Run& run);
corpus::Corpus load_corpus_inputs(Run& run, corpus::IngestReport& report);
corpus::CohortResult compute_labels(Run& run, const corpus::Corpus& corpus);
corpus::CohortResult obtain_labels(Run& run, const corpus::Corpus& corpus);
features::FeatureMatrix compute_features(Run& run);
features::FeatureMatrix obtain_features(Run& run);
model::TrainConfig train_config(const Run& run);
std::vector<model::Task> tasks(const Run& run, const Options& options);
std::vector<features::BlockKind> blocks(const Run& run, const Options& options);

int cmd_ingest(Run& run);
int cmd_label(Run& run);
int cmd_logodds(Run& run);
int cmd_featurize(Run& run, const Options& options);
int cmd_stats(Run& run);
int cmd_train(Run& run, const Options& options);
int cmd_ablate(Run& run, const Options& options);
int cmd_attribute(Run& run, const Options& options);
int cmd_synth(Run& run);
int cmd_report(Run& run);

}  // namespace xenorisk::cli
