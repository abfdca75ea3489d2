#include "xenorisk/model/ablation.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "xenorisk/common/csv.hpp"
#include "xenorisk/common/error.hpp"
#include "xenorisk/common/parallel.hpp"
#include "xenorisk/common/rng.hpp"
#include "xenorisk/common/text.hpp"
#include "xenorisk/model/metrics.hpp"
#include "xenorisk/model/split.hpp"

namespace xenorisk::model {
namespace {

using features::BlockKind;
constexpr BlockKind S = BlockKind::TwitterStats;
constexpr BlockKind P = BlockKind::ProfileEmbed;
constexpr BlockKind F = BlockKind::Following;
constexpr BlockKind M = BlockKind::Media;
constexpr BlockKind N = BlockKind::Nela;
constexpr BlockKind L = BlockKind::Liwc;
constexpr BlockKind E = BlockKind::TweetEmbed;

const std::vector<AblationRowSpec>& rows_table() {
  static const std::vector<AblationRowSpec> rows = {
      {1, "Majority class", {}, std::nullopt},
      {2, "Twitter Statistics", {S}, std::nullopt},
      {3, "Profile Description: SBERT", {P}, std::nullopt},
      {4, "Following", {F}, std::nullopt},
      {5, "Twitter Stat. + Prof.", {S, P}, std::nullopt},
      {6, "Twitter Stat. + Fol.", {S, F}, std::nullopt},
      {7, "Twitter Prof. + Fol.", {P, F}, std::nullopt},
      {8, "Twitter Stat. + Prof. + Fol.", {S, P, F}, std::nullopt},
      {9, "Shared News media", {M}, std::nullopt},
      {10, "Tweets: NELA", {N}, std::nullopt},
      {11, "Tweets: LIWC", {L}, std::nullopt},
      {12, "Tweets: SBERT", {E}, std::nullopt},
      {13, "Media + NELA", {M, N}, std::nullopt},
      {14, "Media + LIWC", {M, L}, std::nullopt},
      {15, "Media + SBERT", {M, E}, std::nullopt},
      {16, "NELA + LIWC", {N, L}, std::nullopt},
      {17, "NELA + SBERT", {N, E}, std::nullopt},
      {18, "LIWC + SBERT", {L, E}, std::nullopt},
      {19, "Media + NELA + LIWC", {M, N, L}, std::nullopt},
      {20, "Media + NELA + SBERT", {M, N, E}, std::nullopt},
      {21, "Media + LIWC + SBERT", {M, L, E}, std::nullopt},
      {22, "NELA + LIWC + SBERT", {N, L, E}, std::nullopt},
      {23, "Tweets: ALL", {M, N, L, E}, std::nullopt},
      {24, "(Task 1) A+B: rows 8 & 15", {S, P, F, M, E}, Task::T1},
      {25, "(Task 2) A+B: rows 6 & 19", {S, F, M, N, L}, Task::T2},
      {26, "All features", {S, P, F, M, N, L, E}, std::nullopt},
  };
  return rows;
}

std::string block_list(const std::vector<BlockKind>& blocks) {
  std::string out;
  for (const BlockKind b : blocks) {
    if (!out.empty()) out += '+';
    out += features::to_string(b);
  }
  return out;
}

AblationRow run_row(const features::FeatureMatrix& m, const AblationRowSpec& spec, Task task,
                    const TaskData& data, const TrainTestSplit& split, const AblationConfig& config,
                    const Matrix& full) {
  AblationRow row;
  row.row_id = spec.row_id;
  row.name = spec.name;
  row.task = task;
  row.blocks = spec.blocks;
  row.dim = row_dim(spec, m.dims());

  const std::vector<int> y_test = gather<int>(data.y, split.test);
  if (spec.blocks.empty()) {
    const Baseline b = majority_baseline(y_test);
    row.macro_f1 = b.macro_f1;
    row.accuracy = b.accuracy;
    return row;
  }
  for (const BlockKind b : spec.blocks) {
    if (!m.has_block(b)) {
      row.skipped = true;
      row.note = "missing block " + std::string(features::to_string(b));
      return row;
    }
  }

  const auto cols = m.columns_for(spec.blocks);
  const auto train_rows = gather<std::size_t>(data.rows, split.train);
  const auto test_rows = gather<std::size_t>(data.rows, split.test);
  const Matrix x_train = select(full, train_rows, cols);
  const Matrix x_test = select(full, test_rows, cols);
  const std::vector<int> y_train = gather<int>(data.y, split.train);

  TrainConfig tc = config.train;
  tc.seed = row_seed(config.train, spec.row_id, task);
  const TrainedModel model = train_gbdt(x_train, y_train, tc);
  const Evaluation e = evaluate(y_test, model.booster.predict(x_test));
  row.macro_f1 = e.macro_f1;
  row.accuracy = e.accuracy;
  row.chosen = model.chosen_point();
  return row;
}

}  // namespace

std::string_view to_string(Task t) { return t == Task::T1 ? "t1" : "t2"; }

std::optional<Task> parse_task(std::string_view s) {
  const std::string lower = text::to_lower_utf8(s);
  if (lower == "t1") return Task::T1;
  if (lower == "t2") return Task::T2;
  return std::nullopt;
}

TaskData task_data(const features::FeatureMatrix& m, Task task) {
  TaskData d;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const corpus::Cohort c = m.labels[i];
    if (c == corpus::Cohort::Excluded) continue;
    if (task == Task::T1) {
      d.rows.push_back(i);
      d.y.push_back(corpus::is_hateful(c) ? 1 : 0);
    } else if (corpus::is_hateful(c)) {
      d.rows.push_back(i);
      d.y.push_back(c == corpus::Cohort::HatefulHigh ? 1 : 0);
    }
  }
  return d;
}

TrainTestSplit task_split(std::span<const int> y, Task task, const TrainConfig& config) {
  return stratified_split(y, config.test_fraction,
                          derive_seed(config.seed, {hash_tag("split"), static_cast<std::uint64_t>(task)}));
}

std::uint64_t row_seed(const TrainConfig& config, int row_id, Task task) {
  return derive_seed(config.seed,
                     {hash_tag("row"), static_cast<std::uint64_t>(row_id), static_cast<std::uint64_t>(task)});
}

std::span<const AblationRowSpec> ablation_rows() { return rows_table(); }

std::size_t row_dim(const AblationRowSpec& row, const features::BlockDims& dims) {
  return dims.total(row.blocks);
}

AblationReport run_ablation(const features::FeatureMatrix& m, const AblationConfig& config) {
  config.train.validate();
  AblationReport report;
  report.dims = m.dims();

  std::vector<const AblationRowSpec*> specs;
  for (const auto& r : rows_table()) {
    if (config.row_ids.empty() ||
        std::find(config.row_ids.begin(), config.row_ids.end(), r.row_id) != config.row_ids.end()) {
      specs.push_back(&r);
    }
  }

  Matrix full(m.rows(), m.cols());
  full.values = m.values;

  struct Job {
    const AblationRowSpec* spec;
    Task task;
  };
  std::map<Task, TaskData> data;
  std::map<Task, TrainTestSplit> splits;
  std::vector<Job> jobs;
  std::vector<Task> tasks = config.tasks;
  std::sort(tasks.begin(), tasks.end());
  tasks.erase(std::unique(tasks.begin(), tasks.end()), tasks.end());
  for (const Task t : tasks) {
    data[t] = task_data(m, t);
    if (data[t].y.empty()) throw DataError("no users for task " + std::string(to_string(t)));
    splits[t] = task_split(data[t].y, t, config.train);
    report.split_sizes[t] = {splits[t].train.size(), splits[t].test.size()};
    for (const auto* s : specs) {
      if (!s->only_task || *s->only_task == t) jobs.push_back({s, t});
    }
  }
  std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
    return std::pair(a.spec->row_id, a.task) < std::pair(b.spec->row_id, b.task);
  });

  AblationConfig inner = config;
  const std::size_t row_threads = std::min(resolve_threads(config.threads), std::max<std::size_t>(jobs.size(), 1));
  if (row_threads > 1) inner.train.threads = 1;
  report.rows.resize(jobs.size());
  parallel_for(jobs.size(), row_threads, [&](std::size_t i) {
    const Job& j = jobs[i];
    report.rows[i] = run_row(m, *j.spec, j.task, data.at(j.task), splits.at(j.task), inner, full);
  });
  return report;
}

void write_report_json(std::ostream& out, const AblationReport& report) {
  nlohmann::ordered_json j;
  j["header"] = report.header;
  nlohmann::ordered_json dims;
  for (const BlockKind b : features::kAllBlocks) dims[std::string(features::to_string(b))] = report.dims[b];
  j["block_dims"] = dims;
  nlohmann::ordered_json splits = nlohmann::ordered_json::object();
  for (const auto& [t, s] : report.split_sizes) splits[std::string(to_string(t))] = {{"train", s.first}, {"test", s.second}};
  j["splits"] = splits;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["row_id"] = r.row_id;
    row["task"] = to_string(r.task);
    row["name"] = r.name;
    row["blocks"] = nlohmann::ordered_json::array();
    for (const BlockKind b : r.blocks) row["blocks"].push_back(features::to_string(b));
    row["dim"] = r.dim;
    row["skipped"] = r.skipped;
    if (r.skipped) {
      row["macro_f1"] = nullptr;
      row["accuracy"] = nullptr;
      row["note"] = r.note;
    } else {
      row["macro_f1"] = r.macro_f1;
      row["accuracy"] = r.accuracy;
    }
    if (r.chosen) {
      row["max_depth"] = r.chosen->max_depth;
      row["min_child_weight"] = r.chosen->min_child_weight;
      row["best_round"] = r.chosen->best_round;
      row["cv_macro_f1"] = r.chosen->cv_macro_f1;
      row["gate_z"] = std::isfinite(r.chosen->gate_z) ? nlohmann::ordered_json(r.chosen->gate_z) : nlohmann::ordered_json("inf");
      row["accepted"] = r.chosen->accepted;
    }
    j["rows"].push_back(std::move(row));
  }
  out << j.dump(2) << '\n';
}

void write_report_csv(std::ostream& out, const AblationReport& report) {
  using text::format_double;
  for (const auto& [k, v] : report.header) out << "# " << k << '=' << v << '\n';
  out << "# block_dims=";
  for (const BlockKind b : features::kAllBlocks) {
    out << features::to_string(b) << ':' << report.dims[b] << (b == BlockKind::TweetEmbed ? "\n" : ",");
  }
  csv::write_row(out, {"row_id", "task", "name", "blocks", "dim", "macro_f1", "accuracy", "max_depth",
                       "min_child_weight", "best_round", "skipped", "note"});
  for (const auto& r : report.rows) {
    csv::write_row(out, {std::to_string(r.row_id), std::string(to_string(r.task)), r.name, block_list(r.blocks),
                         std::to_string(r.dim), r.skipped ? "" : format_double(r.macro_f1),
                         r.skipped ? "" : format_double(r.accuracy),
                         r.chosen ? std::to_string(r.chosen->max_depth) : "",
                         r.chosen ? format_double(r.chosen->min_child_weight) : "",
                         r.chosen ? std::to_string(r.chosen->best_round) : "", r.skipped ? "1" : "0", r.note});
  }
}

}  // namespace xenorisk::model
