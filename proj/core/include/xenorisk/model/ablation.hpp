#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xenorisk/features/blocks.hpp"
#include "xenorisk/features/feature_matrix.hpp"
#include "xenorisk/model/split.hpp"
#include "xenorisk/model/training.hpp"

namespace xenorisk::model {

// T1: hateful (low or high) = 1 vs reference = 0. T2: high = 1 vs low = 0.
enum class Task { T1, T2 };

std::string_view to_string(Task t);
std::optional<Task> parse_task(std::string_view s);

struct TaskData {
  std::vector<std::size_t> rows;  // indices into the feature matrix
  std::vector<int> y;
};

TaskData task_data(const features::FeatureMatrix& m, Task task);

// The stratified train/test split of one task, shared by every row of a run.
TrainTestSplit task_split(std::span<const int> y, Task task, const TrainConfig& config);

// Seed used to train one ablation row.
std::uint64_t row_seed(const TrainConfig& config, int row_id, Task task);

struct AblationRowSpec {
  int row_id = 0;
  std::string name;
  std::vector<features::BlockKind> blocks;  // empty for the majority baseline
  std::optional<Task> only_task;
};

// The 26 rows of the ablation table: row 1 is the majority baseline, rows
// 2-8 content-agnostic blocks and their combinations, rows 9-23 content
// blocks and their combinations, rows 24-26 cross combinations.
std::span<const AblationRowSpec> ablation_rows();

std::size_t row_dim(const AblationRowSpec& row, const features::BlockDims& dims);

struct AblationRow {
  int row_id = 0;
  std::string name;
  Task task = Task::T1;
  std::vector<features::BlockKind> blocks;
  std::size_t dim = 0;
  bool skipped = false;
  std::string note;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  std::optional<GridPointResult> chosen;
};

struct AblationConfig {
  TrainConfig train;
  std::vector<Task> tasks{Task::T1, Task::T2};
  std::vector<int> row_ids;  // empty = every row
  std::size_t threads = 0;   // rows trained concurrently
};

struct AblationReport {
  std::map<std::string, std::string> header;  // run metadata copied into both outputs
  features::BlockDims dims;
  std::map<Task, std::pair<std::size_t, std::size_t>> split_sizes;  // task -> (train, test)
  std::vector<AblationRow> rows;  // sorted by (row_id, task)
};

// Each task gets one stratified train/test split shared by all rows. A row
// whose blocks are absent from the matrix is reported as skipped.
AblationReport run_ablation(const features::FeatureMatrix& m, const AblationConfig& config);

void write_report_json(std::ostream& out, const AblationReport& report);
// Comment lines `# key=value` for the header, then
// `row_id,task,name,blocks,dim,macro_f1,accuracy,max_depth,min_child_weight,best_round,skipped,note`.
void write_report_csv(std::ostream& out, const AblationReport& report);

}  // namespace xenorisk::model
