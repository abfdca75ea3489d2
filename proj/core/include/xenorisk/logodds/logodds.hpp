#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xenorisk::logodds {

// Unigram counts of one corpus. Absent terms have count zero.
class TermCounts {
 public:
  TermCounts() = default;
  explicit TermCounts(std::map<std::string, std::uint64_t> counts);

  void add(const std::string& term, std::uint64_t n = 1);
  std::uint64_t count(const std::string& term) const;
  std::uint64_t total() const { return total_; }
  const std::map<std::string, std::uint64_t>& counts() const { return counts_; }
  bool empty() const { return total_ == 0; }

 private:
  std::map<std::string, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

struct LogOddsResult {
  std::string term;
  std::uint64_t y_i = 0;
  std::uint64_t y_j = 0;
  double alpha = 0;     // prior pseudo-count for the term
  double delta = 0;     // log-odds difference, positive = over-represented in corpus i
  double variance = 0;  // 1/(y_i + alpha) + 1/(y_j + alpha)
  double zscore = 0;    // delta / sqrt(variance)
};

struct LogOddsConfig {
  std::uint64_t min_count = 10;         // terms with y_i + y_j below this are dropped
  std::size_t top_k = 100;              // rows kept per direction
  std::optional<double> alpha0;         // prior mass given to background terms; default = background total
  double unseen_alpha = 0.5;            // prior for terms absent from the background
};

struct LogOddsReport {
  std::vector<LogOddsResult> over_i;  // z descending, term ascending on ties
  std::vector<LogOddsResult> over_j;  // z ascending, term ascending on ties
  double alpha0 = 0;                  // total prior mass used in the estimator
};

// Weighted log-odds with an informative Dirichlet prior.
//
// For each term w with y_i + y_j >= min_count:
//   delta_w = log[(y_i+a_w)/(n_i+a_0-y_i-a_w)] - log[(y_j+a_w)/(n_j+a_0-y_j-a_w)]
//   var_w   = 1/(y_i+a_w) + 1/(y_j+a_w)
// where a_w is the background count rescaled so background terms carry
// `alpha0` in total, terms missing from the background get `unseen_alpha`,
// and a_0 sums a_w over the union vocabulary of all three count tables.
// Throws ValidationError when either corpus is empty.
LogOddsReport compute_log_odds(const TermCounts& corpus_i, const TermCounts& corpus_j, const TermCounts& background,
                               const LogOddsConfig& config = {});

// Every surviving term, unsorted by direction (z descending).
std::vector<LogOddsResult> score_all_terms(const TermCounts& corpus_i, const TermCounts& corpus_j,
                                           const TermCounts& background, const LogOddsConfig& config,
                                           double* alpha0_out = nullptr);

// `direction,term,y_i,y_j,delta,variance,zscore`, with direction "i" rows then
// "j" rows.
void write_csv(std::ostream& out, const LogOddsReport& report, const std::string& label_i = "i",
               const std::string& label_j = "j");

// `term,count` CSV.
TermCounts load_term_counts(const std::filesystem::path& path);
void write_term_counts(std::ostream& out, const TermCounts& counts);

// Unigram counts over tokenized texts (hashtags and handles stay whole,
// URLs are dropped).
TermCounts count_unigrams(std::span<const std::string_view> texts);

}  // namespace xenorisk::logodds
