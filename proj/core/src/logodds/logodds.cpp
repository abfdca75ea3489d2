#include "xenorisk/logodds/logodds.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "xenorisk/common/csv.hpp"
#include "xenorisk/common/error.hpp"
#include "xenorisk/common/text.hpp"
#include "xenorisk/lexicon/tokenizer.hpp"

namespace xenorisk::logodds {

TermCounts::TermCounts(std::map<std::string, std::uint64_t> counts) {
  for (auto& [term, n] : counts) add(term, n);
}

void TermCounts::add(const std::string& term, std::uint64_t n) {
  if (n == 0) return;
  counts_[term] += n;
  total_ += n;
}

std::uint64_t TermCounts::count(const std::string& term) const {
  const auto it = counts_.find(term);
  return it == counts_.end() ? 0 : it->second;
}

std::vector<LogOddsResult> score_all_terms(const TermCounts& ci, const TermCounts& cj, const TermCounts& bg,
                                           const LogOddsConfig& config, double* alpha0_out) {
  if (ci.empty() || cj.empty()) throw ValidationError("log-odds: both corpora must be non-empty");
  if (config.unseen_alpha <= 0) throw ValidationError("log-odds: unseen_alpha must be positive");

  const double bg_total = static_cast<double>(bg.total());
  const double bg_mass = config.alpha0.value_or(bg_total);
  if (bg_total > 0 && !(bg_mass > 0)) throw ValidationError("log-odds: alpha0 must be positive");
  const double scale = bg_total > 0 ? bg_mass / bg_total : 0.0;

  const auto alpha_of = [&](const std::string& term) {
    const std::uint64_t b = bg.count(term);
    return b > 0 ? static_cast<double>(b) * scale : config.unseen_alpha;
  };

  std::set<std::string> vocab;
  for (const auto* t : {&ci, &cj, &bg}) {
    for (const auto& [term, _] : t->counts()) vocab.insert(term);
  }
  double alpha0 = 0;
  for (const auto& term : vocab) alpha0 += alpha_of(term);
  if (alpha0_out) *alpha0_out = alpha0;

  const double ni = static_cast<double>(ci.total());
  const double nj = static_cast<double>(cj.total());
  std::vector<LogOddsResult> out;
  for (const auto& term : vocab) {
    const std::uint64_t yi = ci.count(term);
    const std::uint64_t yj = cj.count(term);
    if (yi + yj < config.min_count || yi + yj == 0) continue;
    LogOddsResult r;
    r.term = term;
    r.y_i = yi;
    r.y_j = yj;
    r.alpha = alpha_of(term);
    const double ai = static_cast<double>(yi) + r.alpha;
    const double aj = static_cast<double>(yj) + r.alpha;
    r.delta = std::log(ai / (ni + alpha0 - ai)) - std::log(aj / (nj + alpha0 - aj));
    r.variance = 1.0 / ai + 1.0 / aj;
    r.zscore = r.delta / std::sqrt(r.variance);
    out.push_back(std::move(r));
  }
  return out;
}

LogOddsReport compute_log_odds(const TermCounts& ci, const TermCounts& cj, const TermCounts& bg,
                               const LogOddsConfig& config) {
  LogOddsReport report;
  auto all = score_all_terms(ci, cj, bg, config, &report.alpha0);

  auto by_z_desc = all;
  std::sort(by_z_desc.begin(), by_z_desc.end(), [](const LogOddsResult& a, const LogOddsResult& b) {
    return a.zscore != b.zscore ? a.zscore > b.zscore : a.term < b.term;
  });
  for (const auto& r : by_z_desc) {
    if (report.over_i.size() == config.top_k || r.zscore <= 0) break;
    report.over_i.push_back(r);
  }
  auto by_z_asc = std::move(all);
  std::sort(by_z_asc.begin(), by_z_asc.end(), [](const LogOddsResult& a, const LogOddsResult& b) {
    return a.zscore != b.zscore ? a.zscore < b.zscore : a.term < b.term;
  });
  for (const auto& r : by_z_asc) {
    if (report.over_j.size() == config.top_k || r.zscore >= 0) break;
    report.over_j.push_back(r);
  }
  return report;
}

void write_csv(std::ostream& out, const LogOddsReport& report, const std::string& label_i,
               const std::string& label_j) {
  csv::write_row(out, {"direction", "term", "y_i", "y_j", "delta", "variance", "zscore"});
  const auto emit = [&](const std::string& dir, const std::vector<LogOddsResult>& rows) {
    for (const auto& r : rows) {
      csv::write_row(out, {dir, r.term, std::to_string(r.y_i), std::to_string(r.y_j), text::format_double(r.delta),
                           text::format_double(r.variance), text::format_double(r.zscore)});
    }
  };
  emit(label_i, report.over_i);
  emit(label_j, report.over_j);
}

TermCounts load_term_counts(const std::filesystem::path& path) {
  TermCounts tc;
  for (const auto& row : csv::read_file(path, {"term", "count"})) {
    if (row.fields.size() != 2) {
      throw DataError(path.string() + " line " + std::to_string(row.line_number) + ": expected term,count");
    }
    try {
      tc.add(row.fields[0], std::stoull(row.fields[1]));
    } catch (const std::exception&) {
      throw DataError(path.string() + " line " + std::to_string(row.line_number) + ": bad count");
    }
  }
  return tc;
}

void write_term_counts(std::ostream& out, const TermCounts& counts) {
  csv::write_row(out, {"term", "count"});
  for (const auto& [term, n] : counts.counts()) csv::write_row(out, {term, std::to_string(n)});
}

TermCounts count_unigrams(std::span<const std::string_view> texts) {
  TermCounts out;
  for (const auto t : texts) {
    for (const auto& tok : lexicon::tokenize(t).tokens) out.add(tok);
  }
  return out;
}

}  // namespace xenorisk::logodds
