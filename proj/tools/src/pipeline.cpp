#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>

#include "xenorisk/common/digest.hpp"
#include "xenorisk/common/error.hpp"
#include "xenorisk/common/text.hpp"
#include "xenorisk/corpus/gazetteer.hpp"
#include "xenorisk/features/featurize.hpp"
#include "xenorisk/lexicon/lexicon.hpp"
#include "xenorisk/logodds/logodds.hpp"
#include "xenorisk/model/importance.hpp"
#include "xenorisk/model/metrics.hpp"
#include "xenorisk/stats/bootstrap.hpp"
#include "xenorisk/stats/engagement.hpp"
#include "xenorisk/synth/synth.hpp"

#ifndef XENORISK_DEFAULT_DATA_DIR
#define XENORISK_DEFAULT_DATA_DIR "data"
#endif

namespace xenorisk::cli {
namespace {

json read_json_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw DataError("cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("invalid JSON in " + p.string() + ": " + e.what());
  }
}

std::ofstream open_output(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw DataError("cannot write " + p.string());
  return out;
}

void write_json(const fs::path& p, const json& j) {
  auto out = open_output(p);
  out << j.dump(2) << '\n';
}

std::string period_of(const std::string& s) {
  if (s != "pre" && s != "post") throw ValidationError("period must be 'pre' or 'post'");
  return s;
}

}  // namespace

Run::Run(std::string command, std::vector<std::string> args, const Options& options, std::ostream& log)
    : command_(std::move(command)), args_(std::move(args)), log_(log) {
  if (!options.config.empty()) {
    const fs::path p = options.config;
    config_ = read_json_file(p);
    if (!config_.is_object()) throw ValidationError("config must be a JSON object");
    config_dir_ = fs::absolute(p).parent_path();
    inputs_.push_back(p);
  } else {
    config_ = json::object();
    config_dir_ = fs::current_path();
  }
  if (options.seed) config_["seed"] = *options.seed;
  if (!options.blocks.empty()) config_["blocks"] = options.blocks;
  if (!options.task.empty()) config_["task"] = options.task;
  if (options.threshold) config_["bot_threshold"] = *options.threshold;
  if (options.threads) config_["threads"] = *options.threads;
  seed_ = get<std::uint64_t>("seed", 0);
  threads_ = get<std::size_t>("threads", 0);

  out_dir_ = options.out.empty() ? fs::path(".") : fs::path(options.out);
  in_dir_ = options.in.empty() ? out_dir_ : fs::path(options.in);
  if (const char* env = std::getenv("XENORISK_DATA_DIR"); env && *env) {
    data_dir_ = env;
  } else {
    data_dir_ = XENORISK_DEFAULT_DATA_DIR;
  }
  if (config_.contains("data_dir")) data_dir_ = resolve(get<std::string>("data_dir", ""));
  fs::create_directories(out_dir_);
}

void Run::throw_bad_value(const std::string& key) const {
  throw ValidationError("config key '" + key + "' has the wrong type");
}

const json* Run::section(const std::string& key) const {
  const auto it = config_.find(key);
  if (it == config_.end() || it->is_null()) return nullptr;
  if (!it->is_object()) throw ValidationError("config key '" + key + "' must be an object");
  return &*it;
}

fs::path Run::resolve(const std::string& value) const {
  const fs::path p = value;
  return p.is_absolute() ? p : config_dir_ / p;
}

std::string Run::config_hash() const {
  // the thread count changes scheduling only, never results
  json identity = config_;
  identity.erase("threads");
  return sha256_hex(identity.dump());
}

std::optional<fs::path> Run::find(const std::string& key, const std::string& file, bool data_fallback) {
  if (config_.contains(key)) {
    const fs::path p = resolve(get<std::string>(key, ""));
    if (!fs::exists(p)) throw DataError("missing " + key + " file: " + p.string());
    note_input(p);
    return p;
  }
  if (fs::exists(in_dir_ / file)) {
    note_input(in_dir_ / file);
    return in_dir_ / file;
  }
  if (data_fallback && fs::exists(data_dir_ / file)) {
    note_input(data_dir_ / file);
    return data_dir_ / file;
  }
  return std::nullopt;
}

fs::path Run::require(const std::string& key, const std::string& file, bool data_fallback) {
  if (auto p = find(key, file, data_fallback)) return *p;
  std::string where = (in_dir_ / file).string();
  if (data_fallback) where += " or " + (data_dir_ / file).string();
  throw DataError("missing " + key + " file: " + where + " (set '" + key + "' in the config)");
}

fs::path Run::output(const std::string& name) {
  const fs::path p = out_dir_ / name;
  if (std::find(outputs_.begin(), outputs_.end(), p) == outputs_.end()) outputs_.push_back(p);
  return p;
}

void Run::note_input(const fs::path& p) {
  if (std::find(inputs_.begin(), inputs_.end(), p) == inputs_.end()) inputs_.push_back(p);
}

void Run::write_manifest() {
  json m;
  m["command"] = command_;
  m["args"] = args_;
  m["config"] = config_;
  m["config_hash"] = config_hash();
  m["seeds"] = {{"seed", seed_}};
  m["inputs"] = json::array();
  for (const auto& p : inputs_) {
    if (fs::is_regular_file(p)) m["inputs"].push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
  }
  m["outputs"] = json::array();
  for (const auto& p : outputs_) {
    if (fs::is_regular_file(p)) {
      m["outputs"].push_back({{"path", p.filename().string()}, {"sha256", sha256_file(p)}});
    }
  }
  write_json(out_dir_ / "manifest.json", m);
}

Instant split_instant(const Run& run) {
  const auto s = run.get<std::string>("split_instant", "");
  if (s.empty()) return default_split_instant();
  const auto t = parse_rfc3339(s);
  if (!t) throw ValidationError("split_instant is not an RFC 3339 timestamp: " + s);
  return *t;
}

corpus::Corpus load_corpus_inputs(Run& run, corpus::IngestReport& report) {
  corpus::CorpusFiles files;
  files.tweets = run.require("tweets", "tweets.jsonl", false);
  files.users = run.find("users", "users.jsonl", false);
  files.follows = run.find("follows", "follows.csv", false);
  return corpus::load_corpus(files, report);
}

corpus::CohortResult compute_labels(Run& run, const corpus::Corpus& corpus) {
  const auto slurs = lexicon::load_lexicon(run.require("slurs", "slurs.lex", true));
  const auto covid = lexicon::load_lexicon(run.require("covid", "covid.lex", true));
  const auto gazetteer = corpus::load_gazetteer(run.require("gazetteer", "gazetteer.csv", true));
  const auto bots = corpus::load_bot_scores(run.require("bot_scores", "bot_scores.csv", false));
  const auto split = corpus::split_pre_post(corpus, split_instant(run));
  const auto facts = corpus::collect_user_facts(corpus, split, slurs, covid, gazetteer);
  corpus::CohortConfig cfg;
  cfg.split_instant = split.split_instant;
  cfg.reference_sample = run.get<std::size_t>("reference_sample", 0);
  cfg.seed = run.seed();
  cfg.bot_threshold = run.get<double>("bot_threshold", 0.5);
  if (!(cfg.bot_threshold >= 0.0 && cfg.bot_threshold <= 1.0)) throw ValidationError("threshold must lie in [0, 1]");
  return corpus::assign_cohorts(facts, bots, cfg);
}

corpus::CohortResult obtain_labels(Run& run, const corpus::Corpus& corpus) {
  if (const auto p = run.find("labels", "labels.csv", false)) return corpus::read_labels(*p);
  auto labels = compute_labels(run, corpus);
  auto out = open_output(run.output("labels.csv"));
  corpus::write_labels(out, labels);
  return labels;
}

std::vector<features::BlockKind> blocks(const Run& run, const Options&) {
  return features::parse_block_list(run.get<std::string>("blocks", "all"));
}

std::vector<model::Task> tasks(const Run& run, const Options&) {
  const auto s = run.get<std::string>("task", "");
  if (s.empty() || s == "all") return {model::Task::T1, model::Task::T2};
  const auto t = model::parse_task(s);
  if (!t) throw ValidationError("task must be t1 or t2, got '" + s + "'");
  return {*t};
}

features::FeatureMatrix compute_features(Run& run) {
  corpus::IngestReport report;
  const auto corpus = load_corpus_inputs(run, report);
  const auto labels = obtain_labels(run, corpus);
  const auto split = corpus::split_pre_post(corpus, split_instant(run));
  const auto wanted = blocks(run, {});
  const auto has = [&](features::BlockKind k) { return std::find(wanted.begin(), wanted.end(), k) != wanted.end(); };

  std::optional<features::NelaBundle> nela;
  std::optional<lexicon::Lexicon> liwc;
  std::optional<features::MediaRatingMap> media;
  std::optional<features::RedirectMap> redirects;
  std::optional<features::EmbeddingTable> profile;
  std::optional<features::EmbeddingTable> tweet;
  features::FeatureResources res;
  if (has(features::BlockKind::Nela)) {
    nela = features::load_nela_bundle(run.require("nela", "nela.lex", true));
    res.nela = &*nela;
  }
  if (has(features::BlockKind::Liwc)) {
    liwc = lexicon::load_lexicon(run.require("liwc", "liwc_open.lex", true));
    res.liwc = &*liwc;
  }
  if (has(features::BlockKind::Media)) {
    media = features::load_media_ratings(run.require("media_ratings", "media_ratings.csv", true));
    res.media_ratings = &*media;
    if (const auto p = run.find("redirects", "redirects.csv", false)) {
      redirects = features::load_redirects(*p);
      res.redirects = &*redirects;
    }
  }
  if (has(features::BlockKind::ProfileEmbed)) {
    profile = features::read_embeddings(run.require("profile_embeddings", "profile_embeddings.bin", false));
    res.profile_embeddings = &*profile;
  }
  if (has(features::BlockKind::TweetEmbed)) {
    tweet = features::read_embeddings(run.require("tweet_embeddings", "tweet_embeddings.bin", false));
    res.tweet_embeddings = &*tweet;
  }

  features::FeaturizeConfig cfg;
  cfg.blocks = wanted;
  cfg.tweets_per_user = run.get<std::size_t>("tweets_per_user", 0);
  cfg.follow_top_k = run.get<std::size_t>("follow_top_k", 50);
  cfg.seed = run.seed();
  cfg.threads = run.threads();
  auto m = features::featurize(corpus, split, labels, res, cfg);
  m.metadata["config_hash"] = run.config_hash();
  features::save_feature_matrix(run.output("features.xrfm"), m);
  return m;
}

features::FeatureMatrix obtain_features(Run& run) {
  if (const auto p = run.find("features", "features.xrfm", false)) return features::load_feature_matrix(*p);
  return compute_features(run);
}

model::TrainConfig train_config(const Run& run) {
  model::TrainConfig c;
  c.seed = run.seed();
  c.threads = run.threads();
  if (const json* t = run.section("train")) {
    try {
      for (const auto& [key, v] : t->items()) {
        if (key == "learning_rate") c.learning_rate = v.get<double>();
        else if (key == "min_split_loss") c.min_split_loss = v.get<double>();
        else if (key == "column_subsample") c.column_subsample = v.get<double>();
        else if (key == "reg_lambda") c.reg_lambda = v.get<double>();
        else if (key == "max_depth_grid") c.max_depth_grid = v.get<std::vector<int>>();
        else if (key == "min_child_weight_grid") c.min_child_weight_grid = v.get<std::vector<double>>();
        else if (key == "n_rounds") c.n_rounds = v.get<std::size_t>();
        else if (key == "patience") c.patience = v.get<std::size_t>();
        else if (key == "cv_folds") c.cv_folds = v.get<std::size_t>();
        else if (key == "test_fraction") c.test_fraction = v.get<double>();
        else if (key == "max_bins") c.max_bins = v.get<std::size_t>();
        else if (key == "null_gate_z") c.null_gate_z = v.get<double>();
        else throw ValidationError("unknown train config key '" + key + "'");
      }
    } catch (const json::exception& e) {
      throw ValidationError(std::string("invalid train config: ") + e.what());
    }
  }
  c.validate();
  return c;
}

int cmd_ingest(Run& run) {
  corpus::IngestReport report;
  const auto corpus = load_corpus_inputs(run, report);
  json j;
  j["lines"] = report.lines;
  j["accepted"] = report.accepted;
  j["duplicates"] = report.duplicates;
  j["rejected"] = report.rejects.size();
  j["tweets"] = corpus.tweets().size();
  j["users"] = corpus.users().size();
  j["notes"] = report.notes;
  write_json(run.output("ingest_report.json"), j);
  auto out = open_output(run.output("rejects.csv"));
  out << "source,line,reason\n";
  for (const auto& r : report.rejects) {
    out << r.source << ',' << r.line << ",\"" << r.reason << "\"\n";
  }
  run.log() << "ingested " << corpus.tweets().size() << " tweets and " << corpus.users().size() << " users ("
            << report.rejects.size() << " rejected lines)\n";
  return 0;
}

int cmd_label(Run& run) {
  corpus::IngestReport report;
  const auto corpus = load_corpus_inputs(run, report);
  const auto labels = compute_labels(run, corpus);
  {
    auto out = open_output(run.output("labels.csv"));
    corpus::write_labels(out, labels);
  }
  json j;
  for (const auto& [c, n] : labels.counts()) j["counts"][std::string(corpus::to_string(c))] = n;
  std::map<std::string, std::size_t> reasons;
  for (const auto& u : labels.users) {
    if (u.label.label == corpus::Cohort::Excluded) ++reasons[std::string(corpus::to_string(u.label.reason))];
  }
  j["excluded_by_reason"] = reasons;
  j["warnings"] = labels.warnings;
  write_json(run.output("cohorts.json"), j);
  run.log() << "labeled " << labels.users.size() << " users\n";
  for (const auto& [c, n] : labels.counts()) run.log() << "  " << corpus::to_string(c) << ": " << n << '\n';
  return 0;
}

int cmd_logodds(Run& run) {
  corpus::IngestReport report;
  const auto corpus = load_corpus_inputs(run, report);
  const auto labels = obtain_labels(run, corpus);
  const auto split = corpus::split_pre_post(corpus, split_instant(run));
  logodds::LogOddsConfig cfg;
  if (const json* s = run.section("logodds")) {
    cfg.min_count = s->value("min_count", cfg.min_count);
    cfg.top_k = s->value("top_k", cfg.top_k);
    if (s->contains("alpha0")) cfg.alpha0 = s->at("alpha0").get<double>();
  }
  for (const std::string period : {"pre", "post"}) {
    std::vector<std::string_view> hateful;
    std::vector<std::string_view> reference;
    for (const auto& u : labels.users) {
      const bool h = corpus::is_hateful(u.label.label);
      if (!h && u.label.label != corpus::Cohort::Reference) continue;
      for (const std::size_t idx : corpus.tweets_of(u.user_id)) {
        const auto& t = corpus.tweets()[idx];
        if (split.is_pre(t) != (period_of(period) == "pre")) continue;
        (h ? hateful : reference).push_back(t.text);
      }
    }
    const auto ci = logodds::count_unigrams(hateful);
    const auto cj = logodds::count_unigrams(reference);
    logodds::TermCounts background;
    if (const auto p = run.find("background_" + period, "background_" + period + ".csv", false)) {
      background = logodds::load_term_counts(*p);
    } else {
      // pooled group counts stand in for an external background sample
      for (const auto* c : {&ci, &cj}) {
        for (const auto& [term, n] : c->counts()) background.add(term, n);
      }
    }
    const auto rep = logodds::compute_log_odds(ci, cj, background, cfg);
    auto out = open_output(run.output("logodds_" + period + ".csv"));
    logodds::write_csv(out, rep, "hateful", "reference");
    run.log() << period << ": " << rep.over_i.size() << " hateful-leaning and " << rep.over_j.size()
              << " reference-leaning terms\n";
  }
  return 0;
}

int cmd_featurize(Run& run, const Options&) {
  const auto m = compute_features(run);
  run.log() << "featurized " << m.rows() << " users x " << m.cols() << " features\n";
  for (const auto& b : m.blocks) run.log() << "  " << features::to_string(b.kind) << ": " << b.dim << '\n';
  return 0;
}

int cmd_stats(Run& run) {
  corpus::IngestReport report;
  const auto corpus = load_corpus_inputs(run, report);
  const auto labels = obtain_labels(run, corpus);
  const auto split = corpus::split_pre_post(corpus, split_instant(run));
  stats::BootstrapOptions bo;
  bo.seed = run.seed();
  bo.threads = run.threads();
  if (const json* s = run.section("bootstrap")) {
    bo.n_resamples = s->value("n_resamples", bo.n_resamples);
    bo.confidence = s->value("confidence", bo.confidence);
  }

  std::map<std::string, std::vector<std::string>> groups;
  for (const auto& u : labels.users) {
    switch (u.label.label) {
      case corpus::Cohort::Reference: groups["reference"].push_back(u.user_id); break;
      case corpus::Cohort::HatefulLow:
        groups["hateful"].push_back(u.user_id);
        groups["hateful_low"].push_back(u.user_id);
        break;
      case corpus::Cohort::HatefulHigh:
        groups["hateful"].push_back(u.user_id);
        groups["hateful_high"].push_back(u.user_id);
        break;
      case corpus::Cohort::Excluded: break;
    }
  }
  {
    auto out = open_output(run.output("activity.csv"));
    out << "group,n_users,n_excluded,mean_percent_increase,ci_low,ci_high,n_resamples,seed\n";
    for (const auto& [name, ids] : groups) {
      const auto counts = stats::activity_counts(corpus, split, ids);
      try {
        const auto r = stats::bootstrap_percent_increase(counts, bo);
        out << name << ',' << r.n_users << ',' << r.n_excluded << ',' << text::format_double(r.mean) << ','
            << text::format_double(r.ci_low) << ',' << text::format_double(r.ci_high) << ',' << r.n_resamples << ','
            << r.seed << '\n';
        run.log() << name << ": mean percent increase " << r.mean << " [" << r.ci_low << ", " << r.ci_high << "]\n";
      } catch (const DataError& e) {
        run.log() << name << ": skipped (" << e.what() << ")\n";
      }
    }
  }

  std::vector<stats::EngagementGroup> eg{{"hateful", {}}, {"reference", {}}};
  for (const auto& u : labels.users) {
    const bool h = corpus::is_hateful(u.label.label);
    if (!h && u.label.label != corpus::Cohort::Reference) continue;
    for (const std::size_t idx : corpus.tweets_of(u.user_id)) {
      const auto& t = corpus.tweets()[idx];
      if (!split.is_pre(t)) eg[h ? 0 : 1].tweets.push_back(&t);
    }
  }
  const auto slurs = lexicon::load_lexicon(run.require("slurs", "slurs.lex", true));
  stats::EngagementOptions eo;
  eo.slurs = &slurs;
  const auto summary = stats::compare_engagement(eg, eo);
  auto out = open_output(run.output("engagement.csv"));
  stats::write_engagement_csv(out, summary);
  for (const auto& w : summary.warnings) run.log() << "warning: " << w << '\n';
  return 0;
}

namespace {

struct Prepared {
  model::Matrix x_train, x_test;
  std::vector<int> y_train, y_test;
  std::vector<std::string> names;
  std::vector<features::BlockKind> blocks;
};

Prepared prepare(const features::FeatureMatrix& m, const std::vector<features::BlockKind>& wanted, model::Task task,
                 const model::TrainConfig& tc) {
  Prepared p;
  for (const auto b : features::canonical_blocks(wanted)) {
    if (m.has_block(b)) p.blocks.push_back(b);
  }
  if (p.blocks.empty()) throw ValidationError("none of the requested blocks is present in the feature matrix");
  const auto cols = m.columns_for(p.blocks);
  for (const auto c : cols) p.names.push_back(m.feature_names[c]);
  const auto data = model::task_data(m, task);
  if (data.y.empty()) throw DataError("no users for task " + std::string(model::to_string(task)));
  const auto split = model::task_split(data.y, task, tc);
  model::Matrix full(m.rows(), m.cols());
  full.values = m.values;
  const auto train_rows = model::gather<std::size_t>(data.rows, split.train);
  const auto test_rows = model::gather<std::size_t>(data.rows, split.test);
  p.x_train = model::select(full, train_rows, cols);
  p.x_test = model::select(full, test_rows, cols);
  p.y_train = model::gather<int>(data.y, split.train);
  p.y_test = model::gather<int>(data.y, split.test);
  return p;
}

json grid_json(const model::TrainedModel& tm) {
  json g = json::array();
  for (const auto& r : tm.grid) {
    g.push_back({{"max_depth", r.max_depth},
                 {"min_child_weight", r.min_child_weight},
                 {"best_round", r.best_round},
                 {"cv_logloss", r.cv_logloss},
                 {"null_logloss", r.null_logloss},
                 {"gate_z", std::isfinite(r.gate_z) ? json(r.gate_z) : json("inf")},
                 {"accepted", r.accepted},
                 {"cv_macro_f1", r.cv_macro_f1},
                 {"cv_accuracy", r.cv_accuracy}});
  }
  return g;
}

model::Task single_task(const Run& run, const Options& o) {
  const auto t = tasks(run, o);
  if (t.size() != 1) throw ValidationError("this command needs --task t1 or --task t2");
  return t.front();
}

}  // namespace

int cmd_train(Run& run, const Options& options) {
  const auto m = obtain_features(run);
  const auto tc = train_config(run);
  const auto task = single_task(run, options);
  const auto p = prepare(m, blocks(run, options), task, tc);
  const auto tm = model::train_gbdt(p.x_train, p.y_train, tc);
  tm.booster.save(run.output("model.xrgb"));
  const auto e = model::evaluate(p.y_test, tm.booster.predict(p.x_test));
  const auto base = model::majority_baseline(p.y_test);
  json j;
  j["task"] = model::to_string(task);
  j["config_hash"] = run.config_hash();
  j["seed"] = run.seed();
  j["blocks"] = json::array();
  for (const auto b : p.blocks) j["blocks"].push_back(features::to_string(b));
  j["dim"] = p.x_train.cols;
  j["n_train"] = p.y_train.size();
  j["n_test"] = p.y_test.size();
  j["grid"] = grid_json(tm);
  j["chosen"] = tm.chosen;
  j["trees"] = tm.booster.trees.size();
  j["test"] = {{"macro_f1", e.macro_f1},
               {"accuracy", e.accuracy},
               {"f1_negative", e.per_class[0].f1},
               {"f1_positive", e.per_class[1].f1}};
  j["majority"] = {{"macro_f1", base.macro_f1}, {"accuracy", base.accuracy}};
  write_json(run.output("train_report.json"), j);
  run.log() << "task " << model::to_string(task) << ": macro-F1 " << e.macro_f1 << ", accuracy " << e.accuracy
            << " (majority " << base.macro_f1 << " / " << base.accuracy << ")\n";
  return 0;
}

int cmd_ablate(Run& run, const Options& options) {
  const auto m = obtain_features(run);
  model::AblationConfig cfg;
  cfg.train = train_config(run);
  cfg.tasks = tasks(run, options);
  cfg.row_ids = run.get<std::vector<int>>("rows", {});
  cfg.threads = run.threads();
  auto report = model::run_ablation(m, cfg);
  report.header["config_hash"] = run.config_hash();
  report.header["seed"] = std::to_string(run.seed());
  report.header["users"] = std::to_string(m.rows());
  {
    auto out = open_output(run.output("report.json"));
    model::write_report_json(out, report);
  }
  {
    auto out = open_output(run.output("report.csv"));
    model::write_report_csv(out, report);
  }
  for (const auto& r : report.rows) {
    run.log() << r.row_id << ' ' << model::to_string(r.task) << ' ' << r.name << ": ";
    if (r.skipped) {
      run.log() << "skipped (" << r.note << ")\n";
    } else {
      run.log() << r.macro_f1 << " / " << r.accuracy << '\n';
    }
  }
  return 0;
}

int cmd_attribute(Run& run, const Options& options) {
  const auto m = obtain_features(run);
  const auto tc = train_config(run);
  const auto task = single_task(run, options);
  const auto p = prepare(m, blocks(run, options), task, tc);
  model::Booster booster;
  if (const auto path = run.find("model", "model.xrgb", false)) {
    booster = model::Booster::load(*path);
    if (booster.n_features != p.x_test.cols) throw ValidationError("model feature count does not match the blocks");
  } else {
    booster = model::train_gbdt(p.x_train, p.y_train, tc).booster;
    booster.save(run.output("model.xrgb"));
  }
  const auto n_repeats = run.get<std::size_t>("n_repeats", 10);
  const auto rep = model::permutation_importance(booster, p.x_test, p.y_test, p.names, n_repeats, run.seed(),
                                                 run.threads());
  auto out = open_output(run.output("attribution.csv"));
  model::write_attribution_csv(out, rep);
  const auto top_k = run.get<std::size_t>("top_k", 20);
  run.log() << "baseline macro-F1 " << rep.baseline_macro_f1 << "; top features:\n";
  for (std::size_t i = 0; i < std::min(top_k, rep.ranked.size()); ++i) {
    run.log() << "  " << i + 1 << ". " << rep.ranked[i].feature << ' ' << rep.ranked[i].mean << " +/- "
              << rep.ranked[i].dispersion << '\n';
  }
  return 0;
}

int cmd_synth(Run& run) {
  synth::SynthSpec spec;
  if (const json* s = run.section("synth")) spec = synth::parse_synth_spec(s->dump());
  if (run.config().contains("seed")) spec.seed = run.seed();
  const auto files = synth::generate_corpus(spec, run.out_dir());
  for (const auto& p : {files.tweets, files.users, files.follows, files.profile_embeddings, files.tweet_embeddings,
                        files.bot_scores, files.truth, files.slurs, files.media_ratings}) {
    run.output(p.filename().string());
  }
  {
    auto out = open_output(run.output("synth_spec.json"));
    out << synth::synth_spec_json(spec) << '\n';
  }
  run.log() << "wrote " << files.n_users << " users and " << files.n_tweets << " tweets to " << run.out_dir().string()
            << '\n';
  return 0;
}

int cmd_report(Run& run) {
  const auto path = run.require("report", "report.json", false);
  std::ifstream in(path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("invalid report " + path.string() + ": " + e.what());
  }
  struct Cells {
    std::string name;
    std::size_t dim = 0;
    std::map<std::string, std::pair<std::string, std::string>> by_task;
  };
  std::map<int, Cells> rows;
  for (const auto& r : j.at("rows")) {
    auto& c = rows[r.at("row_id").get<int>()];
    c.name = r.at("name").get<std::string>();
    c.dim = r.at("dim").get<std::size_t>();
    const auto cell = [&](const char* k) {
      return r.at(k).is_null() ? std::string("-") : text::format_double(r.at(k).get<double>());
    };
    c.by_task[r.at("task").get<std::string>()] = {cell("macro_f1"), cell("accuracy")};
  }
  auto out = open_output(run.output("table.csv"));
  out << "row_id,name,dim,t1_macro_f1,t1_accuracy,t2_macro_f1,t2_accuracy\n";
  for (const auto& [id, c] : rows) {
    const auto get = [&](const char* t) {
      const auto it = c.by_task.find(t);
      return it == c.by_task.end() ? std::pair<std::string, std::string>("-", "-") : it->second;
    };
    const auto t1 = get("t1");
    const auto t2 = get("t2");
    out << id << ",\"" << c.name << "\"," << c.dim << ',' << t1.first << ',' << t1.second << ',' << t2.first << ','
        << t2.second << '\n';
    run.log() << id << "\t" << c.name << "\t" << c.dim << "\t" << t1.first << "\t" << t1.second << "\t" << t2.first
              << "\t" << t2.second << '\n';
  }
  return 0;
}

}  // namespace xenorisk::cli
