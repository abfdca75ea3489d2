#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "xenorisk/cli/run.hpp"
#include "xenorisk/common/digest.hpp"

using xenorisk::cli::run_command;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "xenorisk");
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

void write_config(const std::filesystem::path& p, std::size_t embed_dim = 8) {
  json cfg = {{"seed", 5},
              {"synth", {{"n_reference", 40}, {"n_hateful_low", 20}, {"n_hateful_high", 20}, {"embed_dim", embed_dim}}},
              {"train", {{"max_depth_grid", {3}}, {"min_child_weight_grid", {1.0}}, {"n_rounds", 30}}}};
  oracle::write_text(p, cfg.dump());
}

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run({"--help"}).code, 0);
  const auto r = run({"label", "--bogus"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
}

TEST(Cli, MissingBotScoresIsDataError) {
  oracle::TempDir dir("cli-bots");
  write_config(dir.path() / "c.json");
  ASSERT_EQ(run({"synth", "--config", (dir.path() / "c.json").string(), "--out", dir.path().string()}).code, 0);
  std::filesystem::remove(dir.path() / "bot_scores.csv");
  const auto r = run({"label", "--out", dir.path().string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bot_scores.csv"), std::string::npos);

  json named = {{"bot_scores", "nowhere/scores.csv"}};
  oracle::write_text(dir.path() / "named.json", named.dump());
  const auto n = run({"label", "--config", (dir.path() / "named.json").string(), "--out", dir.path().string()});
  EXPECT_EQ(n.code, 2);
  EXPECT_NE(n.err.find("scores.csv"), std::string::npos);
}

TEST(Cli, ValidationErrors) {
  oracle::TempDir dir("cli-validation");
  oracle::write_text(dir.path() / "bad.json", "{not json");
  EXPECT_EQ(run({"synth", "--config", (dir.path() / "bad.json").string(), "--out", dir.path().string()}).code, 1);
  oracle::write_text(dir.path() / "unknown.json", R"({"train": {"depth": 3}})");
  write_config(dir.path() / "c.json");
  ASSERT_EQ(run({"synth", "--config", (dir.path() / "c.json").string(), "--out", dir.path().string()}).code, 0);
  EXPECT_EQ(run({"train", "--config", (dir.path() / "unknown.json").string(), "--task", "t1", "--out",
                 dir.path().string()})
                .code,
            1);
  EXPECT_EQ(run({"train", "--out", dir.path().string()}).code, 1);
  EXPECT_EQ(run({"label", "--threshold", "1.5", "--out", dir.path().string()}).code, 1);
  EXPECT_EQ(run({"featurize", "--blocks", "nope", "--out", dir.path().string()}).code, 1);
}

TEST(Cli, SynthThenAblateIsDeterministic) {
  oracle::TempDir a("cli-a"), b("cli-b");
  std::map<std::string, std::string> digests[2];
  int k = 0;
  for (const auto* dir : {&a, &b}) {
    write_config(dir->path() / "c.json");
    const auto cfg = (dir->path() / "c.json").string();
    ASSERT_EQ(run({"synth", "--config", cfg, "--out", dir->path().string()}).code, 0);
    const auto r = run({"ablate", "--config", cfg, "--out", dir->path().string(), "--threads", k ? "2" : "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* f : {"report.json", "report.csv", "labels.csv", "features.xrfm"}) {
      ASSERT_TRUE(std::filesystem::exists(dir->path() / f)) << f;
      digests[k][f] = xenorisk::sha256_file(dir->path() / f);
    }
    ++k;
  }
  EXPECT_EQ(digests[0], digests[1]);

  const auto report = json::parse(oracle::read_text(a.path() / "report.json"));
  std::set<int> ids;
  for (const auto& row : report.at("rows")) ids.insert(row.at("row_id").get<int>());
  EXPECT_EQ(ids.size(), 26u);

  const auto manifest = json::parse(oracle::read_text(a.path() / "manifest.json"));
  EXPECT_EQ(manifest.at("command"), "ablate");
  EXPECT_EQ(manifest.at("config_hash").get<std::string>().size(), 64u);
  EXPECT_FALSE(manifest.at("inputs").empty());
  bool has_report = false;
  for (const auto& o : manifest.at("outputs")) {
    if (o.at("path") == "report.json") has_report = o.at("sha256") == digests[0]["report.json"];
  }
  EXPECT_TRUE(has_report);

  const auto table = run({"report", "--out", a.path().string()});
  EXPECT_EQ(table.code, 0);
  EXPECT_TRUE(std::filesystem::exists(a.path() / "table.csv"));
}

TEST(Cli, StageCommandsWriteOutputs) {
  oracle::TempDir dir("cli-stages");
  write_config(dir.path() / "c.json");
  const auto cfg = (dir.path() / "c.json").string();
  const auto out = dir.path().string();
  ASSERT_EQ(run({"synth", "--config", cfg, "--out", out}).code, 0);
  for (const auto& [cmd, file] : std::vector<std::pair<std::string, std::string>>{
           {"ingest", "ingest_report.json"}, {"label", "cohorts.json"}, {"logodds", "logodds_pre.csv"},
           {"featurize", "features.xrfm"}, {"stats", "activity.csv"}}) {
    const auto r = run({cmd, "--config", cfg, "--out", out});
    EXPECT_EQ(r.code, 0) << cmd << ": " << r.err;
    EXPECT_TRUE(std::filesystem::exists(dir.path() / file)) << file;
  }
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "engagement.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "logodds_post.csv"));
  const auto t = run({"train", "--config", cfg, "--task", "t1", "--out", out});
  EXPECT_EQ(t.code, 0) << t.err;
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "model.xrgb"));
  const auto at = run({"attribute", "--config", cfg, "--task", "t1", "--out", out});
  EXPECT_EQ(at.code, 0) << at.err;
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "attribution.csv"));
  const auto blocks = run({"train", "--config", cfg, "--task", "t2", "--blocks", "following,media", "--out", out});
  EXPECT_EQ(blocks.code, 0) << blocks.err;
  const auto rep = json::parse(oracle::read_text(dir.path() / "train_report.json"));
  EXPECT_EQ(rep.at("blocks").size(), 2u);
}
