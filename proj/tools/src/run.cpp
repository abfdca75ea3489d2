#include "xenorisk/cli/run.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <algorithm>
#include <functional>
#include <map>

#include "pipeline.hpp"
#include "xenorisk/common/error.hpp"

namespace xenorisk::cli {
namespace {

struct Command {
  const char* name;
  const char* help;
  std::function<int(Run&, const Options&)> fn;
};

const std::vector<Command>& commands() {
  static const std::vector<Command> list = {
      {"ingest", "Validate tweets/users/follows and report rejected lines", [](Run& r, const Options&) { return cmd_ingest(r); }},
      {"label", "Assign cohort labels", [](Run& r, const Options&) { return cmd_label(r); }},
      {"logodds", "Hateful vs reference log-odds per period", [](Run& r, const Options&) { return cmd_logodds(r); }},
      {"featurize", "Build the per-user feature matrix", cmd_featurize},
      {"stats", "Activity bootstrap and engagement tests", [](Run& r, const Options&) { return cmd_stats(r); }},
      {"train", "Train one classifier for --task", cmd_train},
      {"ablate", "Run the feature-block ablation table", cmd_ablate},
      {"attribute", "Permutation importance for --task", cmd_attribute},
      {"synth", "Generate a synthetic corpus", [](Run& r, const Options&) { return cmd_synth(r); }},
      {"report", "Render report.json as a table", [](Run& r, const Options&) { return cmd_report(r); }},
  };
  return list;
}

void add_shared_flags(CLI::App& sub, Options& o) {
  sub.add_option("--config", o.config, "JSON config file");
  sub.add_option("--seed", o.seed, "Master seed (overrides the config)");
  sub.add_option("--out", o.out, "Output directory")->capture_default_str();
  sub.add_option("--in", o.in, "Directory holding earlier stage outputs (default: --out)");
  sub.add_option("--blocks", o.blocks, "Comma-separated feature blocks or 'all'");
  sub.add_option("--task", o.task, "t1, t2 or all");
  sub.add_option("--threshold", o.threshold, "Bot score threshold");
  sub.add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Risk modeling of users posting xenophobic slurs", "xenorisk"};
  app.require_subcommand(1);
  Options options;
  std::map<CLI::App*, const Command*> by_app;
  for (const auto& c : commands()) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_shared_flags(*sub, options);
    by_app[sub] = &c;
  }

  std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  const Command* cmd = nullptr;
  for (auto* sub : app.get_subcommands()) cmd = by_app.at(sub);
  try {
    Run run(cmd->name, args, options, out);
    const int rc = cmd->fn(run, options);
    run.write_manifest();
    return rc;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace xenorisk::cli
