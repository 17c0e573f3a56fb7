#include "vsclab/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

namespace {

struct CommonArgs {
  std::string config;
  std::string out = "vsclab_out";
  std::int64_t seed = -1;  // -1: keep the config's seed
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "run configuration (JSON)")->required();
  cmd->add_option("--out", args.out, "output directory for artifacts");
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_flag("--quiet", args.quiet, "suppress progress output");
}

vsclab::RunConfig load(const CommonArgs& args) {
  vsclab::RunConfig cfg = vsclab::load_config(args.config);
  if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
  if (!cfg.output_dir.empty() && args.out == "vsclab_out") {
    // config-level output_dir applies unless --out was given explicitly
  }
  return cfg;
}

void note(const CommonArgs& args, const std::string& msg) {
  if (!args.quiet) std::fprintf(stderr, "vsclab: %s\n", msg.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variational source condition laboratory"};
  app.require_subcommand(1);

  CommonArgs args;
  auto* cmd_solve = app.add_subcommand("solve", "one Tikhonov solve");
  auto* cmd_distfun = app.add_subcommand("distfun", "sample the distance function");
  auto* cmd_indexfun = app.add_subcommand("indexfun", "build the index function");
  auto* cmd_verify = app.add_subcommand("verify", "verify the variational source condition");
  auto* cmd_rates = app.add_subcommand("rates", "run the noise-sweep rate experiment");
  auto* cmd_pipeline = app.add_subcommand("pipeline", "run every stage");
  for (auto* cmd : {cmd_solve, cmd_distfun, cmd_indexfun, cmd_verify, cmd_rates, cmd_pipeline}) {
    add_common(cmd, args);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const vsclab::RunConfig cfg = load(args);
    const std::filesystem::path out =
        (args.out == "vsclab_out" && !cfg.output_dir.empty()) ? cfg.output_dir : args.out;
    if (cmd_solve->parsed()) {
      vsclab::stage_solve(cfg, out);
      note(args, "wrote tikhonov_solution.json");
    } else if (cmd_distfun->parsed()) {
      vsclab::stage_distfun(cfg, out);
      note(args, "wrote distance_profile.csv/json");
    } else if (cmd_indexfun->parsed()) {
      vsclab::stage_indexfun(cfg, out);
      note(args, "wrote index_function.csv/json");
    } else if (cmd_verify->parsed()) {
      vsclab::stage_verify(cfg, out);
      note(args, "wrote vsc_report.json");
    } else if (cmd_rates->parsed()) {
      vsclab::stage_rates(cfg, out);
      note(args, "wrote rate_report.csv/json");
    } else if (cmd_pipeline->parsed()) {
      const int code = vsclab::run_pipeline(cfg, out);
      note(args, code == 0 ? "pipeline complete" : "pipeline complete with VSC violations");
      return code;
    }
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "vsclab: error: %s\n", e.what());
    return 1;
  }
}
