#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace gedsense::cli;

  CLI::App app{"gedsense: generalized energy detection and sensing-time optimization"};
  app.require_subcommand(1);

  CommonOptions opt;
  auto add_common = [&](CLI::App* sub, bool monte_carlo) {
    sub->add_option("--config", opt.config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
    sub->add_option("--output", opt.output_path, "Output file (or directory for figures)");
    sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", opt.seed, "RNG seed (overrides GEDSENSE_SEED and the config)");
    if (monte_carlo) {
      sub->add_option("--trials", opt.trials, "Monte Carlo trials per hypothesis");
      sub->add_option("--jobs", opt.jobs, "Worker threads; results do not depend on it")->check(CLI::PositiveNumber);
    }
  };

  auto* optimize = app.add_subcommand("optimize", "Optimal sensing time and normalized throughput curve");
  add_common(optimize, false);
  optimize->add_flag("--ced", opt.ced, "Assume known noise variance (white band of infinite width)");

  auto* roc = app.add_subcommand("roc", "Theory vs. Monte Carlo false-alarm/detection table");
  add_common(roc, true);

  std::string signal_path;
  std::optional<double> target_pf;
  auto* sense = app.add_subcommand("sense", "Label one recorded window white (exit 0) or non_white (exit 1)");
  add_common(sense, false);
  sense->add_option("signal", signal_path, "Sample file (interleaved little-endian float64 I/Q)")->required();
  sense->add_option("--target-pf", target_pf, "Use a fixed false-alarm target instead of the optimized schedule");

  std::string hypothesis = "h0";
  auto* synth = app.add_subcommand("synth", "Write one synthetic window as a sample file");
  add_common(synth, false);
  synth->add_option("--hypothesis", hypothesis, "h0 (noise only) or h1 (signal plus noise)")
      ->check(CLI::IsMember({"h0", "h1"}));

  std::vector<std::string> only;
  auto* figures = app.add_subcommand("figures", "Write fig2.csv ... fig6.csv into the --output directory");
  add_common(figures, true);
  figures->add_option("--only", only, "Subset of figures, e.g. --only fig2 fig4");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidConfig;
  }

  if (optimize->parsed()) return cmd_optimize(opt);
  if (roc->parsed()) return cmd_roc(opt);
  if (sense->parsed()) return cmd_sense(opt, signal_path, target_pf);
  if (synth->parsed()) return cmd_synth(opt, hypothesis);
  if (figures->parsed()) return cmd_figures(opt, only);
  return kInvalidConfig;
}
