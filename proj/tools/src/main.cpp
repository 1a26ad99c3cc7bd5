#include <iostream>
#include <utility>

#include <CLI11.hpp>

#include "hypflow_cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace hypflow::cli;
  CLI::App app{"hypflow: weighted Michael-Simon inequalities and locally constrained flows in H^{n+1}"};
  app.require_subcommand(1, 1);

  CommandOptions options;
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  const std::pair<const char*, const char*> commands[] = {
      {"verify", "evaluate the inequalities on one surface"},
      {"flow", "run the locally constrained flow and check its monotone quantities"},
      {"sweep", "verify or flow over a parameter grid"},
      {"selftest", "quadrature, finite-difference and algebra checks"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* cfg = sub->add_option("--config", config_path, "JSON run configuration");
    if (std::string(name) != "selftest") cfg->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--seed", seed, "RNG seed (overrides seed)");
    sub->add_flag("--quiet", options.quiet, "suppress the summary table");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (!config_path.empty()) options.config_path = config_path;
  if (sub->count("--out") > 0) options.out_dir = out_dir;
  if (sub->count("--seed") > 0) options.seed = seed;
  return run_command(sub->get_name(), options, std::cout, std::cerr);
}
