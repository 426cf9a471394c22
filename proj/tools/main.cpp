#include <cstdint>
#include <string>

#include "CLI11.hpp"

#include "ewmcast/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Expanding-window network-coded multicast planner"};
  app.require_subcommand(1);

  ewmcast::RunOptions options;
  long trials = -1;
  long long seed = -1;
  long long cap = -1;
  std::string policy_path;

  const char* commands[] = {"solve-exact", "solve-heuristic", "solve-mrt",
                            "simulate", "sweep-distance"};
  const char* descriptions[] = {
      "exhaustive search over MCS and budget assignments",
      "two-step heuristic (MCS selection, then budget assignment)",
      "uncoded multi-rate baseline",
      "solve, then validate by packet-level Monte Carlo simulation",
      "heuristic vs baseline QoS-vs-distance table (single cell)"};
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(commands[i], descriptions[i]);
    sub->add_option("--config", options.config_path, "experiment config file (JSON)")
        ->required();
    sub->add_option("--out", options.out_dir, "output directory")->required();
    sub->add_option("--trials", trials, "Monte Carlo trials override");
    sub->add_option("--seed", seed, "random seed override");
    sub->add_option("--cap", cap, "exact-search evaluation cap override");
    if (std::string(commands[i]) == "simulate")
      sub->add_option("--policy", policy_path, "simulate a stored policy.json");
  }

  CLI11_PARSE(app, argc, argv);

  options.command = app.get_subcommands().front()->get_name();
  if (trials >= 0) options.trials = trials;
  if (seed >= 0) options.seed = static_cast<std::uint64_t>(seed);
  if (cap >= 0) options.cap = cap;
  if (!policy_path.empty()) options.policy_path = policy_path;
  return ewmcast::run_experiment(options);
}
