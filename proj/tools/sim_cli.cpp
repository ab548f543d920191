#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irsnet/agent.hpp"
#include "irsnet/baselines.hpp"
#include "irsnet/metrics.hpp"
#include "irsnet/neural.hpp"
#include "irsnet/sim.hpp"

namespace {

using Clock = std::chrono::steady_clock;

bool verbose_logging() {
  const char* level = std::getenv("IRSNET_LOG");
  return level != nullptr && std::string(level) != "" && std::string(level) != "quiet";
}

long elapsed_ms(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
      .count();
}

// One agent row per BS plus the global summary row (agent_id = -1).
void write_step(irsnet::CsvWriter& csv, const irsnet::StepMetrics& step,
                Clock::time_point start, const std::string& strategy = "") {
  irsnet::MetricsRow row;
  row.episode = static_cast<long>(step.episode);
  row.step = static_cast<long>(step.step);
  row.sum_rate = step.sum_rate;
  row.wall_time_ms = elapsed_ms(start);
  row.strategy = strategy;
  for (std::size_t m = 0; m < step.agent_reward.size(); ++m) {
    row.agent_id = static_cast<long>(m);
    row.reward = step.agent_reward[m];
    row.critic_loss = step.critic_loss[m];
    row.actor_objective = step.actor_objective[m];
    csv.write(row);
  }
  row.agent_id = -1;
  row.reward = step.sum_rate;
  row.critic_loss = 0.0;
  row.actor_objective = 0.0;
  csv.write(row);
}

std::string checkpoint_path(const std::string& dir, const std::string& tag,
                            std::size_t agent) {
  return dir + "/checkpoint_" + tag + "_agent" + std::to_string(agent) + ".json";
}

std::vector<irsnet::AgentNets> load_agents(const irsnet::ExperimentConfig& cfg,
                                           const std::vector<std::string>& paths) {
  const auto& dims = cfg.network.dims;
  if (paths.size() != dims.num_bs) {
    throw std::runtime_error("expected " + std::to_string(dims.num_bs) +
                             " checkpoints, got " + std::to_string(paths.size()));
  }
  std::vector<irsnet::AgentNets> agents;
  for (std::size_t m = 0; m < dims.num_bs; ++m) {
    irsnet::Rng rng(irsnet::mix_seed(cfg.seed, irsnet::SeedStream::kAgentInit, m));
    irsnet::AgentNets nets = irsnet::make_agent(
        irsnet::observation_dim(dims), irsnet::action_dim(dims), cfg.hyper.hidden, rng);
    irsnet::MLPParams actor = irsnet::load_checkpoint(paths[m]);
    if (actor.spec.input_dim != static_cast<int>(irsnet::observation_dim(dims)) ||
        actor.spec.output_dim != static_cast<int>(irsnet::action_dim(dims))) {
      throw std::runtime_error("checkpoint " + paths[m] +
                               " does not match the configured dimensions");
    }
    nets.actor = std::move(actor);
    nets.target_actor = nets.actor;
    agents.push_back(std::move(nets));
  }
  return agents;
}

int run_train(const irsnet::ExperimentConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  irsnet::CsvWriter csv(out_dir + "/metrics.csv", cfg);
  const auto start = Clock::now();
  std::size_t last_episode = 0;

  std::vector<irsnet::AgentNets> agents;
  irsnet::train(
      cfg,
      [&](const irsnet::StepMetrics& step) {
        if (step.episode != last_episode) {
          csv.flush();  // crash-safe: a finished episode is on disk
          if (verbose_logging()) {
            std::cerr << "episode " << step.episode << " started (t=" << elapsed_ms(start)
                      << " ms)\n";
          }
          last_episode = step.episode;
        }
        write_step(csv, step, start);
      },
      &agents,
      [&](std::size_t episode, const std::vector<irsnet::AgentNets>& nets) {
        for (std::size_t m = 0; m < nets.size(); ++m) {
          irsnet::save_checkpoint(
              nets[m].actor,
              checkpoint_path(out_dir, "ep" + std::to_string(episode + 1), m));
        }
        if (verbose_logging()) {
          std::cerr << "checkpoint written after episode " << episode + 1 << "\n";
        }
      });
  csv.flush();

  for (std::size_t m = 0; m < agents.size(); ++m) {
    irsnet::save_checkpoint(agents[m].actor, checkpoint_path(out_dir, "final", m));
  }
  return 0;
}

int run_policy(const irsnet::ExperimentConfig& cfg, irsnet::Policy& policy,
               std::size_t episodes, irsnet::CsvWriter& csv,
               const std::string& strategy) {
  const auto start = Clock::now();
  std::size_t last_episode = 0;
  irsnet::evaluate_policy(cfg, policy, episodes,
                          [&](const irsnet::StepMetrics& step) {
                            if (step.episode != last_episode) {
                              csv.flush();
                              last_episode = step.episode;
                            }
                            write_step(csv, step, start, strategy);
                          });
  csv.flush();
  return 0;
}

std::vector<int> default_fixed_map(const irsnet::ExperimentConfig& cfg) {
  std::vector<int> map(cfg.network.dims.num_irs);
  for (std::size_t l = 0; l < map.size(); ++l) {
    map[l] = static_cast<int>(l % cfg.network.dims.num_bs);
  }
  return map;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-IRS downlink simulator and multi-agent DDPG trainer"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed_override = 0;
  bool seed_given = false;
  std::vector<std::string> checkpoints;
  std::size_t episodes = 0;
  std::string strategies_arg = "oracle,random";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "TOML experiment configuration")
        ->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option_function<std::uint64_t>(
        "--seed",
        [&](const std::uint64_t& v) {
          seed_override = v;
          seed_given = true;
        },
        "override the config seed");
  };

  CLI::App* train_cmd = app.add_subcommand("train", "run the training loop");
  add_common(train_cmd);

  CLI::App* eval_cmd = app.add_subcommand("evaluate", "noise-free policy evaluation");
  add_common(eval_cmd);
  eval_cmd->add_option("--checkpoints", checkpoints, "one actor checkpoint per BS")
      ->required();
  eval_cmd->add_option("--episodes", episodes, "number of evaluation episodes");

  CLI::App* compare_cmd =
      app.add_subcommand("compare", "evaluate strategies on identical trajectories");
  add_common(compare_cmd);
  compare_cmd->add_option("--strategies", strategies_arg,
                          "comma list of mdlbi-checkpoint,fixed,random,oracle");
  compare_cmd->add_option("--checkpoints", checkpoints,
                          "actor checkpoints for mdlbi-checkpoint");
  compare_cmd->add_option("--episodes", episodes, "number of episodes");

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "per-slot exhaustive association");
  add_common(oracle_cmd);
  oracle_cmd->add_option("--episodes", episodes, "number of episodes");

  CLI11_PARSE(app, argc, argv);

  try {
    irsnet::ExperimentConfig cfg = irsnet::load_config(config_path);
    if (seed_given) cfg.seed = seed_override;
    cfg.validate();
    if (episodes == 0) episodes = cfg.hyper.episodes;
    std::filesystem::create_directories(out_dir);

    if (train_cmd->parsed()) {
      return run_train(cfg, out_dir);
    }
    if (eval_cmd->parsed()) {
      auto agents = load_agents(cfg, checkpoints);
      irsnet::LearnedPolicy policy(cfg, std::move(agents));
      irsnet::CsvWriter csv(out_dir + "/metrics.csv", cfg);
      return run_policy(cfg, policy, episodes, csv, "");
    }
    if (oracle_cmd->parsed()) {
      irsnet::OraclePolicy policy(cfg);
      irsnet::CsvWriter csv(out_dir + "/metrics.csv", cfg);
      return run_policy(cfg, policy, episodes, csv, "oracle");
    }
    if (compare_cmd->parsed()) {
      irsnet::CsvWriter csv(out_dir + "/metrics.csv", cfg, /*with_strategy=*/true);
      std::vector<std::string> names;
      for (std::size_t pos = 0; pos < strategies_arg.size();) {
        std::size_t comma = strategies_arg.find(',', pos);
        if (comma == std::string::npos) comma = strategies_arg.size();
        names.push_back(strategies_arg.substr(pos, comma - pos));
        pos = comma + 1;
      }
      for (const auto& name : names) {
        std::unique_ptr<irsnet::Policy> policy;
        if (name == "random") {
          policy = std::make_unique<irsnet::RandomPolicy>(cfg);
        } else if (name == "oracle") {
          policy = std::make_unique<irsnet::OraclePolicy>(cfg);
        } else if (name == "fixed") {
          policy = std::make_unique<irsnet::FixedAssociationPolicy>(
              cfg, default_fixed_map(cfg));
        } else if (name == "mdlbi-checkpoint") {
          policy = std::make_unique<irsnet::LearnedPolicy>(cfg, load_agents(cfg, checkpoints));
        } else {
          throw std::runtime_error("unknown strategy: " + name);
        }
        run_policy(cfg, *policy, episodes, csv, name);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
