#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "irsnet/config.hpp"
#include "irsnet/env.hpp"

namespace irsnet {

// Stream tags for deriving independent rng seeds from the master seed.
enum class SeedStream : std::uint64_t {
  kPlacement = 1,
  kEnvironment = 2,
  kAgentInit = 3,
  kActionNoise = 4,
  kReplaySampling = 5,
  kInitialAssociation = 6,
  kPolicy = 7,
};

std::uint64_t mix_seed(std::uint64_t master, SeedStream stream,
                       std::uint64_t index = 0);

// Explicit positions from the config when given, otherwise seeded placement:
// BSs on an even grid line, IRSs and users uniform in the area.
Geometry make_geometry(const ExperimentConfig& config);

// One episode's environment trajectory: geometry, cells and CSI advanced by
// mobility + per-slot fading, fully determined by (config, episode index).
class Rollout {
 public:
  explicit Rollout(const ExperimentConfig& config);

  void reset(std::uint64_t episode_index);  // redraws the episode's fading
  void advance();  // mobility step; large-scale gains track the positions

  const Geometry& geometry() const { return geom_; }
  const ChannelRealization& channels() const { return channels_; }
  const std::vector<int>& cells() const { return cells_; }

 private:
  const ExperimentConfig& cfg_;
  Geometry initial_geom_;
  Geometry geom_;
  ChannelFading fading_;
  ChannelRealization channels_;
  std::vector<int> cells_;
  Rng env_rng_;
};

// Association carried over from the slot before training/evaluation starts.
AssociationState initial_association(const ExperimentConfig& config,
                                     const ChannelRealization& channels,
                                     const std::vector<int>& cells);

struct Decision {
  AssociationState assoc;
  BeamformingConfig beams;
  PhaseConfig phases;
};

// Per-slot decision maker; evaluation strategies and the learned policy
// implement this.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual Decision decide(const ChannelRealization& channels,
                          const std::vector<int>& cells,
                          const AssociationState& prev_assoc) = 0;
};

struct StepMetrics {
  std::size_t episode = 0;
  std::size_t step = 0;
  double sum_rate = 0.0;
  std::vector<double> agent_reward;
  std::vector<double> critic_loss;
  std::vector<double> actor_objective;
};

using MetricsCallback = std::function<void(const StepMetrics&)>;

// Runs `episodes` seeded episodes of `config.hyper.steps` slots each and
// reports per-slot metrics. Episode seeds match the training schedule, so
// strategies compared through this function see identical trajectories.
void evaluate_policy(const ExperimentConfig& config, Policy& policy,
                     std::size_t episodes, const MetricsCallback& on_step);

}  // namespace irsnet
