#pragma once

#include <vector>

#include "irsnet/config.hpp"
#include "irsnet/env.hpp"
#include "irsnet/neural.hpp"
#include "irsnet/sim.hpp"

namespace irsnet {

// One BS's four sub-nets plus optimizer state.
struct AgentNets {
  MLPParams actor;
  MLPParams critic;
  MLPParams target_actor;
  MLPParams target_critic;
  AdamState actor_opt;
  AdamState critic_opt;
};

AgentNets make_agent(std::size_t obs_dim, std::size_t act_dim,
                     const std::vector<int>& hidden, Rng& rng);

struct Experience {
  std::vector<double> o;
  std::vector<double> a;
  double r = 0.0;
  std::vector<double> o_next;
};

// FIFO ring with uniform minibatch sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Experience e);
  std::size_t size() const { return storage_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Experience& at(std::size_t logical_index) const;  // 0 = oldest
  std::vector<const Experience*> sample(std::size_t n, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t cursor_ = 0;
  std::vector<Experience> storage_;
};

// Actor output plus clamped Gaussian exploration noise, in [-1, 1].
std::vector<double> act(const AgentNets& nets, const std::vector<double>& obs,
                        double noise_std, Rng& rng);

// Maps a raw [-1,1] action onto BS m's beams (power-rescaled onto the
// budget when exceeded) and the phases of the IRSs it controls. Entries for
// unserved users / uncontrolled IRSs are ignored; the trailing bid entries
// are consumed by resolve_association.
void decode_action(const std::vector<double>& raw, std::size_t m,
                   const std::vector<int>& cells, const AssociationState& assoc,
                   double p_max, const NetworkDims& dims,
                   BeamformingConfig& beams, PhaseConfig& phases);

// Extracts the trailing L bid entries of a raw action.
std::vector<double> action_bids(const std::vector<double>& raw,
                                const NetworkDims& dims);

// Highest bid wins each IRS (ties to the lowest BS index); users then get
// their serving BS's strongest controlled IRS.
AssociationState resolve_association(const std::vector<std::vector<double>>& bids,
                                     const ChannelRealization& channels,
                                     const std::vector<int>& cells);

// One optimizer step on the TD loss; returns the pre-step batch loss.
double critic_update(AgentNets& nets, const std::vector<const Experience*>& batch,
                     double gamma, double lr, double grad_clip = 0.0);

// One ascent step on mean Q(o, mu(o)); returns the pre-step objective.
double actor_update(AgentNets& nets, const std::vector<const Experience*>& batch,
                    double lr, double grad_clip = 0.0);

struct TrainingLog {
  std::vector<StepMetrics> rows;
};

// Fires after the given episode completes; receives the current networks.
using CheckpointCallback =
    std::function<void(std::size_t episode, const std::vector<AgentNets>&)>;

// Full training loop: per-episode channel reset, per-slot association
// auction, decode, reward, replay and network updates. on_step fires once
// per slot; on_checkpoint fires every hyper.checkpoint_interval episodes;
// out_agents (optional) receives the trained networks.
TrainingLog train(const ExperimentConfig& config,
                  const MetricsCallback& on_step = {},
                  std::vector<AgentNets>* out_agents = nullptr,
                  const CheckpointCallback& on_checkpoint = {});

// Greedy (noise-free) policy over trained agents, usable by evaluate_policy.
class LearnedPolicy : public Policy {
 public:
  LearnedPolicy(const ExperimentConfig& config, std::vector<AgentNets> agents);
  Decision decide(const ChannelRealization& channels,
                  const std::vector<int>& cells,
                  const AssociationState& prev_assoc) override;

 private:
  const ExperimentConfig& cfg_;
  std::vector<AgentNets> agents_;
  Rng null_rng_{0};
};

}  // namespace irsnet
