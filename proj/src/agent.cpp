#include "irsnet/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irsnet {

AgentNets make_agent(std::size_t obs_dim, std::size_t act_dim,
                     const std::vector<int>& hidden, Rng& rng) {
  MLPSpec actor_spec;
  actor_spec.input_dim = static_cast<int>(obs_dim);
  actor_spec.hidden_dims = hidden;
  actor_spec.output_dim = static_cast<int>(act_dim);
  actor_spec.output_activation = Activation::kTanh;

  MLPSpec critic_spec;
  critic_spec.input_dim = static_cast<int>(obs_dim + act_dim);
  critic_spec.hidden_dims = hidden;
  critic_spec.output_dim = 1;
  critic_spec.output_activation = Activation::kIdentity;

  AgentNets nets;
  nets.actor = init_params(actor_spec, rng);
  nets.critic = init_params(critic_spec, rng);
  nets.target_actor = nets.actor;    // targets start as exact copies
  nets.target_critic = nets.critic;
  nets.actor_opt = make_adam_state(nets.actor);
  nets.critic_opt = make_adam_state(nets.critic);
  return nets;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be > 0");
  storage_.reserve(capacity);
}

void ReplayBuffer::push(Experience e) {
  if (storage_.size() < capacity_) {
    storage_.push_back(std::move(e));
  } else {
    storage_[cursor_] = std::move(e);
  }
  cursor_ = (cursor_ + 1) % capacity_;
}

const Experience& ReplayBuffer::at(std::size_t logical_index) const {
  if (logical_index >= storage_.size()) {
    throw std::out_of_range("ReplayBuffer: index out of range");
  }
  if (storage_.size() < capacity_) return storage_[logical_index];
  return storage_[(cursor_ + logical_index) % capacity_];
}

std::vector<const Experience*> ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  if (storage_.empty()) throw std::logic_error("ReplayBuffer: sample from empty buffer");
  std::uniform_int_distribution<std::size_t> pick(0, storage_.size() - 1);
  std::vector<const Experience*> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(&storage_[pick(rng)]);
  return out;
}

std::vector<double> act(const AgentNets& nets, const std::vector<double>& obs,
                        double noise_std, Rng& rng) {
  const Eigen::Map<const Eigen::RowVectorXd> x(obs.data(),
                                               static_cast<Eigen::Index>(obs.size()));
  const Eigen::MatrixXd y = forward(nets.actor, x);
  std::vector<double> action(static_cast<std::size_t>(y.cols()));
  std::normal_distribution<double> noise(0.0, noise_std);
  for (Eigen::Index i = 0; i < y.cols(); ++i) {
    double v = y(0, i);
    if (noise_std > 0.0) v += noise(rng);
    action[static_cast<std::size_t>(i)] = std::clamp(v, -1.0, 1.0);
  }
  return action;
}

void decode_action(const std::vector<double>& raw, std::size_t m,
                   const std::vector<int>& cells, const AssociationState& assoc,
                   double p_max, const NetworkDims& dims,
                   BeamformingConfig& beams, PhaseConfig& phases) {
  if (raw.size() != action_dim(dims)) {
    throw std::invalid_argument("decode_action: raw action has wrong dimension");
  }
  for (double v : raw) {
    if (!(v >= -1.0 && v <= 1.0)) {
      throw std::invalid_argument("decode_action: raw value outside [-1, 1]");
    }
  }
  const std::size_t nb = dims.bs_antennas;
  for (std::size_t k = 0; k < dims.num_users; ++k) {
    if (cells[k] != static_cast<int>(m)) continue;
    for (std::size_t c = 0; c < nb; ++c) {
      const std::size_t base = 2 * (k * nb + c);
      beams.w[m][k][c] = cplx{raw[base], raw[base + 1]};
    }
  }
  const double power = beams.bs_power(m);
  if (power > p_max) {
    const double scale = std::sqrt(p_max / power);
    for (std::size_t k = 0; k < dims.num_users; ++k) {
      for (auto& v : beams.w[m][k]) v *= scale;
    }
  }
  const std::size_t phase_offset = 2 * nb * dims.num_users;
  constexpr double kTwoPi = 2.0 * M_PI;
  for (std::size_t l = 0; l < dims.num_irs; ++l) {
    if (assoc.bs_of_irs[l] != static_cast<int>(m)) continue;
    for (std::size_t e = 0; e < dims.irs_elements; ++e) {
      double theta = M_PI * (raw[phase_offset + l * dims.irs_elements + e] + 1.0);
      if (theta >= kTwoPi) theta -= kTwoPi;
      phases.theta[l][e] = theta;
    }
  }
}

std::vector<double> action_bids(const std::vector<double>& raw,
                                const NetworkDims& dims) {
  if (raw.size() != action_dim(dims)) {
    throw std::invalid_argument("action_bids: raw action has wrong dimension");
  }
  return {raw.end() - static_cast<std::ptrdiff_t>(dims.num_irs), raw.end()};
}

AssociationState resolve_association(const std::vector<std::vector<double>>& bids,
                                     const ChannelRealization& channels,
                                     const std::vector<int>& cells) {
  const auto& dims = channels.dims;
  if (bids.size() != dims.num_bs) {
    throw std::invalid_argument("resolve_association: need one bid vector per BS");
  }
  AssociationState assoc;
  assoc.bs_of_irs.resize(dims.num_irs);
  for (std::size_t l = 0; l < dims.num_irs; ++l) {
    int winner = 0;
    double best = bids[0].at(l);
    for (std::size_t m = 1; m < dims.num_bs; ++m) {
      if (bids[m].at(l) > best) {  // strict: ties stay with the lowest index
        best = bids[m].at(l);
        winner = static_cast<int>(m);
      }
    }
    assoc.bs_of_irs[l] = winner;
  }
  assoc.irs_of_user = allocate_irs_to_users(channels, assoc.bs_of_irs, cells);
  return assoc;
}

namespace {

Eigen::MatrixXd stack_rows(const std::vector<const Experience*>& batch,
                           const std::vector<double> Experience::* field) {
  const auto n = static_cast<Eigen::Index>(batch.size());
  const auto d = static_cast<Eigen::Index>((batch[0]->*field).size());
  Eigen::MatrixXd out(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.row(i) = Eigen::Map<const Eigen::RowVectorXd>((batch[i]->*field).data(), d);
  }
  return out;
}

void clip_gradients(Gradients& grads, double max_norm) {
  if (max_norm <= 0.0) return;
  double sq = 0.0;
  for (const auto& g : grads.weights) sq += g.squaredNorm();
  for (const auto& g : grads.biases) sq += g.squaredNorm();
  const double norm = std::sqrt(sq);
  if (norm <= max_norm) return;
  const double scale = max_norm / norm;
  for (auto& g : grads.weights) g *= scale;
  for (auto& g : grads.biases) g *= scale;
}

}  // namespace

double critic_update(AgentNets& nets, const std::vector<const Experience*>& batch,
                     double gamma, double lr, double grad_clip) {
  if (batch.empty()) throw std::invalid_argument("critic_update: empty batch");
  const Eigen::MatrixXd obs = stack_rows(batch, &Experience::o);
  const Eigen::MatrixXd actions = stack_rows(batch, &Experience::a);
  const Eigen::MatrixXd obs_next = stack_rows(batch, &Experience::o_next);

  // y_i = r_i + gamma * Q'(o', mu'(o'))
  const Eigen::MatrixXd next_actions = forward(nets.target_actor, obs_next);
  Eigen::MatrixXd next_in(obs_next.rows(), obs_next.cols() + next_actions.cols());
  next_in << obs_next, next_actions;
  const Eigen::MatrixXd q_next = forward(nets.target_critic, next_in);
  Eigen::VectorXd y(static_cast<Eigen::Index>(batch.size()));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    y(static_cast<Eigen::Index>(i)) =
        batch[i]->r + gamma * q_next(static_cast<Eigen::Index>(i), 0);
  }

  Eigen::MatrixXd critic_in(obs.rows(), obs.cols() + actions.cols());
  critic_in << obs, actions;
  ForwardCache cache;
  const Eigen::MatrixXd q = forward(nets.critic, critic_in, &cache);
  const Eigen::VectorXd err = q.col(0) - y;
  const double loss = err.squaredNorm() / static_cast<double>(batch.size());
  if (!std::isfinite(loss)) {
    throw std::runtime_error("critic_update: non-finite loss");
  }
  const Eigen::MatrixXd dq = (2.0 / static_cast<double>(batch.size())) * err;
  Gradients grads;
  backward(nets.critic, cache, dq, grads);
  clip_gradients(grads, grad_clip);
  adam_step(nets.critic, grads, nets.critic_opt, lr);
  return loss;
}

double actor_update(AgentNets& nets, const std::vector<const Experience*>& batch,
                    double lr, double grad_clip) {
  if (batch.empty()) throw std::invalid_argument("actor_update: empty batch");
  const Eigen::MatrixXd obs = stack_rows(batch, &Experience::o);

  ForwardCache actor_cache;
  const Eigen::MatrixXd actions = forward(nets.actor, obs, &actor_cache);

  Eigen::MatrixXd critic_in(obs.rows(), obs.cols() + actions.cols());
  critic_in << obs, actions;
  ForwardCache critic_cache;
  const Eigen::MatrixXd q = forward(nets.critic, critic_in, &critic_cache);
  const double objective = q.col(0).mean();
  if (!std::isfinite(objective)) {
    throw std::runtime_error("actor_update: non-finite objective");
  }

  // Ascend mean Q by descending -mean Q; chain dQ/da through the actor.
  const Eigen::MatrixXd dq = Eigen::MatrixXd::Constant(
      q.rows(), 1, -1.0 / static_cast<double>(batch.size()));
  Gradients critic_grads;  // discarded; only the input gradient is used
  const Eigen::MatrixXd d_input = backward(nets.critic, critic_cache, dq, critic_grads);
  const Eigen::MatrixXd d_actions = d_input.rightCols(actions.cols());

  Gradients actor_grads;
  backward(nets.actor, actor_cache, d_actions, actor_grads);
  clip_gradients(actor_grads, grad_clip);
  adam_step(nets.actor, actor_grads, nets.actor_opt, lr);
  return objective;
}

namespace {

struct AgentActions {
  std::vector<std::vector<double>> raw;   // per agent
  std::vector<std::vector<double>> bids;  // per agent
};

Decision decide_from_raw(const AgentActions& acts, const ExperimentConfig& cfg,
                         const ChannelRealization& channels,
                         const std::vector<int>& cells) {
  const auto& dims = cfg.network.dims;
  Decision d;
  d.assoc = resolve_association(acts.bids, channels, cells);
  d.beams = BeamformingConfig::zeros(dims);
  d.phases = PhaseConfig::zeros(dims);
  for (std::size_t m = 0; m < dims.num_bs; ++m) {
    decode_action(acts.raw[m], m, cells, d.assoc, cfg.network.p_max, dims,
                  d.beams, d.phases);
  }
  return d;
}

}  // namespace

TrainingLog train(const ExperimentConfig& config, const MetricsCallback& on_step,
                  std::vector<AgentNets>* out_agents,
                  const CheckpointCallback& on_checkpoint) {
  config.validate();
  const auto& dims = config.network.dims;
  const std::size_t obs_d = observation_dim(dims);
  const std::size_t act_d = action_dim(dims);
  const std::size_t M = dims.num_bs;

  std::vector<AgentNets> agents;
  std::vector<ReplayBuffer> buffers;
  std::vector<Rng> noise_rngs;
  std::vector<Rng> sample_rngs;
  for (std::size_t m = 0; m < M; ++m) {
    Rng init_rng(mix_seed(config.seed, SeedStream::kAgentInit, m));
    agents.push_back(make_agent(obs_d, act_d, config.hyper.hidden, init_rng));
    buffers.emplace_back(config.hyper.buffer);
    noise_rngs.emplace_back(mix_seed(config.seed, SeedStream::kActionNoise, m));
    sample_rngs.emplace_back(mix_seed(config.seed, SeedStream::kReplaySampling, m));
  }

  Rollout rollout(config);
  TrainingLog log;
  const std::size_t total_steps = config.hyper.episodes * config.hyper.steps;
  std::size_t global_step = 0;

  for (std::size_t episode = 0; episode < config.hyper.episodes; ++episode) {
    rollout.reset(episode);
    AssociationState prev =
        initial_association(config, rollout.channels(), rollout.cells());

    for (std::size_t step = 0; step < config.hyper.steps; ++step) {
      const double frac = total_steps > 1
                              ? static_cast<double>(global_step) /
                                    static_cast<double>(total_steps - 1)
                              : 0.0;
      const double noise_std =
          config.hyper.noise_start +
          frac * (config.hyper.noise_end - config.hyper.noise_start);

      std::vector<std::vector<double>> observations(M);
      AgentActions acts;
      acts.raw.resize(M);
      acts.bids.resize(M);
      for (std::size_t m = 0; m < M; ++m) {
        observations[m] = observe(m, rollout.channels(), prev, rollout.cells(),
                                  config.network.obs_scale);
        acts.raw[m] = act(agents[m], observations[m], noise_std, noise_rngs[m]);
        acts.bids[m] = action_bids(acts.raw[m], dims);
      }
      const Decision d =
          decide_from_raw(acts, config, rollout.channels(), rollout.cells());

      StepMetrics row;
      row.episode = episode;
      row.step = step;
      row.agent_reward.resize(M);
      row.critic_loss.assign(M, 0.0);
      row.actor_objective.assign(M, 0.0);
      for (std::size_t m = 0; m < M; ++m) {
        row.agent_reward[m] = reward(m, rollout.channels(), d.assoc, d.phases,
                                     d.beams, rollout.cells());
        row.sum_rate += row.agent_reward[m];
      }

      rollout.advance();
      for (std::size_t m = 0; m < M; ++m) {
        Experience e;
        e.o = std::move(observations[m]);
        e.a = acts.raw[m];
        e.r = row.agent_reward[m];
        e.o_next = observe(m, rollout.channels(), d.assoc, rollout.cells(),
                           config.network.obs_scale);
        buffers[m].push(std::move(e));
      }

      for (std::size_t m = 0; m < M; ++m) {
        if (buffers[m].size() < config.hyper.batch) continue;
        const auto batch = buffers[m].sample(config.hyper.batch, sample_rngs[m]);
        try {
          row.critic_loss[m] = critic_update(agents[m], batch, config.hyper.gamma,
                                             config.hyper.lr_critic,
                                             config.hyper.grad_clip);
          row.actor_objective[m] =
              actor_update(agents[m], batch, config.hyper.lr_actor,
                           config.hyper.grad_clip);
        } catch (const std::exception& e) {
          throw std::runtime_error("training failed at episode " +
                                   std::to_string(episode) + " step " +
                                   std::to_string(step) + " agent " +
                                   std::to_string(m) + ": " + e.what());
        }
        soft_update(agents[m].target_actor, agents[m].actor, config.hyper.tau);
        soft_update(agents[m].target_critic, agents[m].critic, config.hyper.tau);
      }

      prev = d.assoc;
      if (on_step) on_step(row);
      log.rows.push_back(std::move(row));
      ++global_step;
    }
    if (on_checkpoint && (episode + 1) % config.hyper.checkpoint_interval == 0 &&
        episode + 1 < config.hyper.episodes) {
      on_checkpoint(episode, agents);
    }
  }
  if (out_agents) *out_agents = std::move(agents);
  return log;
}

LearnedPolicy::LearnedPolicy(const ExperimentConfig& config,
                             std::vector<AgentNets> agents)
    : cfg_(config), agents_(std::move(agents)) {}

Decision LearnedPolicy::decide(const ChannelRealization& channels,
                               const std::vector<int>& cells,
                               const AssociationState& prev_assoc) {
  const auto& dims = cfg_.network.dims;
  AgentActions acts;
  acts.raw.resize(dims.num_bs);
  acts.bids.resize(dims.num_bs);
  for (std::size_t m = 0; m < dims.num_bs; ++m) {
    const auto obs = observe(m, channels, prev_assoc, cells, cfg_.network.obs_scale);
    acts.raw[m] = act(agents_[m], obs, 0.0, null_rng_);
    acts.bids[m] = action_bids(acts.raw[m], dims);
  }
  return decide_from_raw(acts, cfg_, channels, cells);
}

}  // namespace irsnet
