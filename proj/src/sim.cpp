#include "irsnet/sim.hpp"

namespace irsnet {

std::uint64_t mix_seed(std::uint64_t master, SeedStream stream,
                       std::uint64_t index) {
  // splitmix64 finalizer over (master, stream, index)
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(stream) + 1) +
                    0xbf58476d1ce4e5b9ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Geometry make_geometry(const ExperimentConfig& config) {
  const auto& net = config.network;
  Geometry g;
  g.area_bounds = net.area;
  Rng rng(mix_seed(config.seed, SeedStream::kPlacement));
  std::uniform_real_distribution<double> ux(net.area.x_min, net.area.x_max);
  std::uniform_real_distribution<double> uy(net.area.y_min, net.area.y_max);

  if (!net.bs_positions.empty()) {
    g.bs_positions = net.bs_positions;
  } else {
    // Evenly spaced along the horizontal midline, one cell per BS.
    const double y_mid = 0.5 * (net.area.y_min + net.area.y_max);
    const double span = net.area.x_max - net.area.x_min;
    for (std::size_t m = 0; m < net.dims.num_bs; ++m) {
      const double x = net.area.x_min +
                       span * (2.0 * static_cast<double>(m) + 1.0) /
                           (2.0 * static_cast<double>(net.dims.num_bs));
      g.bs_positions.push_back(Point{x, y_mid});
    }
  }
  if (!net.irs_positions.empty()) {
    g.irs_positions = net.irs_positions;
  } else {
    for (std::size_t l = 0; l < net.dims.num_irs; ++l) {
      g.irs_positions.push_back(Point{ux(rng), uy(rng)});
    }
  }
  if (!net.user_positions.empty()) {
    g.user_positions = net.user_positions;
  } else {
    for (std::size_t k = 0; k < net.dims.num_users; ++k) {
      g.user_positions.push_back(Point{ux(rng), uy(rng)});
    }
  }
  g.validate();
  return g;
}

Rollout::Rollout(const ExperimentConfig& config)
    : cfg_(config), initial_geom_(make_geometry(config)), env_rng_(0) {}

void Rollout::reset(std::uint64_t episode_index) {
  env_rng_.seed(mix_seed(cfg_.seed, SeedStream::kEnvironment, episode_index));
  geom_ = initial_geom_;
  cells_ = serving_cells(geom_);
  // Small-scale fading is drawn once per episode (Algorithm 1 collects the
  // channel at the episode start); slots within the episode only move users.
  fading_ = sample_fading(cfg_.network.dims, env_rng_);
  channels_ = apply_path_loss(fading_, geom_, cfg_.channel,
                              cfg_.network.noise_power);
}

void Rollout::advance() {
  if (cfg_.mobility.per_slot && cfg_.mobility.step_std > 0.0) {
    geom_ = step_mobility(geom_, MobilityParams{cfg_.mobility.step_std}, env_rng_);
    cells_ = serving_cells(geom_);
    // Large-scale gains track the positions; the fading draw is unchanged.
    channels_ = apply_path_loss(fading_, geom_, cfg_.channel,
                                cfg_.network.noise_power);
  }
}

AssociationState initial_association(const ExperimentConfig& config,
                                     const ChannelRealization& channels,
                                     const std::vector<int>& cells) {
  const auto& dims = config.network.dims;
  AssociationState assoc;
  Rng rng(mix_seed(config.seed, SeedStream::kInitialAssociation));
  std::uniform_int_distribution<int> pick(0, static_cast<int>(dims.num_bs) - 1);
  assoc.bs_of_irs.resize(dims.num_irs);
  for (auto& owner : assoc.bs_of_irs) owner = pick(rng);
  assoc.irs_of_user = allocate_irs_to_users(channels, assoc.bs_of_irs, cells);
  return assoc;
}

void evaluate_policy(const ExperimentConfig& config, Policy& policy,
                     std::size_t episodes, const MetricsCallback& on_step) {
  Rollout rollout(config);
  for (std::size_t episode = 0; episode < episodes; ++episode) {
    rollout.reset(episode);
    AssociationState prev =
        initial_association(config, rollout.channels(), rollout.cells());
    for (std::size_t step = 0; step < config.hyper.steps; ++step) {
      Decision d = policy.decide(rollout.channels(), rollout.cells(), prev);
      StepMetrics row;
      row.episode = episode;
      row.step = step;
      row.agent_reward.resize(config.network.dims.num_bs);
      row.critic_loss.assign(config.network.dims.num_bs, 0.0);
      row.actor_objective.assign(config.network.dims.num_bs, 0.0);
      for (std::size_t m = 0; m < config.network.dims.num_bs; ++m) {
        row.agent_reward[m] = reward(m, rollout.channels(), d.assoc, d.phases,
                                     d.beams, rollout.cells());
        row.sum_rate += row.agent_reward[m];
      }
      if (on_step) on_step(row);
      rollout.advance();
      prev = d.assoc;
    }
  }
}

}  // namespace irsnet
