#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "irsnet/agent.hpp"

using namespace irsnet;
using namespace irsnet::test;

namespace {

NetworkDims tiny_dims() {
  NetworkDims d;
  d.num_bs = 2;
  d.num_users = 2;
  d.num_irs = 2;
  d.bs_antennas = 2;
  d.irs_elements = 2;
  return d;
}

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.network.dims = tiny_dims();
  cfg.network.area = Rect{0.0, 0.0, 60.0, 60.0};
  cfg.network.noise_power = 1e-10;
  cfg.network.obs_scale = 1e4;
  cfg.hyper.episodes = 1;
  cfg.hyper.steps = 4;
  cfg.hyper.batch = 8;
  cfg.hyper.hidden = {8, 8};
  cfg.seed = 11;
  return cfg;
}

}  // namespace

TEST_CASE("act is the actor forward pass plus clamped noise") {
  Rng rng(1);
  AgentNets nets = make_agent(6, 4, {8}, rng);
  const std::vector<double> obs{0.1, -0.2, 0.3, 0.0, 0.5, -0.5};

  SUBCASE("zero noise is deterministic and matches forward") {
    Rng r1(0), r2(0);
    const auto a1 = act(nets, obs, 0.0, r1);
    const auto a2 = act(nets, obs, 0.0, r2);
    CHECK(a1 == a2);
    const Eigen::Map<const Eigen::RowVectorXd> x(obs.data(), 6);
    const Eigen::MatrixXd y = forward(nets.actor, x);
    for (int i = 0; i < 4; ++i) CHECK(a1[static_cast<std::size_t>(i)] == y(0, i));
  }

  SUBCASE("zero-weight actor emits the zero vector") {
    for (auto& w : nets.actor.weights) w.setZero();
    for (auto& b : nets.actor.biases) b.setZero();
    Rng r(0);
    for (double v : act(nets, obs, 0.0, r)) CHECK(v == 0.0);
  }

  SUBCASE("noise std is honored away from the clamp") {
    for (auto& w : nets.actor.weights) w.setZero();
    Rng r(3);
    double sum2 = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) sum2 += std::pow(act(nets, obs, 0.1, r)[0], 2);
    CHECK(std::sqrt(sum2 / n) == doctest::Approx(0.1).epsilon(0.05));
  }
}

TEST_CASE("decode_action mapping") {
  const NetworkDims dims = tiny_dims();
  const std::vector<int> cells{0, 1};
  AssociationState assoc{{0, 1}, {0, 1}};
  const double p_max = 1.0;

  SUBCASE("all-zero raw gives zero beams and midpoint phases") {
    BeamformingConfig beams = BeamformingConfig::zeros(dims);
    PhaseConfig phases = PhaseConfig::zeros(dims);
    const std::vector<double> raw(action_dim(dims), 0.0);
    decode_action(raw, 0, cells, assoc, p_max, dims, beams, phases);
    CHECK(beams.bs_power(0) == 0.0);
    for (double t : phases.theta[0]) CHECK(t == doctest::Approx(M_PI));
  }

  SUBCASE("power overshoot rescales onto the budget exactly") {
    BeamformingConfig beams = BeamformingConfig::zeros(dims);
    PhaseConfig phases = PhaseConfig::zeros(dims);
    std::vector<double> raw(action_dim(dims), 0.0);
    // User 0 (cell 0), both antennas: |w|^2 = 4 = 4 * p_max.
    raw[0] = 1.0;
    raw[1] = 1.0;
    raw[2] = 1.0;
    raw[3] = 1.0;
    decode_action(raw, 0, cells, assoc, p_max, dims, beams, phases);
    CHECK(beams.bs_power(0) == doctest::Approx(p_max).epsilon(1e-12));
  }

  SUBCASE("raw phase +1 wraps to zero") {
    BeamformingConfig beams = BeamformingConfig::zeros(dims);
    PhaseConfig phases = PhaseConfig::zeros(dims);
    std::vector<double> raw(action_dim(dims), 0.0);
    const std::size_t phase_off = 2 * dims.bs_antennas * dims.num_users;
    raw[phase_off] = 1.0;
    decode_action(raw, 0, cells, assoc, p_max, dims, beams, phases);
    CHECK(phases.theta[0][0] == 0.0);
  }

  SUBCASE("out-of-range raw values violate the contract") {
    BeamformingConfig beams = BeamformingConfig::zeros(dims);
    PhaseConfig phases = PhaseConfig::zeros(dims);
    std::vector<double> raw(action_dim(dims), 0.0);
    raw[1] = 1.5;
    CHECK_THROWS_AS(decode_action(raw, 0, cells, assoc, p_max, dims, beams, phases),
                    std::invalid_argument);
  }
}

TEST_CASE("decoded actions satisfy power and unit-modulus invariants") {
  const NetworkDims dims = tiny_dims();
  Rng rng(13);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const std::vector<int> cells{0, 1};
  const double p_max = 0.5;

  for (int trial = 0; trial < 10000; ++trial) {
    ChannelRealization ch = random_channels(dims, rng);
    std::vector<std::vector<double>> raw(dims.num_bs);
    std::vector<std::vector<double>> bids(dims.num_bs);
    for (std::size_t m = 0; m < dims.num_bs; ++m) {
      raw[m].resize(action_dim(dims));
      for (auto& v : raw[m]) v = uni(rng);
      bids[m] = action_bids(raw[m], dims);
    }
    const AssociationState assoc = resolve_association(bids, ch, cells);
    BeamformingConfig beams = BeamformingConfig::zeros(dims);
    PhaseConfig phases = PhaseConfig::zeros(dims);
    for (std::size_t m = 0; m < dims.num_bs; ++m) {
      decode_action(raw[m], m, cells, assoc, p_max, dims, beams, phases);
      CHECK(beams.bs_power(m) <= p_max * (1.0 + 1e-9));
    }
    for (const auto& row : phases.theta) {
      for (double t : row) {
        CHECK(std::abs(std::polar(1.0, t)) == doctest::Approx(1.0).epsilon(1e-15));
      }
    }
    // Association invariants: total IRS map, user-IRS consistency.
    for (int owner : assoc.bs_of_irs) {
      CHECK(owner >= 0);
      CHECK(owner < static_cast<int>(dims.num_bs));
    }
    for (std::size_t k = 0; k < dims.num_users; ++k) {
      const int l = assoc.irs_of_user[k];
      if (l != kNoIrs) CHECK(assoc.bs_of_irs[static_cast<std::size_t>(l)] == cells[k]);
    }
  }
}

TEST_CASE("resolve_association auction") {
  const NetworkDims dims = tiny_dims();
  Rng rng(3);
  ChannelRealization ch = random_channels(dims, rng);
  const std::vector<int> cells{0, 1};

  SUBCASE("argmax and tie-break") {
    const auto a = resolve_association({{0.3, 0.5}, {0.7, 0.5}}, ch, cells);
    CHECK(a.bs_of_irs[0] == 1);
    CHECK(a.bs_of_irs[1] == 0);  // equal bids: lowest index wins
  }

  SUBCASE("matches an exhaustive per-IRS argmax on random bids") {
    NetworkDims d3 = dims;
    d3.num_bs = 3;
    d3.num_irs = 4;
    ChannelRealization ch3 = random_channels(d3, rng);
    const std::vector<int> cells3{0, 2};
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<std::vector<double>> bids(3, std::vector<double>(4));
      for (auto& row : bids) {
        for (auto& v : row) v = uni(rng);
      }
      const auto assoc = resolve_association(bids, ch3, cells3);
      for (std::size_t l = 0; l < 4; ++l) {
        for (std::size_t m = 0; m < 3; ++m) {
          CHECK(bids[static_cast<std::size_t>(assoc.bs_of_irs[l])][l] >= bids[m][l]);
        }
      }
    }
  }
}

TEST_CASE("replay buffer FIFO eviction and uniform sampling") {
  ReplayBuffer buf(50);
  auto mk = [](int i) {
    Experience e;
    e.o = {static_cast<double>(i)};
    e.a = {0.0};
    e.o_next = {0.0};
    e.r = static_cast<double>(i);
    return e;
  };
  for (int i = 0; i < 130; ++i) buf.push(mk(i));
  REQUIRE(buf.size() == 50);
  for (std::size_t i = 0; i < 50; ++i) {
    CHECK(buf.at(i).r == doctest::Approx(80.0 + static_cast<double>(i)));
  }

  Rng rng(4);
  std::vector<int> counts(50, 0);
  const int draws = 100000;
  for (const Experience* e : buf.sample(draws, rng)) {
    counts[static_cast<std::size_t>(e->r) - 80] += 1;
  }
  const double expect = draws / 50.0;
  const double se = std::sqrt(draws * (1.0 / 50.0) * (49.0 / 50.0));
  for (int c : counts) CHECK(std::abs(c - expect) < 3.0 * se + 1.0);
}

namespace {

std::vector<const Experience*> as_batch(const std::vector<Experience>& xs) {
  std::vector<const Experience*> out;
  for (const auto& x : xs) out.push_back(&x);
  return out;
}

}  // namespace

TEST_CASE("critic_update closed cases") {
  Rng rng(7);
  AgentNets nets = make_agent(2, 1, {4}, rng);
  // Constant critic: zero weights, output bias c.
  for (auto& w : nets.critic.weights) w.setZero();
  for (auto& b : nets.critic.biases) b.setZero();
  nets.critic.biases.back()(0) = 2.0;
  nets.target_critic = nets.critic;

  std::vector<Experience> xs;
  for (int i = 0; i < 4; ++i) {
    Experience e;
    e.o = {0.1 * i, -0.1 * i};
    e.a = {0.0};
    e.o_next = {0.0, 0.0};
    e.r = static_cast<double>(i);
    xs.push_back(e);
  }

  SUBCASE("gamma = 0 with a frozen constant critic: loss = mean (c - r)^2") {
    double expect = 0.0;
    for (const auto& e : xs) expect += std::pow(2.0 - e.r, 2);
    expect /= static_cast<double>(xs.size());
    const double loss = critic_update(nets, as_batch(xs), 0.0, 1e-3);
    CHECK(loss == doctest::Approx(expect).epsilon(1e-12));
  }

  SUBCASE("replicated single experience equals the single TD error") {
    std::vector<Experience> rep(8, xs[3]);
    const double loss = critic_update(nets, as_batch(rep), 0.0, 1e-3);
    CHECK(loss == doctest::Approx(std::pow(2.0 - 3.0, 2)).epsilon(1e-12));
  }
}

TEST_CASE("critic batch-loss gradient matches finite differences") {
  Rng rng(15);
  AgentNets nets = make_agent(3, 2, {5}, rng);
  const double gamma = 0.9;
  std::vector<Experience> xs;
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int i = 0; i < 6; ++i) {
    Experience e;
    e.o = {uni(rng), uni(rng), uni(rng)};
    e.a = {uni(rng), uni(rng)};
    e.o_next = {uni(rng), uni(rng), uni(rng)};
    e.r = uni(rng);
    xs.push_back(e);
  }
  const auto batch = as_batch(xs);

  // Loss replica with frozen targets, evaluated at arbitrary critic params.
  auto loss_at = [&](const MLPParams& critic) {
    double acc = 0.0;
    for (const auto& e : xs) {
      Eigen::RowVectorXd on(3);
      on << e.o_next[0], e.o_next[1], e.o_next[2];
      const Eigen::MatrixXd an = forward(nets.target_actor, on);
      Eigen::RowVectorXd tin(5);
      tin << on, an;
      const double y = e.r + gamma * forward(nets.target_critic, tin)(0, 0);
      Eigen::RowVectorXd cin(5);
      cin << e.o[0], e.o[1], e.o[2], e.a[0], e.a[1];
      acc += std::pow(forward(critic, cin)(0, 0) - y, 2);
    }
    return acc / static_cast<double>(xs.size());
  };

  // Analytic gradient via the same path critic_update uses.
  Eigen::MatrixXd obs(6, 3), actions(6, 2), obs_next(6, 3);
  for (int i = 0; i < 6; ++i) {
    obs.row(i) << xs[i].o[0], xs[i].o[1], xs[i].o[2];
    actions.row(i) << xs[i].a[0], xs[i].a[1];
    obs_next.row(i) << xs[i].o_next[0], xs[i].o_next[1], xs[i].o_next[2];
  }
  const Eigen::MatrixXd an = forward(nets.target_actor, obs_next);
  Eigen::MatrixXd tin(6, 5);
  tin << obs_next, an;
  const Eigen::MatrixXd qn = forward(nets.target_critic, tin);
  Eigen::MatrixXd cin(6, 5);
  cin << obs, actions;
  ForwardCache cache;
  const Eigen::MatrixXd q = forward(nets.critic, cin, &cache);
  Eigen::VectorXd y(6);
  for (int i = 0; i < 6; ++i) y(i) = xs[i].r + gamma * qn(i, 0);
  const Eigen::MatrixXd dq = (2.0 / 6.0) * (q.col(0) - y);
  Gradients grads;
  backward(nets.critic, cache, dq, grads);

  const double fd_step = 1e-5;
  MLPParams probe = nets.critic;
  for (std::size_t layer = 0; layer < probe.weights.size(); ++layer) {
    for (int r = 0; r < probe.weights[layer].rows(); ++r) {
      for (int c = 0; c < probe.weights[layer].cols(); ++c) {
        const double save = probe.weights[layer](r, c);
        probe.weights[layer](r, c) = save + fd_step;
        const double up = loss_at(probe);
        probe.weights[layer](r, c) = save - fd_step;
        const double down = loss_at(probe);
        probe.weights[layer](r, c) = save;
        CHECK(grads.weights[layer](r, c) ==
              doctest::Approx((up - down) / (2.0 * fd_step)).epsilon(1e-4).scale(1e-3));
      }
    }
  }
  (void)batch;
}

TEST_CASE("actor_update closed cases") {
  Rng rng(19);

  SUBCASE("constant critic leaves the actor unchanged") {
    AgentNets nets = make_agent(2, 1, {4}, rng);
    for (auto& w : nets.critic.weights) w.setZero();
    for (auto& b : nets.critic.biases) b.setZero();
    nets.critic.biases.back()(0) = 5.0;
    const MLPParams before = nets.actor;
    std::vector<Experience> xs(4);
    for (auto& e : xs) {
      e.o = {0.2, -0.3};
      e.a = {0.0};
      e.o_next = {0.0, 0.0};
    }
    const double obj = actor_update(nets, as_batch(xs), 1e-3);
    CHECK(obj == doctest::Approx(5.0));
    CHECK(param_distance(before, nets.actor) == 0.0);
  }

  SUBCASE("actor climbs toward the critic's argmax") {
    // Hand-built critic: Q(o, a) = -relu(a - 0.5) - relu(0.5 - a); its
    // unique maximizer is a = 0.5.
    AgentNets nets = make_agent(1, 1, {8}, rng);
    MLPSpec critic_spec;
    critic_spec.input_dim = 2;
    critic_spec.hidden_dims = {2};
    critic_spec.output_dim = 1;
    MLPParams critic = init_params(critic_spec, rng);
    critic.weights[0].setZero();
    critic.weights[0](0, 1) = 1.0;   // a - 0.5
    critic.weights[0](1, 1) = -1.0;  // 0.5 - a
    critic.biases[0] << -0.5, 0.5;
    critic.weights[1] << -1.0, -1.0;
    critic.biases[1].setZero();
    nets.critic = critic;

    std::vector<Experience> xs(8);
    for (auto& e : xs) {
      e.o = {0.7};
      e.a = {0.0};
      e.o_next = {0.7};
    }
    const auto batch = as_batch(xs);
    for (int i = 0; i < 3000; ++i) actor_update(nets, batch, 1e-2);
    Rng null_rng(0);
    const auto a = act(nets, {0.7}, 0.0, null_rng);
    CHECK(a[0] == doctest::Approx(0.5).epsilon(0.05));
  }
}

TEST_CASE("composite actor gradient matches finite differences") {
  Rng rng(23);
  AgentNets nets = make_agent(2, 1, {4}, rng);
  std::vector<Experience> xs;
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int i = 0; i < 6; ++i) {
    Experience e;
    e.o = {uni(rng), uni(rng)};
    e.a = {0.0};
    e.o_next = e.o;
    xs.push_back(e);
  }
  Eigen::MatrixXd obs(6, 2);
  for (int i = 0; i < 6; ++i) obs.row(i) << xs[i].o[0], xs[i].o[1];

  auto objective_at = [&](const MLPParams& actor) {
    const Eigen::MatrixXd a = forward(actor, obs);
    Eigen::MatrixXd cin(6, 3);
    cin << obs, a;
    return forward(nets.critic, cin).col(0).mean();
  };

  // Analytic composite gradient (same chaining as actor_update).
  ForwardCache actor_cache;
  const Eigen::MatrixXd a = forward(nets.actor, obs, &actor_cache);
  Eigen::MatrixXd cin(6, 3);
  cin << obs, a;
  ForwardCache critic_cache;
  forward(nets.critic, cin, &critic_cache);
  Gradients critic_grads;
  const Eigen::MatrixXd din = backward(
      nets.critic, critic_cache, Eigen::MatrixXd::Constant(6, 1, 1.0 / 6.0),
      critic_grads);
  Gradients actor_grads;
  backward(nets.actor, actor_cache, din.rightCols(1), actor_grads);

  const double fd_step = 1e-5;
  MLPParams probe = nets.actor;
  for (std::size_t layer = 0; layer < probe.weights.size(); ++layer) {
    for (int r = 0; r < probe.weights[layer].rows(); ++r) {
      for (int c = 0; c < probe.weights[layer].cols(); ++c) {
        const double save = probe.weights[layer](r, c);
        probe.weights[layer](r, c) = save + fd_step;
        const double up = objective_at(probe);
        probe.weights[layer](r, c) = save - fd_step;
        const double down = objective_at(probe);
        probe.weights[layer](r, c) = save;
        CHECK(actor_grads.weights[layer](r, c) ==
              doctest::Approx((up - down) / (2.0 * fd_step)).epsilon(1e-4).scale(1e-3));
      }
    }
  }
}

TEST_CASE("train warm-up gating and determinism") {
  ExperimentConfig cfg = tiny_config();

  SUBCASE("buffer below batch size: no updates in a 1x1 run") {
    cfg.hyper.episodes = 1;
    cfg.hyper.steps = 1;
    const TrainingLog log = train(cfg);
    REQUIRE(log.rows.size() == 1);
    for (double v : log.rows[0].critic_loss) CHECK(v == 0.0);
    for (double v : log.rows[0].actor_objective) CHECK(v == 0.0);
  }

  SUBCASE("fixed seed reproduces the log bit-for-bit") {
    cfg.hyper.episodes = 2;
    cfg.hyper.steps = 6;
    const TrainingLog a = train(cfg);
    const TrainingLog b = train(cfg);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      CHECK(a.rows[i].sum_rate == b.rows[i].sum_rate);
      CHECK(a.rows[i].agent_reward == b.rows[i].agent_reward);
      CHECK(a.rows[i].critic_loss == b.rows[i].critic_loss);
    }
  }
}
