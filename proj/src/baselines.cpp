#include "irsnet/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace irsnet {

std::vector<cplx> mrt_beam(const ComplexMatrix& h_eff, double power) {
  const double norm2 = h_eff.squared_norm();
  std::vector<cplx> w(h_eff.cols(), cplx{});
  if (norm2 <= 0.0) return w;
  const double scale = std::sqrt(power / norm2);
  for (std::size_t c = 0; c < h_eff.cols(); ++c) {
    w[c] = scale * std::conj(h_eff(0, c));
  }
  return w;
}

void apply_mrt(std::size_t m, const ChannelRealization& channels,
               const AssociationState& assoc, const PhaseConfig& phases,
               const std::vector<int>& cells, double p_max,
               BeamformingConfig& beams) {
  std::size_t served = 0;
  for (std::size_t k = 0; k < channels.dims.num_users; ++k) {
    if (cells[k] == static_cast<int>(m)) ++served;
  }
  if (served == 0) return;
  const double per_user = p_max / static_cast<double>(served);
  for (std::size_t k = 0; k < channels.dims.num_users; ++k) {
    if (cells[k] != static_cast<int>(m)) continue;
    const ComplexMatrix eff = effective_channel(m, k, channels, assoc, phases, cells);
    beams.w[m][k] = mrt_beam(eff, per_user);
  }
}

std::vector<double> phase_align(std::size_t m, std::size_t k, std::size_t l,
                                const ChannelRealization& channels,
                                const std::vector<cplx>& w) {
  const ComplexMatrix& h = channels.h(l, k);
  const ComplexMatrix& G = channels.G(m, l);
  const cplx direct = row_dot(channels.H(m, k), w);
  // Zero direct term: align to phase 0 reference instead.
  const double ref = std::abs(direct) > 0.0 ? std::arg(direct) : 0.0;
  std::vector<double> theta(h.rows(), 0.0);
  for (std::size_t e = 0; e < h.rows(); ++e) {
    cplx gw{0.0, 0.0};
    for (std::size_t c = 0; c < G.cols(); ++c) gw += G(e, c) * w[c];
    const cplx term = std::conj(h(e, 0)) * gw;
    double t = std::abs(term) > 0.0 ? ref - std::arg(term) : 0.0;
    t = std::fmod(t, 2.0 * M_PI);
    if (t < 0.0) t += 2.0 * M_PI;
    theta[e] = t;
  }
  return theta;
}

double single_user_rate(std::size_t m, std::size_t k, int l,
                        const ChannelRealization& channels,
                        const std::vector<double>& theta,
                        const std::vector<cplx>& w) {
  AssociationState assoc;
  assoc.bs_of_irs.assign(channels.dims.num_irs, -2);  // owned by nobody
  assoc.irs_of_user.assign(channels.dims.num_users, kNoIrs);
  PhaseConfig phases = PhaseConfig::zeros(channels.dims);
  if (l != kNoIrs) {
    assoc.bs_of_irs[static_cast<std::size_t>(l)] = static_cast<int>(m);
    assoc.irs_of_user[k] = l;
    phases.theta[static_cast<std::size_t>(l)] = theta;
  }
  std::vector<int> cells(channels.dims.num_users, -1);
  cells[k] = static_cast<int>(m);
  BeamformingConfig beams = BeamformingConfig::zeros(channels.dims);
  beams.w[m][k] = w;
  return user_rate(m, k, channels, assoc, phases, beams, cells);
}

namespace {

std::size_t checked_pow(std::size_t base, std::size_t exp, std::size_t cap,
                        const char* what) {
  std::size_t v = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && v > cap / base) {
      throw std::runtime_error(std::string(what) + ": enumeration budget exceeded");
    }
    v *= base;
    if (v > cap) {
      throw std::runtime_error(std::string(what) + ": enumeration budget exceeded");
    }
  }
  return v;
}

}  // namespace

std::pair<std::vector<double>, double> brute_force_phases(
    std::size_t m, std::size_t k, std::size_t l,
    const ChannelRealization& channels, const std::vector<cplx>& w, int levels,
    const OracleBudget& budget) {
  if (levels < 1) throw std::invalid_argument("brute_force_phases: levels must be >= 1");
  const std::size_t n = channels.dims.irs_elements;
  checked_pow(static_cast<std::size_t>(levels), n, budget.max_enumeration,
              "brute_force_phases");

  std::vector<int> digits(n, 0);
  std::vector<double> theta(n, 0.0), best_theta(n, 0.0);
  double best_rate = -1.0;
  for (;;) {
    for (std::size_t e = 0; e < n; ++e) {
      theta[e] = 2.0 * M_PI * digits[e] / static_cast<double>(levels);
    }
    const double rate =
        single_user_rate(m, k, static_cast<int>(l), channels, theta, w);
    if (rate > best_rate) {  // strict: ties keep the lexicographic first
      best_rate = rate;
      best_theta = theta;
    }
    std::size_t pos = n;
    while (pos-- > 0) {
      if (++digits[pos] < levels) break;
      digits[pos] = 0;
      if (pos == 0) return {best_theta, best_rate};
    }
  }
}

Decision oracle_decision(const ChannelRealization& channels,
                         const std::vector<int>& cells,
                         const std::vector<int>& bs_of_irs, double p_max) {
  const auto& dims = channels.dims;
  Decision d;
  d.assoc.bs_of_irs = bs_of_irs;
  d.assoc.irs_of_user = allocate_irs_to_users(channels, bs_of_irs, cells);
  d.phases = PhaseConfig::zeros(dims);
  d.beams = BeamformingConfig::zeros(dims);

  // Seed beams with direct-channel MRT so phase alignment has a reference,
  // then align each IRS for its strongest allocated user and re-match.
  AssociationState no_irs;
  no_irs.bs_of_irs = bs_of_irs;
  no_irs.irs_of_user.assign(dims.num_users, kNoIrs);
  for (std::size_t m = 0; m < dims.num_bs; ++m) {
    apply_mrt(m, channels, no_irs, d.phases, cells, p_max, d.beams);
  }
  for (std::size_t l = 0; l < dims.num_irs; ++l) {
    int align_user = kNoIrs;
    double best = -1.0;
    for (std::size_t k = 0; k < dims.num_users; ++k) {
      if (d.assoc.irs_of_user[k] != static_cast<int>(l)) continue;
      const double strength = channels.h(l, k).squared_norm();
      if (strength > best) {
        best = strength;
        align_user = static_cast<int>(k);
      }
    }
    if (align_user == kNoIrs) continue;
    const std::size_t k = static_cast<std::size_t>(align_user);
    const std::size_t m = static_cast<std::size_t>(cells[k]);
    d.phases.theta[l] = phase_align(m, k, l, channels, d.beams.w[m][k]);
  }
  for (std::size_t m = 0; m < dims.num_bs; ++m) {
    apply_mrt(m, channels, d.assoc, d.phases, cells, p_max, d.beams);
  }
  return d;
}

std::pair<AssociationState, double> brute_force_association(
    const ChannelRealization& channels, const std::vector<int>& cells,
    double p_max, const OracleBudget& budget) {
  const auto& dims = channels.dims;
  checked_pow(dims.num_bs, dims.num_irs, budget.max_enumeration,
              "brute_force_association");

  std::vector<int> owners(dims.num_irs, 0);
  AssociationState best_assoc;
  double best_rate = -1.0;
  for (;;) {
    const Decision d = oracle_decision(channels, cells, owners, p_max);
    const double rate = sum_rate(channels, d.assoc, d.phases, d.beams, cells);
    if (rate > best_rate) {
      best_rate = rate;
      best_assoc = d.assoc;
    }
    std::size_t pos = dims.num_irs;
    if (pos == 0) break;
    bool done = false;
    while (pos-- > 0) {
      if (++owners[pos] < static_cast<int>(dims.num_bs)) break;
      owners[pos] = 0;
      if (pos == 0) done = true;
    }
    if (done) break;
  }
  return {best_assoc, best_rate};
}

FixedAssociationPolicy::FixedAssociationPolicy(const ExperimentConfig& config,
                                               std::vector<int> bs_of_irs)
    : cfg_(config), bs_of_irs_(std::move(bs_of_irs)) {
  if (bs_of_irs_.size() != config.network.dims.num_irs) {
    throw std::invalid_argument("FixedAssociationPolicy: wrong map length");
  }
}

Decision FixedAssociationPolicy::decide(const ChannelRealization& channels,
                                        const std::vector<int>& cells,
                                        const AssociationState&) {
  return oracle_decision(channels, cells, bs_of_irs_, cfg_.network.p_max);
}

OraclePolicy::OraclePolicy(const ExperimentConfig& config, OracleBudget budget)
    : cfg_(config), budget_(budget) {}

Decision OraclePolicy::decide(const ChannelRealization& channels,
                              const std::vector<int>& cells,
                              const AssociationState&) {
  const auto [assoc, rate] =
      brute_force_association(channels, cells, cfg_.network.p_max, budget_);
  (void)rate;
  return oracle_decision(channels, cells, assoc.bs_of_irs, cfg_.network.p_max);
}

RandomPolicy::RandomPolicy(const ExperimentConfig& config)
    : cfg_(config), rng_(mix_seed(config.seed, SeedStream::kPolicy)) {}

Decision RandomPolicy::decide(const ChannelRealization& channels,
                              const std::vector<int>& cells,
                              const AssociationState&) {
  const auto& dims = cfg_.network.dims;
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<std::vector<double>> raw(dims.num_bs);
  std::vector<std::vector<double>> bids(dims.num_bs);
  for (std::size_t m = 0; m < dims.num_bs; ++m) {
    raw[m].resize(action_dim(dims));
    for (auto& v : raw[m]) v = uni(rng_);
    bids[m] = action_bids(raw[m], dims);
  }
  Decision d;
  d.assoc = resolve_association(bids, channels, cells);
  d.beams = BeamformingConfig::zeros(dims);
  d.phases = PhaseConfig::zeros(dims);
  for (std::size_t m = 0; m < dims.num_bs; ++m) {
    decode_action(raw[m], m, cells, d.assoc, cfg_.network.p_max, dims, d.beams,
                  d.phases);
  }
  return d;
}

}  // namespace irsnet
