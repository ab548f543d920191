#pragma once

#include <optional>
#include <vector>

#include "irsnet/channel.hpp"
#include "irsnet/complex_matrix.hpp"
#include "irsnet/geometry.hpp"

namespace irsnet {

constexpr int kNoIrs = -1;

// bs_of_irs: controlling BS per IRS (total). irs_of_user: IRS allocated to
// each user, kNoIrs when the serving BS controls none.
struct AssociationState {
  std::vector<int> bs_of_irs;
  std::vector<int> irs_of_user;
};

// L x N_l phase angles, radians in [0, 2pi).
struct PhaseConfig {
  std::vector<std::vector<double>> theta;

  static PhaseConfig zeros(const NetworkDims& dims) {
    PhaseConfig p;
    p.theta.assign(dims.num_irs, std::vector<double>(dims.irs_elements, 0.0));
    return p;
  }
};

// Per-BS, per-user transmit beams (N_b each); zero vectors for unserved users.
struct BeamformingConfig {
  std::vector<std::vector<std::vector<cplx>>> w;  // [m][k][antenna]

  static BeamformingConfig zeros(const NetworkDims& dims) {
    BeamformingConfig b;
    b.w.assign(dims.num_bs,
               std::vector<std::vector<cplx>>(
                   dims.num_users, std::vector<cplx>(dims.bs_antennas, cplx{})));
    return b;
  }

  double bs_power(std::size_t m) const {
    double p = 0.0;
    for (const auto& wk : w[m]) {
      for (const auto& v : wk) p += std::norm(v);
    }
    return p;
  }
};

struct MobilityParams {
  double step_std = 1.0;  // meters per slot
};

// Fixed observation length: 2KN_b + 2LN_bN_l + 2LN_lK + (M-1)L.
std::size_t observation_dim(const NetworkDims& dims);

// Fixed action length: 2N_bK + LN_l + L.
std::size_t action_dim(const NetworkDims& dims);

// Nearest BS per user, ties to the lowest BS index.
std::vector<int> serving_cells(const Geometry& geometry);

// Gaussian random-walk user step, reflected at the area bounds.
Geometry step_mobility(const Geometry& geometry, const MobilityParams& params,
                       Rng& rng);

// Allocate each served user the controlling BS's IRS with the largest
// ||h_{l,k}||; users of a BS that controls no IRS go direct-only.
std::vector<int> allocate_irs_to_users(const ChannelRealization& channels,
                                       const std::vector<int>& bs_of_irs,
                                       const std::vector<int>& cells);

// H_{m,k} + h_{l,k}^H Phi_l G_{m,l} (1 x N_b); direct-only when no IRS is
// allocated to user k. Throws std::domain_error if k is not served by m.
ComplexMatrix effective_channel(std::size_t m, std::size_t k,
                                const ChannelRealization& channels,
                                const AssociationState& assoc,
                                const PhaseConfig& phases,
                                const std::vector<int>& cells);

// log2(1 + SINR) of user k in cell m, intra-cell interference only.
double user_rate(std::size_t m, std::size_t k, const ChannelRealization& channels,
                 const AssociationState& assoc, const PhaseConfig& phases,
                 const BeamformingConfig& beams, const std::vector<int>& cells);

double reward(std::size_t m, const ChannelRealization& channels,
              const AssociationState& assoc, const PhaseConfig& phases,
              const BeamformingConfig& beams, const std::vector<int>& cells);

double sum_rate(const ChannelRealization& channels, const AssociationState& assoc,
                const PhaseConfig& phases, const BeamformingConfig& beams,
                const std::vector<int>& cells);

// Local observation of BS m: masked channel entries (re/im interleaved)
// followed by previous-slot control flags of the other BSs. obs_scale is a
// fixed multiplier applied to channel entries only.
std::vector<double> observe(std::size_t m, const ChannelRealization& channels,
                            const AssociationState& prev_assoc,
                            const std::vector<int>& cells,
                            double obs_scale = 1.0);

}  // namespace irsnet
