#pragma once

#include <utility>
#include <vector>

#include "irsnet/agent.hpp"
#include "irsnet/env.hpp"
#include "irsnet/sim.hpp"

namespace irsnet {

struct OracleBudget {
  int phase_levels = 8;                  // B
  std::size_t max_enumeration = 1000000;  // cap on B^N_l and M^L
};

// sqrt(power) * conj(h_eff)^T / ||h_eff||; all-zero beam for a dead channel.
std::vector<cplx> mrt_beam(const ComplexMatrix& h_eff, double power);

// Equal power split P_max/|C_m| across the served users of cell m, each
// beam matched to its current effective channel.
void apply_mrt(std::size_t m, const ChannelRealization& channels,
               const AssociationState& assoc, const PhaseConfig& phases,
               const std::vector<int>& cells, double p_max,
               BeamformingConfig& beams);

// Element phases that add every reflected term in phase with the direct
// term; the single-user optimum for fixed w.
std::vector<double> phase_align(std::size_t m, std::size_t k, std::size_t l,
                                const ChannelRealization& channels,
                                const std::vector<cplx>& w);

// Rate of user k alone on beam w (no intra-cell interference).
double single_user_rate(std::size_t m, std::size_t k, int l,
                        const ChannelRealization& channels,
                        const std::vector<double>& theta,
                        const std::vector<cplx>& w);

// Exhaustive search over the B^N_l grid theta_e in {2*pi*b/B}. Throws when
// the enumeration cap is exceeded.
std::pair<std::vector<double>, double> brute_force_phases(
    std::size_t m, std::size_t k, std::size_t l,
    const ChannelRealization& channels, const std::vector<cplx>& w, int levels,
    const OracleBudget& budget = {});

// MRT + phase-aligned decision under a fixed BS-of-IRS map.
Decision oracle_decision(const ChannelRealization& channels,
                         const std::vector<int>& cells,
                         const std::vector<int>& bs_of_irs, double p_max);

// Enumerates all M^L association maps, filling beams and phases with the
// restricted MRT + phase_align construction. Lower bound, not a global
// joint optimum.
std::pair<AssociationState, double> brute_force_association(
    const ChannelRealization& channels, const std::vector<int>& cells,
    double p_max, const OracleBudget& budget = {});

class FixedAssociationPolicy : public Policy {
 public:
  FixedAssociationPolicy(const ExperimentConfig& config,
                         std::vector<int> bs_of_irs);
  Decision decide(const ChannelRealization& channels,
                  const std::vector<int>& cells,
                  const AssociationState& prev_assoc) override;

 private:
  const ExperimentConfig& cfg_;
  std::vector<int> bs_of_irs_;
};

class OraclePolicy : public Policy {
 public:
  OraclePolicy(const ExperimentConfig& config, OracleBudget budget = {});
  Decision decide(const ChannelRealization& channels,
                  const std::vector<int>& cells,
                  const AssociationState& prev_assoc) override;

 private:
  const ExperimentConfig& cfg_;
  OracleBudget budget_;
};

// Uniform raw actions pushed through the standard decoder.
class RandomPolicy : public Policy {
 public:
  explicit RandomPolicy(const ExperimentConfig& config);
  Decision decide(const ChannelRealization& channels,
                  const std::vector<int>& cells,
                  const AssociationState& prev_assoc) override;

 private:
  const ExperimentConfig& cfg_;
  Rng rng_;
};

}  // namespace irsnet
