#pragma once

#include <random>
#include <vector>

#include "irsnet/complex_matrix.hpp"
#include "irsnet/geometry.hpp"

namespace irsnet {

using Rng = std::mt19937_64;

// Distance-dependent large-scale loss, g(d) = g0 * max(d, 1m)^(-alpha).
struct PathLossModel {
  double reference_loss_db = -30.0;  // gain at the 1 m reference distance
  double exp_bs_irs = 2.5;
  double exp_irs_user = 2.4;
  double exp_bs_user = 3.5;
};

// Full CSI of one slot. irs_user stores h_{l,k} unconjugated (N_l x 1);
// the Hermitian is applied where the cascade is evaluated.
struct ChannelRealization {
  NetworkDims dims;
  std::vector<ComplexMatrix> direct;    // M*K blocks, each 1 x N_b
  std::vector<ComplexMatrix> bs_irs;    // M*L blocks, each N_l x N_b
  std::vector<ComplexMatrix> irs_user;  // L*K blocks, each N_l x 1
  std::vector<double> noise_power;      // per user, linear watts

  const ComplexMatrix& H(std::size_t m, std::size_t k) const {
    return direct[m * dims.num_users + k];
  }
  const ComplexMatrix& G(std::size_t m, std::size_t l) const {
    return bs_irs[m * dims.num_irs + l];
  }
  const ComplexMatrix& h(std::size_t l, std::size_t k) const {
    return irs_user[l * dims.num_users + k];
  }
};

// i.i.d. CN(0,1) entries: re and im each Normal(0, 1/2).
ComplexMatrix sample_rayleigh(std::size_t rows, std::size_t cols, Rng& rng);

// Linear gain at the given distance. Throws std::domain_error for d <= 0.
double path_loss_gain(double distance_m, double exponent,
                      const PathLossModel& model);

// Small-scale (unit-power Rayleigh) coefficients only, drawn once per
// episode; large-scale gains are applied against the current geometry.
struct ChannelFading {
  NetworkDims dims;
  std::vector<ComplexMatrix> direct;    // M*K blocks, each 1 x N_b
  std::vector<ComplexMatrix> bs_irs;    // M*L blocks, each N_l x N_b
  std::vector<ComplexMatrix> irs_user;  // L*K blocks, each N_l x 1
};

ChannelFading sample_fading(const NetworkDims& dims, Rng& rng);

// Scales the episode's fading by sqrt(path-loss gain) for the current
// positions, yielding the full CSI of one slot.
ChannelRealization apply_path_loss(const ChannelFading& fading,
                                   const Geometry& geometry,
                                   const PathLossModel& model,
                                   double noise_power_w);

ChannelRealization sample_channels(const Geometry& geometry,
                                   const NetworkDims& dims,
                                   const PathLossModel& model,
                                   double noise_power_w, Rng& rng);

}  // namespace irsnet
