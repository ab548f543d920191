#include "irsnet/env.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace irsnet {

std::size_t observation_dim(const NetworkDims& d) {
  return 2 * d.num_users * d.bs_antennas +
         2 * d.num_irs * d.bs_antennas * d.irs_elements +
         2 * d.num_irs * d.irs_elements * d.num_users +
         (d.num_bs - 1) * d.num_irs;
}

std::size_t action_dim(const NetworkDims& d) {
  return 2 * d.bs_antennas * d.num_users + d.num_irs * d.irs_elements +
         d.num_irs;
}

std::vector<int> serving_cells(const Geometry& geometry) {
  geometry.validate();
  std::vector<int> cells(geometry.user_positions.size());
  for (std::size_t k = 0; k < geometry.user_positions.size(); ++k) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < geometry.bs_positions.size(); ++m) {
      const double d = distance(geometry.user_positions[k], geometry.bs_positions[m]);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(m);
      }
    }
    cells[k] = best;
  }
  return cells;
}

namespace {

// Fold a coordinate back into [lo, hi] by mirror reflection.
double reflect(double v, double lo, double hi) {
  const double span = hi - lo;
  if (span <= 0.0) return lo;
  double t = std::fmod(v - lo, 2.0 * span);
  if (t < 0.0) t += 2.0 * span;
  return lo + (t <= span ? t : 2.0 * span - t);
}

}  // namespace

Geometry step_mobility(const Geometry& geometry, const MobilityParams& params,
                       Rng& rng) {
  geometry.validate();
  Geometry next = geometry;
  if (params.step_std <= 0.0) return next;
  std::normal_distribution<double> step(0.0, params.step_std);
  for (auto& p : next.user_positions) {
    p.x = reflect(p.x + step(rng), geometry.area_bounds.x_min,
                  geometry.area_bounds.x_max);
    p.y = reflect(p.y + step(rng), geometry.area_bounds.y_min,
                  geometry.area_bounds.y_max);
  }
  return next;
}

std::vector<int> allocate_irs_to_users(const ChannelRealization& channels,
                                       const std::vector<int>& bs_of_irs,
                                       const std::vector<int>& cells) {
  const auto& dims = channels.dims;
  std::vector<int> irs_of_user(dims.num_users, kNoIrs);
  for (std::size_t k = 0; k < dims.num_users; ++k) {
    const int m = cells[k];
    double best = -1.0;
    for (std::size_t l = 0; l < dims.num_irs; ++l) {
      if (bs_of_irs[l] != m) continue;
      const double strength = channels.h(l, k).squared_norm();
      if (strength > best) {
        best = strength;
        irs_of_user[k] = static_cast<int>(l);
      }
    }
  }
  return irs_of_user;
}

ComplexMatrix effective_channel(std::size_t m, std::size_t k,
                                const ChannelRealization& channels,
                                const AssociationState& assoc,
                                const PhaseConfig& phases,
                                const std::vector<int>& cells) {
  if (cells[k] != static_cast<int>(m)) {
    throw std::domain_error("effective_channel: user not served by this BS");
  }
  ComplexMatrix eff = channels.H(m, k);
  const int l = assoc.irs_of_user[k];
  if (l == kNoIrs) return eff;

  const ComplexMatrix& h = channels.h(static_cast<std::size_t>(l), k);
  const ComplexMatrix& G = channels.G(m, static_cast<std::size_t>(l));
  const auto& theta = phases.theta[static_cast<std::size_t>(l)];
  for (std::size_t c = 0; c < eff.cols(); ++c) {
    cplx acc{0.0, 0.0};
    for (std::size_t e = 0; e < h.rows(); ++e) {
      const cplx shift = std::polar(1.0, theta[e]);
      acc += std::conj(h(e, 0)) * shift * G(e, c);
    }
    eff(0, c) += acc;
  }
  return eff;
}

double user_rate(std::size_t m, std::size_t k, const ChannelRealization& channels,
                 const AssociationState& assoc, const PhaseConfig& phases,
                 const BeamformingConfig& beams, const std::vector<int>& cells) {
  const double sigma2 = channels.noise_power[k];
  if (!(sigma2 > 0.0)) {
    throw std::domain_error("user_rate: noise power must be positive");
  }
  const ComplexMatrix eff = effective_channel(m, k, channels, assoc, phases, cells);
  const double desired = std::norm(row_dot(eff, beams.w[m][k]));
  double interference = 0.0;
  for (std::size_t i = 0; i < channels.dims.num_users; ++i) {
    if (i == k || cells[i] != static_cast<int>(m)) continue;
    interference += std::norm(row_dot(eff, beams.w[m][i]));
  }
  return std::log2(1.0 + desired / (interference + sigma2));
}

double reward(std::size_t m, const ChannelRealization& channels,
              const AssociationState& assoc, const PhaseConfig& phases,
              const BeamformingConfig& beams, const std::vector<int>& cells) {
  double acc = 0.0;
  for (std::size_t k = 0; k < channels.dims.num_users; ++k) {
    if (cells[k] != static_cast<int>(m)) continue;
    acc += user_rate(m, k, channels, assoc, phases, beams, cells);
  }
  return acc;
}

double sum_rate(const ChannelRealization& channels, const AssociationState& assoc,
                const PhaseConfig& phases, const BeamformingConfig& beams,
                const std::vector<int>& cells) {
  double acc = 0.0;
  for (std::size_t m = 0; m < channels.dims.num_bs; ++m) {
    acc += reward(m, channels, assoc, phases, beams, cells);
  }
  return acc;
}

std::vector<double> observe(std::size_t m, const ChannelRealization& channels,
                            const AssociationState& prev_assoc,
                            const std::vector<int>& cells, double obs_scale) {
  const auto& dims = channels.dims;
  std::vector<double> o;
  o.reserve(observation_dim(dims));

  auto push = [&](const cplx& v, bool masked) {
    o.push_back(masked ? 0.0 : obs_scale * v.real());
    o.push_back(masked ? 0.0 : obs_scale * v.imag());
  };

  for (std::size_t k = 0; k < dims.num_users; ++k) {
    const bool masked = cells[k] != static_cast<int>(m);
    const auto& H = channels.H(m, k);
    for (std::size_t c = 0; c < dims.bs_antennas; ++c) push(H(0, c), masked);
  }
  for (std::size_t l = 0; l < dims.num_irs; ++l) {
    const bool masked = prev_assoc.bs_of_irs[l] != static_cast<int>(m);
    const auto& G = channels.G(m, l);
    for (std::size_t e = 0; e < dims.irs_elements; ++e) {
      for (std::size_t c = 0; c < dims.bs_antennas; ++c) push(G(e, c), masked);
    }
  }
  for (std::size_t l = 0; l < dims.num_irs; ++l) {
    const bool irs_masked = prev_assoc.bs_of_irs[l] != static_cast<int>(m);
    for (std::size_t k = 0; k < dims.num_users; ++k) {
      const bool masked = irs_masked || cells[k] != static_cast<int>(m);
      const auto& h = channels.h(l, k);
      for (std::size_t e = 0; e < dims.irs_elements; ++e) push(h(e, 0), masked);
    }
  }
  // Previous-slot control flags of every other BS.
  for (std::size_t other = 0; other < dims.num_bs; ++other) {
    if (other == m) continue;
    for (std::size_t l = 0; l < dims.num_irs; ++l) {
      o.push_back(prev_assoc.bs_of_irs[l] == static_cast<int>(other) ? 1.0 : 0.0);
    }
  }
  return o;
}

}  // namespace irsnet
