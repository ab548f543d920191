#include "irsnet/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace irsnet {

ComplexMatrix sample_rayleigh(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix out(rows, cols);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      out(r, c) = cplx{re, im};
    }
  }
  return out;
}

double path_loss_gain(double distance_m, double exponent,
                      const PathLossModel& model) {
  if (!(distance_m > 0.0)) {
    throw std::domain_error("path_loss_gain: distance must be positive");
  }
  const double g0 = std::pow(10.0, model.reference_loss_db / 10.0);
  const double d = std::max(distance_m, 1.0);  // clamp below the reference
  return g0 * std::pow(d, -exponent);
}

ChannelFading sample_fading(const NetworkDims& dims, Rng& rng) {
  ChannelFading f;
  f.dims = dims;
  f.direct.reserve(dims.num_bs * dims.num_users);
  f.bs_irs.reserve(dims.num_bs * dims.num_irs);
  f.irs_user.reserve(dims.num_irs * dims.num_users);
  for (std::size_t i = 0; i < dims.num_bs * dims.num_users; ++i) {
    f.direct.push_back(sample_rayleigh(1, dims.bs_antennas, rng));
  }
  for (std::size_t i = 0; i < dims.num_bs * dims.num_irs; ++i) {
    f.bs_irs.push_back(sample_rayleigh(dims.irs_elements, dims.bs_antennas, rng));
  }
  for (std::size_t i = 0; i < dims.num_irs * dims.num_users; ++i) {
    f.irs_user.push_back(sample_rayleigh(dims.irs_elements, 1, rng));
  }
  return f;
}

ChannelRealization apply_path_loss(const ChannelFading& fading,
                                   const Geometry& geometry,
                                   const PathLossModel& model,
                                   double noise_power_w) {
  const NetworkDims& dims = fading.dims;
  if (geometry.bs_positions.size() != dims.num_bs ||
      geometry.irs_positions.size() != dims.num_irs ||
      geometry.user_positions.size() != dims.num_users) {
    throw std::invalid_argument(
        "apply_path_loss: geometry counts do not match network dimensions");
  }
  if (!(noise_power_w > 0.0)) {
    throw std::invalid_argument("apply_path_loss: noise power must be > 0");
  }
  geometry.validate();

  // Co-located nodes collapse onto the 1 m reference distance.
  auto scaled = [&](const ComplexMatrix& unit, double d, double exponent) {
    ComplexMatrix ch = unit;
    ch *= std::sqrt(path_loss_gain(std::max(d, 1.0), exponent, model));
    return ch;
  };

  ChannelRealization ch;
  ch.dims = dims;
  ch.direct.reserve(dims.num_bs * dims.num_users);
  ch.bs_irs.reserve(dims.num_bs * dims.num_irs);
  ch.irs_user.reserve(dims.num_irs * dims.num_users);

  for (std::size_t m = 0; m < dims.num_bs; ++m) {
    for (std::size_t k = 0; k < dims.num_users; ++k) {
      const double d = distance(geometry.bs_positions[m], geometry.user_positions[k]);
      ch.direct.push_back(scaled(fading.direct[m * dims.num_users + k], d,
                                 model.exp_bs_user));
    }
  }
  for (std::size_t m = 0; m < dims.num_bs; ++m) {
    for (std::size_t l = 0; l < dims.num_irs; ++l) {
      const double d = distance(geometry.bs_positions[m], geometry.irs_positions[l]);
      ch.bs_irs.push_back(scaled(fading.bs_irs[m * dims.num_irs + l], d,
                                 model.exp_bs_irs));
    }
  }
  for (std::size_t l = 0; l < dims.num_irs; ++l) {
    for (std::size_t k = 0; k < dims.num_users; ++k) {
      const double d = distance(geometry.irs_positions[l], geometry.user_positions[k]);
      ch.irs_user.push_back(scaled(fading.irs_user[l * dims.num_users + k], d,
                                   model.exp_irs_user));
    }
  }
  ch.noise_power.assign(dims.num_users, noise_power_w);
  return ch;
}

ChannelRealization sample_channels(const Geometry& geometry,
                                   const NetworkDims& dims,
                                   const PathLossModel& model,
                                   double noise_power_w, Rng& rng) {
  return apply_path_loss(sample_fading(dims, rng), geometry, model,
                         noise_power_w);
}

}  // namespace irsnet
