#pragma once

#include <vector>

#include "irsnet/channel.hpp"
#include "irsnet/env.hpp"

namespace irsnet::test {

// Zero-filled CSI with the given shapes; tests poke entries directly.
inline ChannelRealization make_channels(const NetworkDims& dims,
                                        double noise = 1.0) {
  ChannelRealization ch;
  ch.dims = dims;
  ch.direct.assign(dims.num_bs * dims.num_users,
                   ComplexMatrix(1, dims.bs_antennas));
  ch.bs_irs.assign(dims.num_bs * dims.num_irs,
                   ComplexMatrix(dims.irs_elements, dims.bs_antennas));
  ch.irs_user.assign(dims.num_irs * dims.num_users,
                     ComplexMatrix(dims.irs_elements, 1));
  ch.noise_power.assign(dims.num_users, noise);
  return ch;
}

inline ComplexMatrix& H(ChannelRealization& ch, std::size_t m, std::size_t k) {
  return ch.direct[m * ch.dims.num_users + k];
}
inline ComplexMatrix& G(ChannelRealization& ch, std::size_t m, std::size_t l) {
  return ch.bs_irs[m * ch.dims.num_irs + l];
}
inline ComplexMatrix& h(ChannelRealization& ch, std::size_t l, std::size_t k) {
  return ch.irs_user[l * ch.dims.num_users + k];
}

// Random CSI with O(1) entries, independent of the path-loss machinery.
inline ChannelRealization random_channels(const NetworkDims& dims, Rng& rng,
                                          double noise = 1.0) {
  ChannelRealization ch = make_channels(dims, noise);
  for (auto& mat : ch.direct) mat = sample_rayleigh(mat.rows(), mat.cols(), rng);
  for (auto& mat : ch.bs_irs) mat = sample_rayleigh(mat.rows(), mat.cols(), rng);
  for (auto& mat : ch.irs_user) mat = sample_rayleigh(mat.rows(), mat.cols(), rng);
  return ch;
}

}  // namespace irsnet::test
