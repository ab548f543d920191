#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irsnet/channel.hpp"
#include "irsnet/geometry.hpp"

namespace irsnet {

struct NetworkConfig {
  NetworkDims dims;
  double p_max = 1.0;          // watts, per BS
  double noise_power = 1e-12;  // watts, per user
  Rect area;
  // Optional explicit placement; empty vectors fall back to seeded placement.
  std::vector<Point> bs_positions;
  std::vector<Point> irs_positions;
  std::vector<Point> user_positions;
  double obs_scale = 1.0;
};

struct MobilityConfig {
  double step_std = 1.0;
  bool per_slot = true;
};

struct HyperConfig {
  double gamma = 0.99;
  double lr_actor = 1e-4;
  double lr_critic = 1e-3;
  double tau = 0.001;
  std::size_t buffer = 10000;
  std::size_t episodes = 200;  // desk-scale default
  std::size_t steps = 100;     // desk-scale default
  std::size_t batch = 64;
  std::vector<int> hidden{256, 128};
  double noise_start = 0.1;
  double noise_end = 0.01;
  double grad_clip = 0.0;  // 0 disables clipping
  std::size_t checkpoint_interval = 50;  // episodes
};

struct ExperimentConfig {
  NetworkConfig network;
  PathLossModel channel;
  MobilityConfig mobility;
  HyperConfig hyper;
  std::uint64_t seed = 1;

  void validate() const;  // throws std::invalid_argument naming the field
};

// Parses a TOML document (tables [network] [channel] [mobility] [hyper],
// scalar and array values). Unknown keys and sections are rejected.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);
std::string serialize_config(const ExperimentConfig& config);

// FNV-1a over the serialized form; used in metrics provenance headers.
std::uint64_t config_hash(const ExperimentConfig& config);

}  // namespace irsnet
