#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "irsnet/channel.hpp"  // Rng

namespace irsnet {

enum class Activation { kTanh, kIdentity };

struct MLPSpec {
  int input_dim = 1;
  std::vector<int> hidden_dims{256, 128};
  int output_dim = 1;
  Activation output_activation = Activation::kIdentity;

  std::vector<int> layer_dims() const;  // [in, hidden..., out]
};

// Weights are (out x in); hidden activation is ReLU throughout.
struct MLPParams {
  MLPSpec spec;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

// Row-per-sample activations kept for the matching backward pass.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> activations;  // activations[0] = input batch
  std::vector<Eigen::MatrixXd> preacts;
};

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long step = 0;
  std::vector<Eigen::MatrixXd> m_weights, v_weights;
  std::vector<Eigen::VectorXd> m_biases, v_biases;
};

// Uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) weights, zero biases.
MLPParams init_params(const MLPSpec& spec, Rng& rng);

// X is batch x input_dim; returns batch x output_dim. Pass a cache to
// enable the paired backward call.
Eigen::MatrixXd forward(const MLPParams& params, const Eigen::MatrixXd& x,
                        ForwardCache* cache = nullptr);

// dL_dy is batch x output_dim. Fills parameter gradients (summed over the
// batch) and returns dL/dX.
Eigen::MatrixXd backward(const MLPParams& params, const ForwardCache& cache,
                         const Eigen::MatrixXd& dl_dy, Gradients& grads);

AdamState make_adam_state(const MLPParams& params);

// Bias-corrected adaptive-moment update. Throws on non-finite gradients.
void adam_step(MLPParams& params, const Gradients& grads, AdamState& state,
               double lr);

void soft_update(MLPParams& target, const MLPParams& main, double tau);

// Parameter distance used by the target-decay checks.
double param_distance(const MLPParams& a, const MLPParams& b);

// JSON checkpoint; exact round-trip of every coefficient.
std::string to_checkpoint_json(const MLPParams& params);
MLPParams from_checkpoint_json(const std::string& text);
void save_checkpoint(const MLPParams& params, const std::string& path);
MLPParams load_checkpoint(const std::string& path);

}  // namespace irsnet
