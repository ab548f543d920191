#include "irsnet/neural.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace irsnet {

std::vector<int> MLPSpec::layer_dims() const {
  if (input_dim < 1 || output_dim < 1) {
    throw std::invalid_argument("MLPSpec: dimensions must be >= 1");
  }
  std::vector<int> dims{input_dim};
  for (int h : hidden_dims) {
    if (h < 1) throw std::invalid_argument("MLPSpec: hidden width must be >= 1");
    dims.push_back(h);
  }
  dims.push_back(output_dim);
  return dims;
}

MLPParams init_params(const MLPSpec& spec, Rng& rng) {
  const auto dims = spec.layer_dims();
  MLPParams p;
  p.spec = spec;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    const int fan_in = dims[i];
    const int fan_out = dims[i + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> uni(-bound, bound);
    Eigen::MatrixXd w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) w(r, c) = uni(rng);
    }
    p.weights.push_back(std::move(w));
    p.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  return p;
}

Eigen::MatrixXd forward(const MLPParams& params, const Eigen::MatrixXd& x,
                        ForwardCache* cache) {
  if (x.cols() != params.spec.input_dim) {
    throw std::invalid_argument("forward: input dimension mismatch");
  }
  if (cache) {
    cache->activations.clear();
    cache->preacts.clear();
    cache->activations.push_back(x);
  }
  Eigen::MatrixXd a = x;
  const std::size_t n_layers = params.weights.size();
  for (std::size_t i = 0; i < n_layers; ++i) {
    Eigen::MatrixXd z =
        (a * params.weights[i].transpose()).rowwise() + params.biases[i].transpose();
    if (cache) cache->preacts.push_back(z);
    if (i + 1 < n_layers) {
      a = z.cwiseMax(0.0);  // ReLU
    } else if (params.spec.output_activation == Activation::kTanh) {
      a = z.array().tanh().matrix();
    } else {
      a = std::move(z);
    }
    if (cache) cache->activations.push_back(a);
  }
  return a;
}

Eigen::MatrixXd backward(const MLPParams& params, const ForwardCache& cache,
                         const Eigen::MatrixXd& dl_dy, Gradients& grads) {
  const std::size_t n_layers = params.weights.size();
  if (cache.preacts.size() != n_layers) {
    throw std::invalid_argument("backward: cache does not match network");
  }
  grads.weights.assign(n_layers, Eigen::MatrixXd());
  grads.biases.assign(n_layers, Eigen::VectorXd());

  Eigen::MatrixXd delta;  // dL/dZ of the current layer
  if (params.spec.output_activation == Activation::kTanh) {
    const Eigen::MatrixXd& y = cache.activations.back();
    delta = dl_dy.cwiseProduct(
        (Eigen::MatrixXd::Ones(y.rows(), y.cols()) - y.cwiseProduct(y)));
  } else {
    delta = dl_dy;
  }
  for (std::size_t i = n_layers; i-- > 0;) {
    grads.weights[i] = delta.transpose() * cache.activations[i];
    grads.biases[i] = delta.colwise().sum().transpose();
    if (i == 0) {
      return delta * params.weights[0];
    }
    Eigen::MatrixXd da = delta * params.weights[i];
    // ReLU gate of the previous layer.
    delta = da.cwiseProduct(
        (cache.preacts[i - 1].array() > 0.0).cast<double>().matrix());
  }
  return {};  // unreachable
}

AdamState make_adam_state(const MLPParams& params) {
  AdamState s;
  for (std::size_t i = 0; i < params.weights.size(); ++i) {
    s.m_weights.push_back(Eigen::MatrixXd::Zero(params.weights[i].rows(),
                                                params.weights[i].cols()));
    s.v_weights.push_back(Eigen::MatrixXd::Zero(params.weights[i].rows(),
                                                params.weights[i].cols()));
    s.m_biases.push_back(Eigen::VectorXd::Zero(params.biases[i].size()));
    s.v_biases.push_back(Eigen::VectorXd::Zero(params.biases[i].size()));
  }
  return s;
}

namespace {

template <typename T>
void adam_update(T& p, const T& g, T& m, T& v, const AdamState& s, double lr) {
  if (!g.allFinite()) {
    throw std::runtime_error("adam_step: non-finite gradient");
  }
  m = s.beta1 * m + (1.0 - s.beta1) * g;
  v = s.beta2 * v + (1.0 - s.beta2) * g.cwiseProduct(g);
  const double bc1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
  const double bc2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
  p.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + s.epsilon);
}

}  // namespace

void adam_step(MLPParams& params, const Gradients& grads, AdamState& state,
               double lr) {
  if (grads.weights.size() != params.weights.size()) {
    throw std::invalid_argument("adam_step: gradient shape mismatch");
  }
  state.step += 1;
  for (std::size_t i = 0; i < params.weights.size(); ++i) {
    adam_update(params.weights[i], grads.weights[i], state.m_weights[i],
                state.v_weights[i], state, lr);
    adam_update(params.biases[i], grads.biases[i], state.m_biases[i],
                state.v_biases[i], state, lr);
  }
}

void soft_update(MLPParams& target, const MLPParams& main, double tau) {
  if (target.weights.size() != main.weights.size()) {
    throw std::invalid_argument("soft_update: shape mismatch");
  }
  for (std::size_t i = 0; i < target.weights.size(); ++i) {
    if (target.weights[i].rows() != main.weights[i].rows() ||
        target.weights[i].cols() != main.weights[i].cols()) {
      throw std::invalid_argument("soft_update: shape mismatch");
    }
    target.weights[i] = tau * main.weights[i] + (1.0 - tau) * target.weights[i];
    target.biases[i] = tau * main.biases[i] + (1.0 - tau) * target.biases[i];
  }
}

double param_distance(const MLPParams& a, const MLPParams& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.weights.size(); ++i) {
    acc += (a.weights[i] - b.weights[i]).squaredNorm();
    acc += (a.biases[i] - b.biases[i]).squaredNorm();
  }
  return std::sqrt(acc);
}

std::string to_checkpoint_json(const MLPParams& params) {
  nlohmann::json doc;
  doc["input_dim"] = params.spec.input_dim;
  doc["hidden_dims"] = params.spec.hidden_dims;
  doc["output_dim"] = params.spec.output_dim;
  doc["output_activation"] =
      params.spec.output_activation == Activation::kTanh ? "tanh" : "identity";
  nlohmann::json layers = nlohmann::json::object();
  for (std::size_t i = 0; i < params.weights.size(); ++i) {
    const auto& w = params.weights[i];
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(w.size()));
    for (int r = 0; r < w.rows(); ++r) {
      for (int c = 0; c < w.cols(); ++c) flat.push_back(w(r, c));
    }
    nlohmann::json layer;
    layer["rows"] = w.rows();
    layer["cols"] = w.cols();
    layer["weight"] = flat;
    layer["bias"] = std::vector<double>(params.biases[i].data(),
                                        params.biases[i].data() +
                                            params.biases[i].size());
    layers["layer" + std::to_string(i)] = std::move(layer);
  }
  doc["layers"] = std::move(layers);
  return doc.dump();
}

MLPParams from_checkpoint_json(const std::string& text) {
  const nlohmann::json doc = nlohmann::json::parse(text);
  MLPParams p;
  p.spec.input_dim = doc.at("input_dim").get<int>();
  p.spec.hidden_dims = doc.at("hidden_dims").get<std::vector<int>>();
  p.spec.output_dim = doc.at("output_dim").get<int>();
  p.spec.output_activation = doc.at("output_activation").get<std::string>() == "tanh"
                                 ? Activation::kTanh
                                 : Activation::kIdentity;
  const auto dims = p.spec.layer_dims();
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    const auto& layer = doc.at("layers").at("layer" + std::to_string(i));
    const int rows = layer.at("rows").get<int>();
    const int cols = layer.at("cols").get<int>();
    if (rows != dims[i + 1] || cols != dims[i]) {
      throw std::runtime_error("checkpoint: layer shape does not match spec");
    }
    const auto flat = layer.at("weight").get<std::vector<double>>();
    if (flat.size() != static_cast<std::size_t>(rows) * cols) {
      throw std::runtime_error("checkpoint: weight length mismatch");
    }
    Eigen::MatrixXd w(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) w(r, c) = flat[static_cast<std::size_t>(r) * cols + c];
    }
    const auto bias = layer.at("bias").get<std::vector<double>>();
    if (bias.size() != static_cast<std::size_t>(rows)) {
      throw std::runtime_error("checkpoint: bias length mismatch");
    }
    p.weights.push_back(std::move(w));
    p.biases.push_back(Eigen::Map<const Eigen::VectorXd>(bias.data(), rows));
  }
  return p;
}

void save_checkpoint(const MLPParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  out << to_checkpoint_json(params) << '\n';
}

MLPParams load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_checkpoint_json(text);
}

}  // namespace irsnet
