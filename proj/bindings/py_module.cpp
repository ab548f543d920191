#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "irsnet/agent.hpp"
#include "irsnet/baselines.hpp"
#include "irsnet/channel.hpp"
#include "irsnet/config.hpp"
#include "irsnet/env.hpp"
#include "irsnet/neural.hpp"
#include "irsnet/sim.hpp"

namespace py = pybind11;
using namespace irsnet;

namespace {

py::dict metrics_to_dict(const std::vector<StepMetrics>& rows, std::size_t num_bs) {
  const std::size_t n = rows.size();
  py::array_t<std::int64_t> episode(n), step(n);
  py::array_t<double> sum_rate(n);
  py::array_t<double> reward({n, num_bs});
  py::array_t<double> critic_loss({n, num_bs});
  auto ep = episode.mutable_unchecked<1>();
  auto st = step.mutable_unchecked<1>();
  auto sr = sum_rate.mutable_unchecked<1>();
  auto rw = reward.mutable_unchecked<2>();
  auto cl = critic_loss.mutable_unchecked<2>();
  for (std::size_t i = 0; i < n; ++i) {
    ep(i) = static_cast<std::int64_t>(rows[i].episode);
    st(i) = static_cast<std::int64_t>(rows[i].step);
    sr(i) = rows[i].sum_rate;
    for (std::size_t m = 0; m < num_bs; ++m) {
      rw(i, m) = rows[i].agent_reward[m];
      cl(i, m) = rows[i].critic_loss.empty() ? 0.0 : rows[i].critic_loss[m];
    }
  }
  py::dict out;
  out["episode"] = episode;
  out["step"] = step;
  out["sum_rate"] = sum_rate;
  out["agent_reward"] = reward;
  out["critic_loss"] = critic_loss;
  return out;
}

std::unique_ptr<Policy> make_policy(const ExperimentConfig& cfg,
                                    const std::string& strategy) {
  if (strategy == "random") return std::make_unique<RandomPolicy>(cfg);
  if (strategy == "oracle") return std::make_unique<OraclePolicy>(cfg);
  if (strategy == "fixed") {
    std::vector<int> map(cfg.network.dims.num_irs);
    for (std::size_t l = 0; l < map.size(); ++l) {
      map[l] = static_cast<int>(l % cfg.network.dims.num_bs);
    }
    return std::make_unique<FixedAssociationPolicy>(cfg, std::move(map));
  }
  throw std::invalid_argument("unknown strategy: " + strategy);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-IRS downlink simulator and learning engine";

  py::class_<NetworkDims>(m, "NetworkDims")
      .def(py::init([](std::size_t num_bs, std::size_t num_users,
                       std::size_t num_irs, std::size_t bs_antennas,
                       std::size_t irs_elements) {
             return NetworkDims{num_bs, num_users, num_irs, bs_antennas,
                                irs_elements};
           }),
           py::arg("num_bs"), py::arg("num_users"), py::arg("num_irs"),
           py::arg("bs_antennas"), py::arg("irs_elements"))
      .def_readwrite("num_bs", &NetworkDims::num_bs)
      .def_readwrite("num_users", &NetworkDims::num_users)
      .def_readwrite("num_irs", &NetworkDims::num_irs)
      .def_readwrite("bs_antennas", &NetworkDims::bs_antennas)
      .def_readwrite("irs_elements", &NetworkDims::irs_elements);

  py::class_<ExperimentConfig>(m, "Config")
      .def(py::init([]() { return parse_config(""); }))
      .def_static("from_string", &parse_config, py::arg("text"))
      .def_static("from_file", &load_config, py::arg("path"))
      .def("serialize", &serialize_config)
      .def("hash", &config_hash)
      .def("validate", &ExperimentConfig::validate)
      .def_property(
          "seed", [](const ExperimentConfig& c) { return c.seed; },
          [](ExperimentConfig& c, std::uint64_t v) { c.seed = v; })
      .def_property(
          "episodes", [](const ExperimentConfig& c) { return c.hyper.episodes; },
          [](ExperimentConfig& c, std::size_t v) { c.hyper.episodes = v; })
      .def_property(
          "steps", [](const ExperimentConfig& c) { return c.hyper.steps; },
          [](ExperimentConfig& c, std::size_t v) { c.hyper.steps = v; })
      .def_property_readonly(
          "dims", [](const ExperimentConfig& c) { return c.network.dims; });

  m.def("observation_dim", &observation_dim, py::arg("dims"));
  m.def("action_dim", &action_dim, py::arg("dims"));

  m.def(
      "path_loss_gain",
      [](double distance, double exponent, double reference_loss_db) {
        PathLossModel model;
        model.reference_loss_db = reference_loss_db;
        return path_loss_gain(distance, exponent, model);
      },
      py::arg("distance"), py::arg("exponent"),
      py::arg("reference_loss_db") = -30.0);

  m.def(
      "sample_rayleigh",
      [](std::size_t rows, std::size_t cols, std::uint64_t seed) {
        Rng rng(seed);
        const ComplexMatrix mat = sample_rayleigh(rows, cols, rng);
        py::array_t<cplx> out({rows, cols});
        auto a = out.mutable_unchecked<2>();
        for (std::size_t r = 0; r < rows; ++r) {
          for (std::size_t c = 0; c < cols; ++c) a(r, c) = mat(r, c);
        }
        return out;
      },
      py::arg("rows"), py::arg("cols"), py::arg("seed"));

  m.def(
      "train",
      [](const ExperimentConfig& cfg) {
        std::vector<StepMetrics> rows;
        const TrainingLog log = train(cfg);
        return metrics_to_dict(log.rows, cfg.network.dims.num_bs);
      },
      py::arg("config"), "Run the full training loop; returns step metrics.");

  m.def(
      "evaluate",
      [](const ExperimentConfig& cfg, const std::string& strategy,
         std::size_t episodes) {
        auto policy = make_policy(cfg, strategy);
        std::vector<StepMetrics> rows;
        evaluate_policy(cfg, *policy, episodes,
                        [&](const StepMetrics& r) { rows.push_back(r); });
        return metrics_to_dict(rows, cfg.network.dims.num_bs);
      },
      py::arg("config"), py::arg("strategy"), py::arg("episodes"),
      "Evaluate a named strategy (random, oracle, fixed) on seeded episodes.");

  py::class_<MLPParams>(m, "MLP")
      .def_static("from_json", &from_checkpoint_json, py::arg("text"))
      .def_static("from_file", &load_checkpoint, py::arg("path"))
      .def("to_json", &to_checkpoint_json)
      .def("forward",
           [](const MLPParams& p, const Eigen::MatrixXd& x) {
             return forward(p, x);
           },
           py::arg("x"))
      .def_property_readonly("input_dim",
                             [](const MLPParams& p) { return p.spec.input_dim; })
      .def_property_readonly("output_dim",
                             [](const MLPParams& p) { return p.spec.output_dim; });

  m.attr("__version__") = "0.1.0";
}
