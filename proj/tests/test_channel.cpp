#include <doctest.h>

#include <cmath>

#include "irsnet/channel.hpp"

using namespace irsnet;

TEST_CASE("sample_rayleigh has unit mean square magnitude") {
  Rng rng(42);
  double acc = 0.0;
  std::size_t n = 0;
  while (n < 100000) {
    const ComplexMatrix m = sample_rayleigh(2, 3, rng);
    for (const auto& v : m.data()) acc += std::norm(v);
    n += 6;
  }
  const double mean = acc / static_cast<double>(n);
  CHECK(mean > 0.99);
  CHECK(mean < 1.01);
}

TEST_CASE("sample_rayleigh components are zero-mean Gaussian with variance 1/2") {
  Rng rng(7);
  const std::size_t n = 100000;
  double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const ComplexMatrix m = sample_rayleigh(1, 1, rng);
    for (double x : {m(0, 0).real(), m(0, 0).imag()}) {
      sum += x;
      sum2 += x * x;
      sum4 += x * x * x * x;
    }
  }
  const double mean = sum / (2.0 * n);
  const double var = sum2 / (2.0 * n) - mean * mean;
  const double kurt = (sum4 / (2.0 * n)) / (var * var);
  CHECK(std::abs(mean) < 3.0 * std::sqrt(0.5 / (2.0 * n)));
  CHECK(var == doctest::Approx(0.5).epsilon(0.02));
  CHECK(kurt == doctest::Approx(3.0).epsilon(0.05));  // normal excess kurtosis 0
}

TEST_CASE("sample_rayleigh is deterministic under a fixed seed") {
  Rng a(123), b(123);
  CHECK(sample_rayleigh(3, 4, a) == sample_rayleigh(3, 4, b));
}

TEST_CASE("path_loss_gain evaluates the reference model") {
  PathLossModel model;
  model.reference_loss_db = -30.0;
  CHECK(path_loss_gain(1.0, 2.5, model) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(path_loss_gain(10.0, 2.5, model) ==
        doctest::Approx(1e-3 * std::pow(10.0, -2.5)).epsilon(1e-12));
  // Clamped below the 1 m reference distance.
  CHECK(path_loss_gain(0.5, 2.5, model) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK_THROWS_AS(path_loss_gain(0.0, 2.5, model), std::domain_error);
  CHECK_THROWS_AS(path_loss_gain(-1.0, 2.5, model), std::domain_error);
}

TEST_CASE("path_loss_gain is non-increasing in distance") {
  PathLossModel model;
  double prev = path_loss_gain(0.1, 3.5, model);
  for (double d = 0.5; d < 300.0; d += 0.7) {
    const double g = path_loss_gain(d, 3.5, model);
    CHECK(g <= prev);
    prev = g;
  }
}

namespace {

Geometry single_link_geometry(double user_x) {
  Geometry g;
  g.area_bounds = Rect{0.0, 0.0, 50.0, 50.0};
  g.bs_positions = {Point{0.0, 0.0}};
  g.user_positions = {Point{user_x, 0.0}};
  return g;
}

}  // namespace

TEST_CASE("sample_channels direct-link variance matches the path loss gain") {
  NetworkDims dims;
  dims.num_bs = 1;
  dims.num_users = 1;
  dims.num_irs = 0;
  dims.bs_antennas = 1;
  dims.irs_elements = 1;
  const PathLossModel model;
  Rng rng(5);

  const Geometry g = single_link_geometry(10.0);
  double acc = 0.0;
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) {
    const ChannelRealization ch = sample_channels(g, dims, model, 1e-9, rng);
    acc += std::norm(ch.H(0, 0)(0, 0));
  }
  const double expected = path_loss_gain(10.0, model.exp_bs_user, model);
  CHECK(acc / n == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("sample_channels clamps co-located links to the reference gain") {
  NetworkDims dims;
  dims.num_bs = 1;
  dims.num_users = 1;
  dims.num_irs = 0;
  dims.bs_antennas = 1;
  const PathLossModel model;
  Rng rng(6);

  const Geometry g = single_link_geometry(0.0);  // on top of the BS
  double acc = 0.0;
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) {
    const ChannelRealization ch = sample_channels(g, dims, model, 1e-9, rng);
    acc += std::norm(ch.H(0, 0)(0, 0));
  }
  CHECK(acc / n ==
        doctest::Approx(std::pow(10.0, model.reference_loss_db / 10.0)).epsilon(0.02));
}

TEST_CASE("sample_channels is deterministic and shape-correct") {
  NetworkDims dims;
  dims.num_bs = 2;
  dims.num_users = 3;
  dims.num_irs = 2;
  dims.bs_antennas = 4;
  dims.irs_elements = 5;
  const PathLossModel model;

  Geometry g;
  g.area_bounds = Rect{0.0, 0.0, 100.0, 100.0};
  g.bs_positions = {Point{10, 10}, Point{90, 90}};
  g.irs_positions = {Point{20, 80}, Point{80, 20}};
  g.user_positions = {Point{30, 30}, Point{50, 50}, Point{70, 70}};

  Rng a(99), b(99);
  const ChannelRealization c1 = sample_channels(g, dims, model, 1e-9, a);
  const ChannelRealization c2 = sample_channels(g, dims, model, 1e-9, b);
  for (std::size_t i = 0; i < c1.direct.size(); ++i) CHECK(c1.direct[i] == c2.direct[i]);
  for (std::size_t i = 0; i < c1.bs_irs.size(); ++i) CHECK(c1.bs_irs[i] == c2.bs_irs[i]);
  for (std::size_t i = 0; i < c1.irs_user.size(); ++i) {
    CHECK(c1.irs_user[i] == c2.irs_user[i]);
  }
  CHECK(c1.G(1, 0).rows() == dims.irs_elements);
  CHECK(c1.G(1, 0).cols() == dims.bs_antennas);
  CHECK(c1.h(1, 2).rows() == dims.irs_elements);
  CHECK(c1.h(1, 2).cols() == 1);
  CHECK(c1.H(0, 1).rows() == 1);
  CHECK(c1.H(0, 1).cols() == dims.bs_antennas);

  Geometry bad = g;
  bad.user_positions.pop_back();
  Rng c(99);
  CHECK_THROWS_AS(sample_channels(bad, dims, model, 1e-9, c), std::invalid_argument);
}
