#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace irsnet {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

struct Rect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 100.0;
  double y_max = 100.0;

  bool contains(const Point& p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
};

// Antenna/element counts of the whole network.
struct NetworkDims {
  std::size_t num_bs = 2;        // M
  std::size_t num_users = 4;     // K
  std::size_t num_irs = 2;       // L
  std::size_t bs_antennas = 4;   // N_b
  std::size_t irs_elements = 8;  // N_l
};

struct Geometry {
  std::vector<Point> bs_positions;
  std::vector<Point> irs_positions;
  std::vector<Point> user_positions;
  Rect area_bounds;

  void validate() const {
    if (bs_positions.empty() || user_positions.empty()) {
      throw std::invalid_argument("Geometry: need at least one BS and one user");
    }
    auto check = [this](const std::vector<Point>& pts, const char* what) {
      for (const auto& p : pts) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
          throw std::invalid_argument(std::string("Geometry: non-finite ") + what);
        }
        if (!area_bounds.contains(p)) {
          throw std::invalid_argument(std::string("Geometry: ") + what +
                                      " outside area bounds");
        }
      }
    };
    check(bs_positions, "BS position");
    check(irs_positions, "IRS position");
    check(user_positions, "user position");
  }
};

}  // namespace irsnet
