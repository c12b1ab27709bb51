#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "rodpulse/model.hpp"

namespace rodpulse {

/// Sample flags carried alongside a field.
enum SampleFlag : std::uint8_t {
  kNearWavefront = 1,
  kNotConverged = 2,
};

/// u(x_i, t_j) on a tensor grid. Rows are times, columns positions, both
/// ascending; this is also the CSV row order. Tension samples use the same
/// layout with quantity "T".
struct DisplacementField {
  Eigen::VectorXd x;
  Eigen::VectorXd t;
  Eigen::MatrixXd u;  // t.size() x x.size()
  std::string method;
  std::string quantity = "u";  // "T" for tension samples
  Scenario scenario;
  std::vector<std::string> notes;
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> flags;  // empty or same shape as u

  Eigen::Index nx() const { return x.size(); }
  Eigen::Index nt() const { return t.size(); }

  /// Throws ParameterError on shape mismatch or non-ascending axes.
  void check_shape() const;
};

/// Characteristic times t = (x + 2kL)/c and t = (2(k+1)L - x)/c up to `horizon`.
std::vector<double> wavefront_times(double x, double length, double wave_speed, double horizon);

/// True when t lies within half_width of a characteristic through x.
bool near_wavefront(double x, double t, double length, double wave_speed, double half_width);

}  // namespace rodpulse
