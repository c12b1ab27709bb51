#include "rodpulse/field.hpp"

#include <algorithm>
#include <cmath>

#include "rodpulse/errors.hpp"

namespace rodpulse {

namespace {

bool ascending(const Eigen::VectorXd& v) {
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

}  // namespace

void DisplacementField::check_shape() const {
  if (u.rows() != t.size() || u.cols() != x.size()) {
    throw ParameterError("field sample array does not match its grid");
  }
  if (flags.size() != 0 && (flags.rows() != u.rows() || flags.cols() != u.cols())) {
    throw ParameterError("field flag array does not match its grid");
  }
  if (!ascending(x) || !ascending(t)) throw ParameterError("field axes must be strictly ascending");
}

std::vector<double> wavefront_times(double x, double length, double wave_speed, double horizon) {
  std::vector<double> times;
  for (int k = 0;; ++k) {
    const double direct = (x + 2.0 * k * length) / wave_speed;
    const double reflected = (2.0 * (k + 1) * length - x) / wave_speed;
    if (direct > horizon && reflected > horizon) break;
    if (direct <= horizon) times.push_back(direct);
    if (reflected <= horizon) times.push_back(reflected);
  }
  std::sort(times.begin(), times.end());
  return times;
}

bool near_wavefront(double x, double t, double length, double wave_speed, double half_width) {
  const double period = 2.0 * length / wave_speed;
  auto close = [&](double t0) {
    // distance from t to the lattice t0 + k * period, k >= 0
    if (t < t0) return t0 - t <= half_width;
    const double r = std::fmod(t - t0, period);
    return std::min(r, period - r) <= half_width;
  };
  return close(x / wave_speed) || close((2.0 * length - x) / wave_speed);
}

}  // namespace rodpulse
