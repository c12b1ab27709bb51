#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "rodpulse/errors.hpp"

namespace rodpulse::quadrature {

struct Settings {
  double abs_tolerance = 1e-10;
  int max_subdivisions = 2000;
};

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  int intervals = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae on [-1, 1] (non-negative half) and weights.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <typename F>
Segment kronrod15(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double sum = f(centre - dx) + f(centre + dx);
    kronrod += kKronrodWeights[i] * sum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive G7/K15 integration of f over [a, b] with an absolute
/// error target. `breakpoints` inside (a, b) seed the initial partition.
/// Throws NumericalError with diagnostics when the subdivision cap is hit.
template <typename F>
Result integrate(F&& f, double a, double b, const Settings& settings,
                 std::vector<double> breakpoints = {}) {
  Result result;
  if (a == b) return result;
  std::vector<double> cuts{a};
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double p : breakpoints) {
    if (p > cuts.back() && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);

  std::priority_queue<detail::Segment> work;
  double value = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto seg = detail::kronrod15(f, cuts[i], cuts[i + 1]);
    value += seg.value;
    error += seg.error;
    work.push(seg);
  }
  int subdivisions = 0;
  while (error > settings.abs_tolerance) {
    if (subdivisions >= settings.max_subdivisions) {
      std::ostringstream msg;
      msg << "adaptive quadrature on [" << a << ", " << b << "] did not reach absolute tolerance "
          << settings.abs_tolerance << " after " << subdivisions
          << " subdivisions (error estimate " << error << ", value " << value << ")";
      throw NumericalError(msg.str());
    }
    const auto worst = work.top();
    work.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = detail::kronrod15(f, worst.a, mid);
    const auto right = detail::kronrod15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    work.push(left);
    work.push(right);
    ++subdivisions;
  }
  // Re-sum to shed the drift of the running updates.
  result.value = 0.0;
  result.error_estimate = 0.0;
  result.intervals = static_cast<int>(work.size());
  while (!work.empty()) {
    result.value += work.top().value;
    result.error_estimate += work.top().error;
    work.pop();
  }
  return result;
}

}  // namespace rodpulse::quadrature
