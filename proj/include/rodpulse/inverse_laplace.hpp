#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>

#include "rodpulse/field.hpp"
#include "rodpulse/model.hpp"

namespace rodpulse::inverse {

using Complex = std::complex<double>;
using Image = std::function<Complex(Complex)>;

enum class Method {
  /// Trapezoid rule on Re p = shift + A/(2t) with Euler (binomial)
  /// averaging of the alternating partial sums.
  ShiftedContourQuadrature,
  /// de Hoog, Knight and Stokes: Fourier series accelerated by a
  /// quotient-difference continued fraction.
  SeriesAcceleration,
};

struct InversionConfig {
  Method method = Method::ShiftedContourQuadrature;
  double contour_shift = 0.0;  // s^-1, right of every singularity
  int node_count = 64;         // starting size, doubled until converged
  int max_node_count = 8192;
  double tolerance = 1e-9;     // relative change between doublings
  double absolute_tolerance = 0.0;  // change accepted regardless of |value|
  double damping = 25.0;       // A; discretisation error ~ exp(-A)
};

/// Throws ParameterError for node_count < 16, tolerance <= 0 and the like.
void validate(const InversionConfig& config);

struct InversionResult {
  double value = 0.0;
  double change = 0.0;  // |last - previous|
  double previous = 0.0;
  int nodes = 0;
  bool converged = false;
};

/// Never throws on slow convergence; reports it instead.
InversionResult invert_detailed(const Image& image, double t, const InversionConfig& config);

/// f(t) from its Laplace image. Throws NumericalError (with the last two
/// iterates) when the doubling sequence does not settle.
double invert(const Image& image, double t, const InversionConfig& config);

/// Largest real part of any pole of the scenario's image.
double max_real_pole(const Scenario& scenario);

/// max_real_pole + 1.
double default_contour_shift(const Scenario& scenario);

InversionConfig default_config(const Scenario& scenario);

/// Bromwich inversion of eval_phi over a grid. A row at t = 0 is filled with
/// the initial condition. Samples near a characteristic get kNearWavefront,
/// samples whose doubling did not settle get kNotConverged; both are kept.
/// Unless set, the absolute tolerance is tolerance * (P/alpha)/(rho S c).
/// `threads` = 0 picks the hardware concurrency.
DisplacementField invert_field(const Scenario& scenario, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& t, const InversionConfig& config,
                               unsigned threads = 0);

}  // namespace rodpulse::inverse
