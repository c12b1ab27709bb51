#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <vector>

#include "rodpulse/quadrature.hpp"

namespace rodpulse::point_mass {

/// m x'' + b x' + k x = F(t).
struct OscillatorParams {
  double mass_m = 1.0;
  double damping_b = 0.0;
  double stiffness_k = 1.0;

  /// k/m - b^2/(4 m^2); positive means underdamped.
  double omega1_sq() const {
    return stiffness_k / mass_m - damping_b * damping_b / (4.0 * mass_m * mass_m);
  }
};

enum class ForceKind { DeltaImpulse, Custom };

/// A force history F(t), t >= 0. Signals tagged DeltaImpulse are finite-width
/// stand-ins for P*delta(alpha*t) that deliver exactly P/alpha.
struct ForceSignal {
  std::function<double(double)> force;
  ForceKind kind = ForceKind::Custom;
  double magnitude_p = 0.0;  // DeltaImpulse only
  double alpha = 1.0;        // DeltaImpulse only
  double width = 0.0;        // DeltaImpulse only, s
  std::vector<double> breakpoints;  // times where F is not smooth

  double operator()(double t) const { return force(t); }

  static ForceSignal zero();
  static ForceSignal constant(double f0);
  static ForceSignal custom(std::function<double(double)> f, std::vector<double> breakpoints = {});

  /// Height (P/alpha)/w on [0, w]. Its centroid sits at w/2, so responses
  /// carry an O(w) lag relative to the ideal impulse.
  static ForceSignal rectangular_impulse(double magnitude_p, double alpha, double width);

  /// Linear kernel (P/alpha)(4 - 6 s/w)/w on [0, w]: unit weight and zero
  /// first moment, so the centroid stays at t = 0 and the regularisation
  /// error is O(w^2).
  static ForceSignal zero_moment_impulse(double magnitude_p, double alpha, double width);
};

double free_particle_displacement(double magnitude_p, double alpha, double mass, double t);
double free_particle_velocity(double magnitude_p, double alpha, double mass, double t);

template <typename Derived>
auto free_particle_displacement(double magnitude_p, double alpha, double mass,
                                const Eigen::ArrayBase<Derived>& t) {
  return (magnitude_p / (mass * alpha)) * t.derived();
}

/// (P/alpha)/(m w1) exp(-b t/(2m)) sin(w1 t); underdamped only.
double oscillator_impulse_response(const OscillatorParams& osc, double magnitude_p, double alpha,
                                   double t);

Eigen::ArrayXd oscillator_impulse_response(const OscillatorParams& osc, double magnitude_p,
                                           double alpha, const Eigen::ArrayXd& t);

/// Convolution of F with the oscillator kernel, by adaptive quadrature.
double duhamel_response(const OscillatorParams& osc, const ForceSignal& force, double t,
                        const quadrature::Settings& settings = {});

}  // namespace rodpulse::point_mass
