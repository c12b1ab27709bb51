#include "rodpulse/point_mass.hpp"

#include <cmath>
#include <sstream>

#include "rodpulse/errors.hpp"

namespace rodpulse::point_mass {

namespace {

void check_particle(double alpha, double mass, double t) {
  if (!(mass > 0.0)) throw ParameterError("particle mass must be positive");
  if (alpha == 0.0) throw ParameterError("alpha must be nonzero");
  if (t < 0.0) throw ParameterError("time must be non-negative");
}

double checked_omega1(const OscillatorParams& osc) {
  if (!(osc.mass_m > 0.0) || !(osc.stiffness_k > 0.0) || osc.damping_b < 0.0) {
    throw ParameterError("oscillator needs m > 0, k > 0, b >= 0");
  }
  const double w2 = osc.omega1_sq();
  if (!(w2 > 0.0)) {
    std::ostringstream msg;
    msg << "omega1^2 = " << w2
        << " <= 0: critically damped and overdamped oscillators are not supported";
    throw UnsupportedRegimeError(msg.str());
  }
  return std::sqrt(w2);
}

}  // namespace

ForceSignal ForceSignal::zero() {
  return custom([](double) { return 0.0; });
}

ForceSignal ForceSignal::constant(double f0) {
  return custom([f0](double) { return f0; });
}

ForceSignal ForceSignal::custom(std::function<double(double)> f, std::vector<double> breakpoints) {
  ForceSignal s;
  s.force = std::move(f);
  s.breakpoints = std::move(breakpoints);
  return s;
}

ForceSignal ForceSignal::rectangular_impulse(double magnitude_p, double alpha, double width) {
  if (!(width > 0.0)) throw ParameterError("impulse width must be positive");
  const double height = magnitude_p / alpha / width;
  ForceSignal s;
  s.force = [height, width](double t) { return (t >= 0.0 && t <= width) ? height : 0.0; };
  s.kind = ForceKind::DeltaImpulse;
  s.magnitude_p = magnitude_p;
  s.alpha = alpha;
  s.width = width;
  s.breakpoints = {width};
  return s;
}

ForceSignal ForceSignal::zero_moment_impulse(double magnitude_p, double alpha, double width) {
  if (!(width > 0.0)) throw ParameterError("impulse width must be positive");
  const double q = magnitude_p / alpha;
  ForceSignal s;
  s.force = [q, width](double t) {
    if (t < 0.0 || t > width) return 0.0;
    return q * (4.0 - 6.0 * t / width) / width;
  };
  s.kind = ForceKind::DeltaImpulse;
  s.magnitude_p = magnitude_p;
  s.alpha = alpha;
  s.width = width;
  s.breakpoints = {width};
  return s;
}

double free_particle_displacement(double magnitude_p, double alpha, double mass, double t) {
  check_particle(alpha, mass, t);
  return magnitude_p / (mass * alpha) * t;
}

double free_particle_velocity(double magnitude_p, double alpha, double mass, double t) {
  check_particle(alpha, mass, t);
  return magnitude_p / (mass * alpha);
}

double oscillator_impulse_response(const OscillatorParams& osc, double magnitude_p, double alpha,
                                   double t) {
  const double w1 = checked_omega1(osc);
  if (alpha == 0.0) throw ParameterError("alpha must be nonzero");
  if (t < 0.0) throw ParameterError("time must be non-negative");
  const double q = magnitude_p / alpha;
  return q / (osc.mass_m * w1) * std::exp(-osc.damping_b * t / (2.0 * osc.mass_m)) *
         std::sin(w1 * t);
}

Eigen::ArrayXd oscillator_impulse_response(const OscillatorParams& osc, double magnitude_p,
                                           double alpha, const Eigen::ArrayXd& t) {
  const double w1 = checked_omega1(osc);
  if (alpha == 0.0) throw ParameterError("alpha must be nonzero");
  if ((t < 0.0).any()) throw ParameterError("time must be non-negative");
  const double scale = magnitude_p / alpha / (osc.mass_m * w1);
  return scale * (-osc.damping_b / (2.0 * osc.mass_m) * t).exp() * (w1 * t).sin();
}

double duhamel_response(const OscillatorParams& osc, const ForceSignal& force, double t,
                        const quadrature::Settings& settings) {
  const double w1 = checked_omega1(osc);
  if (t < 0.0) throw ParameterError("time must be non-negative");
  if (!force.force) throw ParameterError("force signal has no function");
  const double decay = osc.damping_b / (2.0 * osc.mass_m);
  auto integrand = [&](double tau) {
    return force(t - tau) * std::exp(-decay * tau) * std::sin(w1 * tau);
  };
  // A kink of F at s becomes a kink of the integrand at tau = t - s.
  std::vector<double> cuts;
  cuts.reserve(force.breakpoints.size());
  for (double s : force.breakpoints) cuts.push_back(t - s);

  // The kernel prefactor scales the error, so tighten the target to match.
  quadrature::Settings scaled = settings;
  scaled.abs_tolerance = settings.abs_tolerance * osc.mass_m * w1;
  const auto result = quadrature::integrate(integrand, 0.0, t, scaled, std::move(cuts));
  return result.value / (osc.mass_m * w1);
}

}  // namespace rodpulse::point_mass
