#pragma once

#include <optional>
#include <string>
#include <utility>

namespace rodpulse {

/// Physical constants of the rod and its two end masses, SI units.
struct RodParams {
  double modulus_e = 1.0;        // Pa
  double cross_section_s = 1.0;  // m^2
  double density_rho = 1.0;      // kg/m^3
  double length_l = 1.0;         // m
  double end_mass_m = 0.05;      // kg, one body at each end
};

/// Impulsive force P*delta(alpha*t) applied to the left end mass.
struct ImpulseParams {
  double magnitude_p = 1.0;  // kg m s^-2
  double alpha = 1.0;        // s^-1

  /// Momentum delivered at t = 0+, i.e. the integral of P*delta(alpha*t).
  double injected_momentum() const { return magnitude_p / alpha; }
};

/// Sign convention for the end-mass equations m u_tt = a u_x.
///
/// Paper: the same coefficient a = -ES at both ends, exactly as printed.
/// Physical: +ES at x = 0 and -ES at x = L, the only equal-magnitude
/// assignment for which the total momentum of rod plus masses is constant.
enum class BoundaryKind { Paper, Physical };

struct BoundaryMode {
  BoundaryKind kind = BoundaryKind::Physical;
  double a_left = 0.0;   // N, multiplies u_x(0, t)
  double a_right = 0.0;  // N, multiplies u_x(L, t)
};

struct Scenario {
  RodParams rod;
  ImpulseParams impulse;
  BoundaryMode boundary;
  std::string label;

  double wave_speed() const;
  double axial_stiffness() const;  // E*S
  double rod_mass() const;         // rho*S*L
  double momentum() const { return impulse.injected_momentum(); }
  double transit_time() const { return rod.length_l / wave_speed(); }
};

/// Throws ParameterError naming the first violated invariant.
void validate(const RodParams& rod);
void validate(const ImpulseParams& impulse);

double wave_speed(const RodParams& rod);
double rod_mass(const RodParams& rod);

/// (a_left, a_right) for the requested convention.
std::pair<double, double> stiffness_coefficients(const RodParams& rod, BoundaryKind kind);

BoundaryMode make_boundary(const RodParams& rod, BoundaryKind kind);

/// Non-empty when the end masses are not small compared with the rod
/// (end_mass_m > 0.1 * rod mass). Advisory only.
std::optional<std::string> regime_warning(const RodParams& rod);

/// Validates every component and derives the boundary coefficients.
Scenario make_scenario(const RodParams& rod, const ImpulseParams& impulse, BoundaryKind kind,
                       std::string label = {});

/// E = S = rho = L = 1, m = 0.05, P = alpha = 1.
Scenario canonical_scenario(BoundaryKind kind = BoundaryKind::Physical);

/// Same physical data under the other sign convention.
Scenario with_boundary(const Scenario& scenario, BoundaryKind kind);

const char* to_string(BoundaryKind kind);

}  // namespace rodpulse
