#include "rodpulse/model.hpp"

#include <cmath>
#include <sstream>

#include "rodpulse/errors.hpp"

namespace rodpulse {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << name << " must be positive and finite (got " << value << ")";
    throw ParameterError(msg.str());
  }
}

}  // namespace

void validate(const RodParams& rod) {
  require_positive(rod.modulus_e, "modulus_e");
  require_positive(rod.cross_section_s, "cross_section_s");
  require_positive(rod.density_rho, "density_rho");
  require_positive(rod.length_l, "length_l");
  require_positive(rod.end_mass_m, "end_mass_m");
}

void validate(const ImpulseParams& impulse) {
  if (!std::isfinite(impulse.magnitude_p)) {
    throw ParameterError("magnitude_p must be finite");
  }
  if (impulse.alpha == 0.0 || !std::isfinite(impulse.alpha)) {
    throw ParameterError("alpha must be nonzero and finite");
  }
}

double wave_speed(const RodParams& rod) { return std::sqrt(rod.modulus_e / rod.density_rho); }

double rod_mass(const RodParams& rod) {
  return rod.density_rho * rod.cross_section_s * rod.length_l;
}

std::pair<double, double> stiffness_coefficients(const RodParams& rod, BoundaryKind kind) {
  const double es = rod.modulus_e * rod.cross_section_s;
  switch (kind) {
    case BoundaryKind::Paper:
      return {-es, -es};
    case BoundaryKind::Physical:
      return {es, -es};
  }
  throw ParameterError("unknown boundary kind");
}

BoundaryMode make_boundary(const RodParams& rod, BoundaryKind kind) {
  const auto [left, right] = stiffness_coefficients(rod, kind);
  return BoundaryMode{kind, left, right};
}

std::optional<std::string> regime_warning(const RodParams& rod) {
  const double big_m = rod_mass(rod);
  if (rod.end_mass_m > 0.1 * big_m) {
    std::ostringstream msg;
    msg << "end_mass_m = " << rod.end_mass_m << " is not small compared with the rod mass "
        << big_m << "; results remain valid but leave the light-end regime";
    return msg.str();
  }
  return std::nullopt;
}

double Scenario::wave_speed() const { return rodpulse::wave_speed(rod); }

double Scenario::axial_stiffness() const { return rod.modulus_e * rod.cross_section_s; }

double Scenario::rod_mass() const { return rodpulse::rod_mass(rod); }

Scenario make_scenario(const RodParams& rod, const ImpulseParams& impulse, BoundaryKind kind,
                       std::string label) {
  validate(rod);
  validate(impulse);
  return Scenario{rod, impulse, make_boundary(rod, kind), std::move(label)};
}

Scenario canonical_scenario(BoundaryKind kind) {
  return make_scenario(RodParams{}, ImpulseParams{}, kind, "canonical");
}

Scenario with_boundary(const Scenario& scenario, BoundaryKind kind) {
  Scenario out = scenario;
  out.boundary = make_boundary(scenario.rod, kind);
  return out;
}

const char* to_string(BoundaryKind kind) {
  return kind == BoundaryKind::Paper ? "paper" : "physical";
}

}  // namespace rodpulse
