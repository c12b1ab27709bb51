#include "rodpulse/transform_domain.hpp"

#include <Eigen/Dense>
#include <limits>

namespace rodpulse::transform {

namespace {

constexpr double kPi = std::numbers::pi;

void require_paper_mode(const Scenario& scenario, const char* what) {
  if (scenario.boundary.kind != BoundaryKind::Paper) {
    throw ParameterError(std::string(what) + " is defined for the paper boundary convention only");
  }
}

void check_position(const Scenario& scenario, double x) {
  const double length = scenario.rod.length_l;
  const double slack = 1e-12 * length;
  if (!(x >= -slack && x <= length + slack)) {
    std::ostringstream msg;
    msg << "position x = " << x << " lies outside [0, " << length << "]";
    throw ParameterError(msg.str());
  }
}

void check_not_origin(const Scenario& scenario, Complex p) {
  if (std::abs(p) * scenario.transit_time() <= kPoleGuard) {
    throw PoleProximityError("p = 0 is a pole of the Laplace image");
  }
}

[[noreturn]] void pole_hit(Complex p, double ratio) {
  std::ostringstream msg;
  msg << "p = " << p << " is within pole-proximity guard (relative determinant " << ratio << ")";
  throw PoleProximityError(msg.str());
}

// Hyperbolic data at k = p/c, written in terms of kappa = sign * k with
// Re kappa >= 0 so that every exponential below has modulus <= 1.
struct ScaledHyperbolics {
  Complex k;
  Complex kappa;
  double sign;
  Complex cosh_kl;  // cosh(k L) exp(-kappa L)
  Complex sinh_kl;  // sinh(k L) exp(-kappa L)
};

ScaledHyperbolics scaled_hyperbolics(const Scenario& scenario, Complex p) {
  ScaledHyperbolics h;
  h.k = p / scenario.wave_speed();
  h.sign = h.k.real() >= 0.0 ? 1.0 : -1.0;
  h.kappa = h.sign * h.k;
  const Complex e2 = std::exp(-2.0 * h.kappa * scenario.rod.length_l);
  h.cosh_kl = 0.5 * (1.0 + e2);
  h.sinh_kl = h.sign * 0.5 * (1.0 - e2);
  return h;
}

// Numerators and determinant of the boundary system, all scaled by the same
// factor exp(-kappa L).
struct ScaledSystem {
  Complex n1, n2, det;
  double det_scale;
};

ScaledSystem scaled_system(const Scenario& scenario, const ScaledHyperbolics& h, Complex p) {
  const double m = scenario.rod.end_mass_m;
  const double al = scenario.boundary.a_left;
  const double ar = scenario.boundary.a_right;
  const Complex mp2 = m * p * p;
  ScaledSystem s;
  s.n1 = mp2 * h.sinh_kl - ar * h.k * h.cosh_kl;
  s.n2 = -(mp2 * h.cosh_kl - ar * h.k * h.sinh_kl);
  const Complex left = mp2 * s.n1;
  const Complex right = al * h.k * s.n2;
  s.det = left - right;
  s.det_scale = std::abs(left) + std::abs(right);
  return s;
}

void guard(const ScaledSystem& s, Complex p) {
  if (!(s.det_scale > 0.0) || std::abs(s.det) <= kPoleGuard * s.det_scale) {
    pole_hit(p, s.det_scale > 0.0 ? std::abs(s.det) / s.det_scale : 0.0);
  }
}

}  // namespace

Coefficients eval_coefficients(const Scenario& scenario, Complex p) {
  check_not_origin(scenario, p);
  const auto h = scaled_hyperbolics(scenario, p);
  const auto s = scaled_system(scenario, h, p);
  guard(s, p);
  const double q = scenario.momentum();
  return {q * s.n1 / s.det, q * s.n2 / s.det};
}

Coefficients printed_coefficients(const Scenario& scenario, Complex p) {
  require_paper_mode(scenario, "printed_coefficients");
  check_not_origin(scenario, p);
  const double a = scenario.boundary.a_left;
  const double m = scenario.rod.end_mass_m;
  const double c = scenario.wave_speed();
  const double q = scenario.momentum();
  const Complex arg = p * scenario.rod.length_l / c;
  const Complex ch = std::cosh(arg);
  const Complex sh = std::sinh(arg);
  const Complex mass_term = m * m * p * p * c * c;
  const Complex denom = sh * (a * a - mass_term);
  const double scale = std::abs(ch) * (a * a + std::abs(mass_term));
  if (std::abs(denom) <= kPoleGuard * scale) pole_hit(p, std::abs(denom) / scale);
  const Complex c1 = (a * c * q * ch - q * m * p * c * c * sh) / (p * denom);
  const Complex c2 = -q * c / (a * p) +
                     (q * m * a * c * c * ch - q * p * m * m * c * c * c * sh) / (a * denom);
  return {c1, c2};
}

Complex eval_phi(const Scenario& scenario, double x, Complex p) {
  check_position(scenario, x);
  check_not_origin(scenario, p);
  const auto h = scaled_hyperbolics(scenario, p);
  const auto s = scaled_system(scenario, h, p);
  guard(s, p);
  const double m = scenario.rod.end_mass_m;
  const double ar = scenario.boundary.a_right;
  const double length = scenario.rod.length_l;
  const Complex mp2 = h.sign * m * p * p;
  // c1 cosh(kx) + c2 sinh(kx) = (c1 + s c2) e^{kappa x}/2 + (c1 - s c2) e^{-kappa x}/2
  // with the growing combination reduced analytically to exp(-kappa (2L - x)).
  const Complex near = (mp2 - ar * h.k) * std::exp(-h.kappa * x);
  const Complex far = (mp2 + ar * h.k) * std::exp(-h.kappa * (2.0 * length - x));
  return scenario.momentum() / (2.0 * s.det) * (near - far);
}

Complex eval_phi_printed(const Scenario& scenario, double x, Complex p) {
  require_paper_mode(scenario, "eval_phi_printed");
  check_position(scenario, x);
  check_not_origin(scenario, p);
  const double a = scenario.boundary.a_left;
  const double m = scenario.rod.end_mass_m;
  const double c = scenario.wave_speed();
  const double q = scenario.momentum();
  const double b = q;  // printed as an undefined "b"; the coefficient above reads P/alpha
  const Complex arg = p * scenario.rod.length_l / c;
  const Complex ch = std::cosh(arg);
  const Complex sh = std::sinh(arg);
  const Complex mass_term = m * m * p * p * c * c;
  const Complex denom = sh * (a * a - mass_term);
  const double scale = std::abs(ch) * (a * a + std::abs(mass_term));
  if (std::abs(denom) <= kPoleGuard * scale) pole_hit(p, std::abs(denom) / scale);
  const Complex first = (a * c * q * ch - q * m * p * c * c * sh) / (p * denom) * std::cosh(p * x / c);
  const Complex bracket = -q * c / (a * p) +
                          (a * q * m * c * c * ch - b * p * m * m * c * c * c * sh) / (a * denom);
  return first + bracket * std::sinh(p * x / c);
}

Complex solve_phi_bvp_oracle(const Scenario& scenario, double x, Complex p) {
  check_position(scenario, x);
  check_not_origin(scenario, p);
  const double m = scenario.rod.end_mass_m;
  const double al = scenario.boundary.a_left;
  const double ar = scenario.boundary.a_right;
  const double length = scenario.rod.length_l;
  Complex kappa = p / scenario.wave_speed();
  if (kappa.real() < 0.0) kappa = -kappa;
  const Complex decay = std::exp(-kappa * length);
  const Complex mp2 = m * p * p;

  // Unknowns: weights of exp(-kappa x) and exp(-kappa (L - x)).
  Eigen::Matrix2cd system;
  system << mp2 + al * kappa, (mp2 - al * kappa) * decay,
            (mp2 + ar * kappa) * decay, mp2 - ar * kappa;
  const Eigen::Vector2cd rhs(scenario.momentum(), 0.0);
  const Complex det = system.determinant();
  const double scale = std::abs(system(0, 0) * system(1, 1)) + std::abs(system(0, 1) * system(1, 0));
  if (!(scale > 0.0) || std::abs(det) <= kPoleGuard * scale) {
    pole_hit(p, scale > 0.0 ? std::abs(det) / scale : 0.0);
  }
  const Eigen::Vector2cd w = system.fullPivLu().solve(rhs);
  return w(0) * std::exp(-kappa * x) + w(1) * std::exp(-kappa * (length - x));
}

std::vector<Pole> enumerate_poles(const Scenario& scenario, int max_modal_n) {
  require_paper_mode(scenario, "enumerate_poles");
  if (max_modal_n < 0) throw ParameterError("max_modal_n must be >= 0");
  const double a = scenario.boundary.a_left;
  const double c = scenario.wave_speed();
  const double real_pole = a / (scenario.rod.end_mass_m * c);
  const double modal_step = kPi * c / scenario.rod.length_l;

  std::vector<Pole> poles;
  poles.reserve(3 + 2 * static_cast<std::size_t>(max_modal_n));
  poles.push_back({Complex{0.0, 0.0}, 2, PoleFamily::Origin, 0});
  poles.push_back({Complex{real_pole, 0.0}, 1, PoleFamily::RealPair, 0});
  poles.push_back({Complex{-real_pole, 0.0}, 1, PoleFamily::RealPair, 0});
  for (int n = 1; n <= max_modal_n; ++n) {
    poles.push_back({Complex{0.0, n * modal_step}, 1, PoleFamily::Modal, n});
    poles.push_back({Complex{0.0, -n * modal_step}, 1, PoleFamily::Modal, n});
  }
  // The real pair sits on the real axis and the modal family on the
  // imaginary axis, so a collision needs a = 0; checked for completeness.
  const double tol = 1e-12 * modal_step;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < poles.size(); ++j) {
      if (std::abs(poles[i].location - poles[j].location) <= tol) {
        std::ostringstream msg;
        msg << "coincident poles at " << poles[i].location
            << ": the simple-pole residue series does not apply";
        throw DegeneracyError(msg.str());
      }
    }
  }
  return poles;
}

double nearest_pole_distance(const Scenario& scenario, const Pole& pole) {
  require_paper_mode(scenario, "nearest_pole_distance");
  const double c = scenario.wave_speed();
  const double real_pole = std::abs(scenario.boundary.a_left / (scenario.rod.end_mass_m * c));
  const double modal_step = kPi * c / scenario.rod.length_l;
  const Complex z = pole.location;
  const double same = 1e-12 * modal_step;
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](Complex other) {
    const double d = std::abs(other - z);
    if (d > same) best = std::min(best, d);
  };
  consider({0.0, 0.0});
  consider({real_pole, 0.0});
  consider({-real_pole, 0.0});
  const long centre = std::lround(std::abs(z.imag()) / modal_step);
  for (long n = std::max(1L, centre - 2); n <= centre + 2; ++n) {
    consider({0.0, n * modal_step});
    consider({0.0, -n * modal_step});
  }
  return best;
}

double default_contour_radius(const Scenario& scenario, const Pole& pole) {
  return 0.25 * nearest_pole_distance(scenario, pole);
}

Complex numeric_residue(const Scenario& scenario, double x, double t, const Pole& pole,
                        double radius, const ContourSettings& settings) {
  check_position(scenario, x);
  if (!(radius > 0.0)) throw ParameterError("contour radius must be positive");
  const double clearance = nearest_pole_distance(scenario, pole);
  if (radius >= clearance) {
    std::ostringstream msg;
    msg << "contour of radius " << radius << " around " << pole.location
        << " reaches another pole (nearest at distance " << clearance << ")";
    throw GeometryError(msg.str());
  }
  auto integrand = [&](Complex p) { return std::exp(p * t) * eval_phi(scenario, x, p); };
  return contour_residue(integrand, pole.location, radius, settings);
}

}  // namespace rodpulse::transform
