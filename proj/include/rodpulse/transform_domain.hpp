#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "rodpulse/errors.hpp"
#include "rodpulse/model.hpp"

namespace rodpulse::transform {

using Complex = std::complex<double>;

/// phi(x, p) = c1 cosh(p x / c) + c2 sinh(p x / c).
struct Coefficients {
  Complex c1;
  Complex c2;
};

/// Relative size of the determinant below which p counts as a pole.
inline constexpr double kPoleGuard = 1e-12;

/// Closed-form c1, c2 for the scenario's (a_left, a_right). With the paper
/// convention this is algebraically the printed pair; it is evaluated with
/// exp(-|Re k| L)-scaled hyperbolics so it never overflows.
Coefficients eval_coefficients(const Scenario& scenario, Complex p);

/// The printed coefficient formulas, evaluated literally. Paper mode only;
/// plain cosh/sinh, so keep |Re p| L / c moderate.
Coefficients printed_coefficients(const Scenario& scenario, Complex p);

/// Laplace image of u(x, t). Regroups c1 cosh + c2 sinh into decaying
/// exponentials, which keeps it accurate for any Re p.
Complex eval_phi(const Scenario& scenario, double x, Complex p);

/// The expanded printed image, with the stray coefficient b read as P/alpha.
/// Paper mode only; moderate p only.
Complex eval_phi_printed(const Scenario& scenario, double x, Complex p);

/// Independent route: solves phi'' = (p/c)^2 phi with
///   m p^2 phi(0) = a_left phi'(0) + P/alpha,  m p^2 phi(L) = a_right phi'(L)
/// as a 2x2 linear system in the basis exp(-k x), exp(-k (L - x)).
Complex solve_phi_bvp_oracle(const Scenario& scenario, double x, Complex p);

enum class PoleFamily { Origin, RealPair, Modal };

struct Pole {
  Complex location;
  int order = 1;
  PoleFamily family = PoleFamily::Modal;
  int mode = 0;  // n for Modal, 0 otherwise
};

/// Pole catalogue of the paper-mode image: the double pole at 0, the real
/// pair +-a/(m c) and modal pairs +-i pi n c / L for n = 1..max_modal_n.
/// Throws ParameterError for physical mode, whose poles are not these.
std::vector<Pole> enumerate_poles(const Scenario& scenario, int max_modal_n);

/// Distance from `pole` to the nearest other pole of the full (untruncated)
/// paper-mode catalogue.
double nearest_pole_distance(const Scenario& scenario, const Pole& pole);

/// 0.25 times nearest_pole_distance.
double default_contour_radius(const Scenario& scenario, const Pole& pole);

struct ContourSettings {
  int initial_nodes = 32;
  int max_nodes = 1 << 16;
  double rel_tolerance = 1e-9;
};

/// (1/2 pi i) times the integral of f around |p - centre| = radius, by the
/// trapezoidal rule with node doubling until the relative change is at most
/// settings.rel_tolerance.
template <typename F>
Complex contour_residue(F&& f, Complex centre, double radius, const ContourSettings& settings = {}) {
  if (!(radius > 0.0)) throw ParameterError("contour radius must be positive");
  const double two_pi = 2.0 * std::numbers::pi;
  auto sample = [&](int j, int n) {
    const Complex offset = std::polar(radius, two_pi * j / n);
    return f(centre + offset) * offset;
  };
  int n = std::max(4, settings.initial_nodes);
  Complex sum{0.0, 0.0};
  double largest = 0.0;
  for (int j = 0; j < n; ++j) {
    const Complex s = sample(j, n);
    largest = std::max(largest, std::abs(s));
    sum += s;
  }
  Complex previous = sum / static_cast<double>(n);
  while (n < settings.max_nodes) {
    const int doubled = 2 * n;
    for (int j = 1; j < doubled; j += 2) {
      const Complex s = sample(j, doubled);
      largest = std::max(largest, std::abs(s));
      sum += s;
    }
    n = doubled;
    const Complex current = sum / static_cast<double>(n);
    // Rounding in the samples bounds how far a vanishing residue can settle.
    const double floor = 100.0 * std::numeric_limits<double>::epsilon() * largest;
    if (std::abs(current - previous) <= std::max(settings.rel_tolerance * std::abs(current), floor)) {
      return current;
    }
    previous = current;
  }
  std::ostringstream msg;
  msg << "contour residue at " << centre << " (radius " << radius << ") did not converge with "
      << n << " nodes; last iterate " << previous;
  throw NumericalError(msg.str());
}

/// Residue of exp(p t) phi(x, p) at `pole`, as a contour integral.
/// Throws GeometryError when the circle would enclose another pole.
Complex numeric_residue(const Scenario& scenario, double x, double t, const Pole& pole,
                        double radius, const ContourSettings& settings = {});

}  // namespace rodpulse::transform
