#include <catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <numbers>

#include "rodpulse/errors.hpp"
#include "rodpulse/transform_domain.hpp"
#include "support.hpp"

using namespace rodpulse;
using namespace rodpulse::transform;
using testing::Draw;
using testing::rel_err;

namespace {

constexpr double kPi = std::numbers::pi;

// c1, c2 from the boundary conditions written directly in the cosh/sinh basis.
Coefficients basis_coefficients(const Scenario& s, Complex p) {
  const double c = s.wave_speed(), m = s.rod.end_mass_m, len = s.rod.length_l;
  const Complex k = p / c, mp2 = m * p * p;
  const Complex ch = std::cosh(k * len), sh = std::sinh(k * len);
  Eigen::Matrix2cd a;
  a << mp2, -s.boundary.a_left * k,
       mp2 * ch - s.boundary.a_right * k * sh, mp2 * sh - s.boundary.a_right * k * ch;
  const Eigen::Vector2cd rhs(s.momentum(), 0.0);
  const Eigen::Vector2cd sol = a.partialPivLu().solve(rhs);
  return {sol(0), sol(1)};
}

Complex basis_phi(const Scenario& s, double x, Complex p) {
  const auto [c1, c2] = basis_coefficients(s, p);
  const Complex k = p / s.wave_speed();
  return c1 * std::cosh(k * x) + c2 * std::sinh(k * x);
}

// Equal end coefficients a: phi = Q [m p^2 sinh(k(L-x)) - a k cosh(k(L-x))] / D,
// D = p^2 (m^2 p^2 - a^2/c^2) sinh(k L).
Complex symmetric_numerator(const Scenario& s, double x, Complex p) {
  const double c = s.wave_speed(), m = s.rod.end_mass_m, len = s.rod.length_l, a = s.boundary.a_left;
  const Complex k = p / c;
  return s.momentum() * (m * p * p * std::sinh(k * (len - x)) - a * k * std::cosh(k * (len - x)));
}

Complex symmetric_phi(const Scenario& s, double x, Complex p) {
  const double c = s.wave_speed(), m = s.rod.end_mass_m, len = s.rod.length_l, a = s.boundary.a_left;
  return symmetric_numerator(s, x, p) / (p * p * (m * m * p * p - a * a / (c * c)) * std::sinh(p * len / c));
}

// Simple-pole residue of exp(p t) phi at p0 = i n pi c / L.
Complex modal_residue(const Scenario& s, double x, double t, int n) {
  const double c = s.wave_speed(), m = s.rod.end_mass_m, len = s.rod.length_l, a = s.boundary.a_left;
  const Complex p0{0.0, n * kPi * c / len};
  const Complex dsinh = (len / c) * std::cosh(p0 * len / c);
  return std::exp(p0 * t) * symmetric_numerator(s, x, p0) / (p0 * p0 * (m * m * p0 * p0 - a * a / (c * c)) * dsinh);
}

Scenario scaled_momentum(Scenario s, double factor) {
  s.impulse.magnitude_p *= factor;
  return s;
}

const Scenario kPaper = canonical_scenario(BoundaryKind::Paper);
const Scenario kPhysical = canonical_scenario(BoundaryKind::Physical);

}  // namespace

TEST_CASE("coefficients match a direct boundary solve") {
  for (const auto& s : {kPaper, kPhysical}) {
    const auto got = eval_coefficients(s, {1.0, 0.0});
    const auto want = basis_coefficients(s, {1.0, 0.0});
    CHECK(rel_err(got.c1, want.c1) <= 1e-10);
    CHECK(rel_err(got.c2, want.c2) <= 1e-10);
  }
}

TEST_CASE("coefficients are conjugate-symmetric and linear in the impulse") {
  Draw draw;
  for (int i = 0; i < 50; ++i) {
    const Complex p{draw.uniform(0.1, 8), draw.uniform(-30, 30)};
    const auto a = eval_coefficients(kPaper, p);
    const auto b = eval_coefficients(kPaper, std::conj(p));
    CHECK(rel_err(b.c1, std::conj(a.c1)) < 1e-13);
    CHECK(rel_err(b.c2, std::conj(a.c2)) < 1e-13);
    const auto doubled = eval_coefficients(scaled_momentum(kPaper, 2.0), p);
    CHECK(doubled.c1 == 2.0 * a.c1);
    CHECK(doubled.c2 == 2.0 * a.c2);
  }
}

TEST_CASE("printed coefficients agree with the closed form") {
  Draw draw;
  for (int i = 0; i < 50; ++i) {
    const Complex p{draw.uniform(0.1, 5), draw.uniform(-20, 20)};
    const auto a = eval_coefficients(kPaper, p);
    const auto b = printed_coefficients(kPaper, p);
    CHECK(rel_err(b.c1, a.c1) < 1e-10);
    CHECK(rel_err(b.c2, a.c2) < 1e-10);
  }
  CHECK_THROWS_AS(printed_coefficients(kPhysical, {1.0, 0.0}), ParameterError);
}

TEST_CASE("phi at the left end equals c1") {
  for (const Complex p : {Complex{1, 0}, Complex{2, 3}, Complex{0.3, -7}}) {
    CHECK(rel_err(eval_phi(kPaper, 0.0, p), eval_coefficients(kPaper, p).c1) < 1e-13);
  }
}

TEST_CASE("phi matches independent solutions at the canonical point") {
  const Complex p{1.0, 0.0};
  CHECK(rel_err(eval_phi(kPaper, 0.5, p), basis_phi(kPaper, 0.5, p)) <= 1e-10);
  CHECK(rel_err(eval_phi(kPaper, 0.5, p), symmetric_phi(kPaper, 0.5, p)) <= 1e-10);
  CHECK(rel_err(eval_phi_printed(kPaper, 0.5, p), symmetric_phi(kPaper, 0.5, p)) <= 1e-10);
  CHECK(rel_err(eval_phi(kPhysical, 0.5, p), basis_phi(kPhysical, 0.5, p)) <= 1e-10);
}

TEST_CASE("phi satisfies the transformed wave equation") {
  const double x = 0.3;
  const Complex p{2, 3};
  const Complex k2 = p * p;  // c = 1
  auto second_difference = [&](double h) {
    return (eval_phi(kPaper, x + h, p) - 2.0 * eval_phi(kPaper, x, p) + eval_phi(kPaper, x - h, p)) / (h * h);
  };
  const Complex target = k2 * eval_phi(kPaper, x, p);
  CHECK(rel_err(second_difference(1e-4), target) < 1e-6);
  const double e1 = std::abs(second_difference(2e-2) - target);
  const double e2 = std::abs(second_difference(1e-2) - target);
  const double order = std::log2(e1 / e2);
  CHECK(order > 1.9);
  CHECK(order < 2.1);
}

TEST_CASE("phi agrees with the boundary-value oracle at random points") {
  Draw draw;
  for (const auto& s : {kPaper, kPhysical}) {
    for (int i = 0; i < 100; ++i) {
      const double x = draw.uniform(0, 1);
      const Complex p{draw.uniform(0.05, 40), draw.uniform(-60, 60)};
      CHECK(rel_err(eval_phi(s, x, p), solve_phi_bvp_oracle(s, x, p)) <= 1e-9);
    }
  }
}

TEST_CASE("oracle basics") {
  const Scenario silent = scaled_momentum(kPaper, 0.0);
  CHECK(solve_phi_bvp_oracle(silent, 0.4, {1.5, 2.0}) == Complex{0.0, 0.0});
  CHECK(eval_phi(silent, 0.4, {1.5, 2.0}) == Complex{0.0, 0.0});
  const Complex p{0.7, 4.1};
  CHECK(rel_err(solve_phi_bvp_oracle(kPaper, 0.2, std::conj(p)), std::conj(solve_phi_bvp_oracle(kPaper, 0.2, p))) <
        1e-13);
}

TEST_CASE("phi decays along the positive real axis") {
  auto decreasing = [](const Scenario& s, double x, std::array<double, 3> ps) {
    const double a = std::abs(eval_phi(s, x, {ps[0], 0}));
    const double b = std::abs(eval_phi(s, x, {ps[1], 0}));
    const double c = std::abs(eval_phi(s, x, {ps[2], 0}));
    return b < a && c < b;
  };
  for (double x : {0.0, 0.5, 1.0}) {
    CHECK(decreasing(kPhysical, x, {10, 20, 40}));
    // The paper-mode image has its real pole at 20; test beyond it.
    CHECK(decreasing(kPaper, x, {40, 80, 160}));
  }
}

TEST_CASE("phi scales exactly with the injected momentum") {
  Draw draw;
  for (int i = 0; i < 50; ++i) {
    const double x = draw.uniform(0, 1);
    const Complex p{draw.uniform(0.1, 10), draw.uniform(-10, 10)};
    CHECK(eval_phi(scaled_momentum(kPhysical, 4.0), x, p) == 4.0 * eval_phi(kPhysical, x, p));
  }
}

TEST_CASE("evaluation guards") {
  CHECK_THROWS_AS(eval_phi(kPaper, 1.5, {1, 0}), ParameterError);
  CHECK_THROWS_AS(eval_phi(kPaper, -0.1, {1, 0}), ParameterError);
  CHECK_THROWS_AS(eval_phi(kPaper, 0.5, {0.0, kPi}), PoleProximityError);
  CHECK_THROWS_AS(eval_phi(kPaper, 0.5, {20.0, 0.0}), PoleProximityError);
  CHECK_THROWS_AS(eval_coefficients(kPaper, {0.0, 0.0}), PoleProximityError);
}

TEST_CASE("pole catalogue") {
  const auto poles = enumerate_poles(kPaper, 3);
  REQUIRE(poles.size() == 9);
  CHECK(poles[0].location == Complex{0, 0});
  CHECK(poles[0].order == 2);
  CHECK(poles[0].family == PoleFamily::Origin);
  CHECK(std::abs(poles[1].location.real()) == 20.0);
  CHECK(poles[2].location == -poles[1].location);
  for (int n = 1; n <= 3; ++n) {
    const auto& up = poles[static_cast<std::size_t>(1 + 2 * n)];
    const auto& down = poles[static_cast<std::size_t>(2 + 2 * n)];
    CHECK(up.family == PoleFamily::Modal);
    CHECK(up.mode == n);
    CHECK(std::abs(up.location - Complex{0, n * kPi}) < 1e-14);
    CHECK(down.location == std::conj(up.location));
  }
  CHECK(enumerate_poles(kPaper, 0).size() == 3);

  Scenario longer = kPaper;
  longer.rod.length_l = 2.0;
  longer = with_boundary(longer, BoundaryKind::Paper);
  const auto halved = enumerate_poles(longer, 4);
  const auto base = enumerate_poles(kPaper, 4);
  for (std::size_t i = 3; i < base.size(); ++i) {
    CHECK(std::abs(halved[i].location.imag() - 0.5 * base[i].location.imag()) < 1e-14);
  }
  CHECK_THROWS_AS(enumerate_poles(kPhysical, 3), ParameterError);
  CHECK_THROWS_AS(enumerate_poles(kPaper, -1), ParameterError);
}

TEST_CASE("real pair and modal family stay apart when their magnitudes coincide") {
  // |a|/(m c) = pi c / L at m = |a| L / (pi c^2): same modulus, different axes.
  Scenario s = kPaper;
  s.rod.end_mass_m = 1.0 / kPi;
  s = with_boundary(s, BoundaryKind::Paper);
  const auto poles = enumerate_poles(s, 5);
  CHECK(std::abs(std::abs(poles[1].location) - std::abs(poles[3].location)) < 1e-12);
  CHECK(nearest_pole_distance(s, poles[1]) > 1.0);
}

TEST_CASE("contour residues") {
  // A removable singularity has no residue.
  const double x = 0.4, t = 0.9;
  const Complex removable = contour_residue(
      [&](Complex p) { return std::exp(p * t) * std::sinh(p * x) / p; }, {0, 0}, 0.5);
  CHECK(std::abs(removable) <= 1e-10);

  const auto poles = enumerate_poles(kPaper, 4);
  const auto& up = poles[3];
  const auto& down = poles[4];
  const Complex r_up = numeric_residue(kPaper, 0.5, 0.7, up, default_contour_radius(kPaper, up));
  const Complex r_down = numeric_residue(kPaper, 0.5, 0.7, down, default_contour_radius(kPaper, down));
  CHECK(rel_err(r_down, std::conj(r_up)) < 1e-9);
  CHECK(rel_err(r_up, modal_residue(kPaper, 0.5, 0.7, 1)) <= 1e-8);

  CHECK(default_contour_radius(kPaper, up) == 0.25 * nearest_pole_distance(kPaper, up));
  CHECK_THROWS_AS(numeric_residue(kPaper, 0.5, 0.7, up, 1.1 * nearest_pole_distance(kPaper, up)), GeometryError);
}

TEST_CASE("conjugate residue pairs sum to real values") {
  Draw draw;
  const auto poles = enumerate_poles(kPaper, 6);
  for (int i = 0; i < 10; ++i) {
    const double x = draw.uniform(0, 1), t = draw.uniform(0.05, 2);
    for (std::size_t j = 1; j + 1 < poles.size(); j += 2) {
      const Complex sum = numeric_residue(kPaper, x, t, poles[j], default_contour_radius(kPaper, poles[j])) +
                          numeric_residue(kPaper, x, t, poles[j + 1], default_contour_radius(kPaper, poles[j + 1]));
      CHECK(std::abs(sum.imag()) <= 1e-10 * std::max(1.0, std::abs(sum.real())));
    }
    const int n = 1 + static_cast<int>(draw.uniform(0, 6));
    const auto& pole = poles[static_cast<std::size_t>(1 + 2 * n)];
    CHECK(rel_err(numeric_residue(kPaper, x, t, pole, default_contour_radius(kPaper, pole)),
                  modal_residue(kPaper, x, t, n)) < 1e-8);
  }
}
