#include <catch_amalgamated.hpp>

#include "rodpulse/errors.hpp"
#include "rodpulse/model.hpp"
#include "support.hpp"

using namespace rodpulse;
using testing::Draw;

namespace {

RodParams rod_with(double e, double s, double rho, double l = 1.0, double m = 0.05) {
  return RodParams{e, s, rho, l, m};
}

}  // namespace

TEST_CASE("wave speed examples") {
  CHECK(wave_speed(rod_with(1, 1, 1)) == 1.0);
  CHECK(wave_speed(rod_with(4, 1, 1)) == 2.0);
  // Steel-like rod; 5172.19... by hand.
  const double c = wave_speed(rod_with(2.1e11, 1, 7.85e3));
  CHECK(std::abs(c - 5172.2) < 0.05);
  CHECK(testing::rel_err(c * c, 2.1e11 / 7.85e3) < 1e-14);
}

TEST_CASE("stiffness coefficients per convention") {
  CHECK(stiffness_coefficients(rod_with(1, 1, 1), BoundaryKind::Paper) == std::pair{-1.0, -1.0});
  CHECK(stiffness_coefficients(rod_with(1, 1, 1), BoundaryKind::Physical) == std::pair{1.0, -1.0});
  CHECK(stiffness_coefficients(rod_with(2, 3, 1), BoundaryKind::Paper) == std::pair{-6.0, -6.0});
  CHECK(stiffness_coefficients(rod_with(2, 3, 1), BoundaryKind::Physical) == std::pair{6.0, -6.0});
}

TEST_CASE("derived constants hold for random rods") {
  Draw draw;
  for (int i = 0; i < 500; ++i) {
    const RodParams rod = rod_with(draw.log_uniform(1e-3, 1e12), draw.log_uniform(1e-6, 10),
                                   draw.log_uniform(1e-2, 2e4), draw.log_uniform(1e-3, 1e3),
                                   draw.log_uniform(1e-6, 1e3));
    const double c = wave_speed(rod);
    CHECK(testing::rel_err(c * c * rod.density_rho, rod.modulus_e) < 1e-14);
    const double es = rod.modulus_e * rod.cross_section_s;
    for (auto kind : {BoundaryKind::Paper, BoundaryKind::Physical}) {
      const auto [al, ar] = stiffness_coefficients(rod, kind);
      CHECK(std::abs(al) == es);
      CHECK(std::abs(ar) == es);
    }
    CHECK(rod_mass(rod) == rod.density_rho * rod.cross_section_s * rod.length_l);
  }
}

TEST_CASE("scenario construction is deterministic") {
  Draw draw;
  for (int i = 0; i < 50; ++i) {
    const RodParams rod = rod_with(draw.log_uniform(0.1, 10), draw.log_uniform(0.1, 10),
                                   draw.log_uniform(0.1, 10));
    const ImpulseParams imp{draw.uniform(-5, 5), draw.uniform(0.5, 3)};
    const auto a = make_scenario(rod, imp, BoundaryKind::Paper);
    const auto b = make_scenario(rod, imp, BoundaryKind::Paper);
    CHECK(a.wave_speed() == b.wave_speed());
    CHECK(a.boundary.a_left == b.boundary.a_left);
    CHECK(a.boundary.a_right == b.boundary.a_right);
    CHECK(a.momentum() == b.momentum());
  }
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(validate(rod_with(0, 1, 1)), ParameterError);
  CHECK_THROWS_AS(validate(rod_with(1, -1, 1)), ParameterError);
  CHECK_THROWS_AS(validate(rod_with(1, 1, 0)), ParameterError);
  CHECK_THROWS_AS(validate(rod_with(1, 1, 1, -2)), ParameterError);
  CHECK_THROWS_AS(validate(rod_with(1, 1, 1, 1, 0)), ParameterError);
  CHECK_THROWS_AS(validate(ImpulseParams{1.0, 0.0}), ParameterError);
  CHECK_NOTHROW(validate(ImpulseParams{1.0, -1.0}));
}

TEST_CASE("heavy end masses warn but are accepted") {
  CHECK_FALSE(regime_warning(rod_with(1, 1, 1)).has_value());
  const RodParams heavy = rod_with(1, 1, 1, 1, 0.5);
  CHECK(regime_warning(heavy).has_value());
  CHECK_NOTHROW(make_scenario(heavy, ImpulseParams{}, BoundaryKind::Physical));
}

TEST_CASE("momentum and canonical scenario") {
  CHECK(ImpulseParams{3.0, 2.0}.injected_momentum() == 1.5);
  const auto s = canonical_scenario();
  CHECK(s.boundary.kind == BoundaryKind::Physical);
  CHECK(s.rod.end_mass_m == 0.05);
  CHECK(s.rod_mass() == 1.0);
  CHECK(s.transit_time() == 1.0);
  const auto p = with_boundary(s, BoundaryKind::Paper);
  CHECK(p.boundary.a_left == -1.0);
  CHECK(p.boundary.a_right == -1.0);
  CHECK(p.rod.end_mass_m == s.rod.end_mass_m);
}
