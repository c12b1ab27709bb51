#include <catch_amalgamated.hpp>

#include <numbers>

#include "rodpulse/errors.hpp"
#include "rodpulse/inverse_laplace.hpp"
#include "rodpulse/series_solution.hpp"
#include "rodpulse/transform_domain.hpp"
#include "support.hpp"

using namespace rodpulse;
using namespace rodpulse::series;
using testing::Draw;
using testing::rel_err;

namespace {

constexpr double kPi = std::numbers::pi;
const Scenario kPaper = canonical_scenario(BoundaryKind::Paper);

// Residues of exp(p t) A_j/B_j over one pole family of B_j.
Complex family_residue(const Scenario& s, int j, double x, double t, transform::PoleFamily family, int max_n) {
  const auto terms = paper_terms(s, x);
  Complex sum{0.0, 0.0};
  for (const auto& pole : term_poles(s, j, max_n)) {
    if (pole.family != family) continue;
    sum += transform::contour_residue(
        [&](Complex p) { return std::exp(p * t) * terms[static_cast<std::size_t>(j - 1)].ratio(p); },
        pole.location, transform::default_contour_radius(s, pole));
  }
  return sum;
}

double bromwich(const Scenario& s, double x, double t) {
  return inverse::invert([&](Complex p) { return transform::eval_phi(s, x, p); }, t, inverse::default_config(s));
}

Scenario scaled_momentum(Scenario s, double factor) {
  s.impulse.magnitude_p *= factor;
  return s;
}

}  // namespace

TEST_CASE("term structure") {
  const auto terms = paper_terms(kPaper, 0.4);
  const std::array<int, 5> signs = {1, -1, -1, 1, -1};
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(terms[j].index == static_cast<int>(j + 1));
    CHECK(terms[j].sign == signs[j]);
  }
  // The signed sum of the five fractions is the image itself.
  Draw draw;
  for (int i = 0; i < 20; ++i) {
    const double x = draw.uniform(0, 1);
    const Complex p{draw.uniform(0.5, 5), draw.uniform(-10, 10)};
    const auto ts = paper_terms(kPaper, x);
    Complex sum{0, 0};
    for (const auto& term : ts) sum += static_cast<double>(term.sign) * term.ratio(p);
    CHECK(rel_err(sum, transform::eval_phi(kPaper, x, p)) < 1e-9);
  }
  CHECK_THROWS_AS(paper_terms(canonical_scenario(BoundaryKind::Physical), 0.4), ParameterError);
}

TEST_CASE("every term vanishes at t = 0") {
  const SeriesConfig config;
  for (double x : {0.0, 0.25, 0.5, 1.0}) {
    CHECK(eval_paper_u1(kPaper, x, 0.0, config) == 0.0);
    const auto v = eval_paper_u2345(kPaper, x, 0.0);
    CHECK(v.u2 == 0.0);
    CHECK(v.u3 == 0.0);
    CHECK(v.u4 == 0.0);
    CHECK(v.u5 == 0.0);
    CHECK(eval_paper_series(kPaper, x, 0.0, config) == 0.0);
  }
}

TEST_CASE("u3 is identically zero") {
  Draw draw;
  for (int i = 0; i < 100; ++i) {
    CHECK(eval_paper_u2345(kPaper, draw.uniform(0, 1), draw.uniform(0, 10)).u3 == 0.0);
  }
}

TEST_CASE("u1 drift and modal parts equal their residues") {
  SeriesConfig no_hyperbolic;
  no_hyperbolic.include_hyperbolic = false;
  const double x = 0.3, t = 0.4;
  const Complex want = family_residue(kPaper, 1, x, t, transform::PoleFamily::Origin, 200) +
                       family_residue(kPaper, 1, x, t, transform::PoleFamily::Modal, 200);
  CHECK(rel_err(eval_paper_u1(kPaper, x, t, no_hyperbolic), want.real()) <= 1e-6);
}

TEST_CASE("u1 hyperbolic part carries cosh where the residue has coth") {
  // The whole printed u1 therefore misses its residue sum; the excess factor
  // is exactly cosh(aL/mc^2) tanh(aL/mc^2).
  SeriesConfig full, no_hyperbolic;
  no_hyperbolic.include_hyperbolic = false;
  const double ratio_arg = kPaper.boundary.a_left * kPaper.rod.length_l /
                           (kPaper.rod.end_mass_m * kPaper.wave_speed() * kPaper.wave_speed());
  const double factor = std::cosh(ratio_arg) * std::tanh(ratio_arg);
  for (const auto& [x, t] : {std::pair{0.3, 0.4}, std::pair{0.7, 0.25}, std::pair{0.1, 0.6}}) {
    const double printed = eval_paper_u1(kPaper, x, t, full) - eval_paper_u1(kPaper, x, t, no_hyperbolic);
    const double residue = family_residue(kPaper, 1, x, t, transform::PoleFamily::RealPair, 0).real();
    CHECK(rel_err(printed, factor * residue) < 1e-9);
    CHECK(rel_err(eval_paper_u1(kPaper, x, t, full), term_residue_sum(kPaper, 1, x, t, 200)) > 1.0);
  }
}

TEST_CASE("u2, u4 and u5 equal their real-pair residues") {
  const double x = 0.5, t = 0.2;
  const auto v = eval_paper_u2345(kPaper, x, t);
  const std::array<double, 3> printed = {v.u2, v.u4, v.u5};
  const std::array<int, 3> index = {2, 4, 5};
  for (std::size_t i = 0; i < 3; ++i) {
    const Complex r = family_residue(kPaper, index[i], x, t, transform::PoleFamily::RealPair, 0);
    CHECK(rel_err(printed[i], r.real()) <= 1e-7);
  }
  // u4's denominator also vanishes on the modal family; the printed form drops those residues.
  const Complex modal = family_residue(kPaper, 4, x, t, transform::PoleFamily::Modal, 200);
  CHECK(std::abs(modal.real()) > 1e-4);
}

TEST_CASE("modal tail obeys the coefficient envelope") {
  SeriesConfig n200, n400;
  n200.modal_terms_n = 200;
  n400.modal_terms_n = 400;
  const double a = 1.0, m = 0.05, c = 1.0, q = 1.0, len = 1.0;
  double envelope = 0.0;
  for (int n = 201; n <= 400; ++n) {
    const double pn = kPi * n;
    envelope += 2 * a * q * c * len * len / (pn * (a * a * len * len + m * m * pn * pn * c * c * c * c));
  }
  CHECK(rel_err(u1_tail_bound(kPaper, 201, 400), envelope) < 1e-12);
  Draw draw;
  for (int i = 0; i < 20; ++i) {
    const double x = draw.uniform(0, 1), t = draw.uniform(0, 2);
    const double d = std::abs(eval_paper_u1(kPaper, x, t, n400) - eval_paper_u1(kPaper, x, t, n200));
    CHECK(d <= envelope * (1 + 1e-9) + 1e-12 * std::abs(eval_paper_u1(kPaper, x, t, n200)));
  }
}

TEST_CASE("printed series is linear in the impulse") {
  const SeriesConfig config;
  const auto doubled = scaled_momentum(kPaper, 2.0);
  for (const auto& [x, t] : {std::pair{0.5, 0.8}, std::pair{0.2, 0.3}}) {
    CHECK(eval_paper_series(doubled, x, t, config) == 2.0 * eval_paper_series(kPaper, x, t, config));
  }
}

TEST_CASE("without modal terms only drift and hyperbolic parts remain") {
  SeriesConfig none;
  none.modal_terms_n = 0;
  SeriesConfig drift_only = none;
  drift_only.include_hyperbolic = false;
  for (const auto& [x, t] : {std::pair{0.5, 0.8}, std::pair{0.2, 0.3}}) {
    // Drift (P/alpha) c^2 t / (L a).
    CHECK(rel_err(eval_paper_series(kPaper, x, t, drift_only), -t) < 1e-14);
    const auto v = eval_paper_u2345(kPaper, x, t);
    const double u1 = eval_paper_u1(kPaper, x, t, none);
    CHECK(eval_paper_series(kPaper, x, t, none) == u1 - v.u2 - v.u3 + v.u4 - v.u5);
  }
}

TEST_CASE("hyperbolic overflow is refused with its horizon") {
  const SeriesConfig config;
  // a t / (m c) = 700 at t = 35.
  try {
    eval_paper_series(kPaper, 0.5, 36.0, config);
    FAIL("expected OverflowError");
  } catch (const OverflowError& e) {
    CHECK(std::abs(e.horizon() - 35.0) < 1e-9);
  }
  CHECK_NOTHROW(eval_paper_u2345(kPaper, 0.5, 34.0));
  SeriesConfig bad;
  bad.modal_terms_n = -1;
  CHECK_THROWS_AS(validate(bad), ParameterError);
}

TEST_CASE("residue series vanishes at t = 0") {
  for (double x : {0.0, 0.3, 1.0}) CHECK(std::abs(eval_residue_series(kPaper, x, 0.0, 50)) <= 1e-9);
}

TEST_CASE("residue series converges to the inverted value") {
  const double x = 0.5, t = 0.8;
  const double want = bromwich(kPaper, x, t);
  std::vector<double> errors;
  for (int n : {25, 50, 100, 200}) errors.push_back(std::abs(eval_residue_series(kPaper, x, t, n) - want));
  for (std::size_t i = 1; i < errors.size(); ++i) CHECK(errors[i] < errors[i - 1]);
  CHECK(errors.back() / std::abs(want) <= 1e-3);
}

TEST_CASE("residue series folding and scaling") {
  Draw draw;
  for (int i = 0; i < 10; ++i) {
    const double x = draw.uniform(0, 1), t = draw.uniform(0.05, 2.5);
    const double full = eval_residue_series(kPaper, x, t, 40);
    CHECK(std::abs(eval_residue_series_folded(kPaper, x, t, 40) - full) <= 1e-10 * std::max(1.0, std::abs(full)));
    CHECK(rel_err(eval_residue_series(scaled_momentum(kPaper, 3.0), x, t, 40), 3.0 * full) < 1e-12);
  }
}

TEST_CASE("residue series agrees with inversion away from wavefronts") {
  Draw draw;
  int checked = 0;
  while (checked < 6) {
    const double x = draw.uniform(0, 1), t = draw.uniform(0.1, 3);
    if (near_wavefront(x, t, 1.0, 1.0, 0.05) || t < x) continue;
    const double want = bromwich(kPaper, x, t);
    CHECK(rel_err(eval_residue_series(kPaper, x, t, 200), want) <= 1e-3);
    ++checked;
  }
}

TEST_CASE("series field layout") {
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(5, 0, 1);
  const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(4, 0, 0.6);
  SeriesConfig config;
  config.modal_terms_n = 10;
  const auto f = paper_series_field(kPaper, x, t, config);
  REQUIRE(f.u.rows() == 4);
  REQUIRE(f.u.cols() == 5);
  for (Eigen::Index j = 0; j < 4; ++j) {
    for (Eigen::Index i = 0; i < 5; ++i) CHECK(f.u(j, i) == eval_paper_series(kPaper, x[i], t[j], config));
  }
}
