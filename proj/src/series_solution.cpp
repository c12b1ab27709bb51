#include "rodpulse/series_solution.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "rodpulse/errors.hpp"

namespace rodpulse::series {

namespace {

constexpr double kPi = std::numbers::pi;

struct PaperConstants {
  double a, m, c, q, length;
};

PaperConstants constants(const Scenario& scenario) {
  if (scenario.boundary.kind != BoundaryKind::Paper) {
    throw ParameterError("the printed series is defined for the paper boundary convention only");
  }
  return {scenario.boundary.a_left, scenario.rod.end_mass_m, scenario.wave_speed(),
          scenario.momentum(), scenario.rod.length_l};
}

void check_point(const Scenario& scenario, double x, double t) {
  const double length = scenario.rod.length_l;
  if (!(x >= 0.0 && x <= length)) throw ParameterError("x must lie in [0, L]");
  if (!(t >= 0.0)) throw ParameterError("t must be non-negative");
}

void check_overflow(const PaperConstants& k, double t) {
  const double rate = std::abs(k.a / (k.m * k.c));
  const double horizon = kHyperbolicLimit / rate;
  if (rate * t > kHyperbolicLimit) {
    std::ostringstream msg;
    msg << "sinh(a t/(m c)) overflows for t > " << horizon << " s (requested t = " << t << ")";
    throw OverflowError(msg.str(), horizon);
  }
  if (std::abs(k.a * k.length / (k.m * k.c * k.c)) > kHyperbolicLimit) {
    throw OverflowError("cosh(a L/(m c^2)) overflows for this rod", horizon);
  }
}

}  // namespace

std::array<PaperTerm, 5> paper_terms(const Scenario& scenario, double x) {
  const auto k = constants(scenario);
  const double a = k.a, m = k.m, c = k.c, q = k.q, length = k.length;
  auto poly = [=](Complex p) { return a * a - m * m * p * p * c * c; };
  std::array<PaperTerm, 5> terms;
  terms[0] = {1, +1,
              [=](Complex p) { return a * c * q * std::cosh(p * length / c) * std::cosh(p * x / c); },
              [=](Complex p) { return p * std::sinh(p * length / c) * poly(p); }};
  terms[1] = {2, -1, [=](Complex p) { return q * m * c * c * std::cosh(p * x / c); },
              [=](Complex p) { return poly(p); }};
  terms[2] = {3, -1, [=](Complex p) { return q * c * std::sinh(p * x / c); },
              [=](Complex p) { return a * p; }};
  terms[3] = {4, +1,
              [=](Complex p) {
                return q * m * c * c * std::cosh(p * length / c) * std::sinh(p * x / c);
              },
              [=](Complex p) { return std::sinh(p * length / c) * poly(p); }};
  terms[4] = {5, -1, [=](Complex p) { return q * p * m * m * c * c * c * std::sinh(p * x / c); },
              [=](Complex p) { return a * poly(p); }};
  return terms;
}

std::vector<transform::Pole> term_poles(const Scenario& scenario, int index, int max_modal_n) {
  if (index < 1 || index > 5) throw ParameterError("term index must be 1..5");
  const auto all = transform::enumerate_poles(scenario, max_modal_n);
  std::vector<transform::Pole> poles;
  for (const auto& pole : all) {
    const bool origin = pole.family == transform::PoleFamily::Origin;
    const bool real = pole.family == transform::PoleFamily::RealPair;
    const bool modal = pole.family == transform::PoleFamily::Modal;
    bool keep = false;
    switch (index) {
      case 1: keep = true; break;
      case 2: case 5: keep = real; break;
      case 3: keep = origin; break;
      case 4: keep = real || modal; break;
    }
    if (keep) poles.push_back(pole);
  }
  return poles;
}

double term_residue_sum(const Scenario& scenario, int index, double x, double t, int max_modal_n) {
  check_point(scenario, x, t);
  const auto terms = paper_terms(scenario, x);
  const auto& term = terms[static_cast<std::size_t>(index - 1)];
  Complex sum{0.0, 0.0};
  for (const auto& pole : term_poles(scenario, index, max_modal_n)) {
    const double radius = transform::default_contour_radius(scenario, pole);
    sum += transform::contour_residue([&](Complex p) { return std::exp(p * t) * term.ratio(p); },
                                      pole.location, radius);
  }
  return sum.real();
}

void validate(const SeriesConfig& config) {
  if (config.modal_terms_n < 0) throw ParameterError("modal_terms_n must be >= 0");
}

double eval_paper_u1(const Scenario& scenario, double x, double t, const SeriesConfig& config) {
  validate(config);
  check_point(scenario, x, t);
  const auto k = constants(scenario);
  check_overflow(k, t);
  const double a = k.a, m = k.m, c = k.c, q = k.q, length = k.length;

  double u = q * c * c / (length * a) * t;
  if (config.include_hyperbolic) {
    u -= q * c / a * std::cosh(a * length / (m * c * c)) * std::cosh(a * x / (m * c * c)) *
         std::sinh(a * t / (m * c));
  }
  for (int n = 1; n <= config.modal_terms_n; ++n) {
    const double pn = kPi * n;
    const double weight =
        2.0 * a * q * c / pn * length * length / (a * a * length * length + m * m * pn * pn * c * c * c * c);
    u += weight * std::cos(pn * x / length) * std::sin(pn * c * t / length);
  }
  return u;
}

TermValues eval_paper_u2345(const Scenario& scenario, double x, double t) {
  check_point(scenario, x, t);
  const auto k = constants(scenario);
  check_overflow(k, t);
  const double a = k.a, m = k.m, c = k.c, q = k.q, length = k.length;
  const double lead = -q * c / a;
  const double growth = std::sinh(a * t / (m * c));
  const double shape = a / (m * c * c);
  TermValues v;
  v.u2 = lead * growth * std::cosh(shape * x);
  v.u3 = 0.0;
  v.u4 = lead / std::tanh(shape * length) * std::sinh(shape * x) * growth;
  v.u5 = lead * std::sinh(shape * x) * growth;
  return v;
}

double eval_paper_series(const Scenario& scenario, double x, double t, const SeriesConfig& config) {
  const double u1 = eval_paper_u1(scenario, x, t, config);
  if (!config.include_hyperbolic) return u1;
  const auto v = eval_paper_u2345(scenario, x, t);
  return u1 - v.u2 - v.u3 + v.u4 - v.u5;
}

double u1_tail_bound(const Scenario& scenario, int n_from, int n_to) {
  const auto k = constants(scenario);
  const double a = std::abs(k.a), m = k.m, c = k.c, q = std::abs(k.q), length = k.length;
  double bound = 0.0;
  for (int n = std::max(1, n_from); n <= n_to; ++n) {
    const double pn = kPi * n;
    bound += 2.0 * a * q * c * length * length /
             (pn * (a * a * length * length + m * m * pn * pn * c * c * c * c));
  }
  return bound;
}

namespace {

double residue_sum(const Scenario& scenario, double x, double t, int max_modal_n, bool folded) {
  check_point(scenario, x, t);
  Complex sum{0.0, 0.0};
  double magnitude = 0.0;
  for (const auto& pole : transform::enumerate_poles(scenario, max_modal_n)) {
    if (folded && pole.family == transform::PoleFamily::Modal && pole.location.imag() < 0.0) continue;
    const double radius = transform::default_contour_radius(scenario, pole);
    Complex r = transform::numeric_residue(scenario, x, t, pole, radius);
    if (folded && pole.family == transform::PoleFamily::Modal) r = 2.0 * r.real();
    sum += r;
    magnitude += std::abs(r);
  }
  if (!folded && std::abs(sum.imag()) > 1e-9 * std::max(magnitude, 1e-300)) {
    std::ostringstream msg;
    msg << "residue sum at (x, t) = (" << x << ", " << t << ") has imaginary part " << sum.imag()
        << " against residue scale " << magnitude;
    throw ConsistencyError(msg.str());
  }
  return sum.real();
}

}  // namespace

double eval_residue_series(const Scenario& scenario, double x, double t, int max_modal_n) {
  return residue_sum(scenario, x, t, max_modal_n, false);
}

double eval_residue_series_folded(const Scenario& scenario, double x, double t, int max_modal_n) {
  return residue_sum(scenario, x, t, max_modal_n, true);
}

DisplacementField paper_series_field(const Scenario& scenario, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& t, const SeriesConfig& config) {
  DisplacementField field;
  field.x = x;
  field.t = t;
  field.scenario = scenario;
  field.method = "paper_series";
  field.u.resize(t.size(), x.size());
  field.check_shape();
  for (Eigen::Index j = 0; j < t.size(); ++j) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      field.u(j, i) = eval_paper_series(scenario, x[i], t[j], config);
    }
  }
  std::ostringstream note;
  note << "modal_terms_n = " << config.modal_terms_n;
  field.notes.push_back(note.str());
  return field;
}

}  // namespace rodpulse::series
