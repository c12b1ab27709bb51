#pragma once

#include <Eigen/Core>
#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "rodpulse/field.hpp"
#include "rodpulse/model.hpp"
#include "rodpulse/transform_domain.hpp"

namespace rodpulse::series {

using Complex = std::complex<double>;

/// One of the five printed partial fractions A_j(p)/B_j(p) at fixed x,
/// combined as u1 - u2 - u3 + u4 - u5.
struct PaperTerm {
  int index = 1;
  int sign = 1;
  std::function<Complex(Complex)> numerator;
  std::function<Complex(Complex)> denominator;

  Complex ratio(Complex p) const { return numerator(p) / denominator(p); }
};

/// Paper mode only.
std::array<PaperTerm, 5> paper_terms(const Scenario& scenario, double x);

/// Poles of B_j, drawn from the transform pole catalogue.
std::vector<transform::Pole> term_poles(const Scenario& scenario, int index, int max_modal_n);

/// Sum of contour residues of exp(p t) A_j/B_j over term_poles.
double term_residue_sum(const Scenario& scenario, int index, double x, double t, int max_modal_n);

struct SeriesConfig {
  int modal_terms_n = 200;
  bool include_hyperbolic = true;  // the sinh(a t/(m c)) parts
};

void validate(const SeriesConfig& config);

/// |a t/(m c)| and |a L/(m c^2)| beyond this raise OverflowError.
inline constexpr double kHyperbolicLimit = 700.0;

/// Printed closed form of u1: drift, hyperbolic part and modal sum
/// truncated at config.modal_terms_n.
double eval_paper_u1(const Scenario& scenario, double x, double t, const SeriesConfig& config);

struct TermValues {
  double u2 = 0.0;
  double u3 = 0.0;
  double u4 = 0.0;
  double u5 = 0.0;
};

/// Printed closed forms of u2..u5; u3 is identically zero.
TermValues eval_paper_u2345(const Scenario& scenario, double x, double t);

/// u1 - u2 - u3 + u4 - u5. With include_hyperbolic off only the drift and
/// modal parts remain.
double eval_paper_series(const Scenario& scenario, double x, double t, const SeriesConfig& config);

/// Envelope bound on the modal terms n_from..n_to of u1.
double u1_tail_bound(const Scenario& scenario, int n_from, int n_to);

/// Real part of the sum of contour residues of exp(p t) phi(x, p) over the
/// paper-mode pole catalogue. Throws ConsistencyError when the imaginary
/// part exceeds 1e-9 of the summed residue magnitudes.
double eval_residue_series(const Scenario& scenario, double x, double t, int max_modal_n);

/// Same sum using only the upper modal poles, each counted as 2 Re.
double eval_residue_series_folded(const Scenario& scenario, double x, double t, int max_modal_n);

/// eval_paper_series over a grid; rows are times.
DisplacementField paper_series_field(const Scenario& scenario, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& t, const SeriesConfig& config);

}  // namespace rodpulse::series
