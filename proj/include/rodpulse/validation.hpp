#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rodpulse/field.hpp"
#include "rodpulse/model.hpp"

namespace rodpulse::validation {

struct Band {
  double x = 0.0;
  double t_center = 0.0;
  double half_width = 0.0;
};

/// Exclusion zones around the characteristics through each x.
struct WavefrontBands {
  double half_width = 0.0;
  double length = 1.0;
  double wave_speed = 1.0;

  /// Half-width 0.05 L/c.
  static WavefrontBands standard(const Scenario& scenario);

  bool excludes(double x, double t) const;
  std::vector<Band> bands(double x, double horizon) const;
};

struct ComparisonResult {
  std::string method_a;
  std::string method_b;
  std::string grid;
  double l2_rel_error = 0.0;    // ||a - b||_2 / ||a||_2
  double linf_rel_error = 0.0;  // max|a - b| / max|a|
  long samples = 0;
  std::vector<Band> excluded_wavefront_bands;
};

/// Errors over a's grid, with b resampled bilinearly when the grids differ.
/// Throws ParameterError when a's grid is not covered by b's.
ComparisonResult compare_fields(const DisplacementField& a, const DisplacementField& b,
                                const std::optional<WavefrontBands>& exclusions = std::nullopt);

/// max |p(t) - P/alpha| alpha/P over the trace; the absolute drift when
/// P/alpha is zero.
double momentum_drift(const std::vector<double>& momentum, const Scenario& scenario);

/// First sample time where |T| exceeds threshold * max |T|.
/// Throws NoSignalError for an all-zero trace.
double detect_arrival(const Eigen::VectorXd& t, const Eigen::VectorXd& tension, double threshold);

/// max |T(t)| for t < t_cut divided by max |T|.
double quiet_fraction(const Eigen::VectorXd& t, const Eigen::VectorXd& tension, double t_cut);

/// Deterministic uniform doubles in [0, 1) from a seeded 64-bit engine.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed);
  double next();
  double next(double lo, double hi) { return lo + (hi - lo) * next(); }

 private:
  std::uint64_t state_;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool gating = true;
  bool passed = false;
  double measured = 0.0;
  double bound = 0.0;
  std::vector<std::pair<std::string, std::string>> details;
};

struct ValidationSettings {
  int nx = 401;
  double courant = 0.9;
  double horizon_transits = 5.0;
  int modal_terms_n = 200;
  std::uint64_t seed = 20240613;
  unsigned threads = 0;
};

CriterionResult check_point_mass(const Scenario& scenario);
CriterionResult check_inversion_pairs();
CriterionResult check_transform_consistency(const Scenario& scenario, std::uint64_t seed);
/// Fills `comparisons` with the physical and paper solver-vs-inversion results.
CriterionResult check_solver_agreement(const Scenario& scenario, const ValidationSettings& settings,
                                       std::vector<ComparisonResult>& comparisons);
CriterionResult check_momentum(const Scenario& scenario, const ValidationSettings& settings);
CriterionResult check_arrival(const Scenario& scenario, const ValidationSettings& settings);

/// Sample points for criteria 7 and 10: causal, outside wavefront bands, t <= 3 L/c.
std::vector<std::pair<double, double>> residue_sample_points(const Scenario& scenario,
                                                             std::uint64_t seed, int count = 20);
CriterionResult check_residue_completeness(const Scenario& scenario,
                                           const ValidationSettings& settings);
CriterionResult check_u3_residue(const Scenario& scenario, std::uint64_t seed);
CriterionResult check_self_convergence(const Scenario& scenario, const ValidationSettings& settings);
CriterionResult paper_series_diagnostic(const Scenario& scenario, const ValidationSettings& settings);

inline constexpr int kCriterionCount = 10;

struct ValidationReport {
  Scenario scenario;
  ValidationSettings settings;
  std::vector<ComparisonResult> comparisons;
  std::vector<CriterionResult> criteria;  // ordered by id, ids 1..10

  bool gating_passed() const;
  std::vector<int> failed_gating() const;
  const CriterionResult& criterion(int id) const;

  /// "key: value" lines grouped in [section] blocks.
  std::string to_text() const;
  /// criterion,title,gating,passed,measured,bound
  std::string to_csv() const;
};

/// Orders criteria by id. Throws IncompleteReportError when a criterion is
/// missing or repeated, or no physical solver-vs-inversion comparison exists.
ValidationReport build_report(const Scenario& scenario, const ValidationSettings& settings,
                              std::vector<ComparisonResult> comparisons,
                              std::vector<CriterionResult> criteria);

/// Runs every criterion for the scenario's rod and impulse.
ValidationReport run_validation(const Scenario& scenario, const ValidationSettings& settings);

}  // namespace rodpulse::validation
