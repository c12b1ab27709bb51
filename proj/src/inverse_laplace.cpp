#include "rodpulse/inverse_laplace.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>
#include <vector>

#include "rodpulse/errors.hpp"
#include "rodpulse/transform_domain.hpp"

namespace rodpulse::inverse {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_value(double v, double t, int nodes) {
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << "inversion at t = " << t << " produced a non-finite value with " << nodes << " nodes";
    throw NumericalError(msg.str());
  }
}

InversionResult euler_inversion(const Image& image, double t, const InversionConfig& cfg) {
  const double h = cfg.damping / (2.0 * t);
  const double sigma = cfg.contour_shift + h;
  const double scale = std::exp(sigma * t) / t;

  // The alternating terms depend only on (t, sigma), so one growing table
  // serves every truncation level.
  std::vector<double> partial;
  double largest = 0.0;
  auto extend_to = [&](int count) {
    while (static_cast<int>(partial.size()) < count) {
      const int k = static_cast<int>(partial.size());
      const double re = image(Complex{sigma, k * kPi / t}).real();
      const double term = k == 0 ? 0.5 * re : ((k % 2 == 0) ? re : -re);
      largest = std::max(largest, std::abs(term));
      partial.push_back((k == 0 ? 0.0 : partial.back()) + term);
    }
  };
  auto estimate = [&](int n) {
    const int mm = std::max(11, n / 5);
    extend_to(n + mm + 1);
    const double log_norm = std::lgamma(mm + 1.0) - mm * std::numbers::ln2;
    double acc = 0.0;
    for (int j = 0; j <= mm; ++j) {
      const double w = std::exp(log_norm - std::lgamma(j + 1.0) - std::lgamma(mm - j + 1.0));
      acc += w * partial[static_cast<std::size_t>(n + j)];
    }
    return scale * acc;
  };

  InversionResult r;
  int n = cfg.node_count;
  double previous = estimate(n);
  check_value(previous, t, n);
  while (2 * n <= cfg.max_node_count) {
    n *= 2;
    const double current = estimate(n);
    check_value(current, t, n);
    const double floor = 1e3 * kEps * scale * largest;
    r = {current, std::abs(current - previous), previous, n, false};
    if (r.change <= std::max(cfg.tolerance * std::max(std::abs(current), floor),
                             cfg.absolute_tolerance)) {
      r.converged = true;
      return r;
    }
    previous = current;
  }
  if (r.nodes == 0) r = {previous, std::numeric_limits<double>::infinity(), previous, n, false};
  return r;
}

// One de Hoog evaluation with 2M+1 samples.
double de_hoog(const Image& image, double t, double shift, int M) {
  const double T = 2.0 * t;
  const double gamma = shift - std::log(1e-12) / (2.0 * T);
  const int count = 2 * M + 1;
  std::vector<Complex> a(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) a[k] = image(Complex{gamma, k * kPi / T});
  a[0] *= 0.5;

  // Quotient-difference tables; column c = 1..M, column 0 of e is zero.
  std::vector<std::vector<Complex>> e(static_cast<std::size_t>(M + 1),
                                      std::vector<Complex>(static_cast<std::size_t>(count)));
  std::vector<std::vector<Complex>> q(static_cast<std::size_t>(M + 1),
                                      std::vector<Complex>(static_cast<std::size_t>(count)));
  for (int i = 0; i < 2 * M; ++i) q[1][i] = a[i + 1] / a[i];
  for (int c = 1; c <= M; ++c) {
    for (int i = 0; i <= 2 * (M - c); ++i) e[c][i] = q[c][i + 1] - q[c][i] + e[c - 1][i + 1];
    if (c < M) {
      for (int i = 0; i < 2 * (M - c); ++i) q[c + 1][i] = q[c][i + 1] * e[c][i + 1] / e[c][i];
    }
  }
  std::vector<Complex> d(static_cast<std::size_t>(count));
  d[0] = a[0];
  for (int c = 1; c <= M; ++c) {
    d[2 * c - 1] = -q[c][0];
    d[2 * c] = -e[c][0];
  }

  // Continued fraction by the three-term recurrence, with the tail remainder.
  const Complex z = std::exp(Complex{0.0, kPi * t / T});
  std::vector<Complex> A(static_cast<std::size_t>(count + 1)), B(static_cast<std::size_t>(count + 1));
  A[0] = 0.0;
  A[1] = d[0];
  B[0] = 1.0;
  B[1] = 1.0;
  for (int n = 2; n <= count; ++n) {
    A[n] = A[n - 1] + d[n - 1] * z * A[n - 2];
    B[n] = B[n - 1] + d[n - 1] * z * B[n - 2];
  }
  const Complex h2m = 0.5 * (1.0 + (d[2 * M - 1] - d[2 * M]) * z);
  const Complex rem = -h2m * (1.0 - std::sqrt(1.0 + d[2 * M] * z / (h2m * h2m)));
  A[count] = A[count - 1] + rem * A[count - 2];
  B[count] = B[count - 1] + rem * B[count - 2];
  return std::exp(gamma * t) / T * (A[count] / B[count]).real();
}

InversionResult series_inversion(const Image& image, double t, const InversionConfig& cfg) {
  InversionResult r;
  int n = cfg.node_count;
  double previous = de_hoog(image, t, cfg.contour_shift, n / 2);
  check_value(previous, t, n);
  while (2 * n <= cfg.max_node_count) {
    n *= 2;
    const double current = de_hoog(image, t, cfg.contour_shift, n / 2);
    check_value(current, t, n);
    r = {current, std::abs(current - previous), previous, n, false};
    if (r.change <= std::max(cfg.tolerance * std::abs(current), cfg.absolute_tolerance)) {
      r.converged = true;
      return r;
    }
    previous = current;
  }
  if (r.nodes == 0) r = {previous, std::numeric_limits<double>::infinity(), previous, n, false};
  return r;
}

}  // namespace

void validate(const InversionConfig& config) {
  if (config.node_count < 16) throw ParameterError("inversion node_count must be >= 16");
  if (config.max_node_count < config.node_count) {
    throw ParameterError("inversion max_node_count must be >= node_count");
  }
  if (!(config.tolerance > 0.0)) throw ParameterError("inversion tolerance must be positive");
  if (config.absolute_tolerance < 0.0) throw ParameterError("absolute tolerance must be >= 0");
  if (!(config.damping > 0.0)) throw ParameterError("inversion damping must be positive");
  if (!std::isfinite(config.contour_shift)) throw ParameterError("contour shift must be finite");
}

InversionResult invert_detailed(const Image& image, double t, const InversionConfig& config) {
  validate(config);
  if (!(t > 0.0)) throw ParameterError("inversion needs t > 0");
  return config.method == Method::ShiftedContourQuadrature ? euler_inversion(image, t, config)
                                                            : series_inversion(image, t, config);
}

double invert(const Image& image, double t, const InversionConfig& config) {
  const auto r = invert_detailed(image, t, config);
  if (!r.converged) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "inversion at t = " << t << " did not converge within " << r.nodes
        << " nodes: last iterates " << r.previous << " and " << r.value;
    throw NumericalError(msg.str());
  }
  return r.value;
}

double max_real_pole(const Scenario& scenario) {
  if (scenario.boundary.kind == BoundaryKind::Physical) return 0.0;
  const double a = std::max(std::abs(scenario.boundary.a_left), std::abs(scenario.boundary.a_right));
  return a / (scenario.rod.end_mass_m * scenario.wave_speed());
}

double default_contour_shift(const Scenario& scenario) { return max_real_pole(scenario) + 1.0; }

InversionConfig default_config(const Scenario& scenario) {
  InversionConfig cfg;
  cfg.contour_shift = default_contour_shift(scenario);
  return cfg;
}

DisplacementField invert_field(const Scenario& scenario, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& t, const InversionConfig& config,
                               unsigned threads) {
  validate(config);
  const double pole = max_real_pole(scenario);
  if (!(config.contour_shift > pole)) {
    std::ostringstream msg;
    msg << "contour shift " << config.contour_shift << " is not right of the pole at " << pole;
    throw ParameterError(msg.str());
  }
  DisplacementField field;
  field.x = x;
  field.t = t;
  field.scenario = scenario;
  field.method = "inversion";
  field.u = Eigen::MatrixXd::Zero(t.size(), x.size());
  field.flags.setZero(t.size(), x.size());
  field.check_shape();
  if (x.size() > 0 && (x[0] < 0.0 || x[x.size() - 1] > scenario.rod.length_l)) {
    throw ParameterError("inversion x-grid must lie within [0, L]");
  }
  if (t.size() > 0 && t[0] < 0.0) throw ParameterError("inversion t-grid must be non-negative");

  const double c = scenario.wave_speed();
  InversionConfig cfg = config;
  if (cfg.absolute_tolerance == 0.0) {
    const double impedance = scenario.rod.density_rho * scenario.rod.cross_section_s * c;
    cfg.absolute_tolerance = cfg.tolerance * std::abs(scenario.momentum()) / impedance;
  }
  const double band = 0.05 * scenario.transit_time();
  const Eigen::Index total = x.size() * t.size();
  std::atomic<Eigen::Index> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;

  auto worker = [&] {
    try {
      for (Eigen::Index k = next++; k < total; k = next++) {
        const Eigen::Index j = k / x.size();
        const Eigen::Index i = k % x.size();
        if (t[j] == 0.0) continue;  // u(x, 0) = 0
        const double xi = x[i];
        auto image = [&](Complex p) { return transform::eval_phi(scenario, xi, p); };
        const auto r = invert_detailed(image, t[j], cfg);
        field.u(j, i) = r.value;
        std::uint8_t flag = 0;
        if (!r.converged) flag |= kNotConverged;
        if (near_wavefront(xi, t[j], scenario.rod.length_l, c, band)) flag |= kNearWavefront;
        field.flags(j, i) = flag;
      }
    } catch (...) {
      std::lock_guard lock(failure_lock);
      if (!failure) failure = std::current_exception();
      next = total;
    }
  };

  unsigned count = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  count = static_cast<unsigned>(std::min<Eigen::Index>(count, std::max<Eigen::Index>(total, 1)));
  std::vector<std::thread> pool;
  pool.reserve(count);
  for (unsigned w = 0; w < count; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  const auto unsettled = (field.flags.array() == std::uint8_t{kNotConverged}).count() +
                         (field.flags.array() == std::uint8_t{kNotConverged | kNearWavefront}).count();
  if (unsettled > 0) {
    std::ostringstream note;
    note << unsettled << " samples did not reach the inversion tolerance";
    field.notes.push_back(note.str());
  }
  return field;
}

}  // namespace rodpulse::inverse
