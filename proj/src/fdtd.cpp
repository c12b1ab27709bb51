#include "rodpulse/fdtd.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "rodpulse/errors.hpp"

namespace rodpulse::fdtd {

namespace {

void check_finite(const RodState& state) {
  if (!state.u.allFinite() || !state.v.allFinite()) {
    std::ostringstream msg;
    msg << "non-finite rod state at step " << state.step_index << " (t = " << state.time << ")";
    throw DivergenceError(msg.str(), state.step_index);
  }
}

void check_state(const RodState& state, const SpaceTimeGrid& grid) {
  if (state.u.size() != grid.nx || state.v.size() != grid.nx) {
    throw ParameterError("rod state length does not match the grid");
  }
}

double interior_weight(Eigen::Index i, Eigen::Index last) {
  return (i == 1 || i == last - 1) ? 1.5 : 1.0;
}

}  // namespace

SpaceTimeGrid SpaceTimeGrid::from_courant(const Scenario& scenario, int nx, double courant,
                                          double horizon) {
  if (nx < 16) throw ParameterError("nx must be >= 16");
  if (!(courant > 0.0 && courant <= 1.0)) throw ParameterError("courant must lie in (0, 1]");
  if (!(horizon > 0.0)) throw ParameterError("horizon must be positive");
  const double dx = scenario.rod.length_l / (nx - 1);
  const double dt_max = courant * dx / scenario.wave_speed();
  // Guard the ceil against horizon/dt_max landing a rounding error above an integer.
  const long steps = static_cast<long>(std::ceil(horizon / dt_max * (1.0 - 1e-12)));
  return from_steps(scenario, nx, steps, horizon);
}

SpaceTimeGrid SpaceTimeGrid::from_steps(const Scenario& scenario, int nx, long steps,
                                        double horizon) {
  if (steps < 1) throw ParameterError("steps must be >= 1");
  if (!(horizon > 0.0)) throw ParameterError("horizon must be positive");
  SpaceTimeGrid g;
  g.nx = nx;
  g.dx = scenario.rod.length_l / (nx - 1);
  g.steps = steps;
  g.horizon = horizon;
  g.dt = horizon / static_cast<double>(steps);
  g.courant = scenario.wave_speed() * g.dt / g.dx;
  validate(g);
  return g;
}

Eigen::VectorXd SpaceTimeGrid::positions() const {
  return Eigen::VectorXd::LinSpaced(nx, 0.0, dx * (nx - 1));
}

void validate(const SpaceTimeGrid& grid) {
  if (grid.nx < 16) throw ParameterError("nx must be >= 16");
  if (!(grid.dt > 0.0) || !(grid.dx > 0.0)) throw ParameterError("grid spacing must be positive");
  if (!(grid.courant > 0.0 && grid.courant <= 1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "courant number " << grid.courant << " exceeds the stability bound 1";
    throw ParameterError(msg.str());
  }
}

double applied_force(const Scenario& scenario, const FdtdOptions& options, double t) {
  if (options.impulse != ImpulseRealization::RaisedCosineForce) return 0.0;
  const double w = options.pulse_width;
  if (t < 0.0 || t > w) return 0.0;
  return scenario.momentum() / w * (1.0 - std::cos(2.0 * std::numbers::pi * t / w));
}

Eigen::VectorXd acceleration(const Eigen::VectorXd& u, double t, const Scenario& scenario,
                             const SpaceTimeGrid& grid, const FdtdOptions& options) {
  const Eigen::Index n = u.size();
  const Eigen::Index last = n - 1;
  const double c = scenario.wave_speed();
  const double m = scenario.rod.end_mass_m;
  const double inv_dx2 = 1.0 / (grid.dx * grid.dx);

  Eigen::VectorXd acc(n);
  acc.segment(1, n - 2) =
      (c * c * inv_dx2) * (u.segment(2, n - 2) - 2.0 * u.segment(1, n - 2) + u.segment(0, n - 2));
  const double ux_left = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * grid.dx);
  const double ux_right = (3.0 * u[last] - 4.0 * u[last - 1] + u[last - 2]) / (2.0 * grid.dx);
  acc[0] = (scenario.boundary.a_left * ux_left + applied_force(scenario, options, t)) / m;
  acc[last] = scenario.boundary.a_right * ux_right / m;
  return acc;
}

RodState init_state(const Scenario& scenario, const SpaceTimeGrid& grid, const FdtdOptions& options) {
  validate(grid);
  if (options.impulse == ImpulseRealization::RaisedCosineForce && !(options.pulse_width > 0.0)) {
    throw ParameterError("raised-cosine impulse needs a positive pulse_width");
  }
  RodState s;
  s.u = Eigen::VectorXd::Zero(grid.nx);
  s.v = Eigen::VectorXd::Zero(grid.nx);
  if (options.impulse == ImpulseRealization::InitialVelocity) {
    s.v[0] = scenario.momentum() / scenario.rod.end_mass_m;
  }
  return s;
}

namespace {

// Advances in place; `acc` holds the acceleration at the current state on
// entry and at the new state on exit.
void advance(RodState& s, Eigen::VectorXd& acc, const Scenario& scenario, const SpaceTimeGrid& grid,
             const FdtdOptions& options) {
  const double half = 0.5 * grid.dt;
  s.v += half * acc;
  s.u += grid.dt * s.v;
  ++s.step_index;
  s.time = grid.time(s.step_index);
  acc = acceleration(s.u, s.time, scenario, grid, options);
  s.v += half * acc;
  check_finite(s);
}

}  // namespace

RodState step(const RodState& state, const Scenario& scenario, const SpaceTimeGrid& grid,
              const FdtdOptions& options) {
  check_state(state, grid);
  RodState next = state;
  Eigen::VectorXd acc = acceleration(state.u, state.time, scenario, grid, options);
  advance(next, acc, scenario, grid, options);
  return next;
}

RunDiagnostics run_with_diagnostics(const Scenario& scenario, const SpaceTimeGrid& grid,
                                    long sample_stride, const FdtdOptions& options) {
  if (sample_stride < 1) throw ParameterError("sample_stride must be >= 1");
  RodState state = init_state(scenario, grid, options);
  const long rows = grid.steps / sample_stride + 1;

  RunDiagnostics out;
  auto& field = out.field;
  field.x = grid.positions();
  field.t.resize(rows);
  field.u.resize(rows, grid.nx);
  field.scenario = scenario;
  field.method = "fdtd";
  out.momentum.reserve(static_cast<std::size_t>(rows));
  out.energy.reserve(static_cast<std::size_t>(rows));

  auto record = [&](long row) {
    field.t[row] = state.time;
    field.u.row(row) = state.u.transpose();
    out.momentum.push_back(total_momentum(state, scenario, grid));
    out.energy.push_back(total_energy(state, scenario, grid));
  };
  record(0);
  Eigen::VectorXd acc = acceleration(state.u, state.time, scenario, grid, options);
  for (long k = 1; k <= grid.steps; ++k) {
    advance(state, acc, scenario, grid, options);
    if (k % sample_stride == 0) record(k / sample_stride);
  }
  std::ostringstream note;
  note << "nx = " << grid.nx << ", steps = " << grid.steps << ", courant = " << grid.courant;
  field.notes.push_back(note.str());
  return out;
}

DisplacementField run(const Scenario& scenario, const SpaceTimeGrid& grid, long sample_stride,
                      const FdtdOptions& options) {
  return run_with_diagnostics(scenario, grid, sample_stride, options).field;
}

DisplacementField tension_field(const DisplacementField& field, const Scenario& scenario) {
  field.check_shape();
  const Eigen::Index n = field.nx();
  if (n < 3) throw ParameterError("tension needs at least 3 spatial nodes");
  const double dx = field.x[1] - field.x[0];
  const double es = scenario.axial_stiffness();
  const Eigen::Index last = n - 1;

  DisplacementField out = field;
  out.quantity = "T";
  out.method = field.method + "_tension";
  const auto& u = field.u;
  out.u.col(0) = es * (-3.0 * u.col(0) + 4.0 * u.col(1) - u.col(2)) / (2.0 * dx);
  out.u.middleCols(1, n - 2) = es * (u.middleCols(2, n - 2) - u.middleCols(0, n - 2)) / (2.0 * dx);
  out.u.col(last) = es * (3.0 * u.col(last) - 4.0 * u.col(last - 1) + u.col(last - 2)) / (2.0 * dx);
  return out;
}

double total_momentum(const RodState& state, const Scenario& scenario, const SpaceTimeGrid& grid) {
  check_state(state, grid);
  const Eigen::Index last = state.v.size() - 1;
  double rod = 0.0;
  for (Eigen::Index i = 1; i < last; ++i) rod += interior_weight(i, last) * state.v[i];
  const double line_density = scenario.rod.density_rho * scenario.rod.cross_section_s;
  return scenario.rod.end_mass_m * (state.v[0] + state.v[last]) + line_density * grid.dx * rod;
}

double total_energy(const RodState& state, const Scenario& scenario, const SpaceTimeGrid& grid) {
  check_state(state, grid);
  const Eigen::Index last = state.v.size() - 1;
  double kinetic_rod = 0.0;
  for (Eigen::Index i = 1; i < last; ++i) {
    kinetic_rod += interior_weight(i, last) * state.v[i] * state.v[i];
  }
  const double line_density = scenario.rod.density_rho * scenario.rod.cross_section_s;
  const double m = scenario.rod.end_mass_m;
  const double kinetic = 0.5 * m * (state.v[0] * state.v[0] + state.v[last] * state.v[last]) +
                         0.5 * line_density * grid.dx * kinetic_rod;
  const Eigen::VectorXd strain = state.u.tail(last) - state.u.head(last);
  const double potential = 0.5 * scenario.axial_stiffness() * strain.squaredNorm() / grid.dx;
  return kinetic + potential;
}

}  // namespace rodpulse::fdtd
