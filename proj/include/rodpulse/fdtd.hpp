#pragma once

#include <Eigen/Core>
#include <vector>

#include "rodpulse/field.hpp"
#include "rodpulse/model.hpp"

namespace rodpulse::fdtd {

struct SpaceTimeGrid {
  int nx = 401;
  double dx = 0.0;
  double dt = 0.0;
  long steps = 0;
  double courant = 0.0;  // c dt / dx
  double horizon = 0.0;  // steps * dt

  /// dt = horizon/steps with steps the smallest count that keeps the
  /// Courant number at or below `courant`.
  static SpaceTimeGrid from_courant(const Scenario& scenario, int nx, double courant,
                                    double horizon);

  /// Exactly `steps` steps over `horizon`; refinement studies use this to
  /// keep time levels aligned.
  static SpaceTimeGrid from_steps(const Scenario& scenario, int nx, long steps, double horizon);

  double time(long step) const { return static_cast<double>(step) * dt; }
  Eigen::VectorXd positions() const;
};

/// Throws ParameterError unless nx >= 16, 0 < courant <= 1, dt > 0.
void validate(const SpaceTimeGrid& grid);

enum class ImpulseRealization {
  InitialVelocity,    // left mass starts at P/(alpha m)
  RaisedCosineForce,  // (P/alpha)/w (1 - cos(2 pi t/w)) on [0, w]
};

struct FdtdOptions {
  ImpulseRealization impulse = ImpulseRealization::InitialVelocity;
  double pulse_width = 0.0;  // s, RaisedCosineForce only
};

struct RodState {
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  double time = 0.0;
  long step_index = 0;
};

/// Force on the left mass at time t (zero for InitialVelocity).
double applied_force(const Scenario& scenario, const FdtdOptions& options, double t);

/// Nodal accelerations: three-point Laplacian inside, and at the ends the
/// mass equations with one-sided second-order u_x.
Eigen::VectorXd acceleration(const Eigen::VectorXd& u, double t, const Scenario& scenario,
                             const SpaceTimeGrid& grid, const FdtdOptions& options = {});

RodState init_state(const Scenario& scenario, const SpaceTimeGrid& grid,
                    const FdtdOptions& options = {});

/// One velocity-Verlet step (leapfrog in the interior). Throws
/// DivergenceError with the step index on NaN/Inf.
RodState step(const RodState& state, const Scenario& scenario, const SpaceTimeGrid& grid,
              const FdtdOptions& options = {});

/// Rows at steps 0, stride, 2 stride, ... up to grid.steps.
DisplacementField run(const Scenario& scenario, const SpaceTimeGrid& grid, long sample_stride,
                      const FdtdOptions& options = {});

struct RunDiagnostics {
  DisplacementField field;
  std::vector<double> momentum;  // one per recorded row
  std::vector<double> energy;    // one per recorded row
};

RunDiagnostics run_with_diagnostics(const Scenario& scenario, const SpaceTimeGrid& grid,
                                    long sample_stride, const FdtdOptions& options = {});

/// T = E S u_x; central differences inside, one-sided second order at the ends.
DisplacementField tension_field(const DisplacementField& field, const Scenario& scenario);

/// m (v_0 + v_N) + rho S dx sum w_i v_i over interior nodes, with
/// w = 3/2 next to each end and 1 elsewhere. These are the weights the
/// one-sided end stencil conserves exactly, and they sum to L/dx.
double total_momentum(const RodState& state, const Scenario& scenario, const SpaceTimeGrid& grid);

/// Kinetic energy with the momentum weights plus cell-wise strain energy.
double total_energy(const RodState& state, const Scenario& scenario, const SpaceTimeGrid& grid);

}  // namespace rodpulse::fdtd
