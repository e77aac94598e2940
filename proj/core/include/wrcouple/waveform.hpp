#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "wrcouple/fem_assembly.hpp"
#include "wrcouple/interface_transfer.hpp"
#include "wrcouple/material.hpp"
#include "wrcouple/time_stepping.hpp"

namespace wrcouple::waveform {

using stepping::Integrator;
using stepping::TimeGrid;
using stepping::Vector;
using transfer::InterfaceTrace;

enum class Method { nnwr, dnwr };

/// Where SDIRK2 stage fluxes sit in time when they are interpolated to the
/// other grid. `stage_abscissae` places stage j of step n at t_n + c_j dt;
/// `step_end` attaches both stages to t_{n+1}. Identical on conforming grids.
enum class StageFluxTimes { stage_abscissae, step_end };

/// Temperatures at one time level, split as in the glued operator.
struct FullState {
  Vector left_interior;
  Vector interface;
  Vector right_interior;

  /// Concatenation (left interior, interface, right interior).
  [[nodiscard]] Vector stacked() const;
};

using InitialCondition = std::function<double(double x, double y)>;
/// Interface values (length s) at time t.
using InterfaceGuess = std::function<Vector(double t)>;

struct CouplingConfig {
  Material left;
  Material right;
  fem::MeshSpec mesh;
  TimeGrid grid_left;
  TimeGrid grid_right;
  std::optional<double> theta;  // empty: resolve automatically
  Integrator integrator = Integrator::euler;
  Method method = Method::nnwr;
  double tol = 1e-8;
  int max_iters = 100;
  InitialCondition initial_condition;
  std::optional<FullState> initial_state;  // takes precedence over initial_condition
  InterfaceGuess initial_guess;            // default: u0 on the interface, constant in time
  StageFluxTimes stage_flux_times = StageFluxTimes::stage_abscissae;
  bool parallel = true;
  double divergence_limit = 1e10;
};

struct IterationReport {
  int iterations = 0;
  std::vector<double> update_norms;
  bool converged = false;
  bool diverged = false;
  double wall_time = 0.0;  // s
  double theta = 0.0;
  InterfaceTrace trace_left;
  InterfaceTrace trace_right;
  FullState final_state;
};

/// Throws std::invalid_argument describing the first inconsistent field.
void validate(const CouplingConfig& cfg);

/// Explicit theta, or the 1D optimum at the coarser step (NNWR) / 1/2 (DNWR).
double resolve_theta(const CouplingConfig& cfg);

/// Initial temperatures on the mesh nodes of both subdomains.
FullState initial_state(const CouplingConfig& cfg);

IterationReport nnwr_solve(const CouplingConfig& cfg);
IterationReport dnwr_solve(const CouplingConfig& cfg);
IterationReport solve(const CouplingConfig& cfg);

/// Consecutive windows of equal length; each restarts from the previous
/// window's final state. `cfg` describes the first window.
std::vector<IterationReport> solve_windows(const CouplingConfig& cfg, int windows);

/// g_old - theta (psi_own + psi_other_interp); all traces on one grid.
InterfaceTrace interface_update(const InterfaceTrace& g_old, const InterfaceTrace& psi_own,
                                const InterfaceTrace& psi_other_interp, double theta);

/// Euclidean norm of the difference of the final columns.
double final_difference(const InterfaceTrace& trace_new, const InterfaceTrace& trace_old);

bool termination_check(const InterfaceTrace& trace_new, const InterfaceTrace& trace_old,
                       double tol);

}  // namespace wrcouple::waveform
