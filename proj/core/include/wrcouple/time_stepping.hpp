#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "wrcouple/fem_assembly.hpp"

namespace wrcouple::stepping {

using Vector = Eigen::VectorXd;

enum class Integrator { euler, sdirk2 };

/// Uniform partition t_0 < t_1 < ... < t_N of [t0, tf].
struct TimeGrid {
  double t0 = 0.0;
  double tf = 1.0;
  int n_steps = 1;

  static TimeGrid make(double t0, double tf, int n_steps);
  /// Rejects steps that do not divide (tf - t0) into an integer count.
  static TimeGrid from_step(double t0, double tf, double dt);

  [[nodiscard]] double dt() const { return (tf - t0) / n_steps; }
  [[nodiscard]] double point(int i) const;
  [[nodiscard]] std::vector<double> points() const;
  [[nodiscard]] bool same_span(const TimeGrid& other) const {
    return t0 == other.t0 && tf == other.tf;
  }
  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

/// Two-stage SDIRK with Butcher array [[a, 0], [1 - a, a]], b = (1 - a, a).
struct SdirkCoeffs {
  static constexpr double a = 0.29289321881345247559915563789515;  // 1 - sqrt(2)/2
  static constexpr int stages = 2;
};

/// Outcome of one time step of a Dirichlet or Neumann subproblem.
/// Dirichlet steps fill `flux` (and `stage_fluxes` for SDIRK2); Neumann steps
/// fill `interface_state`.
struct StepResult {
  Vector interior_state;
  Vector interface_state;
  Vector flux;
  std::vector<Vector> stage_fluxes;
};

/// Factorized shifted systems M/h + A of one subdomain with h = dt (implicit
/// Euler) or a * dt (SDIRK2). Built once; all step methods are const and safe
/// to call concurrently on distinct state vectors.
class SubdomainStepper {
 public:
  SubdomainStepper(const fem::SubdomainOperator& op, double dt, Integrator integrator);

  SubdomainStepper(const SubdomainStepper&) = delete;
  SubdomainStepper& operator=(const SubdomainStepper&) = delete;

  [[nodiscard]] double dt() const { return dt_; }
  [[nodiscard]] Integrator integrator() const { return integrator_; }
  [[nodiscard]] const fem::SubdomainOperator& op() const { return op_; }
  [[nodiscard]] int stage_count() const { return integrator_ == Integrator::euler ? 1 : 2; }

  /// Interior solve with prescribed interface values at t_n and t_{n+1}.
  [[nodiscard]] StepResult dirichlet_step(const Vector& u_interior_prev, const Vector& g_prev,
                                          const Vector& g_next) const;

  /// Full (interior + interface) solve driven by interface flux data, one
  /// vector per stage. `state_prev` is ordered (interior, interface).
  [[nodiscard]] StepResult neumann_step(const Vector& state_prev,
                                        std::span<const Vector> flux_rhs) const;

  /// Weak interface flux of the Dirichlet solution at t_0: stiffness terms at
  /// t_0, time-derivative terms from the first-step differences.
  [[nodiscard]] Vector initial_flux(const Vector& u_interior_0, const Vector& g_0,
                                    const Vector& u_interior_1, const Vector& g_1) const;

 private:
  StepResult euler_dirichlet(const Vector& u_prev, const Vector& g_prev,
                             const Vector& g_next) const;
  StepResult sdirk2_dirichlet(const Vector& u_prev, const Vector& g_prev,
                              const Vector& g_next) const;

  fem::SubdomainOperator op_;
  double dt_;
  Integrator integrator_;
  double h_;  // implicit shift step: dt or a * dt

  fem::SparseMatrix full_mass_;
  Eigen::SimplicialLDLT<fem::SparseMatrix> interior_solver_;
  Eigen::SimplicialLDLT<fem::SparseMatrix> full_solver_;
};

StepResult euler_dirichlet_step(const fem::SubdomainOperator& op, const Vector& u_interior_prev,
                                const Vector& g_prev, const Vector& g_next, double dt);
StepResult euler_neumann_step(const fem::SubdomainOperator& op, const Vector& psi_prev,
                              const Vector& flux_rhs, double dt);
StepResult sdirk2_dirichlet_step(const fem::SubdomainOperator& op, const Vector& u_interior_prev,
                                 const Vector& g_prev, const Vector& g_next, double dt);
StepResult sdirk2_neumann_step(const fem::SubdomainOperator& op, const Vector& psi_prev,
                               const std::array<Vector, 2>& stage_flux_rhs, double dt);

/// Integrates M u' + A u = 0 on the glued operator; returns the N+1 states.
std::vector<Vector> monolithic_solve(const fem::MonolithicOperator& mono, const Vector& u0,
                                     const TimeGrid& grid, Integrator integrator);

}  // namespace wrcouple::stepping
