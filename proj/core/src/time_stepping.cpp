#include "wrcouple/time_stepping.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wrcouple::stepping {

namespace {

void require_size(const Vector& v, Eigen::Index n, const char* what) {
  if (v.size() != n) {
    throw std::invalid_argument(std::string(what) + " has length " + std::to_string(v.size()) +
                                ", expected " + std::to_string(n));
  }
}

void require_step(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("time step must be positive");
  }
}

template <typename Solver>
void factorize(Solver& solver, const fem::SparseMatrix& m, const char* what) {
  solver.compute(m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error(std::string("factorization of ") + what + " failed");
  }
}

}  // namespace

TimeGrid TimeGrid::make(double t0, double tf, int n_steps) {
  if (!(tf > t0) || !std::isfinite(t0) || !std::isfinite(tf)) {
    throw std::invalid_argument("time grid needs tf > t0");
  }
  if (n_steps < 1) {
    throw std::invalid_argument("time grid needs at least one step");
  }
  return TimeGrid{t0, tf, n_steps};
}

TimeGrid TimeGrid::from_step(double t0, double tf, double dt) {
  require_step(dt);
  const double steps = (tf - t0) / dt;
  const long rounded = std::lround(steps);
  if (rounded < 1 || std::abs(steps - static_cast<double>(rounded)) > 1e-9 * steps) {
    throw std::invalid_argument("time step does not divide the window evenly");
  }
  return make(t0, tf, static_cast<int>(rounded));
}

double TimeGrid::point(int i) const {
  if (i == n_steps) return tf;  // endpoint reproduced exactly
  return t0 + i * dt();
}

std::vector<double> TimeGrid::points() const {
  std::vector<double> p(static_cast<std::size_t>(n_steps) + 1);
  for (int i = 0; i <= n_steps; ++i) p[i] = point(i);
  return p;
}

SubdomainStepper::SubdomainStepper(const fem::SubdomainOperator& op, double dt,
                                   Integrator integrator)
    : op_(op), dt_(dt), integrator_(integrator) {
  require_step(dt);
  h_ = integrator == Integrator::euler ? dt : SdirkCoeffs::a * dt;
  full_mass_ = op_.full_mass();
  const fem::SparseMatrix interior = op_.m_ii / h_ + op_.a_ii;
  const fem::SparseMatrix full = full_mass_ / h_ + op_.full_stiffness();
  factorize(interior_solver_, interior, "interior system");
  factorize(full_solver_, full, "subdomain system");
}

StepResult SubdomainStepper::dirichlet_step(const Vector& u_interior_prev, const Vector& g_prev,
                                            const Vector& g_next) const {
  require_size(u_interior_prev, op_.interior_size(), "interior state");
  require_size(g_prev, op_.interface_size(), "interface value at t_n");
  require_size(g_next, op_.interface_size(), "interface value at t_n+1");
  return integrator_ == Integrator::euler ? euler_dirichlet(u_interior_prev, g_prev, g_next)
                                          : sdirk2_dirichlet(u_interior_prev, g_prev, g_next);
}

StepResult SubdomainStepper::euler_dirichlet(const Vector& u_prev, const Vector& g_prev,
                                             const Vector& g_next) const {
  const double inv = 1.0 / dt_;
  const Vector rhs = inv * (op_.m_ii * u_prev) - inv * (op_.m_ig * g_next) -
                     op_.a_ig * g_next + inv * (op_.m_ig * g_prev);
  StepResult r;
  r.interior_state = interior_solver_.solve(rhs);
  r.flux = inv * (op_.m_gg * g_next) + op_.a_gg * g_next + inv * (op_.m_gi * r.interior_state) +
           op_.a_gi * r.interior_state - inv * (op_.m_gg * g_prev) - inv * (op_.m_gi * u_prev);
  return r;
}

StepResult SubdomainStepper::sdirk2_dirichlet(const Vector& u_prev, const Vector& g_prev,
                                              const Vector& g_next) const {
  constexpr double a = SdirkCoeffs::a;
  const Vector g_dot = (g_next - g_prev) / dt_;
  const std::array<Vector, 2> g_stage = {g_prev + a * (g_next - g_prev), g_next};
  const Vector mig_gdot = op_.m_ig * g_dot;
  const Vector mgg_gdot = op_.m_gg * g_dot;

  StepResult r;
  r.stage_fluxes.resize(2);
  Vector k_prev;
  for (int j = 0; j < 2; ++j) {
    const Vector start = j == 0 ? u_prev : Vector(u_prev + dt_ * (1.0 - a) * k_prev);
    const Vector rhs = (op_.m_ii * start) / h_ - mig_gdot - op_.a_ig * g_stage[j];
    const Vector stage = interior_solver_.solve(rhs);
    const Vector k = (stage - start) / h_;
    r.stage_fluxes[j] =
        mgg_gdot + op_.m_gi * k + op_.a_gg * g_stage[j] + op_.a_gi * stage;
    if (j == 1) r.interior_state = stage;
    k_prev = k;
  }
  r.flux = r.stage_fluxes[1];
  return r;
}

StepResult SubdomainStepper::neumann_step(const Vector& state_prev,
                                          std::span<const Vector> flux_rhs) const {
  const int n_i = op_.interior_size();
  const int n_g = op_.interface_size();
  require_size(state_prev, n_i + n_g, "subdomain state");
  if (static_cast<int>(flux_rhs.size()) != stage_count()) {
    throw std::invalid_argument("expected one interface flux per stage");
  }
  for (const Vector& f : flux_rhs) require_size(f, n_g, "interface flux");

  Vector state;
  Vector k_prev;
  for (int j = 0; j < stage_count(); ++j) {
    const Vector start = j == 0 ? state_prev
                                : Vector(state_prev + dt_ * (1.0 - SdirkCoeffs::a) * k_prev);
    Vector rhs = (full_mass_ * start) / h_;
    rhs.tail(n_g) += flux_rhs[j];
    state = full_solver_.solve(rhs);
    if (integrator_ == Integrator::sdirk2) k_prev = (state - start) / h_;
  }
  StepResult r;
  r.interior_state = state.head(n_i);
  r.interface_state = state.tail(n_g);
  return r;
}

Vector SubdomainStepper::initial_flux(const Vector& u_interior_0, const Vector& g_0,
                                      const Vector& u_interior_1, const Vector& g_1) const {
  const double inv = 1.0 / dt_;
  return inv * (op_.m_gg * (g_1 - g_0)) + inv * (op_.m_gi * (u_interior_1 - u_interior_0)) +
         op_.a_gg * g_0 + op_.a_gi * u_interior_0;
}

StepResult euler_dirichlet_step(const fem::SubdomainOperator& op, const Vector& u_interior_prev,
                                const Vector& g_prev, const Vector& g_next, double dt) {
  return SubdomainStepper(op, dt, Integrator::euler)
      .dirichlet_step(u_interior_prev, g_prev, g_next);
}

StepResult euler_neumann_step(const fem::SubdomainOperator& op, const Vector& psi_prev,
                              const Vector& flux_rhs, double dt) {
  const std::array<Vector, 1> rhs = {flux_rhs};
  return SubdomainStepper(op, dt, Integrator::euler).neumann_step(psi_prev, rhs);
}

StepResult sdirk2_dirichlet_step(const fem::SubdomainOperator& op, const Vector& u_interior_prev,
                                 const Vector& g_prev, const Vector& g_next, double dt) {
  return SubdomainStepper(op, dt, Integrator::sdirk2)
      .dirichlet_step(u_interior_prev, g_prev, g_next);
}

StepResult sdirk2_neumann_step(const fem::SubdomainOperator& op, const Vector& psi_prev,
                               const std::array<Vector, 2>& stage_flux_rhs, double dt) {
  return SubdomainStepper(op, dt, Integrator::sdirk2).neumann_step(psi_prev, stage_flux_rhs);
}

std::vector<Vector> monolithic_solve(const fem::MonolithicOperator& mono, const Vector& u0,
                                     const TimeGrid& grid, Integrator integrator) {
  require_size(u0, mono.map.size(), "initial state");
  const double dt = grid.dt();
  const double h = integrator == Integrator::euler ? dt : SdirkCoeffs::a * dt;
  Eigen::SimplicialLDLT<fem::SparseMatrix> solver;
  const fem::SparseMatrix system = mono.mass / h + mono.stiffness;
  factorize(solver, system, "monolithic system");

  std::vector<Vector> states;
  states.reserve(static_cast<std::size_t>(grid.n_steps) + 1);
  states.push_back(u0);
  for (int n = 0; n < grid.n_steps; ++n) {
    const Vector& u = states.back();
    if (integrator == Integrator::euler) {
      states.push_back(solver.solve(Vector(mono.mass * u / h)));
      continue;
    }
    const Vector u1 = solver.solve(Vector(mono.mass * u / h));
    const Vector k1 = (u1 - u) / h;
    const Vector s2 = u + dt * (1.0 - SdirkCoeffs::a) * k1;
    states.push_back(solver.solve(Vector(mono.mass * s2 / h)));
  }
  return states;
}

}  // namespace wrcouple::stepping
