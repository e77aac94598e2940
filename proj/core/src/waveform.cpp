#include "wrcouple/waveform.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <stdexcept>
#include <utility>

#include "wrcouple/theory.hpp"

namespace wrcouple::waveform {

namespace {

using stepping::SdirkCoeffs;
using stepping::SubdomainStepper;
using transfer::Matrix;

// Dirichlet sweep output: interior states at every grid point and the
// interface flux of every stage of every step (stage j of step n in
// stage_flux[j].col(n)), plus the flux at t_0.
struct DirichletSweep {
  std::vector<Vector> interior;
  std::vector<Matrix> stage_flux;
  Vector flux0;
};

// Flux samples at explicit times, ready to be interpolated onto another grid.
struct FluxSamples {
  std::vector<double> times;
  Matrix values;
};

double stage_offset(Integrator integrator, int stage) {
  if (integrator == Integrator::euler || stage == 1) return 1.0;
  return SdirkCoeffs::a;
}

Vector guess_at(const CouplingConfig& cfg, const FullState& u0, double t) {
  if (cfg.initial_guess) {
    Vector g = cfg.initial_guess(t);
    if (g.size() != u0.interface.size()) {
      throw std::invalid_argument("initial guess has the wrong interface size");
    }
    return g;
  }
  return u0.interface;
}

InterfaceTrace guess_trace(const CouplingConfig& cfg, const FullState& u0, const TimeGrid& grid,
                           int owner) {
  InterfaceTrace tr = InterfaceTrace::zeros(grid, static_cast<int>(u0.interface.size()), owner);
  for (int i = 0; i <= grid.n_steps; ++i) tr.values.col(i) = guess_at(cfg, u0, grid.point(i));
  // Column 0 always carries the initial interface data.
  tr.values.col(0) = u0.interface;
  return tr;
}

DirichletSweep dirichlet_sweep(const SubdomainStepper& st, const Vector& u0,
                               const InterfaceTrace& g) {
  const int n = g.grid.n_steps;
  const int stages = st.stage_count();
  const int s = st.op().interface_size();
  DirichletSweep out;
  out.interior.reserve(static_cast<std::size_t>(n) + 1);
  out.interior.push_back(u0);
  out.stage_flux.assign(static_cast<std::size_t>(stages), Matrix(s, n));
  for (int k = 0; k < n; ++k) {
    const Vector g_prev = g.values.col(k);
    const Vector g_next = g.values.col(k + 1);
    stepping::StepResult r = st.dirichlet_step(out.interior.back(), g_prev, g_next);
    if (stages == 1) {
      out.stage_flux[0].col(k) = r.flux;
    } else {
      for (int j = 0; j < stages; ++j) out.stage_flux[j].col(k) = r.stage_fluxes[j];
    }
    out.interior.push_back(std::move(r.interior_state));
  }
  out.flux0 = st.initial_flux(out.interior[0], g.values.col(0), out.interior[1], g.values.col(1));
  return out;
}

// Times at which stage `j` of every step on `grid` is evaluated.
std::vector<double> stage_times(const TimeGrid& grid, Integrator integrator, int j,
                                StageFluxTimes mode) {
  std::vector<double> t(static_cast<std::size_t>(grid.n_steps));
  const double c = mode == StageFluxTimes::step_end ? 1.0 : stage_offset(integrator, j);
  for (int k = 0; k < grid.n_steps; ++k) {
    t[k] = c == 1.0 ? grid.point(k + 1) : grid.point(k) + c * grid.dt();
  }
  return t;
}

// Samples used to evaluate the stage-j flux of a sweep at foreign times.
FluxSamples flux_samples(const DirichletSweep& d, const TimeGrid& grid, int j,
                         StageFluxTimes mode) {
  const int n = grid.n_steps;
  const int stages = static_cast<int>(d.stage_flux.size());
  FluxSamples fs;
  if (stages == 1 || mode == StageFluxTimes::step_end) {
    fs.times.resize(static_cast<std::size_t>(n) + 1);
    fs.values.resize(d.flux0.size(), n + 1);
    fs.times[0] = grid.t0;
    fs.values.col(0) = d.flux0;
    for (int k = 0; k < n; ++k) {
      fs.times[k + 1] = grid.point(k + 1);
      fs.values.col(k + 1) = d.stage_flux[j].col(k);
    }
    return fs;
  }
  // Both stages merged into one piecewise-linear flux history.
  fs.times.resize(2 * static_cast<std::size_t>(n) + 1);
  fs.values.resize(d.flux0.size(), 2 * n + 1);
  fs.times[0] = grid.t0;
  fs.values.col(0) = d.flux0;
  for (int k = 0; k < n; ++k) {
    fs.times[2 * k + 1] = grid.point(k) + SdirkCoeffs::a * grid.dt();
    fs.values.col(2 * k + 1) = d.stage_flux[0].col(k);
    fs.times[2 * k + 2] = grid.point(k + 1);
    fs.values.col(2 * k + 2) = d.stage_flux[1].col(k);
  }
  return fs;
}

// Stage-j flux of `other`, evaluated at the stage times of `own_grid`.
Matrix foreign_flux(const DirichletSweep& other, const TimeGrid& other_grid,
                    const TimeGrid& own_grid, Integrator integrator, int j, StageFluxTimes mode) {
  if (other_grid == own_grid) return other.stage_flux[j];
  const FluxSamples fs = flux_samples(other, other_grid, j, mode);
  const std::vector<double> q = stage_times(own_grid, integrator, j, mode);
  return transfer::interp_samples(fs.times, fs.values, q);
}

// Neumann sweep; returns the interface trajectory (column 0 = start value).
InterfaceTrace neumann_sweep(const SubdomainStepper& st, const Vector& state0,
                             const std::vector<Matrix>& stage_rhs, const TimeGrid& grid,
                             int owner) {
  const int n_i = st.op().interior_size();
  const int s = st.op().interface_size();
  InterfaceTrace tr = InterfaceTrace::zeros(grid, s, owner);
  tr.values.col(0) = state0.tail(s);
  Vector state = state0;
  std::vector<Vector> rhs(stage_rhs.size());
  for (int k = 0; k < grid.n_steps; ++k) {
    for (std::size_t j = 0; j < rhs.size(); ++j) rhs[j] = stage_rhs[j].col(k);
    stepping::StepResult r = st.neumann_step(state, rhs);
    state.head(n_i) = r.interior_state;
    state.tail(s) = r.interface_state;
    tr.values.col(k + 1) = r.interface_state;
  }
  return tr;
}

template <typename F1, typename F2>
auto run_pair(bool parallel, F1&& f1, F2&& f2) {
  if (!parallel) {
    auto a = f1();
    auto b = f2();
    return std::make_pair(std::move(a), std::move(b));
  }
  auto fut = std::async(std::launch::async, std::forward<F1>(f1));
  auto b = f2();
  auto a = fut.get();
  return std::make_pair(std::move(a), std::move(b));
}

class Coupling {
 public:
  explicit Coupling(const CouplingConfig& cfg)
      : cfg_(cfg),
        op_left_(fem::assemble(cfg.left, cfg.mesh, fem::Side::left)),
        op_right_(fem::assemble(cfg.right, cfg.mesh, fem::Side::right)),
        st_left_(op_left_, cfg.grid_left.dt(), cfg.integrator),
        st_right_(op_right_, cfg.grid_right.dt(), cfg.integrator),
        u0_(cfg.initial_state ? *cfg.initial_state : sample(cfg, op_left_, op_right_)) {
    if (u0_.left_interior.size() != op_left_.interior_size() ||
        u0_.right_interior.size() != op_right_.interior_size() ||
        u0_.interface.size() != op_left_.interface_size()) {
      throw std::invalid_argument("initial state does not match the mesh");
    }
  }

  static FullState sample(const CouplingConfig& cfg, const fem::SubdomainOperator& l,
                          const fem::SubdomainOperator& r) {
    if (!cfg.initial_condition) {
      throw std::invalid_argument("no initial condition or initial state given");
    }
    auto eval = [&](const std::vector<fem::Point>& nodes) {
      Vector v(static_cast<Eigen::Index>(nodes.size()));
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = cfg.initial_condition(nodes[i][0], nodes[i][1]);
      }
      return v;
    };
    return FullState{eval(l.interior_nodes), eval(l.interface_nodes), eval(r.interior_nodes)};
  }

  const FullState& u0() const { return u0_; }

  IterationReport nnwr(double theta) const {
    const auto t_start = std::chrono::steady_clock::now();
    const TimeGrid& g1 = cfg_.grid_left;
    const TimeGrid& g2 = cfg_.grid_right;
    IterationReport rep;
    rep.theta = theta;
    InterfaceTrace tr1 = guess_trace(cfg_, u0_, g1, 1);
    InterfaceTrace tr2 = guess_trace(cfg_, u0_, g2, 2);
    const int stages = st_left_.stage_count();
    const Vector zero_left = Vector::Zero(op_left_.interior_size() + op_left_.interface_size());
    const Vector zero_right = Vector::Zero(op_right_.interior_size() + op_right_.interface_size());

    for (int k = 1; k <= cfg_.max_iters; ++k) {
      auto [d1, d2] = run_pair(
          cfg_.parallel, [&] { return dirichlet_sweep(st_left_, u0_.left_interior, tr1); },
          [&] { return dirichlet_sweep(st_right_, u0_.right_interior, tr2); });

      std::vector<Matrix> f1(stages), f2(stages);
      for (int j = 0; j < stages; ++j) {
        f1[j] = d1.stage_flux[j] +
                foreign_flux(d2, g2, g1, cfg_.integrator, j, cfg_.stage_flux_times);
        f2[j] = d2.stage_flux[j] +
                foreign_flux(d1, g1, g2, cfg_.integrator, j, cfg_.stage_flux_times);
      }

      auto [p1, p2] =
          run_pair(cfg_.parallel, [&] { return neumann_sweep(st_left_, zero_left, f1, g1, 1); },
                   [&] { return neumann_sweep(st_right_, zero_right, f2, g2, 2); });

      InterfaceTrace next1 = interface_update(tr1, p1, transfer::interp_trace(g1, p2), theta);
      InterfaceTrace next2 = interface_update(tr2, p2, transfer::interp_trace(g2, p1), theta);
      const double norm = final_difference(next1, tr1);
      tr1 = std::move(next1);
      tr2 = std::move(next2);
      if (step_report(rep, k, norm)) break;
    }
    finish(rep, std::move(tr1), std::move(tr2), t_start);
    return rep;
  }

  IterationReport dnwr(double theta) const {
    const auto t_start = std::chrono::steady_clock::now();
    const TimeGrid& g1 = cfg_.grid_left;
    const TimeGrid& g2 = cfg_.grid_right;
    IterationReport rep;
    rep.theta = theta;
    InterfaceTrace tr2 = guess_trace(cfg_, u0_, g2, 2);
    const int stages = st_left_.stage_count();
    Vector state0(op_right_.interior_size() + op_right_.interface_size());
    state0 << u0_.right_interior, u0_.interface;

    for (int k = 1; k <= cfg_.max_iters; ++k) {
      const InterfaceTrace tr1 = transfer::interp_trace(g1, tr2);
      const DirichletSweep d1 = dirichlet_sweep(st_left_, u0_.left_interior, tr1);
      std::vector<Matrix> rhs(stages);
      for (int j = 0; j < stages; ++j) {
        rhs[j] = -foreign_flux(d1, g1, g2, cfg_.integrator, j, cfg_.stage_flux_times);
      }
      const InterfaceTrace u2 = neumann_sweep(st_right_, state0, rhs, g2, 2);
      InterfaceTrace next{g2, theta * u2.values + (1.0 - theta) * tr2.values, 2};
      const double norm = final_difference(next, tr2);
      tr2 = std::move(next);
      if (step_report(rep, k, norm)) break;
    }
    InterfaceTrace tr1 = transfer::interp_trace(g1, tr2);
    tr1.owner = 1;
    finish(rep, std::move(tr1), std::move(tr2), t_start);
    return rep;
  }

 private:
  // Records one update norm; true when the iteration should stop.
  bool step_report(IterationReport& rep, int k, double norm) const {
    rep.iterations = k;
    rep.update_norms.push_back(norm);
    if (norm <= cfg_.tol) {
      rep.converged = true;
      return true;
    }
    if (!std::isfinite(norm) || norm > cfg_.divergence_limit) {
      rep.diverged = true;
      return true;
    }
    return false;
  }

  void finish(IterationReport& rep, InterfaceTrace tr1, InterfaceTrace tr2,
              std::chrono::steady_clock::time_point t_start) const {
    if (!rep.diverged) {
      auto [d1, d2] = run_pair(
          cfg_.parallel, [&] { return dirichlet_sweep(st_left_, u0_.left_interior, tr1); },
          [&] { return dirichlet_sweep(st_right_, u0_.right_interior, tr2); });
      rep.final_state = FullState{d1.interior.back(), tr1.final_column(), d2.interior.back()};
    }
    rep.trace_left = std::move(tr1);
    rep.trace_right = std::move(tr2);
    rep.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  }

  const CouplingConfig& cfg_;
  fem::SubdomainOperator op_left_;
  fem::SubdomainOperator op_right_;
  SubdomainStepper st_left_;
  SubdomainStepper st_right_;
  FullState u0_;
};

}  // namespace

Vector FullState::stacked() const {
  Vector v(left_interior.size() + interface.size() + right_interior.size());
  v << left_interior, interface, right_interior;
  return v;
}

void validate(const CouplingConfig& cfg) {
  if (!cfg.grid_left.same_span(cfg.grid_right)) {
    throw std::invalid_argument("subdomain time grids must share the time window");
  }
  if (cfg.grid_left.n_steps < 1 || cfg.grid_right.n_steps < 1) {
    throw std::invalid_argument("time grids need at least one step");
  }
  if (cfg.theta && !(*cfg.theta > 0.0 && *cfg.theta <= 1.0)) {
    throw std::invalid_argument("theta must lie in (0, 1]");
  }
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  (void)fem::MeshSpec::make(cfg.mesh.dim, cfg.mesh.n_cells);
}

double resolve_theta(const CouplingConfig& cfg) {
  if (cfg.theta) return *cfg.theta;
  if (cfg.method == Method::dnwr) return 0.5;
  const double dt = std::max(cfg.grid_left.dt(), cfg.grid_right.dt());
  return theory::theta_opt_1d(cfg.left, cfg.right, dt, cfg.mesh.dx(), cfg.mesh.n_cells - 1);
}

FullState initial_state(const CouplingConfig& cfg) {
  if (cfg.initial_state) return *cfg.initial_state;
  const auto l = fem::assemble(cfg.left, cfg.mesh, fem::Side::left);
  const auto r = fem::assemble(cfg.right, cfg.mesh, fem::Side::right);
  return Coupling::sample(cfg, l, r);
}

IterationReport nnwr_solve(const CouplingConfig& cfg) {
  validate(cfg);
  if (cfg.method != Method::nnwr) throw std::invalid_argument("config is not an NNWR config");
  const Coupling c(cfg);
  return c.nnwr(resolve_theta(cfg));
}

IterationReport dnwr_solve(const CouplingConfig& cfg) {
  validate(cfg);
  if (cfg.method != Method::dnwr) throw std::invalid_argument("config is not a DNWR config");
  const Coupling c(cfg);
  return c.dnwr(resolve_theta(cfg));
}

IterationReport solve(const CouplingConfig& cfg) {
  return cfg.method == Method::nnwr ? nnwr_solve(cfg) : dnwr_solve(cfg);
}

std::vector<IterationReport> solve_windows(const CouplingConfig& cfg, int windows) {
  if (windows < 1) throw std::invalid_argument("need at least one window");
  std::vector<IterationReport> out;
  CouplingConfig w = cfg;
  const double len = cfg.grid_left.tf - cfg.grid_left.t0;
  for (int i = 0; i < windows; ++i) {
    const double t0 = cfg.grid_left.t0 + i * len;
    const double tf = cfg.grid_left.t0 + (i + 1) * len;
    w.grid_left = TimeGrid::make(t0, tf, cfg.grid_left.n_steps);
    w.grid_right = TimeGrid::make(t0, tf, cfg.grid_right.n_steps);
    out.push_back(solve(w));
    if (out.back().diverged) break;
    w.initial_state = out.back().final_state;
    w.initial_guess = nullptr;
  }
  return out;
}

InterfaceTrace interface_update(const InterfaceTrace& g_old, const InterfaceTrace& psi_own,
                                const InterfaceTrace& psi_other_interp, double theta) {
  if (!(g_old.grid == psi_own.grid) || !(g_old.grid == psi_other_interp.grid)) {
    throw std::invalid_argument("interface update needs traces on one grid");
  }
  return InterfaceTrace{g_old.grid,
                        g_old.values - theta * (psi_own.values + psi_other_interp.values),
                        g_old.owner};
}

double final_difference(const InterfaceTrace& trace_new, const InterfaceTrace& trace_old) {
  if (trace_new.values.rows() != trace_old.values.rows()) {
    throw std::invalid_argument("traces have different interface sizes");
  }
  return (trace_new.final_column() - trace_old.final_column()).norm();
}

bool termination_check(const InterfaceTrace& trace_new, const InterfaceTrace& trace_old,
                       double tol) {
  return final_difference(trace_new, trace_old) <= tol;
}

}  // namespace wrcouple::waveform
