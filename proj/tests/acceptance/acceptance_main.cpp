// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status is
// the number of failed criteria. `--criterion N` runs a single one.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "wrcouple/experiments.hpp"
#include "wrcouple/theory.hpp"
#include "wrcouple/waveform.hpp"

using namespace wrcouple;
namespace ex = wrcouple::experiments;
namespace wf = wrcouple::waveform;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[fail] ";
    }
    detail << what << "; ";
  }
};

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // s
  std::function<void(Outcome&)> run;
};

const Material air = ex::material_lookup("air");
const Material water = ex::material_lookup("water");
const Material steel = ex::material_lookup("steel");

ex::ExperimentSpec spec_1d(const Material& l, const Material& r, double dx) {
  ex::ExperimentSpec s;
  s.left = l;
  s.right = r;
  s.dx = dx;
  return s;
}

wf::IterationReport run(ex::ExperimentSpec s, double dt1, double dt2, wf::Method m,
                        std::optional<double> theta) {
  s.method = m;
  s.theta = theta;
  return wf::solve(ex::make_config(s, dt1, dt2));
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

void optimal_theta_fast_convergence(Outcome& o) {
  const std::pair<Material, Material> pairs[] = {{steel, steel}, {air, steel}, {air, water}};
  for (const auto& [l, r] : pairs) {
    for (double dt : {1e-2, 1.0, 1e2}) {
      ex::ExperimentSpec s = spec_1d(l, r, 0.01);
      s.t_end = dt;
      s.tol = 1e-10;
      const auto rep = run(s, dt, dt, wf::Method::nnwr, std::nullopt);
      o.require(rep.converged && rep.iterations <= 2,
                l.name + "-" + r.name + " dt=" + num(dt) + " it=" +
                    std::to_string(rep.iterations));
    }
  }
}

void conforming_iteration_counts(Outcome& o) {
  const ex::ExperimentSpec s = spec_1d(steel, steel, 1.0 / 500);
  for (double dt : {1.0, 0.1, 0.02, 0.01}) {
    const auto n = run(s, dt, dt, wf::Method::nnwr, 0.25);
    const auto d = run(s, dt, dt, wf::Method::dnwr, 0.5);
    o.require(n.converged && n.iterations == 2 && d.converged && d.iterations == 2,
              "dt=" + num(dt) + " nnwr=" + std::to_string(n.iterations) +
                  " dnwr=" + std::to_string(d.iterations));
  }
}

void steel_steel_multirate_counts(Outcome& o) {
  ex::ExperimentSpec s = spec_1d(steel, steel, 1.0 / 500);
  s.max_iters = 200;
  struct Row {
    double dt2;
    std::function<bool(const wf::IterationReport&)> dnwr_ok;
    const char* expect;
  };
  const Row rows[] = {
      {0.1, [](const auto& r) { return r.converged && std::abs(r.iterations - 6) <= 1; }, "6+-1"},
      {0.02,
       [](const auto& r) { return r.converged && std::abs(r.iterations - 71) <= 0.1 * 71; },
       "71+-10%"},
      {0.01, [](const auto& r) { return !r.converged; }, "no convergence in 200"},
  };
  for (const Row& row : rows) {
    const auto n = run(s, 0.2, row.dt2, wf::Method::nnwr, std::nullopt);
    const auto d = run(s, 0.2, row.dt2, wf::Method::dnwr, 0.5);
    o.require(n.converged && std::abs(n.iterations - 3) <= 1,
              "dt2=" + num(row.dt2) + " nnwr=" + std::to_string(n.iterations) + " (3+-1)");
    o.require(row.dnwr_ok(d), "dt2=" + num(row.dt2) + " dnwr=" + std::to_string(d.iterations) +
                                  (d.converged ? "" : " unconverged") + " (" + row.expect + ")");
  }
}

void air_steel_multirate_counts(Outcome& o) {
  const ex::ExperimentSpec s = spec_1d(air, steel, 1.0 / 500);
  const std::pair<double, int> rows[] = {{0.1, 3}, {0.02, 4}, {0.01, 4}};
  for (const auto& [dt2, expected] : rows) {
    const auto n = run(s, 0.2, dt2, wf::Method::nnwr, std::nullopt);
    const auto d = run(s, 0.2, dt2, wf::Method::dnwr, 0.5);
    o.require(n.converged && std::abs(n.iterations - expected) <= 1,
              "dt2=" + num(dt2) + " nnwr=" + std::to_string(n.iterations) + " (" +
                  std::to_string(expected) + "+-1)");
    o.require(d.converged && std::abs(d.iterations - 12) <= 2,
              "dt2=" + num(dt2) + " dnwr=" + std::to_string(d.iterations) + " (12+-2)");
  }
}

void convergence_orders(Outcome& o) {
  struct Case {
    Material right;
    stepping::Integrator integ;
    double order, tol;
  };
  const Case cases[] = {{water, stepping::Integrator::sdirk2, 2.0, 0.2},
                        {steel, stepping::Integrator::euler, 1.0, 0.15}};
  for (const Case& c : cases) {
    ex::ExperimentSpec s = spec_1d(air, c.right, 1.0 / 200);
    s.kind = ex::Kind::error_study;
    s.integrator = c.integ;
    s.dt_left = 0.1;
    s.dt_right = 0.01;
    s.levels = 4;
    s.dt_reference = 1e-3;
    s.tol = 1e-10;
    s.max_iters = 100;
    const ex::ExperimentResult r = ex::run_experiment(s);
    const std::string label = "air-" + c.right.name + " ";
    o.require(r.all_converged, label + "all runs converged");
    o.require(std::abs(r.slopes[0] - c.order) <= c.tol, label + "C-C slope=" + num(r.slopes[0]));
    o.require(std::abs(r.slopes[1] - c.order) <= c.tol, label + "C-F slope=" + num(r.slopes[1]));

    // Rows come in (C-C, C-F, F-F) triples per level.
    std::istringstream csv(r.csv);
    std::string line;
    std::getline(csv, line);
    std::vector<double> err;
    while (std::getline(csv, line)) err.push_back(std::stod(line.substr(line.rfind(',') + 1)));
    double worst = 0.0;
    for (std::size_t lvl = 0; lvl + 2 < err.size(); lvl += 3) {
      worst = std::max(worst, std::abs(err[lvl + 1] - err[lvl]) / err[lvl]);
    }
    o.require(worst <= 0.15, label + "max |C-F/C-C - 1|=" + num(worst));
  }
}

void rate_prediction(Outcome& o) {
  const int cells = 100;
  const double dt = 100.0;
  ex::ExperimentSpec s = spec_1d(air, water, 1.0 / cells);
  s.t_end = dt;
  s.tol = 1e-13;
  s.max_iters = 200;
  const auto l = fem::assemble_1d(air, fem::MeshSpec::make(1, cells), fem::Side::left);
  const auto r = fem::assemble_1d(water, fem::MeshSpec::make(1, cells), fem::Side::right);
  const double topt = theory::theta_opt_1d(air, water, dt, 1.0 / cells, cells - 1);
  double worst = 0.0;
  for (double f : {0.5, 0.625, 0.75, 0.875, 0.9, 1.1, 1.25, 1.375, 1.5}) {
    s.theta = f * topt;
    const double predicted = theory::sigma_rate(l, r, dt, *s.theta).sigma_radius;
    const ex::RateMeasurement m = ex::measure_convergence_rate(ex::make_config(s, dt, dt));
    worst = std::max(worst, std::abs(m.rate - predicted) / predicted);
  }
  o.require(worst <= 0.05, "9 off-optimal values, max relative deviation=" + num(worst));
  s.theta = topt;
  const ex::RateMeasurement m = ex::measure_convergence_rate(ex::make_config(s, dt, dt));
  o.require(m.rate <= 1e-6, "rate at optimum=" + num(m.rate));
}

void sine_square_identity(Outcome& o) {
  for (int n : {1, 3, 10, 100, 9999}) {
    const double v = theory::sin2_sum(n);
    o.require(std::abs(v - (n + 1) / 2.0) <= 1e-9, "N=" + std::to_string(n) + " sum=" + num(v));
  }
}

void eigen_sum_oracle(Outcome& o) {
  double worst = 0.0;
  for (const Material& m : {air, water, steel}) {
    for (double dt : {1e-3, 1.0, 1e3}) {
      for (int n = 1; n <= 50; ++n) {
        const auto op = fem::assemble_1d(m, fem::MeshSpec::make(1, n + 1), fem::Side::left);
        const Eigen::MatrixXd shifted =
            Eigen::MatrixXd(op.m_ii) / dt + Eigen::MatrixXd(op.a_ii);
        const double corner = shifted.inverse()(n - 1, n - 1);
        const double closed =
            theory::s_sum(m, dt, 1.0 / (n + 1), n) / theory::sin2_sum(n);
        worst = std::max(worst, std::abs(closed - corner) / std::abs(corner));
      }
    }
  }
  o.require(worst <= 1e-10, "max relative deviation=" + num(worst));
}

void theta_asymptotics(Outcome& o) {
  const double dx = 0.01;
  const std::pair<Material, Material> pairs[] = {{water, steel}, {air, water}};
  for (const auto& [l, r] : pairs) {
    const theory::ThetaLimits lim = theory::theta_limits(l, r);
    const std::string label = l.name + "-" + r.name + " ";
    const double small = theory::theta_opt_1d(l, r, 1e-9, dx, 99);
    const double large = theory::theta_opt_1d(l, r, 1e9, dx, 99);
    o.require(std::abs(small - lim.temporal) <= 1e-3 * lim.temporal,
              label + "dt=1e-9 " + num(small) + " vs " + num(lim.temporal));
    o.require(std::abs(large - lim.spatial) <= 1e-3 * lim.spatial,
              label + "dt=1e9 " + num(large) + " vs " + num(lim.spatial));
    const double lo = std::min(lim.temporal, lim.spatial), hi = std::max(lim.temporal, lim.spatial);
    bool between = true;
    for (int e = -9; e <= 9; ++e) {
      const double t = theory::theta_opt_1d(l, r, std::pow(10.0, e), dx, 99);
      between = between && t >= lo * (1 - 1e-12) && t <= hi * (1 + 1e-12);
    }
    o.require(between, label + "optimum between the limits for all decades");
  }
}

void monolithic_equivalence(Outcome& o) {
  for (int dim : {1, 2}) {
    for (const Material& right : {steel, water}) {
      ex::ExperimentSpec s = spec_1d(air, right, 0.1);
      s.dim = dim;
      s.tol = 1e-8;
      wf::CouplingConfig cfg = ex::make_config(s, 0.1, 0.1);
      const wf::IterationReport rep = wf::solve(cfg);
      const auto mono = fem::assemble_monolithic(cfg.left, cfg.right, cfg.mesh);
      const stepping::Vector ref = stepping::monolithic_solve(mono, wf::initial_state(cfg).stacked(),
                                                    cfg.grid_left, cfg.integrator)
                             .back();
      const double diff = (rep.final_state.stacked() - ref).cwiseAbs().maxCoeff();
      o.require(rep.converged && diff <= 10 * s.tol,
                std::to_string(dim) + "D air-" + right.name + " max diff=" + num(diff));
    }
  }
}

void theta_estimate_2d(Outcome& o) {
  for (const Material& right : {steel, water}) {
    for (const auto& [dt1, dt2, label] :
         {std::tuple{0.1, 0.1, "C-C"}, std::tuple{0.1, 0.02, "C-F"}}) {
      ex::ExperimentSpec s = spec_1d(air, right, 0.1);
      s.dim = 2;
      s.tol = 1e-10;
      s.max_iters = 100;
      const wf::CouplingConfig cfg = ex::make_config(s, dt1, dt2);
      const double topt = wf::resolve_theta(cfg);
      const ex::RateMeasurement good = ex::measure_convergence_rate(cfg);
      wf::CouplingConfig bad_cfg = cfg;
      bad_cfg.theta = 2.5 * topt;
      const ex::RateMeasurement bad = ex::measure_convergence_rate(bad_cfg);
      const std::string tag = "air-" + right.name + " " + label + " ";
      o.require(good.converged && good.rate < 1.0, tag + "rate=" + num(good.rate));
      o.require(!bad.converged && bad.rate > 1.0, tag + "2.5x rate=" + num(bad.rate));
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  const std::vector<Criterion> criteria = {
      {1, "optimal theta fast convergence", 1.0, optimal_theta_fast_convergence},
      {2, "conforming steel-steel iteration counts", 10.0, conforming_iteration_counts},
      {3, "steel-steel multirate iteration counts", 60.0, steel_steel_multirate_counts},
      {4, "air-steel multirate iteration counts", 60.0, air_steel_multirate_counts},
      {5, "convergence orders", 120.0, convergence_orders},
      {6, "rate prediction", 30.0, rate_prediction},
      {7, "sine square identity", 1.0, sine_square_identity},
      {8, "eigen-sum oracle", 5.0, eigen_sum_oracle},
      {9, "theta asymptotics", 5.0, theta_asymptotics},
      {10, "monolithic equivalence", 30.0, monolithic_equivalence},
      {11, "2D theta estimate", 120.0, theta_estimate_2d},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < c.time_limit, "runtime " + num(secs) + " s (limit " + num(c.time_limit) + ")");
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.str().c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed;
}
