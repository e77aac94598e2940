#include "wrcouple/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "wrcouple/theory.hpp"

namespace wrcouple::experiments {

namespace {

using stepping::Integrator;
using stepping::TimeGrid;
using waveform::Method;

const char* integrator_name(Integrator i) { return i == Integrator::euler ? "euler" : "sdirk2"; }
const char* method_name(Method m) { return m == Method::nnwr ? "nnwr" : "dnwr"; }

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

void write_file(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + path);
  f << text;
  if (!f) throw std::runtime_error("failed writing output file " + path);
}

std::string join_row(std::initializer_list<std::string> cells) {
  std::string row;
  for (const std::string& c : cells) {
    if (!row.empty()) row += ',';
    row += c;
  }
  row += '\n';
  return row;
}

int mesh_cells(double dx) { return fem::MeshSpec::from_dx(1, dx).n_cells; }

double theta_opt_for(const ExperimentSpec& spec, double dt) {
  const int n = mesh_cells(spec.dx);
  return theory::theta_opt_1d(spec.left, spec.right, dt, 1.0 / n, n - 1);
}

std::string summary_line(const std::string& label, const waveform::IterationReport& r) {
  std::ostringstream os;
  os << label << " iterations=" << r.iterations << " converged=" << (r.converged ? 1 : 0)
     << " theta=" << format_double(r.theta) << " wall_time_s=" << format_double(r.wall_time);
  return os.str();
}

ExperimentResult error_study(const ExperimentSpec& spec) {
  if (spec.levels < 2) throw std::invalid_argument("error study needs at least two levels");
  const double dt_c = std::max(spec.dt_left, spec.dt_right);
  const double dt_f = std::min(spec.dt_left, spec.dt_right);
  const bool fine_left = spec.left.lambda_cond > spec.right.lambda_cond;

  const fem::MeshSpec mesh = fem::MeshSpec::from_dx(spec.dim, spec.dx);
  const auto mono = fem::assemble_monolithic(spec.left, spec.right, mesh);
  waveform::CouplingConfig base = make_config(spec, dt_c, dt_c);
  const Vector u0 = waveform::initial_state(base).stacked();
  const auto ref_grid = TimeGrid::from_step(spec.t0, spec.t_end, spec.dt_reference);
  const Vector reference = stepping::monolithic_solve(mono, u0, ref_grid, Integrator::sdirk2).back();

  ExperimentResult res;
  res.csv = "level,dt1,dt2,integrator,error\n";
  std::vector<double> steps[3], errors[3];
  static constexpr const char* labels[3] = {"C-C", "C-F", "F-F"};
  for (int level = 0; level < spec.levels; ++level) {
    const double scale = std::ldexp(1.0, -level);
    const double hc = dt_c * scale;
    const double hf = dt_f * scale;
    const std::pair<double, double> grids[3] = {
        {hc, hc}, fine_left ? std::pair{hf, hc} : std::pair{hc, hf}, {hf, hf}};
    for (int g = 0; g < 3; ++g) {
      const auto [d1, d2] = grids[g];
      const waveform::IterationReport rep = waveform::solve(make_config(spec, d1, d2));
      res.all_converged = res.all_converged && rep.converged;
      const double err = rep.diverged ? std::numeric_limits<double>::infinity()
                                      : error_vs_reference(rep.final_state.stacked(), reference,
                                                           mesh.dx(), mesh.dim);
      steps[g].push_back(std::max(d1, d2));
      errors[g].push_back(err);
      res.csv += join_row({std::to_string(level), format_double(d1), format_double(d2),
                           integrator_name(spec.integrator), format_double(err)});
      res.summary.push_back(summary_line(std::string(labels[g]) + " level=" +
                                             std::to_string(level) +
                                             " error=" + format_double(err),
                                         rep));
    }
  }
  for (int g = 0; g < 3; ++g) {
    res.slopes.push_back(fit_loglog_slope(steps[g], errors[g]));
    res.summary.push_back(std::string(labels[g]) + " slope=" + format_double(res.slopes.back()));
  }
  return res;
}

ExperimentResult theta_sweep(const ExperimentSpec& spec) {
  if (spec.theta_count < 1) throw std::invalid_argument("theta sweep needs at least one value");
  const double scale =
      spec.theta_relative ? theta_opt_for(spec, std::max(spec.dt_left, spec.dt_right)) : 1.0;
  ExperimentResult res;
  res.csv = "theta,rate,iterations,converged\n";
  for (int i = 0; i < spec.theta_count; ++i) {
    const double f = spec.theta_count == 1
                         ? spec.theta_min
                         : spec.theta_min + (spec.theta_max - spec.theta_min) * i /
                                                (spec.theta_count - 1);
    waveform::CouplingConfig cfg = make_config(spec, spec.dt_left, spec.dt_right);
    cfg.theta = f * scale;
    const RateMeasurement m = measure_convergence_rate(cfg);
    res.all_converged = res.all_converged && m.converged;
    res.csv += join_row({format_double(*cfg.theta), format_double(m.rate),
                         std::to_string(m.iterations), m.converged ? "1" : "0"});
    res.summary.push_back("theta=" + format_double(*cfg.theta) + " rate=" + format_double(m.rate) +
                          " iterations=" + std::to_string(m.iterations));
  }
  return res;
}

ExperimentResult ratio_sweep(const ExperimentSpec& spec) {
  const auto pairs = spec.ratios.empty() ? default_ratios() : spec.ratios;
  ExperimentResult res;
  res.csv = "dt1,dt2,theta_source,rate,iterations\n";
  for (const auto& [d1, d2] : pairs) {
    for (const char* source : {"dt1", "dt2"}) {
      waveform::CouplingConfig cfg = make_config(spec, d1, d2);
      cfg.theta = theta_opt_for(spec, source[2] == '1' ? d1 : d2);
      const RateMeasurement m = measure_convergence_rate(cfg);
      res.all_converged = res.all_converged && m.converged;
      res.csv += join_row({format_double(d1), format_double(d2), source, format_double(m.rate),
                           std::to_string(m.iterations)});
      res.summary.push_back("dt1=" + format_double(d1) + " dt2=" + format_double(d2) +
                            " theta_source=" + source + " rate=" + format_double(m.rate));
    }
  }
  return res;
}

ExperimentResult theta_vs_c(const ExperimentSpec& spec) {
  if (spec.dt_exp_max < spec.dt_exp_min) throw std::invalid_argument("empty dt range");
  const theory::ThetaLimits lim = theory::theta_limits(spec.left, spec.right);
  const int n = mesh_cells(spec.dx);
  const double dx = 1.0 / n;
  ExperimentResult res;
  res.csv = "c,theta_opt,theta_limit_temporal,theta_limit_spatial\n";
  for (int e = spec.dt_exp_min; e <= spec.dt_exp_max; ++e) {
    const double dt = std::pow(10.0, e);
    const double th = theory::theta_opt_1d(spec.left, spec.right, dt, dx, n - 1);
    res.csv += join_row({format_double(dt / (dx * dx)), format_double(th),
                         format_double(lim.temporal), format_double(lim.spatial)});
  }
  res.summary.push_back("theta_limit_temporal=" + format_double(lim.temporal) +
                        " theta_limit_spatial=" + format_double(lim.spatial));
  return res;
}

ExperimentResult method_comparison(const ExperimentSpec& spec) {
  ExperimentResult res;
  res.csv = "method,dt1,dt2,iterations,converged,wall_time_s\n";
  for (const Method m : {Method::nnwr, Method::dnwr}) {
    waveform::CouplingConfig cfg = make_config(spec, spec.dt_left, spec.dt_right);
    cfg.method = m;
    if (m == Method::dnwr) cfg.theta = spec.theta_dnwr;
    const auto reps = waveform::solve_windows(cfg, spec.windows);
    int iters = 0;
    bool conv = true;
    double wall = 0.0;
    for (const auto& r : reps) {
      iters += r.iterations;
      conv = conv && r.converged;
      wall += r.wall_time;
    }
    res.all_converged = res.all_converged && conv;
    res.csv += join_row({method_name(m), format_double(spec.dt_left),
                         format_double(spec.dt_right), std::to_string(iters), conv ? "1" : "0",
                         format_double(wall)});
    res.summary.push_back(summary_line(method_name(m), reps.back()) +
                          " total_iterations=" + std::to_string(iters));
  }
  return res;
}

}  // namespace

Material material_lookup(const std::string& name) {
  if (name == "air") return Material::make("air", 0.0243, 1.293, 1005);
  if (name == "water") return Material::make("water", 0.58, 999.7, 4192.1);
  if (name == "steel") return Material::make("steel", 48.9, 7836, 443);
  if (std::count(name.begin(), name.end(), ',') == 2) {
    const auto a = name.find(',');
    const auto b = name.find(',', a + 1);
    return Material::make(name, parse_number(name.substr(0, a)),
                          parse_number(name.substr(a + 1, b - a - 1)),
                          parse_number(name.substr(b + 1)));
  }
  std::string known;
  for (const auto& n : material_names()) known += (known.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown material '" + name + "' (available: " + known +
                              ", or lambda,rho,cp)");
}

std::vector<std::string> material_names() { return {"air", "water", "steel"}; }

waveform::InitialCondition default_initial_condition(int dim, double amplitude) {
  if (dim == 1) {
    return [amplitude](double x, double) {
      return amplitude * std::sin(std::numbers::pi * (x + 1.0) / 2.0);
    };
  }
  return [amplitude](double x, double y) {
    return amplitude * std::sin(std::numbers::pi * (x + 1.0) / 2.0) *
           std::sin(std::numbers::pi * y);
  };
}

double error_vs_reference(const Vector& solution, const Vector& reference, double dx, int dim) {
  if (solution.size() != reference.size()) {
    throw std::invalid_argument("solution and reference have different sizes");
  }
  return std::sqrt(std::pow(dx, dim) * (solution - reference).squaredNorm());
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("slope fit needs two or more paired samples");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double rate_from_norms(const std::vector<double>& d) {
  if (d.size() < 3) return 0.0;
  const double first = d[1];
  const double last = d.back();
  if (first == 0.0) return 0.0;
  return std::pow(last / first, 1.0 / static_cast<double>(d.size() - 2));
}

RateMeasurement measure_convergence_rate(const waveform::CouplingConfig& cfg) {
  const waveform::IterationReport r = waveform::solve(cfg);
  return {rate_from_norms(r.update_norms), r.iterations, r.converged, r.diverged};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Kind parse_kind(const std::string& s) {
  if (s == "error_study") return Kind::error_study;
  if (s == "theta_sweep") return Kind::theta_sweep;
  if (s == "ratio_sweep") return Kind::ratio_sweep;
  if (s == "theta_vs_c") return Kind::theta_vs_c;
  if (s == "method_comparison") return Kind::method_comparison;
  throw std::invalid_argument("unknown experiment kind '" + s + "'");
}

std::string to_string(Kind k) {
  switch (k) {
    case Kind::error_study: return "error_study";
    case Kind::theta_sweep: return "theta_sweep";
    case Kind::ratio_sweep: return "ratio_sweep";
    case Kind::theta_vs_c: return "theta_vs_c";
    case Kind::method_comparison: return "method_comparison";
  }
  return "unknown";
}

std::vector<std::pair<double, double>> default_ratios() {
  return {{1e-3, 2e-1}, {2e-3, 2e-1}, {1e-2, 2e-1}, {2e-2, 2e-1}, {5e-2, 2e-1},
          {1e-1, 2e-1}, {2e-1, 2e-1}, {2e-1, 1e-1}, {2e-1, 5e-2}, {2e-1, 2e-2},
          {2e-1, 1e-2}, {2e-1, 2e-3}, {2e-1, 1e-3}};
}

waveform::CouplingConfig make_config(const ExperimentSpec& spec, double dt_left,
                                     double dt_right) {
  waveform::CouplingConfig cfg;
  cfg.left = spec.left;
  cfg.right = spec.right;
  cfg.mesh = fem::MeshSpec::from_dx(spec.dim, spec.dx);
  cfg.grid_left = TimeGrid::from_step(spec.t0, spec.t_end, dt_left);
  cfg.grid_right = TimeGrid::from_step(spec.t0, spec.t_end, dt_right);
  cfg.theta = spec.theta;
  cfg.integrator = spec.integrator;
  cfg.method = spec.method;
  cfg.tol = spec.tol;
  cfg.max_iters = spec.max_iters;
  cfg.initial_condition = default_initial_condition(spec.dim, spec.ic_amplitude);
  cfg.parallel = spec.parallel;
  return cfg;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.dim != 1 && spec.dim != 2) throw std::invalid_argument("dim must be 1 or 2");
  if (!(spec.t_end > spec.t0)) throw std::invalid_argument("t_end must exceed t0");
  if (spec.windows < 1) throw std::invalid_argument("windows must be at least 1");
  ExperimentResult res;
  switch (spec.kind) {
    case Kind::error_study: res = error_study(spec); break;
    case Kind::theta_sweep: res = theta_sweep(spec); break;
    case Kind::ratio_sweep: res = ratio_sweep(spec); break;
    case Kind::theta_vs_c: res = theta_vs_c(spec); break;
    case Kind::method_comparison: res = method_comparison(spec); break;
  }
  write_file(spec.out, res.csv);
  return res;
}

}  // namespace wrcouple::experiments
