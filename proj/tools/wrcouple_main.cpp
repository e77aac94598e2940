#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wrcouple/experiments.hpp"
#include "wrcouple/theory.hpp"

namespace ex = wrcouple::experiments;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_not_converged = 2;

std::vector<std::pair<double, double>> parse_ratios(const std::string& text) {
  std::vector<std::pair<double, double>> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    const std::string item = text.substr(pos, end - pos);
    const std::size_t slash = item.find('/');
    if (slash == std::string::npos) {
      throw std::invalid_argument("ratio '" + item + "' is not of the form dt1/dt2");
    }
    out.emplace_back(std::stod(item.substr(0, slash)), std::stod(item.substr(slash + 1)));
    pos = end + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multirate waveform relaxation for two coupled heat equations"};
  app.require_subcommand(1);

  std::string kind, mat_left = "air", mat_right = "steel", theta = "auto";
  std::string integrator = "euler", method = "nnwr", ratios;
  ex::ExperimentSpec spec;
  bool theta_absolute = false;
  bool sequential = false;

  CLI::App* run = app.add_subcommand("run", "Run one experiment and write its CSV");
  run->add_option("--experiment", kind,
                  "error_study | theta_sweep | ratio_sweep | theta_vs_c | method_comparison")
      ->required();
  run->add_option("--material-left", mat_left, "air | water | steel | lambda,rho,cp");
  run->add_option("--material-right", mat_right, "air | water | steel | lambda,rho,cp");
  run->add_option("--dim", spec.dim, "1 or 2");
  run->add_option("--dx", spec.dx, "cell size");
  run->add_option("--dt-left", spec.dt_left, "time step on the left subdomain");
  run->add_option("--dt-right", spec.dt_right, "time step on the right subdomain");
  run->add_option("--t0", spec.t0);
  run->add_option("--t-end", spec.t_end);
  run->add_option("--theta", theta, "auto or a value in (0, 1]");
  run->add_option("--integrator", integrator, "euler | sdirk2");
  run->add_option("--method", method, "nnwr | dnwr (theta_sweep, ratio_sweep, error_study)");
  run->add_option("--tol", spec.tol);
  run->add_option("--max-iters", spec.max_iters);
  run->add_option("--out", spec.out, "CSV output path");
  run->add_option("--windows", spec.windows, "number of consecutive time windows");
  run->add_option("--levels", spec.levels, "error_study refinement levels");
  run->add_option("--dt-reference", spec.dt_reference, "error_study reference step");
  run->add_option("--theta-min", spec.theta_min, "theta_sweep lower end");
  run->add_option("--theta-max", spec.theta_max, "theta_sweep upper end");
  run->add_option("--theta-count", spec.theta_count, "theta_sweep sample count");
  run->add_flag("--theta-absolute", theta_absolute,
                "theta_sweep range is absolute rather than a multiple of the optimum");
  run->add_option("--ratios", ratios, "ratio_sweep pairs, e.g. 1e-3/2e-1,2e-1/1e-3");
  run->add_option("--dt-exp-min", spec.dt_exp_min, "theta_vs_c smallest decade");
  run->add_option("--dt-exp-max", spec.dt_exp_max, "theta_vs_c largest decade");
  run->add_option("--theta-dnwr", spec.theta_dnwr, "method_comparison DNWR relaxation");
  run->add_option("--ic-amplitude", spec.ic_amplitude, "amplitude of the initial temperature");
  run->add_flag("--sequential", sequential, "run subdomain sweeps on one thread");

  double t_dx = 0.01, t_dt = 1.0;
  CLI::App* th = app.add_subcommand("theta", "Print the optimal relaxation parameter and its limits");
  th->add_option("--material-left", mat_left);
  th->add_option("--material-right", mat_right);
  th->add_option("--dx", t_dx);
  th->add_option("--dt", t_dt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_invalid;
  }

  try {
    const wrcouple::Material left = ex::material_lookup(mat_left);
    const wrcouple::Material right = ex::material_lookup(mat_right);

    if (*th) {
      const auto mesh = wrcouple::fem::MeshSpec::from_dx(1, t_dx);
      const double opt =
          wrcouple::theory::theta_opt_1d(left, right, t_dt, mesh.dx(), mesh.n_cells - 1);
      const auto lim = wrcouple::theory::theta_limits(left, right);
      std::cout << "theta_opt=" << ex::format_double(opt) << '\n'
                << "theta_limit_temporal=" << ex::format_double(lim.temporal) << '\n'
                << "theta_limit_spatial=" << ex::format_double(lim.spatial) << '\n';
      return exit_ok;
    }

    spec.kind = ex::parse_kind(kind);
    spec.left = left;
    spec.right = right;
    if (theta != "auto") spec.theta = std::stod(theta);
    if (integrator == "euler") {
      spec.integrator = wrcouple::stepping::Integrator::euler;
    } else if (integrator == "sdirk2") {
      spec.integrator = wrcouple::stepping::Integrator::sdirk2;
    } else {
      throw std::invalid_argument("unknown integrator '" + integrator + "'");
    }
    if (method == "nnwr") {
      spec.method = wrcouple::waveform::Method::nnwr;
    } else if (method == "dnwr") {
      spec.method = wrcouple::waveform::Method::dnwr;
    } else {
      throw std::invalid_argument("unknown method '" + method + "'");
    }
    spec.theta_relative = !theta_absolute;
    spec.parallel = !sequential;
    if (!ratios.empty()) spec.ratios = parse_ratios(ratios);

    const ex::ExperimentResult res = ex::run_experiment(spec);
    for (const std::string& line : res.summary) std::cout << line << '\n';
    const bool sweep = spec.kind == ex::Kind::theta_sweep || spec.kind == ex::Kind::ratio_sweep ||
                       spec.kind == ex::Kind::theta_vs_c;
    return res.all_converged || sweep ? exit_ok : exit_not_converged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_invalid;
  }
}
