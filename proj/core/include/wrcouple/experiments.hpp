#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wrcouple/material.hpp"
#include "wrcouple/waveform.hpp"

namespace wrcouple::experiments {

using stepping::Vector;

/// "air", "water", "steel", or a numeric triple "lambda,rho,cp".
Material material_lookup(const std::string& name);
std::vector<std::string> material_names();

/// amplitude * sin(pi (x+1)/2), times sin(pi y) in 2D.
waveform::InitialCondition default_initial_condition(int dim, double amplitude = 1.0);

/// sqrt(dx^dim * sum (a - b)^2).
double error_vs_reference(const Vector& solution, const Vector& reference, double dx,
                          int dim = 1);

/// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

/// Geometric mean of successive update-norm ratios from the second update
/// on; 0 when fewer than three updates were needed.
double rate_from_norms(const std::vector<double>& update_norms);

struct RateMeasurement {
  double rate = 0.0;
  int iterations = 0;
  bool converged = false;
  bool diverged = false;
};

RateMeasurement measure_convergence_rate(const waveform::CouplingConfig& cfg);

/// Shortest round-trip-safe form with 17 significant digits.
std::string format_double(double v);

enum class Kind { error_study, theta_sweep, ratio_sweep, theta_vs_c, method_comparison };

Kind parse_kind(const std::string& s);
std::string to_string(Kind k);

struct ExperimentSpec {
  Kind kind = Kind::method_comparison;
  Material left = Material::make("steel", 48.9, 7836, 443);
  Material right = Material::make("steel", 48.9, 7836, 443);
  int dim = 1;
  double dx = 1.0 / 100;
  double dt_left = 0.1;
  double dt_right = 0.1;
  double t0 = 0.0;
  double t_end = 1.0;
  std::optional<double> theta;  // empty: auto
  stepping::Integrator integrator = stepping::Integrator::euler;
  waveform::Method method = waveform::Method::nnwr;
  double tol = 1e-8;
  int max_iters = 100;
  int windows = 1;
  bool parallel = true;
  double ic_amplitude = 1.0;

  // error_study
  int levels = 4;
  double dt_reference = 1e-3;

  // theta_sweep: multiples of theta_opt when theta_relative is set.
  double theta_min = 0.5;
  double theta_max = 1.5;
  int theta_count = 11;
  bool theta_relative = true;

  // ratio_sweep: (dt1, dt2) pairs.
  std::vector<std::pair<double, double>> ratios;

  // theta_vs_c: dt = 10^e for e in [exp_min, exp_max].
  int dt_exp_min = -9;
  int dt_exp_max = 9;

  // method_comparison
  double theta_dnwr = 0.5;

  std::string out;  // CSV path; empty: not written
};

struct ExperimentResult {
  std::string csv;
  std::vector<std::string> summary;
  bool all_converged = true;
  std::vector<double> slopes;  // error_study: C-C, C-F, F-F
};

/// Throws std::invalid_argument for inconsistent specs and
/// std::runtime_error if the output file cannot be written.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Default (dt1, dt2) pairs of the ratio sweep.
std::vector<std::pair<double, double>> default_ratios();

/// Coupling configuration for one run of `spec` with the given steps.
waveform::CouplingConfig make_config(const ExperimentSpec& spec, double dt_left,
                                     double dt_right);

}  // namespace wrcouple::experiments
