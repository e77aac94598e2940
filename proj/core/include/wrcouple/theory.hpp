#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "wrcouple/fem_assembly.hpp"

namespace wrcouple::theory {

using Matrix = Eigen::MatrixXd;

struct RatePrediction {
  double sigma_radius = 0.0;
  double theta_used = 0.0;
  double dt = 0.0;
  double dx = 0.0;
  int dim = 1;
  double c = 0.0;  // dt / dx^2
};

struct ThetaLimits {
  double temporal = 0.0;  // c -> 0
  double spatial = 0.0;   // c -> infinity
};

/// Interface Schur complement of the shifted system M/dt + A (dense, s x s).
Matrix schur_complement(const fem::SubdomainOperator& op, double dt);

/// Sum over the interior Toeplitz eigenpairs that yields the corner entry of
/// (M_II/dt + A_II)^{-1} times sum(sin^2). Requires dx == 1/(n_interior+1).
double s_sum(const Material& material, double dt, double dx, int n_interior);

/// sum_{i=1}^{N} sin^2(i pi / (N+1)), summed numerically.
double sin2_sum(int n_interior);

/// 1D Schur complement from the closed form, evaluated via c = dt/dx^2.
double schur_1d(const Material& material, double dt, double dx, int n_interior);

double theta_opt_1d(const Material& m1, const Material& m2, double dt, double dx, int n_interior);

ThetaLimits theta_limits(const Material& m1, const Material& m2);

/// Sigma = I - theta (2I + S1^{-1} S2 + S2^{-1} S1), dense.
Matrix iteration_matrix(const fem::SubdomainOperator& op1, const fem::SubdomainOperator& op2,
                        double dt, double theta);

RatePrediction sigma_rate(const fem::SubdomainOperator& op1, const fem::SubdomainOperator& op2,
                          double dt, double theta);

struct PowerIterationResult {
  double radius = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Dominant eigenvalue magnitude of a square matrix from a fixed-seed start.
PowerIterationResult power_iteration_radius(const Matrix& a, double tol = 1e-10,
                                            int max_iters = 100000, std::uint64_t seed = 12345);

}  // namespace wrcouple::theory
