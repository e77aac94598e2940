#include "wrcouple/theory.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

namespace wrcouple::theory {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

void require_grid(double dx, int n_interior) {
  if (n_interior < 1) throw std::invalid_argument("need at least one interior node");
  require_positive(dx, "dx");
  if (std::abs(dx * (n_interior + 1) - 1.0) > 1e-12) {
    throw std::invalid_argument("dx must equal 1/(n_interior+1)");
  }
}

constexpr int dense_eigen_limit = 64;

}  // namespace

Matrix schur_complement(const fem::SubdomainOperator& op, double dt) {
  require_positive(dt, "dt");
  const fem::SparseMatrix k_ii = op.m_ii / dt + op.a_ii;
  const Matrix k_ig = Matrix(op.m_ig / dt + op.a_ig);
  const Matrix k_gi = Matrix(op.m_gi / dt + op.a_gi);
  const Matrix k_gg = Matrix(op.m_gg / dt + op.a_gg);
  Eigen::SimplicialLDLT<fem::SparseMatrix> solver(k_ii);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("interior factorization failed");
  }
  const Matrix x = solver.solve(k_ig);
  Matrix s = k_gg - k_gi * x;
  return 0.5 * (s + s.transpose());
}

double s_sum(const Material& material, double dt, double dx, int n_interior) {
  require_positive(dt, "dt");
  require_grid(dx, n_interior);
  const double c = dt / (dx * dx);
  const double a = material.alpha;
  const double l = material.lambda_cond;
  double sum = 0.0;
  for (int i = 1; i <= n_interior; ++i) {
    const double arg = i * std::numbers::pi * dx;
    const double s = std::sin(arg);
    sum += 3.0 * dt * s * s / (2.0 * a + 6.0 * l * c + (a - 6.0 * l * c) * std::cos(arg));
  }
  return sum;
}

double sin2_sum(int n_interior) {
  if (n_interior < 1) throw std::invalid_argument("need at least one interior node");
  const double dx = 1.0 / (n_interior + 1);
  double sum = 0.0;
  for (int i = 1; i <= n_interior; ++i) {
    const double s = std::sin(i * std::numbers::pi * dx);
    sum += s * s;
  }
  return sum;
}

double schur_1d(const Material& material, double dt, double dx, int n_interior) {
  const double sp = s_sum(material, dt, dx, n_interior);
  const double c = dt / (dx * dx);
  const double a = material.alpha;
  const double l = material.lambda_cond;
  const double d = a - 6.0 * l * c;
  return (6.0 * dt * (a + 3.0 * l * c) - dx * d * d * sp) / (18.0 * dt * dt);
}

double theta_opt_1d(const Material& m1, const Material& m2, double dt, double dx,
                    int n_interior) {
  const double q = schur_1d(m2, dt, dx, n_interior) / schur_1d(m1, dt, dx, n_interior);
  return 1.0 / (2.0 + q + 1.0 / q);
}

ThetaLimits theta_limits(const Material& m1, const Material& m2) {
  const double a = m1.alpha + m2.alpha;
  const double l = m1.lambda_cond + m2.lambda_cond;
  return {m1.alpha * m2.alpha / (a * a), m1.lambda_cond * m2.lambda_cond / (l * l)};
}

Matrix iteration_matrix(const fem::SubdomainOperator& op1, const fem::SubdomainOperator& op2,
                        double dt, double theta) {
  if (op1.interface_size() != op2.interface_size()) {
    throw std::invalid_argument("operators do not share the interface");
  }
  const Matrix s1 = schur_complement(op1, dt);
  const Matrix s2 = schur_complement(op2, dt);
  const Eigen::LLT<Matrix> l1(s1);
  const Eigen::LLT<Matrix> l2(s2);
  const auto n = s1.rows();
  return Matrix::Identity(n, n) -
         theta * (2.0 * Matrix::Identity(n, n) + l1.solve(s2) + l2.solve(s1));
}

RatePrediction sigma_rate(const fem::SubdomainOperator& op1, const fem::SubdomainOperator& op2,
                          double dt, double theta) {
  RatePrediction r;
  r.theta_used = theta;
  r.dt = dt;
  r.dx = op1.mesh.dx();
  r.dim = op1.mesh.dim;
  r.c = dt / (r.dx * r.dx);

  const Matrix s1 = schur_complement(op1, dt);
  const Matrix s2 = schur_complement(op2, dt);
  if (s1.rows() == 1) {
    const double q = s2(0, 0) / s1(0, 0);
    r.sigma_radius = std::abs(1.0 - theta * (2.0 + q + 1.0 / q));
    return r;
  }
  if (s1.rows() <= dense_eigen_limit) {
    // Eigenvalues of S1^{-1} S2 solve the symmetric-definite pencil (S2, S1).
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(s2, s1, Eigen::EigenvaluesOnly);
    double radius = 0.0;
    for (const double mu : es.eigenvalues()) {
      radius = std::max(radius, std::abs(1.0 - theta * (2.0 + mu + 1.0 / mu)));
    }
    r.sigma_radius = radius;
    return r;
  }
  r.sigma_radius = power_iteration_radius(iteration_matrix(op1, op2, dt, theta)).radius;
  return r;
}

PowerIterationResult power_iteration_radius(const Matrix& a, double tol, int max_iters,
                                            std::uint64_t seed) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw std::invalid_argument("power iteration needs a non-empty square matrix");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd x(a.rows());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = dist(rng);
  x.normalize();

  PowerIterationResult res;
  double prev = -1.0;
  for (int k = 1; k <= max_iters; ++k) {
    // Two applications per sweep so that a +/- rho pair does not oscillate.
    Eigen::VectorXd y = a * (a * x);
    const double norm = y.norm();
    if (norm == 0.0) {
      res = {0.0, k, true};
      return res;
    }
    const double est = std::sqrt(norm);
    x = y / norm;
    res.radius = est;
    res.iterations = k;
    if (prev >= 0.0 && std::abs(est - prev) <= tol * est) {
      res.converged = true;
      return res;
    }
    prev = est;
  }
  return res;
}

}  // namespace wrcouple::theory
