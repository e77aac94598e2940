#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "wrcouple/time_stepping.hpp"

using namespace wrcouple;
using namespace wrcouple::stepping;

namespace {

const Material unit = Material::make("unit", 1, 1, 1);
constexpr double a = SdirkCoeffs::a;

Vector scalar(double v) { return Vector::Constant(1, v); }

fem::SubdomainOperator single_node() {
  return fem::assemble_1d(unit, fem::MeshSpec::make(1, 2), fem::Side::left);
}

// Hand-written scalar data of the single interior node problem.
constexpr double m_ii = 2.0 / 3, a_ii = 8.0, m_ig = 1.0 / 6, a_ig = -4.0;
constexpr double m_gg = 1.0 / 3, a_gg = 4.0;

}  // namespace

TEST_SUITE("time_stepping") {
  TEST_CASE("time grid") {
    const TimeGrid g = TimeGrid::make(0.0, 1.0, 3);
    CHECK(g.dt() == doctest::Approx(1.0 / 3));
    const auto p = g.points();
    REQUIRE(p.size() == 4);
    CHECK(p.back() == 1.0);
    for (std::size_t i = 1; i < p.size(); ++i) CHECK(p[i] - p[i - 1] == doctest::Approx(g.dt()));
    CHECK(TimeGrid::from_step(0.0, 1.0, 0.02).n_steps == 50);
    CHECK_THROWS_AS(TimeGrid::from_step(0.0, 1.0, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid::make(0.0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid::make(1.0, 1.0, 2), std::invalid_argument);
  }

  TEST_CASE("sdirk coefficient") {
    CHECK(a == doctest::Approx(1.0 - std::sqrt(2.0) / 2).epsilon(1e-15));
  }

  TEST_CASE("euler dirichlet: zero data") {
    const auto r = euler_dirichlet_step(single_node(), scalar(0), scalar(0), scalar(0), 1.0);
    CHECK(r.interior_state.norm() == 0.0);
    CHECK(r.flux.norm() == 0.0);
    CHECK(r.interface_state.size() == 0);
  }

  TEST_CASE("euler dirichlet: linear steady profile") {
    const auto r = euler_dirichlet_step(single_node(), scalar(0.5), scalar(1), scalar(1), 1.0);
    CHECK(r.interior_state(0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(r.flux(0) == doctest::Approx(2.0).epsilon(1e-14));
  }

  TEST_CASE("euler dirichlet: cold start") {
    const auto r = euler_dirichlet_step(single_node(), scalar(0), scalar(0), scalar(1), 1.0);
    const double expected = (4.0 - 1.0 / 6) / (2.0 / 3 + 8.0);
    CHECK(r.interior_state(0) == doctest::Approx(expected).epsilon(1e-14));
    const double u = expected;
    const double flux = m_ig * u + m_gg * 1.0 + a_ig * u + a_gg * 1.0;
    CHECK(r.flux(0) == doctest::Approx(flux).epsilon(1e-14));
  }

  TEST_CASE("euler neumann: two by two system") {
    const auto op = single_node();
    Vector prev = Vector::Zero(2);
    const auto r = euler_neumann_step(op, prev, scalar(1), 1.0);
    CHECK(r.interface_state(0) == doctest::Approx(312.0 / 823).epsilon(1e-13));
    CHECK(r.interior_state(0) == doctest::Approx(138.0 / 823).epsilon(1e-13));
    CHECK(r.flux.size() == 0);

    const auto zero = euler_neumann_step(op, prev, scalar(0), 1.0);
    CHECK(zero.interface_state.norm() == 0.0);
    CHECK(zero.interior_state.norm() == 0.0);

    const auto twice = euler_neumann_step(op, prev, scalar(2), 1.0);
    CHECK(twice.interface_state(0) == 2 * r.interface_state(0));
    CHECK(twice.interior_state(0) == 2 * r.interior_state(0));
  }

  TEST_CASE("sdirk2 dirichlet: zero data and steady state") {
    const auto op = single_node();
    const auto z = sdirk2_dirichlet_step(op, scalar(0), scalar(0), scalar(0), 1.0);
    CHECK(z.interior_state.norm() == 0.0);
    REQUIRE(z.stage_fluxes.size() == 2);
    CHECK(z.stage_fluxes[0].norm() == 0.0);
    CHECK(z.stage_fluxes[1].norm() == 0.0);

    const auto s = sdirk2_dirichlet_step(op, scalar(0.5), scalar(1), scalar(1), 0.7);
    CHECK(s.interior_state(0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(s.stage_fluxes[0](0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s.stage_fluxes[1](0) == doctest::Approx(2.0).epsilon(1e-14));
  }

  TEST_CASE("sdirk2 dirichlet: cold start against scalar Butcher stages") {
    const double dt = 1.0, g0 = 0.0, g1 = 1.0, h = a * dt;
    const double gdot = (g1 - g0) / dt;
    // m u' + k u = -(m_ig g' + a_ig g); stage i solved as implicit Euler with step a dt.
    const double ga = g0 + a * (g1 - g0);
    const double u1 = (m_ii / h * 0.0 - m_ig * gdot - a_ig * ga) / (m_ii / h + a_ii);
    const double k1 = (u1 - 0.0) / h;
    const double s2 = 0.0 + dt * (1 - a) * k1;
    const double u2 = (m_ii / h * s2 - m_ig * gdot - a_ig * g1) / (m_ii / h + a_ii);
    const double k2 = (u2 - s2) / h;

    const auto r = sdirk2_dirichlet_step(single_node(), scalar(0), scalar(g0), scalar(g1), dt);
    CHECK(r.interior_state(0) == doctest::Approx(u2).epsilon(1e-14));
    const double f1 = m_ig * k1 + a_ig * u1 + m_gg * gdot + a_gg * ga;
    const double f2 = m_ig * k2 + a_ig * u2 + m_gg * gdot + a_gg * g1;
    CHECK(r.stage_fluxes[0](0) == doctest::Approx(f1).epsilon(1e-13));
    CHECK(r.stage_fluxes[1](0) == doctest::Approx(f2).epsilon(1e-13));
    CHECK(r.flux(0) == doctest::Approx(f2).epsilon(1e-13));
  }

  TEST_CASE("sdirk2 neumann: dense two-stage oracle") {
    const double dt = 1.0, h = a * dt;
    Eigen::Matrix2d m, k;
    m << m_ii, m_ig, m_ig, m_gg;
    k << a_ii, a_ig, a_ig, a_gg;
    const Eigen::Matrix2d shifted = m / h + k;
    const Eigen::Vector2d f(0, 1);
    const Eigen::Vector2d u1 = shifted.lu().solve(f);
    const Eigen::Vector2d k1 = u1 / h;
    const Eigen::Vector2d s2 = dt * (1 - a) * k1;
    const Eigen::Vector2d u2 = shifted.lu().solve(m * s2 / h + f);

    const auto op = single_node();
    const std::array<Vector, 2> fluxes{scalar(1), scalar(1)};
    const auto r = sdirk2_neumann_step(op, Vector::Zero(2), fluxes, dt);
    CHECK(r.interior_state(0) == doctest::Approx(u2(0)).epsilon(1e-13));
    CHECK(r.interface_state(0) == doctest::Approx(u2(1)).epsilon(1e-13));

    const std::array<Vector, 2> zeros{scalar(0), scalar(0)};
    CHECK(sdirk2_neumann_step(op, Vector::Zero(2), zeros, dt).interface_state.norm() == 0.0);

    const std::array<Vector, 2> first{scalar(1), scalar(0)};
    const std::array<Vector, 2> second{scalar(0), scalar(1)};
    const auto r1 = sdirk2_neumann_step(op, Vector::Zero(2), first, dt);
    const auto r2 = sdirk2_neumann_step(op, Vector::Zero(2), second, dt);
    CHECK(r1.interface_state(0) + r2.interface_state(0) ==
          doctest::Approx(r.interface_state(0)).epsilon(1e-14));
    CHECK(r1.interior_state(0) + r2.interior_state(0) ==
          doctest::Approx(r.interior_state(0)).epsilon(1e-14));
  }

  TEST_CASE("stepper matches free functions") {
    const auto op = fem::assemble_1d(unit, fem::MeshSpec::make(1, 8), fem::Side::right);
    Vector u = Vector::LinSpaced(7, 0.1, 0.7);
    for (Integrator integ : {Integrator::euler, Integrator::sdirk2}) {
      SubdomainStepper st(op, 0.05, integ);
      const auto r = st.dirichlet_step(u, scalar(0.2), scalar(0.4));
      const auto f = integ == Integrator::euler
                         ? euler_dirichlet_step(op, u, scalar(0.2), scalar(0.4), 0.05)
                         : sdirk2_dirichlet_step(op, u, scalar(0.2), scalar(0.4), 0.05);
      CHECK((r.interior_state - f.interior_state).norm() < 1e-14);
      CHECK((r.flux - f.flux).norm() < 1e-12);
    }
  }

  TEST_CASE("monolithic solve: zero, symmetry and energy decay") {
    const auto mono = fem::assemble_monolithic(unit, unit, fem::MeshSpec::make(1, 10));
    const TimeGrid grid = TimeGrid::make(0.0, 0.5, 20);
    for (Integrator integ : {Integrator::euler, Integrator::sdirk2}) {
      const auto zero = monolithic_solve(mono, Vector::Zero(mono.map.size()), grid, integ);
      REQUIRE(zero.size() == 21);
      for (const Vector& v : zero) CHECK(v.norm() == 0.0);

      Vector u0(mono.map.size());
      for (int i = 0; i < u0.size(); ++i) u0(i) = std::cos(std::numbers::pi * mono.nodes[i][0] / 2);
      const auto traj = monolithic_solve(mono, u0, grid, integ);
      const int n = static_cast<int>(u0.size());
      double energy = u0.dot(mono.mass * u0);
      for (const Vector& v : traj) {
        for (int i = 0; i < n; ++i) CHECK(std::abs(v(i) - v(n - 1 - i)) < 1e-13);
        const double e = v.dot(mono.mass * v);
        CHECK(e <= energy * (1 + 1e-14));
        energy = e;
      }
    }
  }

  TEST_CASE("monolithic euler decays like the discrete eigenmode") {
    // Discrete eigenvector sin(k pi (x+1)/2) of the glued 1D operator.
    const int n = 10;
    const auto mono = fem::assemble_monolithic(unit, unit, fem::MeshSpec::make(1, n));
    const int size = mono.map.size();
    Vector v(size);
    for (int i = 0; i < size; ++i) v(i) = std::sin(std::numbers::pi * (mono.nodes[i][0] + 1) / 2);
    const double dx = 1.0 / n, theta = std::numbers::pi * dx / 2;
    const double lam = (2 - 2 * std::cos(theta)) / (dx * dx);
    const double mu = (4 + 2 * std::cos(theta)) / 6;
    const double dt = 0.01;
    const auto traj = monolithic_solve(mono, v, TimeGrid::make(0, dt, 1), Integrator::euler);
    const double factor = mu / (mu + dt * lam);
    CHECK((traj[1] - factor * v).cwiseAbs().maxCoeff() < 1e-13);
  }
}
