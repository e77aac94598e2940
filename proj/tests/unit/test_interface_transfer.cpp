#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "wrcouple/interface_transfer.hpp"

using namespace wrcouple;
using namespace wrcouple::transfer;

namespace {

Vector scalar(double v) { return Vector::Constant(1, v); }

InterfaceTrace sampled(const TimeGrid& g, double (*f)(double)) {
  InterfaceTrace t = InterfaceTrace::zeros(g, 2, 1);
  for (int i = 0; i <= g.n_steps; ++i) {
    t.values(0, i) = f(g.point(i));
    t.values(1, i) = -3 * f(g.point(i));
  }
  return t;
}

}  // namespace

TEST_SUITE("interface_transfer") {
  TEST_CASE("trace shape") {
    const TimeGrid g = TimeGrid::make(0, 1, 4);
    const auto z = InterfaceTrace::zeros(g, 3, 2);
    CHECK(z.values.rows() == 3);
    CHECK(z.values.cols() == 5);
    CHECK(z.owner == 2);
    const auto c = InterfaceTrace::constant(g, Vector::LinSpaced(3, 1, 3), 1);
    CHECK(c.final_column()(2) == 3.0);
    CHECK(c.column(0)(0) == 1.0);
  }

  TEST_CASE("same grid copies") {
    const TimeGrid g = TimeGrid::make(0, 1, 7);
    const auto src = sampled(g, [](double t) { return std::sin(5 * t); });
    const auto out = interp_trace(g, src);
    CHECK(out.values == src.values);
  }

  TEST_CASE("linear data is reproduced exactly") {
    const TimeGrid src_grid = TimeGrid::make(0, 1, 2);
    const auto src = sampled(src_grid, [](double t) { return 2 * t; });
    const auto out = interp_trace(TimeGrid::make(0, 1, 4), src);
    CHECK(out.values(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(out.values(1, 1) == doctest::Approx(-1.5).epsilon(1e-15));

    const auto unit = sampled(TimeGrid::make(0, 1, 1), [](double t) { return t; });
    const auto thirds = interp_trace(TimeGrid::make(0, 1, 3), unit);
    CHECK(thirds.values(0, 0) == 0.0);
    CHECK(thirds.values(0, 1) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(thirds.values(0, 2) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(thirds.values(0, 3) == 1.0);
  }

  TEST_CASE("coarse to fine and back against pointwise interpolation") {
    const TimeGrid coarse = TimeGrid::make(0.5, 1.5, 5);
    const TimeGrid fine = TimeGrid::make(0.5, 1.5, 50);
    const auto c = sampled(coarse, [](double t) { return std::exp(t); });
    const auto f = interp_trace(fine, c);
    for (int i = 0; i <= 50; ++i) {
      const double t = fine.point(i);
      int j = std::min(4, static_cast<int>((t - 0.5) / 0.2));
      const double t0 = coarse.point(j), t1 = coarse.point(j + 1);
      const double w = (t - t0) / (t1 - t0);
      const double expected = (1 - w) * std::exp(t0) + w * std::exp(t1);
      CHECK(f.values(0, i) == doctest::Approx(expected).epsilon(1e-13));
    }
    const auto back = interp_trace(coarse, f);
    CHECK((back.values - c.values).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(f.final_column()(0) == c.final_column()(0));
  }

  TEST_CASE("mismatched windows are rejected") {
    const auto src = sampled(TimeGrid::make(0, 1, 2), [](double t) { return t; });
    CHECK_THROWS_AS(interp_trace(TimeGrid::make(0, 2, 4), src), std::invalid_argument);
  }

  TEST_CASE("samples at arbitrary abscissae") {
    const std::vector<double> times{0.0, 0.3, 1.0};
    Matrix v(1, 3);
    v << 0.0, 3.0, 10.0;
    const std::vector<double> q{0.0, 0.15, 0.3, 0.65, 1.0};
    const Matrix out = interp_samples(times, v, q);
    CHECK(out(0, 0) == 0.0);
    CHECK(out(0, 1) == doctest::Approx(1.5));
    CHECK(out(0, 2) == 3.0);
    CHECK(out(0, 3) == doctest::Approx(6.5));
    CHECK(out(0, 4) == 10.0);
    const std::vector<double> outside{1.5};
    CHECK_THROWS(interp_samples(times, v, outside));
  }

  TEST_CASE("stage value") {
    constexpr double a = stepping::SdirkCoeffs::a;
    CHECK(stage_interp(scalar(2), scalar(2), a)(0) == 2.0);
    CHECK(stage_interp(scalar(1), scalar(3), a)(0) == doctest::Approx(1.585786437626905));
    CHECK(stage_interp(scalar(1), scalar(3), 0.0)(0) == 1.0);
    CHECK(stage_interp(scalar(1), scalar(3), 1.0)(0) == 3.0);
  }

  TEST_CASE("stage derivative") {
    CHECK(stage_derivative(scalar(4), scalar(4), 0.1)(0) == 0.0);
    CHECK(stage_derivative(scalar(0), scalar(2), 0.5)(0) == 4.0);
    CHECK(stage_derivative(scalar(2), scalar(1), 1.0)(0) < 0.0);
    CHECK_THROWS_AS(stage_derivative(scalar(0), scalar(1), 0.0), std::invalid_argument);
  }
}
