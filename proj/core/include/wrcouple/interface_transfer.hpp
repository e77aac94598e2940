#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wrcouple/time_stepping.hpp"

namespace wrcouple::transfer {

using stepping::TimeGrid;
using stepping::Vector;
using Matrix = Eigen::MatrixXd;

/// Space-time interface data: one row per interface node, one column per
/// time point t_0 ... t_N of `grid`.
struct InterfaceTrace {
  TimeGrid grid;
  Matrix values;
  int owner = 1;

  static InterfaceTrace zeros(const TimeGrid& grid, int interface_size, int owner);
  /// Every column set to `column`.
  static InterfaceTrace constant(const TimeGrid& grid, const Vector& column, int owner);

  [[nodiscard]] int interface_size() const { return static_cast<int>(values.rows()); }
  [[nodiscard]] Vector column(int i) const { return values.col(i); }
  [[nodiscard]] Vector final_column() const { return values.col(values.cols() - 1); }
};

/// Piecewise-linear interpolation of `source` onto the points of `target`.
/// Throws std::invalid_argument if the grids do not span the same window.
InterfaceTrace interp_trace(const TimeGrid& target, const InterfaceTrace& source);

/// Linear interpolation of column samples at strictly increasing
/// `sample_times` to arbitrary `query_times` inside [front, back].
Matrix interp_samples(std::span<const double> sample_times, const Matrix& samples,
                      std::span<const double> query_times);

/// g_prev + a (g_next - g_prev).
Vector stage_interp(const Vector& g_prev, const Vector& g_next, double a);

/// (g_next - g_prev) / dt, used for both SDIRK2 stages.
Vector stage_derivative(const Vector& g_prev, const Vector& g_next, double dt);

}  // namespace wrcouple::transfer
