#include "wrcouple/interface_transfer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wrcouple::transfer {

InterfaceTrace InterfaceTrace::zeros(const TimeGrid& grid, int interface_size, int owner) {
  return InterfaceTrace{grid, Matrix::Zero(interface_size, grid.n_steps + 1), owner};
}

InterfaceTrace InterfaceTrace::constant(const TimeGrid& grid, const Vector& column, int owner) {
  return InterfaceTrace{grid, column.replicate(1, grid.n_steps + 1), owner};
}

InterfaceTrace interp_trace(const TimeGrid& target, const InterfaceTrace& source) {
  const TimeGrid& sg = source.grid;
  if (!target.same_span(sg)) {
    throw std::invalid_argument("interpolation between grids with different time windows");
  }
  if (source.values.cols() != sg.n_steps + 1) {
    throw std::invalid_argument("trace column count does not match its grid");
  }
  InterfaceTrace out{target, Matrix(source.values.rows(), target.n_steps + 1), source.owner};
  if (target == sg) {
    out.values = source.values;
    return out;
  }
  const double dt = sg.dt();
  for (int i = 0; i <= target.n_steps; ++i) {
    const double t = target.point(i);
    if (i == target.n_steps) {
      out.values.col(i) = source.values.col(sg.n_steps);
      continue;
    }
    int j = static_cast<int>(std::floor((t - sg.t0) / dt));
    j = std::clamp(j, 0, sg.n_steps - 1);
    const double w = std::clamp((t - sg.point(j)) / dt, 0.0, 1.0);
    if (w == 0.0) {
      out.values.col(i) = source.values.col(j);
    } else {
      out.values.col(i) =
          source.values.col(j) + w * (source.values.col(j + 1) - source.values.col(j));
    }
  }
  return out;
}

Matrix interp_samples(std::span<const double> sample_times, const Matrix& samples,
                      std::span<const double> query_times) {
  const auto n = static_cast<Eigen::Index>(sample_times.size());
  if (n < 2 || samples.cols() != n) {
    throw std::invalid_argument("need at least two samples, one column each");
  }
  Matrix out(samples.rows(), static_cast<Eigen::Index>(query_times.size()));
  for (std::size_t q = 0; q < query_times.size(); ++q) {
    const double t = query_times[q];
    if (t < sample_times.front() || t > sample_times.back()) {
      throw std::invalid_argument("query time outside the sampled window");
    }
    auto it = std::upper_bound(sample_times.begin(), sample_times.end(), t);
    auto hi = static_cast<Eigen::Index>(it - sample_times.begin());
    if (sample_times[hi - 1] == t) {
      out.col(static_cast<Eigen::Index>(q)) = samples.col(hi - 1);
      continue;
    }
    const double t0 = sample_times[hi - 1];
    const double t1 = sample_times[hi];
    const double w = (t - t0) / (t1 - t0);
    out.col(static_cast<Eigen::Index>(q)) =
        samples.col(hi - 1) + w * (samples.col(hi) - samples.col(hi - 1));
  }
  return out;
}

Vector stage_interp(const Vector& g_prev, const Vector& g_next, double a) {
  return g_prev + a * (g_next - g_prev);
}

Vector stage_derivative(const Vector& g_prev, const Vector& g_next, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  return (g_next - g_prev) / dt;
}

}  // namespace wrcouple::transfer
