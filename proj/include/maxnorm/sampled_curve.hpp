#pragma once

#include <boost/math/interpolators/makima.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "maxnorm/common.hpp"

namespace maxnorm {

/// A function sampled on a strictly increasing grid.
struct SampledCurve {
  std::vector<double> grid;
  std::vector<double> values;

  SampledCurve() = default;
  SampledCurve(std::vector<double> g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    validate();
  }

  void validate() const {
    if (grid.size() != values.size()) throw domain_error("sampled curve: grid and values differ in length");
    for (std::size_t i = 1; i < grid.size(); ++i)
      if (!(grid[i] > grid[i - 1])) throw domain_error("sampled curve: grid must be strictly increasing");
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (!std::isfinite(grid[i]) || !std::isfinite(values[i]))
        throw domain_error("sampled curve: non-finite sample");
  }

  std::size_t size() const { return grid.size(); }
  bool empty() const { return grid.empty(); }

  double min_value() const { return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end()); }
};

/// Interpolates a SampledCurve: order 1 is piecewise linear, order 3 is the
/// modified Akima cubic. Outside the grid the curve is 0 on the right and
/// clamped to the first value on the left.
class CurveInterpolant {
 public:
  CurveInterpolant() = default;
  CurveInterpolant(SampledCurve curve, int order) : curve_(std::move(curve)), order_(order) {
    curve_.validate();
    if (order != 1 && order != 3) throw domain_error("interpolation order must be 1 or 3");
    if (curve_.size() < 2) throw domain_error("sampled curve needs at least two points");
    if (order == 3) {
      if (curve_.size() < 4) throw domain_error("cubic interpolation needs at least four points");
      auto x = curve_.grid;
      auto y = curve_.values;
      cubic_ = std::make_shared<boost::math::interpolators::makima<std::vector<double>>>(std::move(x), std::move(y));
    }
  }

  const SampledCurve& curve() const { return curve_; }
  int order() const { return order_; }
  double left() const { return curve_.grid.front(); }
  double right() const { return curve_.grid.back(); }

  double operator()(double t) const {
    if (t <= left()) return curve_.values.front();
    if (t > right()) return 0.0;
    if (order_ == 3) return (*cubic_)(t);
    auto it = std::upper_bound(curve_.grid.begin(), curve_.grid.end(), t);
    std::size_t i = static_cast<std::size_t>(it - curve_.grid.begin());
    if (i >= curve_.size()) return curve_.values.back();
    double x0 = curve_.grid[i - 1], x1 = curve_.grid[i];
    double w = (t - x0) / (x1 - x0);
    return (1 - w) * curve_.values[i - 1] + w * curve_.values[i];
  }

  /// Interior grid points, where a linear interpolant has kinks.
  std::vector<double> knots() const {
    if (order_ == 3) return {right()};
    return curve_.grid;
  }

 private:
  SampledCurve curve_;
  int order_ = 1;
  std::shared_ptr<boost::math::interpolators::makima<std::vector<double>>> cubic_;
};

}  // namespace maxnorm
