#pragma once

#include <memory>
#include <string>
#include <vector>

#include "homext/errors.hpp"

#include "json.hpp"

namespace homext {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

/// Increasing homeomorphism of [-1,1] fixing the endpoints.  Value type over
/// an immutable implementation; evaluation is pure and safe for concurrent
/// reads.
class MonotoneMap {
 public:
  MonotoneMap();  // identity

  double operator()(double t) const;
  Interval image(const Interval& iv) const;

  static MonotoneMap identity();
  /// t -> sign(t)|t|^gamma, gamma > 0.
  static MonotoneMap power(double gamma);
  /// Self-similar map of the binary (Cantor-type) measure giving mass
  /// fraction theta to every left dyadic child.  Exact at dyadic points.
  static MonotoneMap cantor(double theta);
  /// Piecewise-linear with strictly increasing knots/values; both arrays must
  /// start at -1 and end at 1.
  static MonotoneMap piecewise_linear(std::vector<double> knots, std::vector<double> values);
  /// Applies maps left to right: result(t) = maps.back()(...(maps.front()(t))).
  static MonotoneMap compose(std::vector<MonotoneMap> maps);
  /// Applies a rescaled copy of `inner` on each quarter [-1,-1/2],...,[1/2,1].
  static MonotoneMap quarter_tile(MonotoneMap inner);

  static MonotoneMap from_json(const nlohmann::json& spec);
  nlohmann::json to_json() const;

  struct Impl;

 private:
  friend class CircleMap;
  explicit MonotoneMap(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Circle homeomorphism, stored as a degree-1 lift.  angle_image maps an
/// angle in radians to its image angle; lift(theta + 2*pi) = lift(theta) + 2*pi.
class CircleMap {
 public:
  CircleMap() = default;
  CircleMap(MonotoneMap base, double rotation, bool orientation_preserving = true);

  double lift(double theta) const;
  double angle_image(double theta) const;  // lift reduced mod 2*pi into [0, 2*pi)
  bool orientation_preserving() const { return preserving_; }

  /// Boundary map of [-1,1] induced on one quarter arc [theta0, theta0+pi/2],
  /// normalized so both domain and range are [-1,1].
  MonotoneMap arc_restriction(int quarter) const;

  static CircleMap from_json(const nlohmann::json& spec);
  nlohmann::json to_json() const;

 private:
  MonotoneMap base_;
  double rotation_ = 0.0;
  bool preserving_ = true;
};

}  // namespace homext
