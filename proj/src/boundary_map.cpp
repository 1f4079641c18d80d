#include "homext/boundary_map.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace homext {

namespace {

void check_domain(double t) {
  if (!(t >= -1.0 && t <= 1.0)) fail(errc::out_of_domain, "argument outside [-1,1]");
}

}  // namespace

struct MonotoneMap::Impl {
  virtual ~Impl() = default;
  virtual double eval(double t) const = 0;
  virtual nlohmann::json to_json() const = 0;
};

namespace {

using ImplPtr = std::shared_ptr<const MonotoneMap::Impl>;

struct IdentityImpl final : MonotoneMap::Impl {
  double eval(double t) const override { return t; }
  nlohmann::json to_json() const override { return {{"type", "identity"}}; }
};

struct PowerImpl final : MonotoneMap::Impl {
  double gamma;
  explicit PowerImpl(double g) : gamma(g) {
    if (!(std::isfinite(g) && g > 0.0)) fail(errc::invalid_parameter, "power map needs gamma > 0");
  }
  double eval(double t) const override {
    if (t == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(t), gamma), t);
  }
  nlohmann::json to_json() const override {
    return {{"type", "power"}, {"params", {{"gamma", gamma}}}};
  }
};

struct CantorImpl final : MonotoneMap::Impl {
  double theta;
  explicit CantorImpl(double th) : theta(th) {
    if (!(std::isfinite(th) && th > 0.0 && th < 1.0))
      fail(errc::invalid_parameter, "cantor map needs theta in (0,1)");
  }
  double eval(double t) const override {
    if (t == -1.0) return -1.0;
    if (t == 1.0) return 1.0;
    // Descend the dyadic tree carrying (left image value, interval mass), so
    // image values are plain sums of mass products and generation-j dyadic
    // points evaluate exactly after j steps.
    double l = -1.0, r = 1.0;
    double left = -1.0, mass = 2.0;
    while (mass >= 1e-15) {
      const double m = 0.5 * (l + r);
      if (m == l || m == r) break;
      if (t == m) return left + theta * mass;
      if (t < m) {
        r = m;
        mass *= theta;
      } else {
        l = m;
        left += theta * mass;
        mass *= 1.0 - theta;
      }
    }
    const double den = r - l;
    return den > 0.0 ? left + mass * ((t - l) / den) : left;
  }
  nlohmann::json to_json() const override {
    return {{"type", "cantor"}, {"params", {{"theta", theta}}}};
  }
};

struct PwlImpl final : MonotoneMap::Impl {
  std::vector<double> knots, values;
  PwlImpl(std::vector<double> k, std::vector<double> v) : knots(std::move(k)), values(std::move(v)) {
    if (knots.size() != values.size() || knots.size() < 2)
      fail(errc::invalid_parameter, "pwl map needs matching knot/value arrays of size >= 2");
    if (knots.front() != -1.0 || knots.back() != 1.0 || values.front() != -1.0 ||
        values.back() != 1.0)
      fail(errc::invalid_parameter, "pwl map must fix the endpoints -1 and 1");
    for (size_t i = 1; i < knots.size(); ++i)
      if (!(knots[i] > knots[i - 1]) || !(values[i] > values[i - 1]))
        fail(errc::invalid_parameter, "pwl knots and values must be strictly increasing");
  }
  double eval(double t) const override {
    auto it = std::lower_bound(knots.begin(), knots.end(), t);
    if (it != knots.end() && *it == t) return values[static_cast<size_t>(it - knots.begin())];
    const size_t hi = static_cast<size_t>(it - knots.begin());
    const size_t lo = hi - 1;
    const double f = (t - knots[lo]) / (knots[hi] - knots[lo]);
    return values[lo] + f * (values[hi] - values[lo]);
  }
  nlohmann::json to_json() const override {
    return {{"type", "pwl"}, {"params", {{"knots", knots}, {"values", values}}}};
  }
};

struct ComposeImpl final : MonotoneMap::Impl {
  std::vector<ImplPtr> maps;  // applied front to back
  explicit ComposeImpl(std::vector<ImplPtr> m) : maps(std::move(m)) {}
  double eval(double t) const override {
    for (const auto& m : maps) t = m->eval(t);
    return t;
  }
  nlohmann::json to_json() const override {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& m : maps) arr.push_back(m->to_json());
    return {{"type", "compose"}, {"params", {{"maps", arr}}}};
  }
};

struct QuarterImpl final : MonotoneMap::Impl {
  ImplPtr inner;
  explicit QuarterImpl(ImplPtr in) : inner(std::move(in)) {}
  double eval(double t) const override {
    if (t == 1.0) return 1.0;
    int q = static_cast<int>(std::floor((t + 1.0) * 2.0));
    q = std::clamp(q, 0, 3);
    const double a = -1.0 + 0.5 * q;
    const double s = std::clamp((t - a) * 4.0 - 1.0, -1.0, 1.0);
    return a + (inner->eval(s) + 1.0) * 0.25;
  }
  nlohmann::json to_json() const override {
    return {{"type", "quarters"}, {"params", {{"inner", inner->to_json()}}}};
  }
};

}  // namespace

MonotoneMap::MonotoneMap() : impl_(std::make_shared<IdentityImpl>()) {}

double MonotoneMap::operator()(double t) const {
  check_domain(t);
  return impl_->eval(t);
}

Interval MonotoneMap::image(const Interval& iv) const {
  check_domain(iv.lo);
  check_domain(iv.hi);
  if (!(iv.lo <= iv.hi)) fail(errc::out_of_domain, "interval endpoints out of order");
  return {impl_->eval(iv.lo), impl_->eval(iv.hi)};
}

MonotoneMap MonotoneMap::identity() { return MonotoneMap(); }

MonotoneMap MonotoneMap::power(double gamma) {
  return MonotoneMap(std::make_shared<PowerImpl>(gamma));
}

MonotoneMap MonotoneMap::cantor(double theta) {
  return MonotoneMap(std::make_shared<CantorImpl>(theta));
}

MonotoneMap MonotoneMap::piecewise_linear(std::vector<double> knots, std::vector<double> values) {
  return MonotoneMap(std::make_shared<PwlImpl>(std::move(knots), std::move(values)));
}

MonotoneMap MonotoneMap::compose(std::vector<MonotoneMap> maps) {
  std::vector<ImplPtr> impls;
  impls.reserve(maps.size());
  for (const auto& m : maps) impls.push_back(m.impl_);
  return MonotoneMap(std::make_shared<ComposeImpl>(std::move(impls)));
}

MonotoneMap MonotoneMap::quarter_tile(MonotoneMap inner) {
  return MonotoneMap(std::make_shared<QuarterImpl>(inner.impl_));
}

MonotoneMap MonotoneMap::from_json(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("type"))
    fail(errc::invalid_parameter, "boundary map spec must be an object with a \"type\" field");
  const std::string type = spec.at("type").get<std::string>();
  const nlohmann::json params = spec.value("params", nlohmann::json::object());
  if (type == "identity") return identity();
  if (type == "power") return power(params.at("gamma").get<double>());
  if (type == "cantor") return cantor(params.at("theta").get<double>());
  if (type == "pwl")
    return piecewise_linear(params.at("knots").get<std::vector<double>>(),
                            params.at("values").get<std::vector<double>>());
  if (type == "compose") {
    std::vector<MonotoneMap> maps;
    for (const auto& sub : params.at("maps")) maps.push_back(from_json(sub));
    return compose(std::move(maps));
  }
  if (type == "quarters") return quarter_tile(from_json(params.at("inner")));
  fail(errc::invalid_parameter, "unknown boundary map type \"" + type + "\"");
}

nlohmann::json MonotoneMap::to_json() const { return impl_->to_json(); }

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct ArcRestrictionImpl final : MonotoneMap::Impl {
  ImplPtr base;
  double rotation;
  int quarter;
  double l0, l1;  // lift values at the arc endpoints

  double lift(double theta) const {
    const double w = std::floor(theta / kTwoPi);
    double tr = theta - kTwoPi * w;
    double t = std::clamp(tr / std::numbers::pi - 1.0, -1.0, 1.0);
    return rotation + std::numbers::pi * (base->eval(t) + 1.0) + kTwoPi * w;
  }

  double eval(double t) const override {
    if (t == -1.0) return -1.0;
    if (t == 1.0) return 1.0;
    const double theta = quarter * (std::numbers::pi / 2.0) + (t + 1.0) * (std::numbers::pi / 4.0);
    return -1.0 + 2.0 * (lift(theta) - l0) / (l1 - l0);
  }
  nlohmann::json to_json() const override {
    return {{"type", "arc-restriction"},
            {"params", {{"quarter", quarter}, {"rotation", rotation}, {"base", base->to_json()}}}};
  }
};

}  // namespace

CircleMap::CircleMap(MonotoneMap base, double rotation, bool orientation_preserving)
    : base_(std::move(base)), rotation_(rotation), preserving_(orientation_preserving) {
  if (!std::isfinite(rotation)) fail(errc::invalid_parameter, "rotation must be finite");
}

double CircleMap::lift(double theta) const {
  if (!preserving_)
    fail(errc::invalid_parameter, "lift is only defined for orientation-preserving circle maps");
  const double w = std::floor(theta / kTwoPi);
  const double tr = theta - kTwoPi * w;
  const double t = std::clamp(tr / std::numbers::pi - 1.0, -1.0, 1.0);
  return rotation_ + std::numbers::pi * (base_(t) + 1.0) + kTwoPi * w;
}

double CircleMap::angle_image(double theta) const {
  double v = lift(theta);
  v -= kTwoPi * std::floor(v / kTwoPi);
  return v;
}

MonotoneMap CircleMap::arc_restriction(int quarter) const {
  if (quarter < 0 || quarter > 3) fail(errc::invalid_parameter, "quarter must be in 0..3");
  if (!preserving_)
    fail(errc::invalid_parameter, "arc restriction needs an orientation-preserving map");
  auto impl = std::make_shared<ArcRestrictionImpl>();
  impl->base = base_.impl_;
  impl->rotation = rotation_;
  impl->quarter = quarter;
  impl->l0 = lift(quarter * (std::numbers::pi / 2.0));
  impl->l1 = lift((quarter + 1) * (std::numbers::pi / 2.0));
  return MonotoneMap(impl);
}

CircleMap CircleMap::from_json(const nlohmann::json& spec) {
  return CircleMap(MonotoneMap::from_json(spec.at("base")), spec.value("rotation", 0.0),
                   spec.value("orientation_preserving", true));
}

nlohmann::json CircleMap::to_json() const {
  return {{"base", base_.to_json()},
          {"rotation", rotation_},
          {"orientation_preserving", preserving_}};
}

}  // namespace homext
