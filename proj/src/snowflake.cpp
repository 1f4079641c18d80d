#include "homext/snowflake.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace homext {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

// Deterministic uniforms decoupled from std::distributions.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() { return state = splitmix64(state); }
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
  std::int64_t below(std::int64_t n) {
    return static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(n));
  }
};

}  // namespace

SnowExponents derive_exponents(double p) {
  if (!(std::isfinite(p) && p >= 0.25 && p < 0.5))
    fail(errc::invalid_parameter, "snowflake parameter must lie in [1/4, 1/2)");
  SnowExponents e;
  e.p = p;
  e.alpha = std::log(p) / std::log(0.25);
  e.x = std::pow(0.25, 1.0 / e.alpha);
  e.eta = 0.25 / std::pow(0.5 - e.x, e.alpha);
  return e;
}

WordCounts word_counts(std::string_view w) {
  WordCounts c;
  for (char ch : w) {
    switch (ch) {
      case 'A': ++c.a; break;
      case 'B': ++c.b; break;
      case 'C': ++c.c; break;
      default: fail(errc::invalid_letter, std::string("invalid word letter '") + ch + "'");
    }
  }
  return c;
}

ChoiceOracle ChoiceOracle::all_bump() { return {}; }

ChoiceOracle ChoiceOracle::all_straight() {
  ChoiceOracle o;
  o.kind_ = Kind::all2;
  return o;
}

ChoiceOracle ChoiceOracle::alternating() {
  ChoiceOracle o;
  o.kind_ = Kind::alternating;
  return o;
}

ChoiceOracle ChoiceOracle::seeded(std::uint64_t seed) {
  ChoiceOracle o;
  o.kind_ = Kind::seeded;
  o.seed_ = seed;
  return o;
}

SnowChoice ChoiceOracle::operator()(std::string_view word) const {
  switch (kind_) {
    case Kind::all1: return SnowChoice::bump;
    case Kind::all2: return SnowChoice::straight;
    case Kind::alternating: return word.size() % 2 == 0 ? SnowChoice::bump : SnowChoice::straight;
    case Kind::seeded:
      return (splitmix64(seed_ ^ fnv1a(word)) & 1) ? SnowChoice::bump : SnowChoice::straight;
  }
  return SnowChoice::bump;
}

nlohmann::json ChoiceOracle::to_json() const {
  switch (kind_) {
    case Kind::all1: return {{"kind", "all1"}};
    case Kind::all2: return {{"kind", "all2"}};
    case Kind::alternating: return {{"kind", "alternating"}};
    case Kind::seeded: return {{"kind", "seeded"}, {"seed", seed_}};
  }
  return {};
}

ChoiceOracle ChoiceOracle::from_json(const nlohmann::json& spec) {
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "all1") return all_bump();
  if (kind == "all2") return all_straight();
  if (kind == "alternating") return alternating();
  if (kind == "seeded") return seeded(spec.value("seed", std::uint64_t{0}));
  fail(errc::invalid_parameter, "unknown choice oracle kind \"" + kind + "\"");
}

SnowflakeState::SnowflakeState(SnowConfig config) : config_(std::move(config)) {
  exp_ = derive_exponents(config_.p);
  int nb = 0, nc = 0;
  for (char ch : config_.choice2_letters) {
    if (ch == 'B') ++nb;
    else if (ch == 'C') ++nc;
    else fail(errc::invalid_letter, "choice2 letters must be over {B,C}");
  }
  if (nb != 2 || nc != 2)
    fail(errc::invalid_parameter, "choice2 letters must contain exactly two B and two C");

  const Point corners[5] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}};
  std::vector<SnowNode> roots;
  for (int i = 0; i < 4; ++i) {
    SnowNode n;
    n.p0 = corners[i];
    n.p1 = corners[i + 1];
    n.dir = n.p1 - n.p0;
    n.t0 = double(i);
    n.t1 = double(i + 1);
    roots.push_back(std::move(n));
  }
  levels_.push_back(std::move(roots));
}

const SnowNode& SnowflakeState::node(NodeRef r) const {
  if (r.level < 0 || r.level >= static_cast<int>(levels_.size()))
    fail(errc::out_of_domain, "node level out of range");
  const auto& row = levels_[static_cast<size_t>(r.level)];
  if (r.index < 0 || r.index >= static_cast<std::int64_t>(row.size()))
    fail(errc::out_of_domain, "node index out of range");
  return row[static_cast<size_t>(r.index)];
}

void SnowflakeState::refine() {
  const auto& parents = levels_.back();
  std::vector<SnowNode> next;
  next.reserve(parents.size() * 4);
  const double p = config_.p;
  const double h = std::sqrt(p - 0.25);  // bump apex height = sqrt(p^2 - (1/2-p)^2)
  const double x = exp_.x;

  for (const SnowNode& s : parents) {
    const SnowChoice choice = config_.oracle(s.word);
    const Point d = s.dir;
    const double len = s.t1 - s.t0;
    if (choice == SnowChoice::bump) {
      // Normal of the same length as d; outward is the right-hand side for
      // the counterclockwise S0.
      const Point n = config_.bump_side == BumpSide::outward ? Point{d.y, -d.x}
                                                             : Point{-d.y, d.x};
      const Point q[5] = {s.p0,
                          s.p0 + p * d,
                          s.p0 + 0.5 * d + h * n,
                          s.p0 + (1.0 - p) * d,
                          s.p1};
      const Point dirs[4] = {p * d,
                             (0.5 - p) * d + h * n,
                             (0.5 - p) * d - h * n,
                             p * d};
      for (int i = 0; i < 4; ++i) {
        SnowNode child;
        child.p0 = q[i];
        child.p1 = q[i + 1];
        child.dir = dirs[i];
        child.t0 = s.t0 + len * (0.25 * i);
        child.t1 = (i == 3) ? s.t1 : s.t0 + len * (0.25 * (i + 1));
        child.word = s.word + 'A';
        child.counts = s.counts;
        ++child.counts.a;
        next.push_back(std::move(child));
      }
    } else {
      double cut = 0.0;
      for (int i = 0; i < 4; ++i) {
        const char letter = config_.choice2_letters[static_cast<size_t>(i)];
        const double rel = letter == 'B' ? x : 0.5 - x;
        SnowNode child;
        child.p0 = s.p0 + (0.25 * i) * d;
        child.p1 = (i == 3) ? s.p1 : s.p0 + (0.25 * (i + 1)) * d;
        child.dir = 0.25 * d;
        child.t0 = s.t0 + len * cut;
        cut += rel;
        child.t1 = (i == 3) ? s.t1 : s.t0 + len * cut;
        child.word = s.word + letter;
        child.counts = s.counts;
        if (letter == 'B') ++child.counts.b;
        else ++child.counts.c;
        next.push_back(std::move(child));
      }
    }
  }
  levels_.push_back(std::move(next));
}

void SnowflakeState::refine_to(int target_generation) {
  if (target_generation < 0 || target_generation > 9)
    fail(errc::invalid_parameter, "snowflake generation must be in 0..9");
  while (generation() < target_generation) refine();
}

double SnowflakeState::formula_segment_length(const WordCounts& w) const {
  double v = 1.0;
  for (int i = 0; i < w.a; ++i) v *= config_.p;
  return std::ldexp(v, -2 * (w.b + w.c));  // times (1/4)^{b+c}, exactly
}

double SnowflakeState::formula_param_length(const WordCounts& w) const {
  double v = std::ldexp(1.0, -2 * w.a);
  for (int i = 0; i < w.b; ++i) v *= exp_.x;
  for (int i = 0; i < w.c; ++i) v *= 0.5 - exp_.x;
  return v;
}

double SnowflakeState::perimeter_formula() const {
  std::vector<double> lengths;
  lengths.reserve(leaves().size());
  for (const SnowNode& n : leaves()) lengths.push_back(formula_segment_length(n.counts));
  size_t m = lengths.size();
  while (m > 1) {
    size_t w = 0;
    for (size_t i = 0; i + 1 < m; i += 2) lengths[w++] = lengths[i] + lengths[i + 1];
    if (m % 2 == 1) lengths[w++] = lengths[m - 1];
    m = w;
  }
  return lengths.empty() ? 0.0 : lengths[0];
}

std::int64_t SnowflakeState::locate_leaf(double t) const {
  const auto& row = leaves();
  // Binary search for the interval with t0 <= t < t1.
  std::int64_t lo = 0, hi = static_cast<std::int64_t>(row.size()) - 1;
  while (lo < hi) {
    const std::int64_t mid = (lo + hi + 1) / 2;
    if (row[static_cast<size_t>(mid)].t0 <= t) lo = mid;
    else hi = mid - 1;
  }
  return lo;
}

Point SnowflakeState::eval_g(double t) const {
  t -= 4.0 * std::floor(t / 4.0);
  const SnowNode& n = leaves()[static_cast<size_t>(locate_leaf(t))];
  const double len = n.t1 - n.t0;
  const double f = len > 0.0 ? (t - n.t0) / len : 0.0;
  return n.p0 + f * (n.p1 - n.p0);
}

EtaCheck eta_identity_check(const SnowflakeState& state) {
  EtaCheck out;
  const double alpha = state.exponents().alpha;
  const double eta = state.exponents().eta;
  for (const auto& row : state.levels()) {
    for (const SnowNode& n : row) {
      const double ls = n.segment_length();
      const double li_alpha = std::pow(n.param_length(), alpha);
      const double ratio = ls / li_alpha;
      out.max_residual = std::max(out.max_residual, std::abs(ratio - std::pow(eta, n.counts.c)));
      out.max_ratio = std::max(out.max_ratio, ratio);
    }
  }
  out.length_bound_ok = out.max_ratio <= 1.0 + 1e-10;
  return out;
}

namespace {

// Small convex hull (monotone chain); used to carry subtree extreme points
// upward so diameters stay exact without touching every descendant twice.
std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(),
            [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end(), [](Point a, Point b) { return a == b; }),
            pts.end());
  const size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<Point> hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  const size_t lower = k + 1;
  for (size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double diameter(const std::vector<Point>& pts) {
  double best = 0.0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, dist(pts[i], pts[j]));
  return best;
}

}  // namespace

HolderEstimate holder_estimate(const SnowflakeState& state, int arc_samples, std::uint64_t seed) {
  if (state.generation() < 1) fail(errc::precondition_violated, "needs at least one refinement");
  HolderEstimate out;
  const double alpha = state.exponents().alpha;
  const auto& levels = state.levels();

  // Bottom-up subtree hulls; children of levels[g][i] are levels[g+1][4i..4i+3].
  std::vector<std::vector<Point>> hulls;
  for (const SnowNode& n : levels.back()) hulls.push_back(convex_hull({n.p0, n.p1}));
  for (size_t g = levels.size() - 1; g-- > 0;) {
    std::vector<std::vector<Point>> parent_hulls(levels[g].size());
    for (size_t i = 0; i < levels[g].size(); ++i) {
      std::vector<Point> pts;
      for (size_t c = 0; c < 4; ++c) {
        const auto& ch = hulls[4 * i + c];
        pts.insert(pts.end(), ch.begin(), ch.end());
      }
      parent_hulls[i] = convex_hull(std::move(pts));
    }
    for (size_t i = 0; i < levels[g].size(); ++i) {
      const SnowNode& n = levels[g][i];
      const double d = diameter(parent_hulls[i]);
      out.interval_constant =
          std::max(out.interval_constant, d / std::pow(n.param_length(), alpha));
    }
    hulls = std::move(parent_hulls);
  }
  // Finest level ratios too (diam of a straight segment is its length).
  for (const SnowNode& n : levels.back())
    out.interval_constant =
        std::max(out.interval_constant, n.segment_length() / std::pow(n.param_length(), alpha));

  // Arbitrary arcs: greedy minimal cover by intervals containing the running
  // endpoint, capped at length l(J)/x; six pieces suffice by the
  // parent-replacement argument.
  Rng rng(seed ^ 0xabcdef1234567890ULL);
  const double cap_factor = 1.0 / state.exponents().x;
  for (int s = 0; s < arc_samples; ++s) {
    const double lj = 0.002 + 0.498 * rng.uniform();
    const double u = rng.uniform() * (4.0 - lj);
    const double v = u + lj;
    // Diameter of g([u,v]) from the finest polyline.
    const std::int64_t iu = state.locate_leaf(u);
    const std::int64_t iv = state.locate_leaf(v);
    std::vector<Point> pts{state.eval_g(u), state.eval_g(v)};
    for (std::int64_t i = iu; i < iv; ++i)
      pts.push_back(state.leaves()[static_cast<size_t>(i)].p1);
    const double d = diameter(convex_hull(std::move(pts)));
    out.arc_constant = std::max(out.arc_constant, d / std::pow(lj, alpha));

    // Greedy cover count.
    const double cap = cap_factor * lj;
    double pos = u;
    int count = 0;
    while (pos < v && count < 64) {
      const std::int64_t leaf = state.locate_leaf(std::min(pos, std::nextafter(4.0, 0.0)));
      // Walk the ancestor chain and take the highest node of length <= cap.
      double best_t1 = state.leaves()[static_cast<size_t>(leaf)].t1;
      std::int64_t idx = leaf;
      for (int g = state.generation(); g >= 0; --g) {
        const SnowNode& n = state.levels()[static_cast<size_t>(g)][static_cast<size_t>(idx)];
        if (n.param_length() <= cap) best_t1 = n.t1;
        idx /= 4;
      }
      pos = std::max(best_t1, std::nextafter(pos, 5.0));
      ++count;
    }
    out.max_cover_count = std::max(out.max_cover_count, count);
  }
  return out;
}

QsProbe quasisymmetry_probe(const SnowflakeState& state, int samples, std::uint64_t seed,
                            double t_min, double t_max, bool within_side, bool dyadic_grid) {
  if (!(t_min > 0.0 && t_min <= t_max && t_max <= 1.0))
    fail(errc::invalid_parameter, "probe scales need 0 < t_min <= t_max <= 1");
  QsProbe out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  Rng rng(seed ^ 0x5bf03635d0d6c4efULL);
  auto snap = [&](double v) {
    return dyadic_grid ? std::ldexp(std::floor(std::ldexp(v, 20)), -20) : v;
  };
  const double log_lo = std::log(t_min), log_hi = std::log(t_max);
  std::vector<double> ratios;
  ratios.reserve(static_cast<size_t>(samples));
  while (static_cast<int>(ratios.size()) < samples) {
    double t = std::exp(log_lo + (log_hi - log_lo) * rng.uniform());
    double x;
    if (within_side) {
      t = std::min(t, 0.45);
      t = snap(t);
      if (t <= 0.0) continue;
      const double side = double(rng.below(4));
      x = side + t + (1.0 - 2.0 * t) * rng.uniform();
      x = snap(x);
      if (x - t < side || x + t > side + 1.0) continue;
    } else {
      t = snap(t);
      if (t <= 0.0) continue;
      x = snap(4.0 * rng.uniform());
    }
    const Point gx = state.eval_g(x);
    const Point gp = state.eval_g(x + t);
    const Point gm = state.eval_g(x - t);
    const double num = dist(gp, gx);
    const double den = dist(gx, gm);
    if (den == 0.0) continue;
    const double r = num / den;
    out.max_ratio = std::max(out.max_ratio, r);
    out.min_ratio = std::min(out.min_ratio, r);
    ratios.push_back(r);
  }
  std::sort(ratios.begin(), ratios.end());
  out.p99_ratio = ratios[static_cast<size_t>(double(ratios.size()) * 0.99)];
  return out;
}

ClaimDiag claim_check(const SnowflakeState& state, NodeRef r1, NodeRef r2, double C) {
  if (!(std::isfinite(C) && C >= 1.0)) fail(errc::invalid_parameter, "comparability C must be >= 1");
  const SnowNode& n1 = state.node(r1);
  const SnowNode& n2 = state.node(r2);
  const double l1 = n1.param_length();
  const double l2 = n2.param_length();
  const bool disjoint = n1.t1 <= n2.t0 || n2.t1 <= n1.t0;
  if (!disjoint) fail(errc::precondition_violated, "intervals overlap");
  if (!(l2 <= C * l1 && l1 <= C * l2))
    fail(errc::precondition_violated, "interval lengths are not C-comparable");
  double gap = n2.t0 >= n1.t1 ? n2.t0 - n1.t1 : n1.t0 - n2.t1;
  gap = std::min(gap, 4.0 - gap - l1 - l2);  // wraparound on the closed curve
  gap = std::max(gap, 0.0);
  if (!(gap <= C * l1)) fail(errc::precondition_violated, "interval distance exceeds C*l(I1)");

  const SnowExponents& e = state.exponents();
  ClaimDiag d;
  d.n_value = std::abs(n1.counts.c - n2.counts.c);
  d.length_ratio = state.formula_segment_length(n1.counts) / state.formula_segment_length(n2.counts);
  d.normalized_ratio = d.length_ratio / std::pow(e.eta, n1.counts.c - n2.counts.c);
  d.lower = std::pow(C, -e.alpha);
  d.upper = std::pow(C, e.alpha);
  // Pinned from C and p alone: the proof bounds (1/2-x)^{-(N-2)} by a
  // constant multiple of C, the slack constant taken as 1/x^2.
  d.n_cap = 2 + static_cast<int>(std::ceil(std::log(C / (e.x * e.x)) / std::log(1.0 / (0.5 - e.x))));
  const double slack = 1e-9;
  d.within_bounds =
      d.normalized_ratio >= d.lower * (1.0 - slack) && d.normalized_ratio <= d.upper * (1.0 + slack);
  return d;
}

std::vector<std::pair<NodeRef, NodeRef>> sample_conforming_pairs(const SnowflakeState& state,
                                                                 double C, int count,
                                                                 std::uint64_t seed) {
  std::vector<std::pair<NodeRef, NodeRef>> out;
  const int level = state.generation();
  const auto& row = state.levels()[static_cast<size_t>(level)];
  const auto n = static_cast<std::int64_t>(row.size());
  Rng rng(seed ^ 0x7c3a9d1f2b5e8c47ULL);
  int attempts = 0;
  while (static_cast<int>(out.size()) < count && attempts < count * 200) {
    ++attempts;
    const std::int64_t i = rng.below(n);
    const SnowNode& a = row[static_cast<size_t>(i)];
    const double la = a.param_length();
    // Walk right from a sibling-distance start until the gap budget C*l(I1)
    // is exhausted; collect conforming candidates along the way.
    std::int64_t jx = i + 1 + rng.below(8);
    while (jx < n) {
      const SnowNode& b = row[static_cast<size_t>(jx)];
      const double gap = b.t0 - a.t1;
      if (gap > C * la) break;
      const double lb = b.param_length();
      if (lb <= C * la && la <= C * lb && (rng.next() & 3) == 0) {
        out.emplace_back(NodeRef{level, i}, NodeRef{level, jx});
        break;
      }
      ++jx;
    }
  }
  return out;
}

SimplicityReport check_simplicity(const SnowflakeState& state, double tol) {
  const auto& segs = state.leaves();
  const auto n = static_cast<std::int64_t>(segs.size());
  SimplicityReport rep;
  rep.segments = n;

  double max_len = 0.0;
  for (const SnowNode& s : segs) max_len = std::max(max_len, s.segment_length());
  const double cell = std::max(max_len, 1e-9);
  auto key = [&](std::int64_t ix, std::int64_t iy) {
    return static_cast<std::uint64_t>(ix * 2654435761LL) ^
           (static_cast<std::uint64_t>(iy) * 0x9e3779b97f4a7c15ULL);
  };
  std::unordered_map<std::uint64_t, std::vector<std::int64_t>> grid;
  auto cells_of = [&](const SnowNode& s, auto&& fn) {
    const double x0 = std::min(s.p0.x, s.p1.x) - tol, x1 = std::max(s.p0.x, s.p1.x) + tol;
    const double y0 = std::min(s.p0.y, s.p1.y) - tol, y1 = std::max(s.p0.y, s.p1.y) + tol;
    for (auto ix = static_cast<std::int64_t>(std::floor(x0 / cell));
         ix <= static_cast<std::int64_t>(std::floor(x1 / cell)); ++ix)
      for (auto iy = static_cast<std::int64_t>(std::floor(y0 / cell));
           iy <= static_cast<std::int64_t>(std::floor(y1 / cell)); ++iy)
        fn(ix, iy);
  };
  for (std::int64_t i = 0; i < n; ++i)
    cells_of(segs[static_cast<size_t>(i)],
             [&](std::int64_t ix, std::int64_t iy) { grid[key(ix, iy)].push_back(i); });

  std::vector<std::int64_t> last_checked(static_cast<size_t>(n), -1);
  for (std::int64_t i = 0; i < n; ++i) {
    const SnowNode& a = segs[static_cast<size_t>(i)];
    cells_of(a, [&](std::int64_t ix, std::int64_t iy) {
      auto it = grid.find(key(ix, iy));
      if (it == grid.end()) return;
      for (std::int64_t j : it->second) {
        if (j <= i || last_checked[static_cast<size_t>(j)] == i) continue;
        last_checked[static_cast<size_t>(j)] = i;
        // Skip adjacent segments (shared endpoint), including the wrap pair.
        if (j == i + 1 || (i == 0 && j == n - 1)) continue;
        const SnowNode& b = segs[static_cast<size_t>(j)];
        if (segments_intersect(a.p0, a.p1, b.p0, b.p1, tol)) ++rep.intersections;
      }
    });
  }
  return rep;
}

}  // namespace homext
