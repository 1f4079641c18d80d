#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "homext/geometry.hpp"

#include "json.hpp"

namespace homext {

enum class SnowChoice { bump = 1, straight = 2 };

/// Side the bump generator is placed on, relative to each directed segment
/// with S0 traversed counterclockwise.  `outward` keeps the snowflake simple.
enum class BumpSide { outward, inward };

/// Derived quantities of the construction: (1/4)^alpha = p, x^alpha = 1/4,
/// eta = (1/4) / (1/2 - x)^alpha <= 1.  Requires 1/4 <= p < 1/2; the flat
/// boundary case p = 1/4 (alpha = 1, eta = 1) is accepted.
struct SnowExponents {
  double p = 0.25;
  double alpha = 1.0;
  double x = 0.25;
  double eta = 1.0;
};
SnowExponents derive_exponents(double p);

struct WordCounts {
  int a = 0, b = 0, c = 0;
};
/// Letter counts of a word over {A,B,C}; InvalidLetter otherwise.
WordCounts word_counts(std::string_view w);

/// Pure per-segment choice rule, addressed by refinement word (not by
/// position) so the construction is reproducible.
class ChoiceOracle {
 public:
  ChoiceOracle() = default;  // all bump
  static ChoiceOracle all_bump();
  static ChoiceOracle all_straight();
  static ChoiceOracle alternating();  // bump on even generations
  static ChoiceOracle seeded(std::uint64_t seed);

  SnowChoice operator()(std::string_view word) const;

  nlohmann::json to_json() const;
  static ChoiceOracle from_json(const nlohmann::json& spec);

 private:
  enum class Kind { all1, all2, alternating, seeded } kind_ = Kind::all1;
  std::uint64_t seed_ = 0;
};

struct SnowConfig {
  double p = 1.0 / 3.0;
  ChoiceOracle oracle;
  /// Child letters of a Choice-2 split, exactly two B (relative param length
  /// x) and two C (relative length 1/2-x); the default is the symmetric
  /// order.
  std::string choice2_letters = "BCCB";
  BumpSide bump_side = BumpSide::outward;
};

/// One matched (segment, parameter interval) pair of the construction.
struct SnowNode {
  Point p0, p1;              // directed segment of S_n; p1 is shared with the successor
  Point dir;                 // direction propagated through the generator algebra;
                             // agrees with p1-p0 up to position roundoff but keeps
                             // the length relatively accurate at deep generations
  double t0 = 0.0, t1 = 0.0; // preimage interval on the perimeter [0,4)
  std::string word;          // refinement history over {A,B,C}
  WordCounts counts;

  double segment_length() const { return norm(dir); }
  double param_length() const { return t1 - t0; }
};

struct NodeRef {
  int level = 0;
  std::int64_t index = 0;
};

/// Snowflake-type curve S_n with its parametrization g_n: S0 -> S_n.  Keeps
/// every generation so the interval tree (children of levels[g][i] are
/// levels[g+1][4i..4i+3]) stays queryable.  Immutable except for refine().
class SnowflakeState {
 public:
  explicit SnowflakeState(SnowConfig config);

  const SnowConfig& config() const { return config_; }
  const SnowExponents& exponents() const { return exp_; }
  int generation() const { return static_cast<int>(levels_.size()) - 1; }
  const std::vector<std::vector<SnowNode>>& levels() const { return levels_; }
  const std::vector<SnowNode>& leaves() const { return levels_.back(); }
  const SnowNode& node(NodeRef r) const;

  void refine();
  void refine_to(int target_generation);

  /// Word-calculus lengths: l(s) = p^a (1/4)^{b+c}, l(I) = (1/4)^a x^b (1/2-x)^c.
  double formula_segment_length(const WordCounts& w) const;
  double formula_param_length(const WordCounts& w) const;
  /// Sum of leaf formula lengths (pairwise-tree reduction; exact doubling for
  /// the all-bump curve).
  double perimeter_formula() const;

  /// g at perimeter coordinate t (wrapped into [0,4)), at the finest level.
  Point eval_g(double t) const;
  /// Leaf index containing wrapped coordinate t.
  std::int64_t locate_leaf(double t) const;

 private:
  SnowConfig config_;
  SnowExponents exp_;
  std::vector<std::vector<SnowNode>> levels_;
};

struct EtaCheck {
  double max_residual = 0.0;      // max |l(s)/l(I)^alpha - eta^c| over all pairs
  double max_ratio = 0.0;         // max l(s)/l(I)^alpha (must be <= 1 + slack)
  bool length_bound_ok = false;   // l(s) <= l(I)^alpha with 1e-10 slack
};
/// Verifies the eta identity from geometric (not formula) lengths.
EtaCheck eta_identity_check(const SnowflakeState& state);

struct HolderEstimate {
  double interval_constant = 0.0;  // max diam(g(I)) / l(I)^alpha over all intervals
  double arc_constant = 0.0;       // same over sampled arbitrary arcs
  int max_cover_count = 0;         // intervals used by the greedy arc covers
};
HolderEstimate holder_estimate(const SnowflakeState& state, int arc_samples = 200,
                               std::uint64_t seed = 1);

struct QsProbe {
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  // 99th percentile of the sampled ratios; the raw extreme of 10^4 draws
  // fluctuates with the sample, the quantile is a converged statistic.
  double p99_ratio = 0.0;
};
/// Empirical quasisymmetry ratios |g(x+t)-g(x)| / |g(x)-g(x-t)| over sampled
/// (x,t); coordinates wrap around the closed curve.  With `within_side` the
/// triple stays inside one side of S0; with `dyadic_grid` samples are drawn
/// on a 2^-20 grid so the flat case evaluates exactly.
QsProbe quasisymmetry_probe(const SnowflakeState& state, int samples, std::uint64_t seed = 7,
                            double t_min = 1e-3, double t_max = 1.0, bool within_side = false,
                            bool dyadic_grid = false);

struct ClaimDiag {
  int n_value = 0;               // |c(tau(I1)) - c(tau(I2))|
  double length_ratio = 0.0;     // l(g(I1)) / l(g(I2)) via the word formulas
  double normalized_ratio = 0.0; // length_ratio / eta^{c1-c2}; equals (l1/l2)^alpha
  double lower = 0.0, upper = 0.0;
  int n_cap = 0;                 // pinned bound from C and p only
  bool within_bounds = false;
};
/// The comparability Claim for disjoint intervals with C-comparable lengths
/// and distance at most C l(I1).
ClaimDiag claim_check(const SnowflakeState& state, NodeRef i1, NodeRef i2, double C);

std::vector<std::pair<NodeRef, NodeRef>> sample_conforming_pairs(const SnowflakeState& state,
                                                                 double C, int count,
                                                                 std::uint64_t seed);

struct SimplicityReport {
  std::int64_t segments = 0;
  std::int64_t intersections = 0;  // non-adjacent segment pairs that touch/cross
};
SimplicityReport check_simplicity(const SnowflakeState& state, double tol = 1e-12);

}  // namespace homext
