#include "homext/geometry.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

using namespace homext;

TEST_CASE("operator norm basics") {
  CHECK(operator_norm(AffineMap::identity()) == doctest::Approx(1.0).epsilon(1e-15));
  AffineMap diag{2.0, 0.0, 0.0, 3.0, {0, 0}};
  CHECK(operator_norm(diag) == doctest::Approx(3.0).epsilon(1e-15));
  const double a = 0.7318;
  AffineMap rot{std::cos(a), -std::sin(a), std::sin(a), std::cos(a), {4.0, -2.0}};
  CHECK(operator_norm(rot) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("operator norm is submultiplicative on random pairs") {
  oracle::Rng rng(101);
  for (int i = 0; i < 200; ++i) {
    AffineMap m1{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2),
                 {0, 0}};
    AffineMap m2{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2),
                 {0, 0}};
    const double lhs = operator_norm(compose(m1, m2));
    const double rhs = operator_norm(m1) * operator_norm(m2);
    CHECK(lhs <= rhs * (1.0 + 1e-12));
  }
}

TEST_CASE("affine from triangles: examples and vertex reproduction") {
  const Triangle ref({0, 0}, {1, 0}, {0, 1});
  SUBCASE("identity") {
    const AffineMap m = affine_from_triangles(ref, ref);
    CHECK(m.m00 == doctest::Approx(1.0));
    CHECK(m.m11 == doctest::Approx(1.0));
    CHECK(m.m01 == doctest::Approx(0.0));
    CHECK(m.offset.x == doctest::Approx(0.0));
  }
  SUBCASE("axis scaling") {
    const AffineMap m = affine_from_triangles(ref, Triangle({0, 0}, {2, 0}, {0, 3}));
    CHECK(m.m00 == doctest::Approx(2.0));
    CHECK(m.m11 == doctest::Approx(3.0));
    CHECK(m.m01 == doctest::Approx(0.0));
    CHECK(m.m10 == doctest::Approx(0.0));
  }
  SUBCASE("collinear source is rejected") {
    const std::array<Point, 3> collinear{Point{0, 0}, Point{1, 1}, Point{2, 2}};
    const std::array<Point, 3> ok{Point{0, 0}, Point{1, 0}, Point{0, 1}};
    CHECK_THROWS_WITH_AS(affine_from_vertices(collinear, ok), doctest::Contains("Degenerate"),
                         error);
  }
  SUBCASE("random triangles reproduce vertices to 1e-12") {
    oracle::Rng rng(55);
    int done = 0;
    while (done < 100) {
      const std::array<Point, 3> src{Point{rng.uniform(-3, 3), rng.uniform(-3, 3)},
                                     Point{rng.uniform(-3, 3), rng.uniform(-3, 3)},
                                     Point{rng.uniform(-3, 3), rng.uniform(-3, 3)}};
      const std::array<Point, 3> dst{Point{rng.uniform(-3, 3), rng.uniform(-3, 3)},
                                     Point{rng.uniform(-3, 3), rng.uniform(-3, 3)},
                                     Point{rng.uniform(-3, 3), rng.uniform(-3, 3)}};
      if (std::abs(signed_area(src[0], src[1], src[2])) < 0.05) continue;
      ++done;
      const AffineMap m = affine_from_vertices(src, dst);
      for (int v = 0; v < 3; ++v) {
        const Point got = m(src[size_t(v)]);
        CHECK(dist(got, dst[size_t(v)]) <= 1e-12 * (1.0 + norm(dst[size_t(v)])));
      }
    }
  }
}

TEST_CASE("triangle constructor enforces counterclockwise nondegeneracy") {
  CHECK_THROWS_AS(Triangle({0, 0}, {0, 1}, {1, 0}), error);       // clockwise
  CHECK_THROWS_AS(Triangle({0, 0}, {1, 1}, {2, 2}), error);       // collinear
  CHECK_NOTHROW(Triangle({0, 0}, {1, 0}, {0, 1}));
}

TEST_CASE("weighted triangle integral: frozen cases") {
  const Triangle ref({0, 0}, {1, 0}, {0, 1});

  SUBCASE("constant weight gives the area") {
    CHECK(weighted_triangle_integral(ref, {0, 0, 1.0}, 0.7) == doctest::Approx(0.5).epsilon(1e-14));
    const Triangle t({-1, 0}, {1, 0}, {0, 1});
    CHECK(weighted_triangle_integral(t, {0, 0, 4.0}, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  }

  SUBCASE("edge-vanishing weight, s = 1/2: the 1-D reduction gives 4/3") {
    // Oracle: integral over y of y^{-1/2} * (width 1-y) = [2 sqrt(y) - (2/3) y^{3/2}] = 4/3.
    const double oneD = 2.0 - 2.0 / 3.0;
    const double got = weighted_triangle_integral(ref, {0, 1.0, 0}, 0.5);
    CHECK(got == doctest::Approx(oneD).epsilon(1e-13));
    CHECK(got == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
  }

  SUBCASE("vertex-vanishing weight, s = 3/2: the 1-D reduction gives 2") {
    // Oracle: int_0^1 (2 x^{-1/2} - 2) dx = 2 for w = x + y.
    const double got = weighted_triangle_integral(ref, {1.0, 1.0, 0}, 1.5);
    CHECK(got == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("divergence and sign errors") {
    CHECK_THROWS_AS(weighted_triangle_integral(ref, {0, 1.0, 0}, 1.0), error);   // edge zero, s>=1
    CHECK_THROWS_AS(weighted_triangle_integral(ref, {1.0, 1.0, 0}, 2.0), error); // vertex, s>=2
    CHECK_THROWS_AS(weighted_triangle_integral(ref, {0, 0, -0.25}, 0.5), error); // negative
    try {
      weighted_triangle_integral(ref, {0, 1.0, 0}, 1.0);
      CHECK(false);
    } catch (const error& e) {
      CHECK(e.code() == errc::divergent_integral);
    }
  }

  SUBCASE("negative exponents integrate positive powers") {
    // s = -1: integral of (x + y) over the reference triangle = 1/3.
    CHECK(weighted_triangle_integral(ref, {1.0, 1.0, 0}, -1.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  }
}

TEST_CASE("weighted triangle integral matches the adaptive oracle on random instances") {
  oracle::Rng rng(2024);
  int done = 0;
  while (done < 100) {
    const Point a{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const Point b{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const Point c{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    if (signed_area(a, b, c) < 0.05) continue;
    const Triangle tri(a, b, c);
    AffineScalar w{rng.uniform(-1, 1), rng.uniform(-1, 1), 0};
    // Shift so the weight is strictly positive on the triangle.
    double mn = std::min({w(a), w(b), w(c)});
    w.c0 = -mn + rng.uniform(0.05, 2.0);
    const double s = rng.uniform(-0.5, 1.8);
    ++done;
    const double exact = weighted_triangle_integral(tri, w, s);
    const double quad = oracle::adaptive_triangle([&](Point p) { return std::pow(w(p), -s); },
                                                  a, b, c, 1e-11);
    CHECK(std::abs(exact - quad) <= 1e-8 * std::abs(exact));
  }
}

TEST_CASE("weighted integral is additive under subdivision through an interior point") {
  oracle::Rng rng(77);
  for (int it = 0; it < 50; ++it) {
    const Point a{0, 0}, b{rng.uniform(0.5, 2), 0}, c{rng.uniform(-0.5, 0.5), rng.uniform(0.5, 2)};
    const double l0 = rng.uniform(0.1, 0.8);
    const double l1 = rng.uniform(0.1, 0.9) * (1.0 - l0);
    const double l2 = 1.0 - l0 - l1;
    const Point q{l0 * a.x + l1 * b.x + l2 * c.x, l0 * a.y + l1 * b.y + l2 * c.y};
    AffineScalar w{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), 0};
    w.c0 = -std::min({w(a), w(b), w(c)}) + rng.uniform(0.2, 1.0);
    const double s = rng.uniform(0.0, 1.5);
    const double whole = weighted_triangle_integral(Triangle(a, b, c), w, s);
    const double parts = weighted_triangle_integral(Triangle(a, b, q), w, s) +
                         weighted_triangle_integral(Triangle(b, c, q), w, s) +
                         weighted_triangle_integral(Triangle(c, a, q), w, s);
    CHECK(std::abs(whole - parts) <= 1e-10 * std::abs(whole));
  }
}

TEST_CASE("near-constant weights stay accurate (series branch)") {
  const Triangle ref({0, 0}, {1, 0}, {0, 1});
  for (double eps : {1e-3, 1e-6, 1e-9, 1e-13}) {
    const AffineScalar w{eps, 2.0 * eps, 1.0};
    const double s = 0.8;
    const double got = weighted_triangle_integral(ref, w, s);
    const double quad = oracle::adaptive_triangle([&](Point p) { return std::pow(w(p), -s); },
                                                  {0, 0}, {1, 0}, {0, 1}, 1e-12);
    CHECK(got == doctest::Approx(quad).epsilon(1e-11));
  }
}

TEST_CASE("triangle overlap detection") {
  const Triangle a({0, 0}, {1, 0}, {0, 1});
  const Triangle shifted({2, 0}, {3, 0}, {2, 1});
  const Triangle touching({1, 0}, {2, 0}, {1, 1});  // shares a vertex edge-on
  const Triangle inside({0.2, 0.2}, {0.5, 0.2}, {0.2, 0.5});
  CHECK_FALSE(triangles_overlap(a, shifted, 1e-12));
  CHECK_FALSE(triangles_overlap(a, touching, 1e-12));
  CHECK(triangles_overlap(a, inside, 1e-12));
}
