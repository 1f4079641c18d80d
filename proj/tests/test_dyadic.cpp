#include "homext/dyadic.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

using namespace homext;

TEST_CASE("apex points") {
  CHECK(apex({-1.0, 1.0}) == Point{0.0, 1.0});
  CHECK(apex({-1.0, 0.0}) == Point{-0.5, 0.5});
  CHECK(apex({0.0, 0.125}) == Point{0.0625, 0.0625});
  CHECK_THROWS_AS(apex({0.5, 0.5}), error);
}

TEST_CASE("dyadic interval bookkeeping") {
  const DyadicInterval i(3, 5);
  CHECK(i.a() == -1.0 + 4.0 * 0.25);
  CHECK(i.length() == 0.25);
  CHECK(i.left_child().a() == i.a());
  CHECK(i.right_child().b() == i.b());
  CHECK(i.left_child().b() == i.mid());
  CHECK(DyadicInterval(2, 4).is_last());
  CHECK_THROWS_AS(DyadicInterval(2, 4).right_neighbor(), error);
  CHECK_THROWS_AS(DyadicInterval(2, 5), error);
}

TEST_CASE("build_cell: identity example at (j=1,k=1)") {
  const PentagonCell c = build_cell(DyadicInterval(1, 1), MonotoneMap::identity());
  CHECK_FALSE(c.is_last);
  CHECK(c.X == Point{-0.5, 0.5});
  CHECK(c.Y == Point{0.5, 0.5});
  CHECK(c.x == Point{-0.75, 0.25});
  CHECK(c.y == Point{-0.25, 0.25});
  CHECK(c.z == Point{0.25, 0.25});
  CHECK(c.Xp == c.X);
  CHECK(c.Yp == c.Y);
  CHECK(c.xp == c.x);
  CHECK(c.yp == c.y);
  CHECK(c.zp == c.z);
  for (int t = 0; t < 3; ++t) {
    CHECK(c.maps[size_t(t)].m00 == 1.0);
    CHECK(c.maps[size_t(t)].m01 == 0.0);
    CHECK(c.maps[size_t(t)].m10 == 0.0);
    CHECK(c.maps[size_t(t)].m11 == 1.0);
    CHECK(c.maps[size_t(t)].offset == Point{0.0, 0.0});
  }
}

TEST_CASE("build_cell: cubic power map images at (j=1,k=1)") {
  const PentagonCell c = build_cell(DyadicInterval(1, 1), MonotoneMap::power(3.0));
  CHECK(c.Xp == Point{-0.5, 0.5});          // apex of [-1, 0]
  CHECK(c.xp == Point{-0.5625, 0.4375});    // apex of [-1, -0.125]
  CHECK(c.yp == Point{-0.0625, 0.0625});    // apex of [-0.125, 0]
}

TEST_CASE("build_cell: last interval of a generation is triangle-only") {
  const PentagonCell c = build_cell(DyadicInterval(1, 2), MonotoneMap::identity());
  CHECK(c.is_last);
  CHECK(c.triangle_count == 1);
  CHECK(c.X == Point{0.5, 0.5});
  CHECK(c.x == Point{0.25, 0.25});
  CHECK(c.y == Point{0.75, 0.25});
}

TEST_CASE("image triangle orientation closed form") {
  // For image interval [a,b] split at c, triangle (X',x',y') has signed
  // area (b-c)(c-a)/4 > 0; checked against the shoelace on random data.
  oracle::Rng rng(31);
  for (int it = 0; it < 200; ++it) {
    const double a = rng.uniform(-1, 0.8);
    const double b = a + rng.uniform(1e-6, 1.0 - std::max(0.0, a));
    const double c = a + (b - a) * rng.uniform(1e-3, 0.999);
    const Point Xp = apex({a, b}), xp = apex({a, c}), yp = apex({c, b});
    const double area = signed_area(Xp, xp, yp);
    CHECK(area == doctest::Approx((b - c) * (c - a) / 4.0).epsilon(1e-9));
    CHECK(area > 0.0);
  }
}

TEST_CASE("mesh: counts, tiling exactness, residuals") {
  SUBCASE("cell count is 2^{J+1} - 1") {
    const ExtensionMesh mesh(MonotoneMap::identity(), 10);
    CHECK(mesh.cell_count() == 2047);
  }
  SUBCASE("source areas plus residual strip equal 1 exactly") {
    for (const auto& phi :
         {MonotoneMap::identity(), MonotoneMap::cantor(0.3), MonotoneMap::power(3.0)}) {
      const ExtensionMesh mesh(phi, 8);
      double sum = 0.0;
      for (const auto& row : mesh.generations())
        for (const auto& cell : row) sum += cell.source_area();
      CHECK(sum + mesh.source_residual_area() == 1.0);
    }
  }
  SUBCASE("residual strip value, J = 3") {
    const ExtensionMesh mesh(MonotoneMap::identity(), 3);
    CHECK(mesh.source_residual_area() == std::ldexp(1.0, -3) - std::ldexp(1.0, -8));
  }
  SUBCASE("image areas plus image residual equal 1 for the identity") {
    const ExtensionMesh mesh(MonotoneMap::identity(), 6);
    double sum = 0.0;
    for (const auto& row : mesh.generations())
      for (const auto& cell : row) sum += cell.image_area();
    CHECK(sum + mesh.image_residual_area() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("mesh evaluation") {
  SUBCASE("identity maps everything to itself, including below depth") {
    const ExtensionMesh mesh(MonotoneMap::identity(), 0);
    for (const Point p : {Point{0.3, 0.2}, Point{0.0, 0.9}, Point{-0.6, 0.1}, Point{0.1, 1e-7}}) {
      const Point q = mesh.eval(p);
      CHECK(q.x == doctest::Approx(p.x).epsilon(1e-14));
      CHECK(q.y == doctest::Approx(p.y).epsilon(1e-14));
    }
  }
  SUBCASE("generation-0 apex is fixed for any boundary map") {
    const ExtensionMesh mesh(MonotoneMap::cantor(0.2), 4);
    CHECK(mesh.eval({0.0, 1.0}) == Point{0.0, 1.0});
  }
  SUBCASE("boundary trace equals phi exactly at dyadic points") {
    const MonotoneMap phi = MonotoneMap::cantor(0.3);
    const ExtensionMesh mesh(phi, 6);
    for (int j = 0; j <= 6; ++j) {
      const std::int64_t n = std::int64_t{1} << j;
      for (std::int64_t m = 0; m <= n; ++m) {
        const double t = -1.0 + std::ldexp(double(m), 1 - j);
        CHECK(mesh.eval({t, 0.0}) == Point{phi(t), 0.0});
      }
    }
  }
  SUBCASE("apex covariance: apexes map to image apexes") {
    const MonotoneMap phi = MonotoneMap::power(3.0);
    const ExtensionMesh mesh(phi, 8);
    CHECK(dist(mesh.eval({-0.5, 0.5}), {-0.5, 0.5}) <= 1e-12);  // apex([-1,0]) fixed under cube
    CHECK(dist(mesh.eval({0.25, 0.25}), {0.0625, 0.0625}) <= 1e-12);  // apex([0,.5]) -> apex([0,.125])
    for (int j = 1; j <= 8; ++j) {
      const std::int64_t n = std::int64_t{1} << j;
      for (std::int64_t k = 1; k <= n; k += std::max<std::int64_t>(1, n / 8)) {
        const DyadicInterval iv(j, k);
        const Point src = apex(iv.interval());
        const Point dst = apex(phi.image(iv.interval()));
        CHECK(dist(mesh.eval(src), dst) <= 1e-12);
      }
    }
  }
  SUBCASE("on-demand refinement agrees with a deeper stored mesh") {
    const MonotoneMap phi = MonotoneMap::cantor(0.4);
    const ExtensionMesh shallow(phi, 2);
    const ExtensionMesh deep(phi, 12);
    oracle::Rng rng(9);
    for (int it = 0; it < 200; ++it) {
      const double y = rng.uniform(3e-4, 0.2);
      const double x = rng.uniform(y - 1.0, 1.0 - y);
      CHECK(shallow.eval({x, y}) == deep.eval({x, y}));
    }
  }
  SUBCASE("out of domain") {
    const ExtensionMesh mesh(MonotoneMap::identity(), 2);
    CHECK_THROWS_AS(mesh.eval({0.9, 0.5}), error);
    CHECK_THROWS_AS(mesh.eval({0.0, -0.5}), error);
  }
  SUBCASE("points below the resolution floor return the image-tent anchor") {
    const ExtensionMesh mesh(MonotoneMap::identity(), 2);
    const Point q = mesh.eval({0.123456, 1e-14});
    CHECK(q.y > 0.0);
    CHECK(q.x == doctest::Approx(0.123456).epsilon(1e-9));
  }
}

TEST_CASE("check_homeomorphism") {
  SUBCASE("identity is exactly rigid") {
    const ExtensionMesh mesh(MonotoneMap::identity(), 6);
    const HomeoReport rep = check_homeomorphism(mesh, 500, 1);
    CHECK(rep.min_determinant == 1.0);
    CHECK(rep.max_edge_vertex_mismatch == 0.0);
    CHECK(rep.source_area_defect == 0.0);
    CHECK(rep.image_area_defect <= 1e-12);
    CHECK(rep.overlap_violations == 0);
    CHECK(rep.left_leg.max_segment_ratio == doctest::Approx(1.0));
    CHECK(rep.left_leg.max_displacement == 0.0);
    CHECK(rep.passed());
  }
  SUBCASE("cubic power map, J = 8") {
    const ExtensionMesh mesh(MonotoneMap::power(3.0), 8);
    const HomeoReport rep = check_homeomorphism(mesh, 1000, 2);
    CHECK(rep.min_determinant > 0.0);
    CHECK(rep.max_edge_vertex_mismatch == 0.0);
    CHECK(rep.passed());
  }
  SUBCASE("cantor(0.1), J = 10") {
    const ExtensionMesh mesh(MonotoneMap::cantor(0.1), 10);
    const HomeoReport rep = check_homeomorphism(mesh, 1000, 3);
    CHECK(rep.min_determinant > 0.0);
    CHECK(rep.max_edge_vertex_mismatch <= 1e-12);
    CHECK(rep.image_area_defect <= 1e-9);
    CHECK(rep.overlap_violations == 0);
    CHECK(rep.passed());
  }
}

TEST_CASE("locate matches cell membership") {
  const ExtensionMesh mesh(MonotoneMap::identity(), 8);
  oracle::Rng rng(12);
  for (int it = 0; it < 500; ++it) {
    const double y = rng.uniform(1e-3, 0.999);
    const double x = rng.uniform(y - 1.0, 1.0 - y);
    const auto [j, k] = mesh.locate({x, y});
    const PentagonCell c = mesh.cell(j, k);
    bool inside = false;
    for (int t = 0; t < c.triangle_count; ++t)
      inside = inside || c.source_triangle(t).contains({x, y}, 1e-12);
    CHECK(inside);
  }
}

TEST_CASE("mesh depth validation") {
  CHECK_THROWS_AS(ExtensionMesh(MonotoneMap::identity(), -1), error);
  CHECK_THROWS_AS(ExtensionMesh(MonotoneMap::identity(), 17), error);
}
