#include <doctest.h>

#include <numbers>
#include <random>

#include "ccx/audit.hpp"
#include "ccx/error.hpp"

using namespace ccx;

namespace {

constexpr double pi = std::numbers::pi;

TriMesh square(int n) { return criss_cross(build_rect_grid(0, 0, pi, pi, n, n)); }

std::array<Point, 4> random_convex_quad(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.25, 0.25);
  for (;;) {
    std::array<Point, 4> q{Point{0 + u(rng), 0 + u(rng)}, Point{1 + u(rng), 0 + u(rng)}, Point{1 + u(rng), 1 + u(rng)},
                           Point{0 + u(rng), 1 + u(rng)}};
    if (is_strictly_convex(q)) return q;
  }
}

}  // namespace

TEST_SUITE("audit") {

TEST_CASE("dimension formula") {
  CHECK(dim_sigma(2, 4, 4, 1) == 16);
  CHECK(dim_sigma(3, 4, 4, 1) == 28);
  CHECK(dim_sigma(2, 9, 12, 4) == 39);
  CHECK_THROWS_AS(dim_sigma(1, 4, 4, 1), std::invalid_argument);
}

TEST_CASE("single square exactness numbers") {
  const ComplexReport r2 = exactness_check(square(1), 2);
  CHECK(r2.dim_sigma == 16);
  CHECK(r2.dim_v == 26);
  CHECK(r2.dim_wh == 11);
  CHECK(r2.euler_residual == 0);
  CHECK(r2.rank_div == 11);
  CHECK(r2.nullity_b == 15);
  CHECK(r2.ok());
  const ComplexReport r3 = exactness_check(square(1), 3);
  CHECK(r3.dim_sigma == 28);
  CHECK(r3.dim_v == 50);
  CHECK(r3.dim_wh == 23);
  CHECK(r3.euler_residual == 0);
  CHECK(r3.ok());
}

TEST_CASE("exactness on grids and the L-shape") {
  const ComplexReport r = exactness_check(square(2), 2);
  CHECK(r.nullity_b == 38);
  for (const TriMesh& m : {square(2), square(3), criss_cross(build_lshape_grid(1)), criss_cross(build_lshape_grid(2)),
                           criss_cross(perturb_quad_grid(build_rect_grid(0, 0, 1, 1, 3, 3), 0.2, 2))})
    for (int k : {2, 3}) {
      const ComplexReport c = exactness_check(m, k);
      CHECK(c.euler_residual == 0);
      CHECK(c.rank_div == c.dim_wh);
      CHECK((long long)c.nullity_b == c.dim_sigma - 1);
      CHECK(c.dim_dg == c.dim_wh + c.q);
    }
}

TEST_CASE("exactness check refuses large meshes") {
  CHECK_THROWS_AS(exactness_check(square(12), 3), AuditError);
  CHECK_THROWS_AS(exactness_check(square(1), 1), std::invalid_argument);
}

TEST_CASE("local W_h audit") {
  const WhLocalReport unit = wh_local_audit({Point{0, 0}, Point{1, 0}, Point{1, 1}, Point{0, 1}}, 2);
  CHECK(unit.rank == 11);
  CHECK(unit.expected_rank == 11);
  CHECK(unit.max_alternating_residual < 1e-10);
  CHECK(unit.checkerboard_distance > 0.1);
  const WhLocalReport skew = wh_local_audit({Point{0, 0}, Point{2, 0}, Point{1.8, 1.1}, Point{0.2, 0.9}}, 3);
  CHECK(skew.rank == 23);
  CHECK(skew.max_alternating_residual < 1e-10);
  CHECK(skew.ok());
  std::mt19937_64 rng(99);
  for (int i = 0; i < 10; ++i)
    for (int k : {2, 3}) CHECK(wh_local_audit(random_convex_quad(rng), k, 1000 + i, 100).ok());
  CHECK_THROWS_AS(wh_local_audit({Point{0, 0}, Point{2, 0}, Point{0.5, 0.5}, Point{0, 2}}, 2), std::invalid_argument);
}

TEST_CASE("spurious scan") {
  const SpuriousReport k2 = spurious_scan(Domain::Square, 2, {4, 8}, 10);
  CHECK(k2.flags.empty());
  CHECK(k2.levels.size() == 2);
  CHECK(k2.exact == exact_square_spectrum(10));
  const SpuriousReport k3 = spurious_scan(Domain::Square, 3, {4, 8}, 10);
  CHECK(k3.flags.empty());
  const SpuriousReport k1 = spurious_scan(Domain::Square, 1, {4, 8}, 10);
  REQUIRE_FALSE(k1.flags.empty());
  for (const auto& f : k1.flags) {
    CHECK(f.distances[0] > 0.5);
    CHECK(f.distances[1] > 0.5 * f.distances[0]);
  }
  CHECK_THROWS_AS(spurious_scan(Domain::LShape, 2, {2}, 4), std::invalid_argument);
  CHECK_THROWS_AS(spurious_scan(Domain::Square, 2, {}, 4), std::invalid_argument);
}

}  // TEST_SUITE
