#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "ccx/refelem.hpp"

using namespace ccx;

namespace {

Barycentric random_bary(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x = u(rng), y = u(rng);
  if (x + y > 1.0) {
    x = 1.0 - x;
    y = 1.0 - y;
  }
  return {1.0 - x - y, x, y};
}

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

TEST_SUITE("refelem") {

TEST_CASE("node counts and layout") {
  for (int k = 0; k <= 4; ++k) CHECK(lagrange_nodes(k).size() == std::size_t(lagrange_node_count(k)));
  CHECK(lagrange_node_count(2) == 6);
  CHECK(lagrange_node_count(3) == 10);
  const auto n2 = lagrange_nodes(2);
  CHECK(n2[0] == std::array<int, 3>{2, 0, 0});
  CHECK(n2[1] == std::array<int, 3>{0, 2, 0});
  CHECK(n2[2] == std::array<int, 3>{0, 0, 2});
  CHECK(n2[3] == std::array<int, 3>{1, 1, 0});
  CHECK(n2[4] == std::array<int, 3>{1, 0, 1});
  CHECK(n2[5] == std::array<int, 3>{0, 1, 1});
  const auto n3 = lagrange_nodes(3);
  // Edge (0,1) nodes run from local vertex 0 towards 1.
  CHECK(n3[3] == std::array<int, 3>{2, 1, 0});
  CHECK(n3[4] == std::array<int, 3>{1, 2, 0});
  CHECK(n3[9] == std::array<int, 3>{1, 1, 1});
}

TEST_CASE("Kronecker property, partition of unity") {
  std::mt19937_64 rng(7);
  for (int k = 1; k <= 4; ++k) {
    const auto nodes = lagrange_nodes(k);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const Barycentric p{double(nodes[j][0]) / k, double(nodes[j][1]) / k, double(nodes[j][2]) / k};
      const ShapeTable s = lagrange_shape(k, p);
      for (std::size_t i = 0; i < nodes.size(); ++i) CHECK(s.values[i] == doctest::Approx(i == j ? 1.0 : 0.0));
    }
    for (int r = 0; r < 20; ++r) {
      const ShapeTable s = lagrange_shape(k, random_bary(rng));
      double sum = 0, gx = 0, gy = 0;
      for (std::size_t i = 0; i < s.values.size(); ++i) {
        sum += s.values[i];
        gx += s.grads[i][0];
        gy += s.grads[i][1];
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(std::abs(gx) < 1e-11);
      CHECK(std::abs(gy) < 1e-11);
    }
  }
  const ShapeTable s0 = lagrange_shape(0, {0.2, 0.3, 0.5});
  CHECK(s0.values.size() == 1);
  CHECK(s0.values[0] == 1.0);
}

TEST_CASE("cubic basis equals the inverted Vandermonde basis") {
  const int k = 3;
  const auto nodes = lagrange_nodes(k);
  const int n = lagrange_node_count(k);
  auto monomials = [&](double x, double y) {
    Eigen::VectorXd m(n);
    int c = 0;
    for (int d = 0; d <= k; ++d)
      for (int a = d; a >= 0; --a) m(c++) = std::pow(x, a) * std::pow(y, d - a);
    return m;
  };
  Eigen::MatrixXd V(n, n);
  for (int j = 0; j < n; ++j) V.col(j) = monomials(double(nodes[j][1]) / k, double(nodes[j][2]) / k);
  const Eigen::MatrixXd coeff = V.inverse();  // row i: basis i in monomial coordinates
  std::mt19937_64 rng(11);
  for (int r = 0; r < 25; ++r) {
    const Barycentric p = random_bary(rng);
    const ShapeTable s = lagrange_shape(k, p);
    const Eigen::VectorXd expect = coeff * monomials(p[1], p[2]);
    for (int i = 0; i < n; ++i) CHECK(s.values[i] == doctest::Approx(expect(i)).epsilon(1e-11));
  }
}

TEST_CASE("gradients match finite differences") {
  std::mt19937_64 rng(5);
  const double eps = 1e-6;
  for (int k = 1; k <= 4; ++k) {
    for (int r = 0; r < 5; ++r) {
      Barycentric p = random_bary(rng);
      p = {0.25 + 0.5 * p[0] * 0.5, 0.25 + 0.5 * p[1] * 0.5, 0.0};
      p[2] = 1.0 - p[0] - p[1];
      const ShapeTable s = lagrange_shape(k, p);
      const ShapeTable sxp = lagrange_shape(k, {p[0] - eps, p[1] + eps, p[2]});
      const ShapeTable sxm = lagrange_shape(k, {p[0] + eps, p[1] - eps, p[2]});
      const ShapeTable syp = lagrange_shape(k, {p[0] - eps, p[1], p[2] + eps});
      const ShapeTable sym = lagrange_shape(k, {p[0] + eps, p[1], p[2] - eps});
      for (std::size_t i = 0; i < s.values.size(); ++i) {
        CHECK(s.grads[i][0] == doctest::Approx((sxp.values[i] - sxm.values[i]) / (2 * eps)).epsilon(1e-6));
        CHECK(s.grads[i][1] == doctest::Approx((syp.values[i] - sym.values[i]) / (2 * eps)).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("physical gradients of linear functions") {
  const std::array<Point, 3> tri{Point{1, 1}, Point{3, 1.5}, Point{1.5, 4}};
  const ShapeTable s = lagrange_shape(2, {0.2, 0.5, 0.3});
  const auto g = physical_grads(s, tri);
  // f(x, y) = 2x - 3y + 1 interpolated by its nodal values has gradient (2, -3).
  const auto nodes = lagrange_nodes(2);
  double gx = 0, gy = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double b0 = nodes[i][0] / 2.0, b1 = nodes[i][1] / 2.0, b2 = nodes[i][2] / 2.0;
    const double x = b0 * tri[0].x + b1 * tri[1].x + b2 * tri[2].x;
    const double y = b0 * tri[0].y + b1 * tri[1].y + b2 * tri[2].y;
    const double f = 2 * x - 3 * y + 1;
    gx += f * g[i][0];
    gy += f * g[i][1];
  }
  CHECK(gx == doctest::Approx(2.0));
  CHECK(gy == doctest::Approx(-3.0));
  CHECK_THROWS_AS(physical_grads(s, {Point{0, 0}, Point{1, 1}, Point{2, 2}}), std::invalid_argument);
}

TEST_CASE("quadrature integrates monomials exactly") {
  for (int d = 0; d <= kMaxQuadDegree; ++d) {
    const QuadRule& q = quad_rule(d);
    CHECK(q.exactness_degree >= d);
    double wsum = 0;
    for (double w : q.weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) {
        double s = 0;
        for (std::size_t i = 0; i < q.points.size(); ++i)
          s += q.weights[i] * std::pow(q.points[i][1], a) * std::pow(q.points[i][2], b);
        // Reference area 1/2, exact integral a! b! / (a + b + 2)!.
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        CHECK(0.5 * s == doctest::Approx(exact).epsilon(1e-13));
      }
    for (const auto& p : q.points) {
      CHECK(p[0] >= 0.0);
      CHECK(p[1] >= 0.0);
      CHECK(p[2] >= 0.0);
      CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0));
    }
  }
  CHECK_THROWS_AS(quad_rule(kMaxQuadDegree + 1), std::invalid_argument);
}

TEST_CASE("quadrature rules are permutation symmetric") {
  const QuadRule& q = quad_rule(6);
  // f = l0^3 l1 is not symmetric; its integral must equal that of l1^3 l2, etc.
  auto integ = [&](int i, int j) {
    double s = 0;
    for (std::size_t n = 0; n < q.points.size(); ++n) s += q.weights[n] * std::pow(q.points[n][i], 7) * q.points[n][j];
    return s;
  };
  const double ref = integ(0, 1);
  CHECK(integ(1, 2) == doctest::Approx(ref).epsilon(1e-13));
  CHECK(integ(2, 0) == doctest::Approx(ref).epsilon(1e-13));
  CHECK(integ(1, 0) == doctest::Approx(ref).epsilon(1e-13));
}

}  // TEST_SUITE
