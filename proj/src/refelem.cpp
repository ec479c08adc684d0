#include "ccx/refelem.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ccx {

namespace {

void check_degree(int k) {
  if (k < 0 || k > 4)
    throw std::invalid_argument("unsupported Lagrange degree " + std::to_string(k));
}

// Gauss-Legendre nodes and weights on [0,1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = std::legendre(n, t);
      const double pm1 = n > 0 ? std::legendre(n - 1, t) : 0.0;
      dp = n * (t * p - pm1) / (t * t - 1.0);
      const double dt = p / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    const double p = std::legendre(n, t);
    const double pm1 = std::legendre(n - 1, t);
    dp = n * (t * p - pm1) / (t * t - 1.0);
    x[i] = 0.5 * (1.0 - t);
    w[i] = 1.0 / ((1.0 - t * t) * dp * dp);  // 2/((1-t^2)p'^2), halved for [0,1]
  }
}

// Collapsed (Duffy) product rule averaged over the six barycentric permutations.
QuadRule make_rule(int degree) {
  const int n = std::max(1, (degree + 3) / 2);
  std::vector<double> gx, gw;
  gauss_legendre(n, gx, gw);

  constexpr std::array<std::array<int, 3>, 6> perms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  QuadRule rule;
  rule.exactness_degree = degree;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = gx[i];
      const double y = gx[j] * (1.0 - gx[i]);
      const Barycentric b{1.0 - x - y, x, y};
      // Reference area is 1/2, so normalized weight = 2 * w_i w_j (1 - u).
      const double weight = 2.0 * gw[i] * gw[j] * (1.0 - gx[i]) / 6.0;
      for (const auto& p : perms) {
        rule.points.push_back({b[p[0]], b[p[1]], b[p[2]]});
        rule.weights.push_back(weight);
      }
    }
  return rule;
}

}  // namespace

std::vector<std::array<int, 3>> lagrange_nodes(int k) {
  check_degree(k);
  if (k == 0) return {{0, 0, 0}};
  std::vector<std::array<int, 3>> nodes;
  nodes.push_back({k, 0, 0});
  nodes.push_back({0, k, 0});
  nodes.push_back({0, 0, k});
  constexpr std::array<std::array<int, 2>, 3> edges{{{0, 1}, {0, 2}, {1, 2}}};
  for (const auto& [a, b] : edges)
    for (int j = 1; j < k; ++j) {
      std::array<int, 3> node{0, 0, 0};
      node[a] = k - j;
      node[b] = j;
      nodes.push_back(node);
    }
  for (int i1 = 1; i1 < k; ++i1)
    for (int i2 = 1; i1 + i2 < k; ++i2) nodes.push_back({k - i1 - i2, i1, i2});
  return nodes;
}

ShapeTable lagrange_shape(int k, const Barycentric& p) {
  check_degree(k);
  const double sum = p[0] + p[1] + p[2];
  if (std::abs(sum - 1.0) > 1e-12 || p[0] < -1e-12 || p[1] < -1e-12 || p[2] < -1e-12)
    throw std::invalid_argument("point is not a valid barycentric coordinate triple");

  ShapeTable table;
  table.degree = k;
  if (k == 0) {
    table.values = {1.0};
    table.grads = {{0.0, 0.0}};
    return table;
  }

  const auto nodes = lagrange_nodes(k);
  table.values.resize(nodes.size());
  table.grads.resize(nodes.size());

  // phi = prod_i prod_{m < a_i} (k lambda_i - m) / (m + 1)
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    std::array<double, 3> factor{};
    std::array<double, 3> dfactor{};
    for (int i = 0; i < 3; ++i) {
      double f = 1.0, df = 0.0;
      for (int m = 0; m < nodes[n][i]; ++m) {
        const double g = (k * p[i] - m) / (m + 1);
        const double dg = static_cast<double>(k) / (m + 1);
        df = df * g + f * dg;
        f *= g;
      }
      factor[i] = f;
      dfactor[i] = df;
    }
    table.values[n] = factor[0] * factor[1] * factor[2];
    const double d0 = dfactor[0] * factor[1] * factor[2];
    const double d1 = factor[0] * dfactor[1] * factor[2];
    const double d2 = factor[0] * factor[1] * dfactor[2];
    table.grads[n] = {d1 - d0, d2 - d0};
  }
  return table;
}

std::vector<Grad> physical_grads(const ShapeTable& shape, const std::array<Point, 3>& tri,
                                 std::ptrdiff_t triangle_index) {
  const Point e1 = tri[1] - tri[0];
  const Point e2 = tri[2] - tri[0];
  const double det = cross(e1, e2);
  const double diam = std::max({distance(tri[0], tri[1]), distance(tri[1], tri[2]),
                                distance(tri[2], tri[0])});
  if (!(std::abs(det) > 1e-14 * diam * diam))
    throw std::invalid_argument("degenerate triangle" +
                                (triangle_index >= 0 ? " " + std::to_string(triangle_index)
                                                     : std::string{}));
  // J = [e1 e2]; grad_phys = J^{-T} grad_ref.
  const double inv = 1.0 / det;
  std::vector<Grad> out(shape.grads.size());
  for (std::size_t i = 0; i < shape.grads.size(); ++i) {
    const auto [gx, gy] = shape.grads[i];
    out[i] = {inv * (e2.y * gx - e1.y * gy), inv * (-e2.x * gx + e1.x * gy)};
  }
  return out;
}

const QuadRule& quad_rule(int min_degree) {
  if (min_degree > kMaxQuadDegree)
    throw std::invalid_argument("no quadrature rule of degree " + std::to_string(min_degree));
  static std::once_flag once;
  static std::vector<QuadRule> table;
  std::call_once(once, [] {
    for (int d = 0; d <= kMaxQuadDegree; ++d) table.push_back(make_rule(d));
  });
  return table[std::max(min_degree, 0)];
}

}  // namespace ccx
