#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ccx/mesh.hpp"

namespace ccx {

using Barycentric = std::array<double, 3>;
using Grad = std::array<double, 2>;

/// Number of equispaced Lagrange nodes of degree k on a triangle.
constexpr int lagrange_node_count(int k) { return (k + 1) * (k + 2) / 2; }

/// Integer barycentric multi-indices of the degree-k nodes in basis order:
/// the three vertices, then the nodes of edges (0,1), (0,2), (1,2) with the
/// parameter increasing from the lower local vertex, then interior nodes.
/// Degree 0 yields the single centroid node.
std::vector<std::array<int, 3>> lagrange_nodes(int k);

/// Values and reference-coordinate gradients of the degree-k basis at a point.
/// The reference triangle is (0,0), (1,0), (0,1) with barycentrics
/// (1 - x - y, x, y).
struct ShapeTable {
  int degree = 0;
  std::vector<double> values;
  std::vector<Grad> grads;
};

/// Supports degrees 0..4; degree 0 is the constant used for discontinuous P0.
ShapeTable lagrange_shape(int k, const Barycentric& p);

/// Maps reference gradients to the affine triangle `tri`. `triangle_index`
/// only feeds the error message for degenerate input.
std::vector<Grad> physical_grads(const ShapeTable& shape, const std::array<Point, 3>& tri,
                                 std::ptrdiff_t triangle_index = -1);

/// Quadrature on the reference triangle with weights summing to one; multiply
/// by the triangle area to integrate.
struct QuadRule {
  std::vector<Barycentric> points;
  std::vector<double> weights;
  int exactness_degree = 0;
};

constexpr int kMaxQuadDegree = 10;

/// Fully symmetric rule exact for all polynomials of degree <= min_degree.
const QuadRule& quad_rule(int min_degree);

}  // namespace ccx
