#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <utility>
#include <vector>

namespace ccx {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double distance(Point a, Point b);

/// Partition of a polygonal domain into strictly convex quadrilaterals.
///
/// Quads list their vertices counterclockwise. `boundary_edges` holds the
/// edges owned by exactly one quad, stored as (min, max) vertex pairs.
struct QuadMesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 4>> quads;
  std::set<std::pair<int, int>> boundary_edges;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_quads() const { return quads.size(); }
  std::size_t num_edges() const;
  double area() const;
};

/// Local position of a triangle inside its parent quad. For a quad
/// (v0, v1, v2, v3), T1 sits on v0v1, T2 on v3v0, T3 on v2v3 and T4 on v1v2.
enum class Slot : std::uint8_t { T1 = 0, T2 = 1, T3 = 2, T4 = 3 };

/// Criss-cross triangulation of a QuadMesh.
///
/// The first `num_quad_vertices` vertices are the quad-mesh vertices, followed
/// by one center per quad (quad q owns vertex num_quad_vertices + q).
/// Triangles 4q..4q+3 belong to quad q in slot order T1..T4; every triangle is
/// counterclockwise and has the quad center as its local vertex 2.
struct TriMesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<int, 2>> edges;
  std::vector<bool> edge_on_boundary;
  std::vector<bool> vertex_on_boundary;
  // Local edges ordered (0,1), (0,2), (1,2).
  std::vector<std::array<int, 3>> triangle_edges;
  std::vector<int> parent_quad;
  std::vector<Slot> slot;

  std::size_t num_quads = 0;
  std::size_t num_quad_vertices = 0;
  std::size_t num_quad_edges = 0;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_edges() const { return edges.size(); }
  std::size_t num_triangles() const { return triangles.size(); }
  int center_vertex(std::size_t quad) const {
    return static_cast<int>(num_quad_vertices + quad);
  }
  std::array<Point, 3> triangle_points(std::size_t t) const;
  double triangle_area(std::size_t t) const;
};

struct MeshStats {
  double h = 0.0;
  double h_min = 0.0;
  double shape_regularity = 0.0;
  std::size_t num_vertices = 0;
  std::size_t num_edges = 0;
  std::size_t num_triangles = 0;
  std::size_t num_quads = 0;
  std::size_t num_quad_vertices = 0;
  std::size_t num_quad_edges = 0;
  bool euler_check = false;
};

QuadMesh build_rect_grid(double x0, double y0, double x1, double y1, int nx, int ny);

/// (0,pi)^2 minus [pi/2,pi)^2, each of the three pi/2 blocks split n x n.
QuadMesh build_lshape_grid(int n);

/// Seeded jitter of the interior vertices of a grid. Offsets are bounded by
/// amplitude times the shortest edge touching the vertex. If a quad loses
/// convexity the amplitude is halved (at most three times).
QuadMesh perturb_quad_grid(const QuadMesh& mesh, double amplitude, std::uint64_t seed);

/// Throws std::invalid_argument describing the first violated invariant.
void validate_quad_mesh(const QuadMesh& mesh);

bool is_strictly_convex(const std::array<Point, 4>& quad);

/// Intersection of the diagonals v0v2 and v1v3.
Point diagonal_intersection(const std::array<Point, 4>& quad);

TriMesh criss_cross(const QuadMesh& mesh);

MeshStats mesh_stats(const TriMesh& mesh);

/// Largest distance of a center's four incident edges from forming two
/// straight lines, measured as |cross| / length products.
double center_collinearity_residual(const TriMesh& mesh);

/// Plain-text export: `crisscross-mesh v1`, `V E T Q`, vertex coordinates,
/// triangle triples, then one `quad slot` pair per triangle (slot 1..4).
void write_mesh(std::ostream& os, const TriMesh& mesh);

}  // namespace ccx
