#include "ccx/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace ccx {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

namespace {

std::pair<int, int> edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

std::array<Point, 4> quad_points(const QuadMesh& mesh, std::size_t q) {
  const auto& ids = mesh.quads[q];
  return {mesh.vertices[ids[0]], mesh.vertices[ids[1]], mesh.vertices[ids[2]],
          mesh.vertices[ids[3]]};
}

double quad_area(const std::array<Point, 4>& p) {
  return 0.5 * (cross(p[0], p[1]) + cross(p[1], p[2]) + cross(p[2], p[3]) + cross(p[3], p[0]));
}

std::map<std::pair<int, int>, int> quad_edge_counts(const QuadMesh& mesh) {
  std::map<std::pair<int, int>, int> counts;
  for (const auto& q : mesh.quads)
    for (int i = 0; i < 4; ++i) ++counts[edge_key(q[i], q[(i + 1) % 4])];
  return counts;
}

void fill_boundary_edges(QuadMesh& mesh) {
  mesh.boundary_edges.clear();
  for (const auto& [edge, count] : quad_edge_counts(mesh))
    if (count == 1) mesh.boundary_edges.insert(edge);
}

// Uniform double in [0,1) from the top 53 bits; independent of the
// standard library's distribution implementation.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::size_t QuadMesh::num_edges() const { return quad_edge_counts(*this).size(); }

double QuadMesh::area() const {
  double total = 0.0;
  for (std::size_t q = 0; q < quads.size(); ++q) total += quad_area(quad_points(*this, q));
  return total;
}

std::array<Point, 3> TriMesh::triangle_points(std::size_t t) const {
  const auto& ids = triangles[t];
  return {vertices[ids[0]], vertices[ids[1]], vertices[ids[2]]};
}

double TriMesh::triangle_area(std::size_t t) const {
  const auto p = triangle_points(t);
  return 0.5 * cross(p[1] - p[0], p[2] - p[0]);
}

bool is_strictly_convex(const std::array<Point, 4>& quad) {
  for (int i = 0; i < 4; ++i) {
    const Point e0 = quad[(i + 1) % 4] - quad[i];
    const Point e1 = quad[(i + 2) % 4] - quad[(i + 1) % 4];
    if (!(cross(e0, e1) > 0.0)) return false;
  }
  return true;
}

Point diagonal_intersection(const std::array<Point, 4>& quad) {
  // v0 + s (v2 - v0) = v1 + t (v3 - v1)
  const Point d0 = quad[2] - quad[0];
  const Point d1 = quad[3] - quad[1];
  const Point rhs = quad[1] - quad[0];
  const double det = cross(d0, d1);
  if (det == 0.0) throw std::invalid_argument("quad diagonals are parallel");
  const double s = cross(rhs, d1) / det;
  const double t = cross(rhs, d0) / det;
  if (!(s > 0.0 && s < 1.0 && t > 0.0 && t < 1.0))
    throw std::invalid_argument("quad diagonals do not intersect inside the quad");
  return quad[0] + s * d0;
}

void validate_quad_mesh(const QuadMesh& mesh) {
  const auto nv = static_cast<int>(mesh.vertices.size());
  for (std::size_t q = 0; q < mesh.quads.size(); ++q) {
    for (int id : mesh.quads[q])
      if (id < 0 || id >= nv)
        throw std::invalid_argument("quad " + std::to_string(q) + " has an out-of-range vertex");
    const auto pts = quad_points(mesh, q);
    if (!is_strictly_convex(pts))
      throw std::invalid_argument("quad " + std::to_string(q) + " is not strictly convex");
    diagonal_intersection(pts);
  }
  for (const auto& [edge, count] : quad_edge_counts(mesh)) {
    if (count > 2)
      throw std::invalid_argument("edge (" + std::to_string(edge.first) + "," +
                                  std::to_string(edge.second) + ") is shared by more than 2 quads");
    if ((count == 1) != mesh.boundary_edges.contains(edge))
      throw std::invalid_argument("boundary edge set is inconsistent with quad adjacency");
  }
}

QuadMesh build_rect_grid(double x0, double y0, double x1, double y1, int nx, int ny) {
  if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("degenerate rectangle");
  if (nx < 1 || ny < 1) throw std::invalid_argument("grid subdivisions must be positive");

  QuadMesh mesh;
  mesh.vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.vertices.push_back({x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny});

  const auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      mesh.quads.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  fill_boundary_edges(mesh);
  return mesh;
}

QuadMesh build_lshape_grid(int n) {
  if (n < 1) throw std::invalid_argument("L-shape subdivisions must be positive");
  const int m = 2 * n;
  const double step = std::numbers::pi / m;
  const auto removed_vertex = [n](int i, int j) { return i > n && j > n; };

  QuadMesh mesh;
  std::vector<int> index((m + 1) * (m + 1), -1);
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i <= m; ++i) {
      if (removed_vertex(i, j)) continue;
      index[j * (m + 1) + i] = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back({i * step, j * step});
    }

  const auto id = [&](int i, int j) { return index[j * (m + 1) + i]; };
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      if (i >= n && j >= n) continue;
      mesh.quads.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  fill_boundary_edges(mesh);
  return mesh;
}

QuadMesh perturb_quad_grid(const QuadMesh& mesh, double amplitude, std::uint64_t seed) {
  if (!(amplitude >= 0.0 && amplitude < 0.5))
    throw std::invalid_argument("perturbation amplitude must lie in [0, 0.5)");

  const std::size_t nv = mesh.vertices.size();
  std::vector<bool> on_boundary(nv, false);
  for (const auto& [a, b] : mesh.boundary_edges) on_boundary[a] = on_boundary[b] = true;

  std::vector<double> min_edge(nv, std::numeric_limits<double>::infinity());
  for (const auto& q : mesh.quads)
    for (int i = 0; i < 4; ++i) {
      const int a = q[i], b = q[(i + 1) % 4];
      const double len = distance(mesh.vertices[a], mesh.vertices[b]);
      min_edge[a] = std::min(min_edge[a], len);
      min_edge[b] = std::min(min_edge[b], len);
    }

  // Unit-disk offsets drawn once so that retries only rescale them.
  std::mt19937_64 rng(seed);
  std::vector<Point> unit_offset(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    const double r = std::sqrt(unit_uniform(rng));
    const double theta = 2.0 * std::numbers::pi * unit_uniform(rng);
    unit_offset[v] = {r * std::cos(theta), r * std::sin(theta)};
  }

  double amp = amplitude;
  for (int attempt = 0; attempt < 4; ++attempt, amp *= 0.5) {
    QuadMesh out = mesh;
    for (std::size_t v = 0; v < nv; ++v)
      if (!on_boundary[v]) out.vertices[v] = out.vertices[v] + (amp * min_edge[v]) * unit_offset[v];
    bool ok = true;
    for (std::size_t q = 0; q < out.quads.size() && ok; ++q) ok = is_strictly_convex(quad_points(out, q));
    if (ok) {
      validate_quad_mesh(out);
      return out;
    }
  }
  throw std::invalid_argument("perturbation breaks convexity even after halving the amplitude 3 times");
}

TriMesh criss_cross(const QuadMesh& mesh) {
  validate_quad_mesh(mesh);

  TriMesh tm;
  tm.num_quads = mesh.quads.size();
  tm.num_quad_vertices = mesh.vertices.size();
  tm.num_quad_edges = mesh.num_edges();
  tm.vertices = mesh.vertices;
  tm.vertices.reserve(mesh.vertices.size() + mesh.quads.size());
  tm.triangles.reserve(4 * mesh.quads.size());

  for (std::size_t q = 0; q < mesh.quads.size(); ++q) {
    const auto& v = mesh.quads[q];
    const int c = static_cast<int>(tm.vertices.size());
    tm.vertices.push_back(diagonal_intersection(quad_points(mesh, q)));
    tm.triangles.push_back({v[0], v[1], c});  // T1
    tm.triangles.push_back({v[3], v[0], c});  // T2
    tm.triangles.push_back({v[2], v[3], c});  // T3
    tm.triangles.push_back({v[1], v[2], c});  // T4
    for (Slot s : {Slot::T1, Slot::T2, Slot::T3, Slot::T4}) {
      tm.parent_quad.push_back(static_cast<int>(q));
      tm.slot.push_back(s);
    }
  }

  constexpr std::array<std::array<int, 2>, 3> local_edges{{{0, 1}, {0, 2}, {1, 2}}};
  std::map<std::pair<int, int>, int> edge_index;
  std::vector<int> edge_uses;
  tm.triangle_edges.resize(tm.triangles.size());
  for (std::size_t t = 0; t < tm.triangles.size(); ++t) {
    const auto& tri = tm.triangles[t];
    for (int le = 0; le < 3; ++le) {
      const auto key = edge_key(tri[local_edges[le][0]], tri[local_edges[le][1]]);
      auto [it, inserted] = edge_index.try_emplace(key, static_cast<int>(tm.edges.size()));
      if (inserted) {
        tm.edges.push_back({key.first, key.second});
        edge_uses.push_back(0);
      }
      ++edge_uses[it->second];
      tm.triangle_edges[t][le] = it->second;
    }
  }

  tm.edge_on_boundary.assign(tm.edges.size(), false);
  tm.vertex_on_boundary.assign(tm.vertices.size(), false);
  for (std::size_t e = 0; e < tm.edges.size(); ++e) {
    if (edge_uses[e] != 1) continue;
    tm.edge_on_boundary[e] = true;
    tm.vertex_on_boundary[tm.edges[e][0]] = true;
    tm.vertex_on_boundary[tm.edges[e][1]] = true;
  }
  return tm;
}

MeshStats mesh_stats(const TriMesh& mesh) {
  MeshStats s;
  s.h_min = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto p = mesh.triangle_points(t);
    const double a = distance(p[0], p[1]);
    const double b = distance(p[1], p[2]);
    const double c = distance(p[2], p[0]);
    const double diam = std::max({a, b, c});
    const double inradius = 2.0 * std::abs(mesh.triangle_area(t)) / (a + b + c);
    s.h = std::max(s.h, diam);
    s.h_min = std::min(s.h_min, diam);
    s.shape_regularity = std::max(s.shape_regularity, diam / inradius);
  }
  s.num_vertices = mesh.num_vertices();
  s.num_edges = mesh.num_edges();
  s.num_triangles = mesh.num_triangles();
  s.num_quads = mesh.num_quads;
  s.num_quad_vertices = mesh.num_quad_vertices;
  s.num_quad_edges = mesh.num_quad_edges;
  const auto V = static_cast<long long>(s.num_vertices);
  const auto E = static_cast<long long>(s.num_edges);
  const auto T = static_cast<long long>(s.num_triangles);
  const auto VQ = static_cast<long long>(s.num_quad_vertices);
  const auto EQ = static_cast<long long>(s.num_quad_edges);
  const auto Q = static_cast<long long>(s.num_quads);
  s.euler_check = (V - E + T == 1) && (1 - VQ + EQ - Q == 0);
  return s;
}

double center_collinearity_residual(const TriMesh& mesh) {
  double worst = 0.0;
  for (std::size_t q = 0; q < mesh.num_quads; ++q) {
    // T1 = (v0, v1, c), T3 = (v2, v3, c): v0-c-v2 and v1-c-v3 are the diagonals.
    const auto& t1 = mesh.triangles[4 * q];
    const auto& t3 = mesh.triangles[4 * q + 2];
    const Point c = mesh.vertices[mesh.center_vertex(q)];
    const Point v0 = mesh.vertices[t1[0]], v1 = mesh.vertices[t1[1]];
    const Point v2 = mesh.vertices[t3[0]], v3 = mesh.vertices[t3[1]];
    const auto line_defect = [&](Point a, Point b) {
      const Point da = a - c, db = b - c;
      return std::abs(cross(da, db)) / (std::hypot(da.x, da.y) * std::hypot(db.x, db.y));
    };
    worst = std::max({worst, line_defect(v0, v2), line_defect(v1, v3)});
  }
  return worst;
}

void write_mesh(std::ostream& os, const TriMesh& mesh) {
  const auto old_precision = os.precision(17);
  os << "crisscross-mesh v1\n";
  os << mesh.num_vertices() << ' ' << mesh.num_edges() << ' ' << mesh.num_triangles() << ' '
     << mesh.num_quads << '\n';
  for (const auto& p : mesh.vertices) os << p.x << ' ' << p.y << '\n';
  for (const auto& t : mesh.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t)
    os << mesh.parent_quad[t] << ' ' << static_cast<int>(mesh.slot[t]) + 1 << '\n';
  os.precision(old_precision);
}

}  // namespace ccx
