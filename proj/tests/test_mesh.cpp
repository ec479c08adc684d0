#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "ccx/mesh.hpp"

using namespace ccx;

namespace {

constexpr double pi = std::numbers::pi;

std::set<std::pair<int, int>> brute_edges(const QuadMesh& m) {
  std::set<std::pair<int, int>> e;
  for (const auto& q : m.quads)
    for (int i = 0; i < 4; ++i) e.insert({std::min(q[i], q[(i + 1) % 4]), std::max(q[i], q[(i + 1) % 4])});
  return e;
}

std::set<int> used_vertices(const QuadMesh& m) {
  std::set<int> v;
  for (const auto& q : m.quads) v.insert(q.begin(), q.end());
  return v;
}

double signed_area(Point a, Point b, Point c) { return 0.5 * cross(b - a, c - a); }

}  // namespace

TEST_SUITE("mesh") {

TEST_CASE("rectangular grid counts and euler identity") {
  for (auto [nx, ny] : {std::pair{1, 1}, {2, 2}, {3, 5}, {8, 8}}) {
    const QuadMesh m = build_rect_grid(0, 0, pi, pi, nx, ny);
    CHECK(m.num_vertices() == std::size_t((nx + 1) * (ny + 1)));
    CHECK(m.num_quads() == std::size_t(nx * ny));
    CHECK(m.num_edges() == brute_edges(m).size());
    CHECK(m.num_edges() == std::size_t(nx * (ny + 1) + ny * (nx + 1)));
    CHECK(1 - (long)m.num_vertices() + (long)m.num_edges() - (long)m.num_quads() == 0);
    CHECK(m.boundary_edges.size() == std::size_t(2 * (nx + ny)));
    CHECK(m.area() == doctest::Approx(pi * pi).epsilon(1e-14));
  }
}

TEST_CASE("L-shape counts") {
  const QuadMesh m1 = build_lshape_grid(1);
  CHECK(m1.num_quads() == 3);
  CHECK(m1.num_vertices() == 8);
  CHECK(used_vertices(m1).size() == 8);
  CHECK(build_lshape_grid(2).num_quads() == 12);
  const QuadMesh m4 = build_lshape_grid(4);
  CHECK(m4.num_quads() == 48);
  for (int n : {1, 2, 3, 4, 8}) {
    const QuadMesh m = build_lshape_grid(n);
    const auto e = brute_edges(m);
    CHECK(m.num_edges() == e.size());
    CHECK(used_vertices(m).size() == m.num_vertices());
    CHECK(1 - (long)m.num_vertices() + (long)e.size() - (long)m.num_quads() == 0);
    CHECK(m.area() == doctest::Approx(0.75 * pi * pi).epsilon(1e-13));
    for (const auto& v : m.vertices) CHECK_FALSE((v.x > pi / 2 + 1e-12 && v.y > pi / 2 + 1e-12));
  }
  CHECK_THROWS_AS(build_lshape_grid(0), std::invalid_argument);
  CHECK_THROWS_AS(build_rect_grid(0, 0, 1, 1, 0, 2), std::invalid_argument);
}

TEST_CASE("diagonal intersection is not the centroid") {
  const std::array<Point, 4> q{Point{0, 0}, Point{2, 0}, Point{1.8, 1.1}, Point{0.2, 0.9}};
  // Cramer on p0 + s (p2 - p0) = p1 + t (p3 - p1).
  const Point d1 = q[2] - q[0], d2 = q[3] - q[1], r = q[1] - q[0];
  const double det = cross(d1, Point{-d2.x, -d2.y});
  const double s = cross(r, Point{-d2.x, -d2.y}) / det;
  const Point expect = q[0] + s * d1;
  const Point c = diagonal_intersection(q);
  CHECK(c.x == doctest::Approx(expect.x).epsilon(1e-14));
  CHECK(c.y == doctest::Approx(expect.y).epsilon(1e-14));
  const Point centroid{(0 + 2 + 1.8 + 0.2) / 4, (0 + 0 + 1.1 + 0.9) / 4};
  CHECK(distance(c, centroid) > 1e-3);
  CHECK(is_strictly_convex(q));
  CHECK_FALSE(is_strictly_convex({Point{0, 0}, Point{2, 0}, Point{0.5, 0.5}, Point{0, 2}}));
}

TEST_CASE("criss-cross topology") {
  for (const QuadMesh& qm : {build_rect_grid(0, 0, pi, pi, 3, 3), build_lshape_grid(2),
                             perturb_quad_grid(build_rect_grid(0, 0, pi, pi, 4, 4), 0.2, 3)}) {
    const TriMesh t = criss_cross(qm);
    const std::size_t Q = qm.num_quads();
    CHECK(t.num_vertices() == qm.num_vertices() + Q);
    CHECK(t.num_edges() == qm.num_edges() + 4 * Q);
    CHECK(t.num_triangles() == 4 * Q);
    CHECK((long)t.num_vertices() - (long)t.num_edges() + (long)t.num_triangles() == 1);
    CHECK(mesh_stats(t).euler_check);
    CHECK(center_collinearity_residual(t) < 1e-12);

    std::map<std::pair<int, int>, int> edge_use;
    for (std::size_t i = 0; i < t.num_triangles(); ++i) {
      const auto& tri = t.triangles[i];
      const int q = t.parent_quad[i];
      CHECK(q == int(i / 4));
      CHECK(static_cast<int>(t.slot[i]) == int(i % 4));
      CHECK(tri[2] == t.center_vertex(q));
      const auto p = t.triangle_points(i);
      CHECK(signed_area(p[0], p[1], p[2]) > 0.0);
      CHECK(t.triangle_area(i) == doctest::Approx(signed_area(p[0], p[1], p[2])));
      // Slot k sits on the quad edge (v_k', v_k'+1) listed in the Slot comment.
      const auto& qv = qm.quads[q];
      const std::array<std::pair<int, int>, 4> base{{{qv[0], qv[1]}, {qv[3], qv[0]}, {qv[2], qv[3]}, {qv[1], qv[2]}}};
      CHECK(tri[0] == base[i % 4].first);
      CHECK(tri[1] == base[i % 4].second);
      const int local[3][2] = {{0, 1}, {0, 2}, {1, 2}};
      for (int e = 0; e < 3; ++e) {
        const auto& ev = t.edges[t.triangle_edges[i][e]];
        const int a = tri[local[e][0]], b = tri[local[e][1]];
        CHECK(std::min(a, b) == std::min(ev[0], ev[1]));
        CHECK(std::max(a, b) == std::max(ev[0], ev[1]));
        edge_use[{std::min(a, b), std::max(a, b)}]++;
      }
    }
    std::size_t boundary = 0;
    for (std::size_t e = 0; e < t.num_edges(); ++e) {
      const int uses = edge_use[{std::min(t.edges[e][0], t.edges[e][1]), std::max(t.edges[e][0], t.edges[e][1])}];
      CHECK(uses == (t.edge_on_boundary[e] ? 1 : 2));
      boundary += t.edge_on_boundary[e];
    }
    CHECK(boundary == qm.boundary_edges.size());
    for (std::size_t q = 0; q < Q; ++q) {
      const auto& qv = qm.quads[q];
      const Point c = diagonal_intersection({qm.vertices[qv[0]], qm.vertices[qv[1]], qm.vertices[qv[2]], qm.vertices[qv[3]]});
      CHECK(distance(c, t.vertices[t.center_vertex(q)]) < 1e-14);
      double area = 0.0;
      for (int s = 0; s < 4; ++s) area += t.triangle_area(4 * q + s);
      const double qa = 0.5 * (cross(qm.vertices[qv[0]], qm.vertices[qv[1]]) + cross(qm.vertices[qv[1]], qm.vertices[qv[2]]) +
                               cross(qm.vertices[qv[2]], qm.vertices[qv[3]]) + cross(qm.vertices[qv[3]], qm.vertices[qv[0]]));
      CHECK(area == doctest::Approx(qa).epsilon(1e-13));
    }
  }
}

TEST_CASE("mesh size matches brute-force triangle diameters") {
  for (int n : {1, 4, 8}) {
    const TriMesh t = criss_cross(build_rect_grid(0, 0, pi, pi, n, n));
    double h = 0.0;
    for (std::size_t i = 0; i < t.num_triangles(); ++i) {
      const auto p = t.triangle_points(i);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) h = std::max(h, distance(p[a], p[b]));
    }
    const MeshStats s = mesh_stats(t);
    CHECK(s.h == doctest::Approx(h).epsilon(1e-15));
    CHECK(s.h == doctest::Approx(pi / n).epsilon(1e-14));
    CHECK(s.shape_regularity > 0.0);
  }
}

TEST_CASE("perturbation properties") {
  const QuadMesh base = build_rect_grid(0, 0, pi, pi, 8, 8);
  const QuadMesh same = perturb_quad_grid(base, 0.0, 42);
  for (std::size_t v = 0; v < base.num_vertices(); ++v) {
    CHECK(same.vertices[v].x == base.vertices[v].x);
    CHECK(same.vertices[v].y == base.vertices[v].y);
  }
  const QuadMesh a = perturb_quad_grid(base, 0.2, 42);
  const QuadMesh b = perturb_quad_grid(base, 0.2, 42);
  const QuadMesh c = perturb_quad_grid(base, 0.2, 43);
  bool differs = false;
  std::set<int> boundary;
  for (const auto& [u, w] : base.boundary_edges) boundary.insert({u, w});
  const double spacing = pi / 8;
  for (std::size_t v = 0; v < base.num_vertices(); ++v) {
    CHECK(a.vertices[v].x == b.vertices[v].x);
    CHECK(a.vertices[v].y == b.vertices[v].y);
    differs = differs || a.vertices[v].x != c.vertices[v].x;
    const double d = distance(a.vertices[v], base.vertices[v]);
    if (boundary.count(int(v))) CHECK(d == 0.0);
    CHECK(d <= 0.2 * spacing + 1e-15);
  }
  CHECK(differs);
  for (const auto& q : a.quads)
    CHECK(is_strictly_convex({a.vertices[q[0]], a.vertices[q[1]], a.vertices[q[2]], a.vertices[q[3]]}));
  CHECK_NOTHROW(validate_quad_mesh(a));
  CHECK_THROWS_AS(perturb_quad_grid(base, 0.5, 1), std::invalid_argument);
}

TEST_CASE("validation rejects broken meshes") {
  QuadMesh m = build_rect_grid(0, 0, 1, 1, 1, 1);
  CHECK_NOTHROW(validate_quad_mesh(m));
  std::swap(m.quads[0][1], m.quads[0][3]);  // clockwise
  CHECK_THROWS_AS(validate_quad_mesh(m), std::invalid_argument);
}

TEST_CASE("mesh export format") {
  const TriMesh t = criss_cross(build_rect_grid(0, 0, 1, 1, 1, 1));
  std::ostringstream os;
  write_mesh(os, t);
  std::istringstream is(os.str());
  std::string magic, version;
  is >> magic >> version;
  CHECK(magic == "crisscross-mesh");
  CHECK(version == "v1");
  std::size_t V, E, T, Q;
  is >> V >> E >> T >> Q;
  CHECK(V == 5);
  CHECK(E == 8);
  CHECK(T == 4);
  CHECK(Q == 1);
  for (std::size_t i = 0; i < V; ++i) {
    double x, y;
    is >> x >> y;
    CHECK(x == t.vertices[i].x);
    CHECK(y == t.vertices[i].y);
  }
  for (std::size_t i = 0; i < T; ++i) {
    int a, b, c;
    is >> a >> b >> c;
    CHECK(a == t.triangles[i][0]);
    CHECK(c == 4);
  }
  for (std::size_t i = 0; i < T; ++i) {
    int q, s;
    is >> q >> s;
    CHECK(q == 0);
    CHECK(s == int(i) + 1);
  }
  CHECK(bool(is));
}

}  // TEST_SUITE
