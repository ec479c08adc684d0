#include "ccx/fespace.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "ccx/refelem.hpp"

namespace ccx {

namespace {

void check_continuous_degree(int k) {
  if (k < 1 || k > 4) throw std::invalid_argument("unsupported Lagrange degree " + std::to_string(k));
}

// Center node is local vertex 2 of every criss-cross triangle, which is
// DG basis index 2 for degree >= 1 and the lone constant for degree 0.
int center_local_dof(int degree) { return degree == 0 ? 0 : 2; }

}  // namespace

DofMap build_scalar_space(const TriMesh& mesh, int k) {
  check_continuous_degree(k);
  const std::size_t nv = mesh.num_vertices();
  const std::size_t ne = mesh.num_edges();
  const std::size_t nt = mesh.num_triangles();
  const std::size_t per_edge = k - 1;
  const std::size_t per_cell_interior = (k - 1) * (k - 2) / 2;

  DofMap map;
  map.kind = SpaceKind::Scalar;
  map.degree = k;
  map.n_dofs = nv + per_edge * ne + per_cell_interior * nt;
  map.dofs_per_cell = lagrange_node_count(k);
  map.cell_dofs.resize(nt * map.dofs_per_cell);

  constexpr std::array<std::array<int, 2>, 3> local_edges{{{0, 1}, {0, 2}, {1, 2}}};
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    int* out = map.cell_dofs.data() + t * map.dofs_per_cell;
    int n = 0;
    for (int v = 0; v < 3; ++v) out[n++] = tri[v];
    for (int le = 0; le < 3; ++le) {
      const int e = mesh.triangle_edges[t][le];
      const int base = static_cast<int>(nv + per_edge * e);
      // Local parameter runs from local vertex a to b; global from edges[e][0].
      const bool aligned = tri[local_edges[le][0]] == mesh.edges[e][0];
      for (std::size_t j = 0; j < per_edge; ++j)
        out[n++] = base + static_cast<int>(aligned ? j : per_edge - 1 - j);
    }
    const int base = static_cast<int>(nv + per_edge * ne + per_cell_interior * t);
    for (std::size_t j = 0; j < per_cell_interior; ++j) out[n++] = base + static_cast<int>(j);
  }
  map.boundary_dofs = boundary_dofs(map, mesh);
  return map;
}

DofMap build_vector_space(const TriMesh& mesh, int k) {
  const DofMap scalar = build_scalar_space(mesh, k);
  DofMap map;
  map.kind = SpaceKind::Vector2;
  map.degree = k;
  map.n_dofs = 2 * scalar.n_dofs;
  map.dofs_per_cell = 2 * scalar.dofs_per_cell;
  map.cell_dofs.reserve(2 * scalar.cell_dofs.size());
  for (int s : scalar.cell_dofs) {
    map.cell_dofs.push_back(2 * s);
    map.cell_dofs.push_back(2 * s + 1);
  }
  map.boundary_dofs = boundary_dofs(map, mesh);
  return map;
}

std::vector<int> boundary_dofs(const DofMap& dofs, const TriMesh& mesh) {
  const int k = dofs.degree;
  const std::size_t per_edge = k - 1;
  const std::size_t nv = mesh.num_vertices();
  std::vector<int> scalar;
  for (std::size_t v = 0; v < nv; ++v)
    if (mesh.vertex_on_boundary[v]) scalar.push_back(static_cast<int>(v));
  for (std::size_t e = 0; e < mesh.num_edges(); ++e)
    if (mesh.edge_on_boundary[e])
      for (std::size_t j = 0; j < per_edge; ++j) scalar.push_back(static_cast<int>(nv + per_edge * e + j));
  std::sort(scalar.begin(), scalar.end());
  if (dofs.kind == SpaceKind::Scalar) return scalar;
  std::vector<int> vec;
  vec.reserve(2 * scalar.size());
  for (int s : scalar) {
    vec.push_back(2 * s);
    vec.push_back(2 * s + 1);
  }
  return vec;
}

DgSpace build_dg_space(const TriMesh& mesh, int degree) {
  if (degree < 0 || degree > 4) throw std::invalid_argument("unsupported DG degree " + std::to_string(degree));
  DgSpace dg;
  dg.degree = degree;
  dg.per_cell = lagrange_node_count(degree);
  dg.n_dofs = dg.per_cell * mesh.num_triangles();
  return dg;
}

WhBasis build_wh_space(const TriMesh& mesh, int k) {
  if (k != 2 && k != 3)
    throw std::invalid_argument("W_h basis is only available for k = 2 or 3 (got " + std::to_string(k) + ")");

  WhBasis wh;
  wh.k = k;
  wh.dg = build_dg_space(mesh, k - 1);
  const auto per_cell = static_cast<int>(wh.dg.per_cell);
  const int center = center_local_dof(wh.dg.degree);
  wh.local_dim = 4 * wh.dg.per_cell - 1;
  wh.n_dofs = wh.local_dim * mesh.num_quads;
  wh.functions.reserve(wh.n_dofs);
  wh.eliminated_dg_dof.resize(mesh.num_quads);

  // Sign of each slot in l_Q, indexed by Slot (T1, T2, T3, T4).
  constexpr std::array<double, 4> sign{1.0, -1.0, 1.0, -1.0};
  for (std::size_t q = 0; q < mesh.num_quads; ++q) {
    const int first = static_cast<int>(4 * q) * per_cell;
    const int eliminated = first + static_cast<int>(Slot::T4) * per_cell + center;
    wh.eliminated_dg_dof[q] = eliminated;
    for (int s = 0; s < 4; ++s)
      for (int i = 0; i < per_cell; ++i) {
        const int dof = first + s * per_cell + i;
        if (dof == eliminated) continue;
        WhFunction f;
        f.quad = static_cast<int>(q);
        f.terms.emplace_back(dof, 1.0);
        // c_T4 = c_T1 - c_T2 + c_T3 keeps l_Q = 0.
        if (i == center) f.terms.emplace_back(eliminated, sign[s]);
        wh.functions.push_back(std::move(f));
      }
  }
  return wh;
}

std::vector<double> WhBasis::to_dg(std::span<const double> coeffs) const {
  if (coeffs.size() != n_dofs) throw std::invalid_argument("W_h coefficient vector has wrong size");
  std::vector<double> out(dg.n_dofs, 0.0);
  for (std::size_t i = 0; i < functions.size(); ++i)
    for (const auto& [dof, c] : functions[i].terms) out[dof] += c * coeffs[i];
  return out;
}

std::vector<double> alternating_functional(const TriMesh& mesh, const DgSpace& dg,
                                           std::span<const double> dg_coeffs) {
  if (dg_coeffs.size() != dg.n_dofs) throw std::invalid_argument("DG coefficient vector has wrong size");
  const int center = center_local_dof(dg.degree);
  std::vector<double> out(mesh.num_quads, 0.0);
  constexpr std::array<double, 4> sign{1.0, -1.0, 1.0, -1.0};
  for (std::size_t q = 0; q < mesh.num_quads; ++q)
    for (int s = 0; s < 4; ++s)
      out[q] += sign[s] * dg_coeffs[(4 * q + s) * dg.per_cell + center];
  return out;
}

}  // namespace ccx
