#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ccx/mesh.hpp"

namespace ccx {

enum class SpaceKind { Scalar, Vector2 };

/// Global numbering of a continuous Lagrange space on a TriMesh.
///
/// Scalar DOFs are numbered vertices first, then edges (k-1 per edge, ordered
/// from the lower to the higher global vertex), then cell interiors. Vector
/// DOFs interleave components: scalar DOF s becomes 2s (x) and 2s+1 (y).
struct DofMap {
  SpaceKind kind = SpaceKind::Scalar;
  int degree = 0;
  std::size_t n_dofs = 0;
  std::size_t dofs_per_cell = 0;
  std::vector<int> cell_dofs;  // flattened, dofs_per_cell entries per triangle
  std::vector<int> boundary_dofs;  // sorted

  std::span<const int> cell(std::size_t t) const {
    return {cell_dofs.data() + t * dofs_per_cell, dofs_per_cell};
  }
};

DofMap build_scalar_space(const TriMesh& mesh, int k);
DofMap build_vector_space(const TriMesh& mesh, int k);

/// DOFs whose nodes lie on the domain boundary (already stored in the map).
std::vector<int> boundary_dofs(const DofMap& dofs, const TriMesh& mesh);

/// Fully discontinuous piecewise P_degree space; triangle t owns DOFs
/// [t * per_cell, (t + 1) * per_cell) in Lagrange node order.
struct DgSpace {
  int degree = 0;
  std::size_t per_cell = 0;
  std::size_t n_dofs = 0;
};

DgSpace build_dg_space(const TriMesh& mesh, int degree);

/// One basis function of W_h as a combination of DG basis functions.
struct WhFunction {
  int quad = 0;
  std::vector<std::pair<int, double>> terms;  // (DG dof, coefficient)
};

/// Basis of the constrained space div V_h^k inside piecewise P_{k-1}.
///
/// On every quad the alternating functional
///   l_Q(q) = q|T1(c) - q|T2(c) + q|T3(c) - q|T4(c)
/// must vanish at the center c. Since c is local vertex 2 of each triangle,
/// l_Q only sees the four center-node DG coefficients; the T4 center
/// coefficient is eliminated and re-expressed through the constraint.
struct WhBasis {
  int k = 0;
  DgSpace dg;
  std::size_t n_dofs = 0;
  std::size_t local_dim = 0;
  std::vector<WhFunction> functions;
  std::vector<int> eliminated_dg_dof;  // per quad

  /// Embeds W_h coefficients into DG coefficients.
  std::vector<double> to_dg(std::span<const double> coeffs) const;
};

WhBasis build_wh_space(const TriMesh& mesh, int k);

/// l_Q of a DG function on every quad.
std::vector<double> alternating_functional(const TriMesh& mesh, const DgSpace& dg,
                                           std::span<const double> dg_coeffs);

}  // namespace ccx
