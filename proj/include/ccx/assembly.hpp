#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ccx/fespace.hpp"
#include "ccx/mesh.hpp"
#include "ccx/refelem.hpp"
#include "ccx/sparse.hpp"

namespace ccx {

/// Rule used by the solvers: exactness 2k integrates every form exactly on
/// affine triangles.
const QuadRule& default_rule(int k);

/// (phi_j, phi_i) for the vector Lagrange space. Needs exactness >= 2k.
SparseMatrix assemble_vector_mass(const DofMap& space, const TriMesh& mesh, const QuadRule& rule);

/// (div phi_j, div phi_i). Needs exactness >= 2(k-1).
SparseMatrix assemble_divdiv(const DofMap& space, const TriMesh& mesh, const QuadRule& rule);

/// D_ij = (div phi_j, q_i) against the full discontinuous P_{k-1} space.
SparseMatrix assemble_div_coupling(const DofMap& vspace, const DgSpace& test, const TriMesh& mesh,
                                   const QuadRule& rule);

/// D_ij = (div phi_j, w_i) against the W_h basis.
SparseMatrix assemble_div_coupling(const DofMap& vspace, const WhBasis& test, const TriMesh& mesh,
                                   const QuadRule& rule);

SparseMatrix assemble_dg_mass(const DgSpace& dg, const TriMesh& mesh, const QuadRule& rule);
SparseMatrix assemble_wh_mass(const WhBasis& wh, const TriMesh& mesh, const QuadRule& rule);

/// C with DG coefficients = C * W_h coefficients.
SparseMatrix wh_embedding(const WhBasis& wh);

SparseMatrix assemble_scalar_stiffness(const DofMap& space, const TriMesh& mesh, const QuadRule& rule);
SparseMatrix assemble_scalar_mass(const DofMap& space, const TriMesh& mesh, const QuadRule& rule);

using ScalarField = std::function<double(Point)>;

/// L2-orthogonal projection onto W_h, solved quad by quad.
std::vector<double> l2_project_wh(const ScalarField& f, const WhBasis& wh, const TriMesh& mesh,
                                  const QuadRule& rule);

/// L2-orthogonal projection onto the full DG space (block diagonal per triangle).
std::vector<double> l2_project_dg(const ScalarField& f, const DgSpace& dg, const TriMesh& mesh,
                                  const QuadRule& rule);

/// Value on triangle t of a DG function at barycentric point p.
double evaluate_dg(const DgSpace& dg, std::span<const double> coeffs, std::size_t t, const Barycentric& p);

/// Value of a vector FE function on triangle t at barycentric point p.
std::array<double, 2> evaluate_vector(const DofMap& space, std::span<const double> coeffs, std::size_t t,
                                      const Barycentric& p);

/// Divergence of a vector FE function on triangle t at barycentric point p.
double evaluate_divergence(const DofMap& space, std::span<const double> coeffs, const TriMesh& mesh,
                           std::size_t t, const Barycentric& p);

/// Nodal interpolant of a vector field.
std::vector<double> interpolate_vector(const DofMap& space, const TriMesh& mesh,
                                       const std::function<std::array<double, 2>(Point)>& f);

}  // namespace ccx
