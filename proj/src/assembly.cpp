#include "ccx/assembly.hpp"

#include <stdexcept>
#include <string>

namespace ccx {

namespace {

void require_exactness(const QuadRule& rule, int needed, const char* form) {
  if (rule.exactness_degree < needed)
    throw std::invalid_argument(std::string(form) + " needs quadrature exactness " + std::to_string(needed) +
                                ", rule provides " + std::to_string(rule.exactness_degree));
}

std::vector<ShapeTable> tabulate(int degree, const QuadRule& rule) {
  std::vector<ShapeTable> out;
  out.reserve(rule.points.size());
  for (const auto& p : rule.points) out.push_back(lagrange_shape(degree, p));
  return out;
}

Point map_point(const std::array<Point, 3>& tri, const Barycentric& b) {
  return {b[0] * tri[0].x + b[1] * tri[1].x + b[2] * tri[2].x,
          b[0] * tri[0].y + b[1] * tri[1].y + b[2] * tri[2].y};
}

// Scalar element matrices share the same loop; `kernel` receives
// (weight * area, shape table, physical grads) and accumulates into `local`.
template <typename Kernel>
SparseMatrix assemble_scalar_like(const DofMap& space, const TriMesh& mesh, const QuadRule& rule,
                                  Kernel kernel, bool vector_out) {
  const int k = space.degree;
  const auto tables = tabulate(k, rule);
  const std::size_t nloc = lagrange_node_count(k);
  const std::size_t width = vector_out ? 2 * nloc : nloc;
  std::vector<Triplet> triplets;
  triplets.reserve(mesh.num_triangles() * width * width);
  std::vector<double> local(width * width);

  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto tri = mesh.triangle_points(t);
    const double area = mesh.triangle_area(t);
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto grads = physical_grads(tables[q], tri, static_cast<std::ptrdiff_t>(t));
      kernel(rule.weights[q] * area, tables[q], grads, local, width);
    }
    const auto dofs = space.cell(t);
    for (std::size_t i = 0; i < width; ++i)
      for (std::size_t j = 0; j < width; ++j)
        if (local[i * width + j] != 0.0) triplets.push_back({dofs[i], dofs[j], local[i * width + j]});
  }
  return SparseMatrix(space.n_dofs, space.n_dofs, std::move(triplets), true);
}

void check_kind(const DofMap& space, SpaceKind kind) {
  if (space.kind != kind)
    throw std::invalid_argument(kind == SpaceKind::Vector2 ? "expected a vector Lagrange space"
                                                           : "expected a scalar Lagrange space");
}

}  // namespace

const QuadRule& default_rule(int k) { return quad_rule(2 * k); }

SparseMatrix assemble_vector_mass(const DofMap& space, const TriMesh& mesh, const QuadRule& rule) {
  check_kind(space, SpaceKind::Vector2);
  require_exactness(rule, 2 * space.degree, "vector mass");
  return assemble_scalar_like(
      space, mesh, rule,
      [](double w, const ShapeTable& s, const std::vector<Grad>&, std::vector<double>& local, std::size_t width) {
        const std::size_t n = s.values.size();
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            const double v = w * s.values[i] * s.values[j];
            local[(2 * i) * width + 2 * j] += v;
            local[(2 * i + 1) * width + 2 * j + 1] += v;
          }
      },
      true);
}

SparseMatrix assemble_divdiv(const DofMap& space, const TriMesh& mesh, const QuadRule& rule) {
  check_kind(space, SpaceKind::Vector2);
  require_exactness(rule, 2 * (space.degree - 1), "div-div");
  return assemble_scalar_like(
      space, mesh, rule,
      [](double w, const ShapeTable&, const std::vector<Grad>& g, std::vector<double>& local, std::size_t width) {
        // div of local vector basis function 2i + c is g[i][c].
        for (std::size_t a = 0; a < width; ++a) {
          const double da = g[a / 2][a % 2];
          for (std::size_t b = 0; b < width; ++b) local[a * width + b] += w * da * g[b / 2][b % 2];
        }
      },
      true);
}

SparseMatrix assemble_scalar_stiffness(const DofMap& space, const TriMesh& mesh, const QuadRule& rule) {
  check_kind(space, SpaceKind::Scalar);
  require_exactness(rule, 2 * (space.degree - 1), "stiffness");
  return assemble_scalar_like(
      space, mesh, rule,
      [](double w, const ShapeTable&, const std::vector<Grad>& g, std::vector<double>& local, std::size_t width) {
        for (std::size_t i = 0; i < width; ++i)
          for (std::size_t j = 0; j < width; ++j)
            local[i * width + j] += w * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
      },
      false);
}

SparseMatrix assemble_scalar_mass(const DofMap& space, const TriMesh& mesh, const QuadRule& rule) {
  check_kind(space, SpaceKind::Scalar);
  require_exactness(rule, 2 * space.degree, "scalar mass");
  return assemble_scalar_like(
      space, mesh, rule,
      [](double w, const ShapeTable& s, const std::vector<Grad>&, std::vector<double>& local, std::size_t width) {
        for (std::size_t i = 0; i < width; ++i)
          for (std::size_t j = 0; j < width; ++j) local[i * width + j] += w * s.values[i] * s.values[j];
      },
      false);
}

SparseMatrix assemble_div_coupling(const DofMap& vspace, const DgSpace& test, const TriMesh& mesh,
                                   const QuadRule& rule) {
  check_kind(vspace, SpaceKind::Vector2);
  require_exactness(rule, vspace.degree - 1 + test.degree, "divergence coupling");
  const auto vtables = tabulate(vspace.degree, rule);
  const auto qtables = tabulate(test.degree, rule);
  const std::size_t nv = vspace.dofs_per_cell;
  const std::size_t nq = test.per_cell;
  std::vector<Triplet> triplets;
  triplets.reserve(mesh.num_triangles() * nv * nq);
  std::vector<double> local(nq * nv);

  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto tri = mesh.triangle_points(t);
    const double area = mesh.triangle_area(t);
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto g = physical_grads(vtables[q], tri, static_cast<std::ptrdiff_t>(t));
      const double w = rule.weights[q] * area;
      for (std::size_t i = 0; i < nq; ++i) {
        const double wq = w * qtables[q].values[i];
        for (std::size_t b = 0; b < nv; ++b) local[i * nv + b] += wq * g[b / 2][b % 2];
      }
    }
    const auto vdofs = vspace.cell(t);
    const int row0 = static_cast<int>(t * nq);
    for (std::size_t i = 0; i < nq; ++i)
      for (std::size_t b = 0; b < nv; ++b)
        if (local[i * nv + b] != 0.0) triplets.push_back({row0 + static_cast<int>(i), vdofs[b], local[i * nv + b]});
  }
  return SparseMatrix(test.n_dofs, vspace.n_dofs, std::move(triplets), false);
}

SparseMatrix wh_embedding(const WhBasis& wh) {
  std::vector<Triplet> t;
  for (std::size_t j = 0; j < wh.functions.size(); ++j)
    for (const auto& [dof, c] : wh.functions[j].terms) t.push_back({dof, static_cast<int>(j), c});
  return SparseMatrix(wh.dg.n_dofs, wh.n_dofs, std::move(t), false);
}

SparseMatrix assemble_div_coupling(const DofMap& vspace, const WhBasis& test, const TriMesh& mesh,
                                   const QuadRule& rule) {
  const SparseMatrix full = assemble_div_coupling(vspace, test.dg, mesh, rule);
  const Eigen::SparseMatrix<double> c = wh_embedding(test).to_eigen();
  const Eigen::SparseMatrix<double> d = c.transpose() * full.to_eigen();
  return SparseMatrix::from_eigen(d, false);
}

SparseMatrix assemble_dg_mass(const DgSpace& dg, const TriMesh& mesh, const QuadRule& rule) {
  require_exactness(rule, 2 * dg.degree, "DG mass");
  const auto tables = tabulate(dg.degree, rule);
  const std::size_t n = dg.per_cell;
  std::vector<Triplet> triplets;
  triplets.reserve(mesh.num_triangles() * n * n);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const double area = mesh.triangle_area(t);
    const int base = static_cast<int>(t * n);
    std::vector<double> local(n * n, 0.0);
    for (std::size_t q = 0; q < rule.points.size(); ++q)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          local[i * n + j] += rule.weights[q] * area * tables[q].values[i] * tables[q].values[j];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        triplets.push_back({base + static_cast<int>(i), base + static_cast<int>(j), local[i * n + j]});
  }
  return SparseMatrix(dg.n_dofs, dg.n_dofs, std::move(triplets), true);
}

SparseMatrix assemble_wh_mass(const WhBasis& wh, const TriMesh& mesh, const QuadRule& rule) {
  const Eigen::SparseMatrix<double> m = assemble_dg_mass(wh.dg, mesh, rule).to_eigen();
  const Eigen::SparseMatrix<double> c = wh_embedding(wh).to_eigen();
  const Eigen::SparseMatrix<double> mw = c.transpose() * m * c;
  return SparseMatrix::from_eigen(mw, true);
}

std::vector<double> l2_project_dg(const ScalarField& f, const DgSpace& dg, const TriMesh& mesh,
                                  const QuadRule& rule) {
  require_exactness(rule, 2 * dg.degree, "DG projection");
  const auto tables = tabulate(dg.degree, rule);
  const auto n = static_cast<Eigen::Index>(dg.per_cell);
  std::vector<double> out(dg.n_dofs);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto tri = mesh.triangle_points(t);
    const double area = mesh.triangle_area(t);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * area;
      const double fv = f(map_point(tri, rule.points[q]));
      for (Eigen::Index i = 0; i < n; ++i) {
        rhs(i) += w * fv * tables[q].values[i];
        for (Eigen::Index j = 0; j < n; ++j) gram(i, j) += w * tables[q].values[i] * tables[q].values[j];
      }
    }
    const Eigen::VectorXd c = gram.llt().solve(rhs);
    for (Eigen::Index i = 0; i < n; ++i) out[t * dg.per_cell + i] = c(i);
  }
  return out;
}

std::vector<double> l2_project_wh(const ScalarField& f, const WhBasis& wh, const TriMesh& mesh,
                                  const QuadRule& rule) {
  require_exactness(rule, 2 * wh.dg.degree, "W_h projection");
  const auto tables = tabulate(wh.dg.degree, rule);
  const std::size_t per_cell = wh.dg.per_cell;
  const std::size_t per_quad = 4 * per_cell;
  const auto nloc = static_cast<Eigen::Index>(wh.local_dim);
  std::vector<double> out(wh.n_dofs);

  for (std::size_t quad = 0; quad < mesh.num_quads; ++quad) {
    // Local DG mass and load on the quad's four triangles.
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(per_quad, per_quad);
    Eigen::VectorXd load = Eigen::VectorXd::Zero(per_quad);
    for (std::size_t s = 0; s < 4; ++s) {
      const std::size_t t = 4 * quad + s;
      const auto tri = mesh.triangle_points(t);
      const double area = mesh.triangle_area(t);
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const double w = rule.weights[q] * area;
        const double fv = f(map_point(tri, rule.points[q]));
        for (std::size_t i = 0; i < per_cell; ++i) {
          load(s * per_cell + i) += w * fv * tables[q].values[i];
          for (std::size_t j = 0; j < per_cell; ++j)
            m(s * per_cell + i, s * per_cell + j) += w * tables[q].values[i] * tables[q].values[j];
        }
      }
    }
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(per_quad, nloc);
    const std::size_t first_fn = quad * wh.local_dim;
    const auto first_dg = static_cast<int>(quad * per_quad);
    for (Eigen::Index j = 0; j < nloc; ++j)
      for (const auto& [dof, coeff] : wh.functions[first_fn + j].terms) c(dof - first_dg, j) = coeff;

    const Eigen::MatrixXd gram = c.transpose() * m * c;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) throw std::logic_error("singular local W_h Gram matrix");
    const Eigen::VectorXd x = llt.solve(c.transpose() * load);
    for (Eigen::Index j = 0; j < nloc; ++j) out[first_fn + j] = x(j);
  }
  return out;
}

double evaluate_dg(const DgSpace& dg, std::span<const double> coeffs, std::size_t t, const Barycentric& p) {
  const auto s = lagrange_shape(dg.degree, p);
  double v = 0.0;
  for (std::size_t i = 0; i < dg.per_cell; ++i) v += coeffs[t * dg.per_cell + i] * s.values[i];
  return v;
}

std::array<double, 2> evaluate_vector(const DofMap& space, std::span<const double> coeffs, std::size_t t,
                                      const Barycentric& p) {
  check_kind(space, SpaceKind::Vector2);
  const auto s = lagrange_shape(space.degree, p);
  const auto dofs = space.cell(t);
  std::array<double, 2> v{0.0, 0.0};
  for (std::size_t a = 0; a < dofs.size(); ++a) v[a % 2] += coeffs[dofs[a]] * s.values[a / 2];
  return v;
}

double evaluate_divergence(const DofMap& space, std::span<const double> coeffs, const TriMesh& mesh,
                           std::size_t t, const Barycentric& p) {
  check_kind(space, SpaceKind::Vector2);
  const auto g = physical_grads(lagrange_shape(space.degree, p), mesh.triangle_points(t),
                                static_cast<std::ptrdiff_t>(t));
  const auto dofs = space.cell(t);
  double d = 0.0;
  for (std::size_t a = 0; a < dofs.size(); ++a) d += coeffs[dofs[a]] * g[a / 2][a % 2];
  return d;
}

std::vector<double> interpolate_vector(const DofMap& space, const TriMesh& mesh,
                                       const std::function<std::array<double, 2>(Point)>& f) {
  check_kind(space, SpaceKind::Vector2);
  const auto nodes = lagrange_nodes(space.degree);
  const double k = space.degree;
  std::vector<double> out(space.n_dofs, 0.0);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto tri = mesh.triangle_points(t);
    const auto dofs = space.cell(t);
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      const Barycentric b{nodes[n][0] / k, nodes[n][1] / k, nodes[n][2] / k};
      const auto v = f(map_point(tri, b));
      out[dofs[2 * n]] = v[0];
      out[dofs[2 * n + 1]] = v[1];
    }
  }
  return out;
}

}  // namespace ccx
