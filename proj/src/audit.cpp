#include "ccx/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "ccx/assembly.hpp"
#include "ccx/error.hpp"
#include "ccx/fespace.hpp"

namespace ccx {

namespace {

std::size_t numerical_rank(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

double nearest_distance(double x, const std::vector<double>& set) {
  double best = std::numeric_limits<double>::infinity();
  for (double v : set) best = std::min(best, std::abs(x - v));
  return best;
}

}  // namespace

long long dim_sigma(int k, long long vq, long long eq, long long q) {
  if (k != 2 && k != 3) throw std::invalid_argument("dim_sigma is defined for k = 2, 3");
  return 3 * vq + (2LL * k - 3) * eq + 4LL * (k - 2) * q;
}

ComplexReport exactness_check(const TriMesh& mesh, int k, double rank_tol, std::size_t dense_cap) {
  if (k != 2 && k != 3) throw std::invalid_argument("exactness check supports k = 2, 3");
  ComplexReport r;
  r.k = k;
  r.vq = mesh.num_quad_vertices;
  r.eq = mesh.num_quad_edges;
  r.q = mesh.num_quads;
  r.dim_sigma = dim_sigma(k, static_cast<long long>(r.vq), static_cast<long long>(r.eq),
                          static_cast<long long>(r.q));

  const DofMap space = build_vector_space(mesh, k);
  const WhBasis wh = build_wh_space(mesh, k);
  r.dim_v = space.n_dofs;
  r.dim_wh = wh.n_dofs;
  r.dim_dg = wh.dg.n_dofs;
  if (r.dim_v > dense_cap)
    throw AuditError("exactness check needs a dense rank of " + std::to_string(r.dim_v) +
                     " DOFs (cap " + std::to_string(dense_cap) + "); use a smaller mesh");

  r.euler_residual = 1 - r.dim_sigma + static_cast<long long>(r.dim_v) - static_cast<long long>(r.dim_wh);

  const QuadRule& rule = default_rule(k);
  const SparseMatrix d = assemble_div_coupling(space, wh.dg, mesh, rule);
  r.rank_div = numerical_rank(d.to_dense(), rank_tol);

  DenseOptions dopts;
  dopts.dense_cap = dense_cap;
  dopts.tol_zero = rank_tol;
  const Spectrum all =
      dense_gevp(assemble_divdiv(space, mesh, rule), assemble_vector_mass(space, mesh, rule), dopts);
  r.nullity_b = filter_nonzero(all, rank_tol).zero_count.value_or(0);

  r.euler_ok = r.euler_residual == 0;
  r.rank_ok = r.rank_div == r.dim_wh;
  r.nullity_ok = static_cast<long long>(r.nullity_b) == r.dim_sigma - 1;
  return r;
}

WhLocalReport wh_local_audit(const std::array<Point, 4>& quad, int k, std::uint64_t seed, std::size_t samples) {
  if (k != 2 && k != 3) throw std::invalid_argument("local audit supports k = 2, 3");
  if (!is_strictly_convex(quad)) throw std::invalid_argument("local audit needs a strictly convex quad");

  QuadMesh qm;
  qm.vertices.assign(quad.begin(), quad.end());
  qm.quads.push_back({0, 1, 2, 3});
  for (int i = 0; i < 4; ++i) {
    const int a = i, b = (i + 1) % 4;
    qm.boundary_edges.insert({std::min(a, b), std::max(a, b)});
  }
  const TriMesh mesh = criss_cross(qm);
  const DofMap space = build_vector_space(mesh, k);
  const DgSpace dg = build_dg_space(mesh, k - 1);
  const QuadRule& rule = default_rule(k);
  const Eigen::MatrixXd d = assemble_div_coupling(space, dg, mesh, rule).to_dense();
  const Eigen::MatrixXd m = assemble_dg_mass(dg, mesh, rule).to_dense();
  const Eigen::LLT<Eigen::MatrixXd> mchol(m);

  WhLocalReport r;
  r.k = k;
  r.samples = samples;
  r.expected_rank = 4 * static_cast<std::size_t>(k * (k + 1) / 2) - 1;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::MatrixXd image(static_cast<Eigen::Index>(dg.n_dofs), static_cast<Eigen::Index>(samples));
  for (std::size_t s = 0; s < samples; ++s) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(space.n_dofs));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = uni(rng);
    const Eigen::VectorXd c = mchol.solve(d * v);
    image.col(static_cast<Eigen::Index>(s)) = c;
    const std::vector<double> coeffs(c.data(), c.data() + c.size());
    const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
    for (double l : alternating_functional(mesh, dg, coeffs))
      r.max_alternating_residual = std::max(r.max_alternating_residual, std::abs(l) / scale);
  }

  // Work in M-orthonormal coordinates z = L^T c.
  const Eigen::MatrixXd lt = mchol.matrixU();
  const Eigen::MatrixXd y = lt * image;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(y, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(0) > 0.0 && sv(i) > 1e-9 * sv(0)) ++rank;
  r.rank = rank;

  Eigen::VectorXd checker = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dg.n_dofs));
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const Slot sl = mesh.slot[t];
    const double sign = (sl == Slot::T1 || sl == Slot::T3) ? -1.0 : 1.0;
    for (std::size_t i = 0; i < dg.per_cell; ++i) checker(static_cast<Eigen::Index>(t * dg.per_cell + i)) = sign;
  }
  const Eigen::VectorXd z = lt * checker;
  const Eigen::MatrixXd u = svd.matrixU().leftCols(static_cast<Eigen::Index>(rank));
  const Eigen::VectorXd resid = z - u * (u.transpose() * z);
  r.checkerboard_distance = resid.norm() / z.norm();
  return r;
}

SpuriousReport spurious_scan(Domain domain, int k, const std::vector<int>& levels, std::size_t n_eigs,
                             double threshold, const SolveOptions& opts) {
  if (domain != Domain::Square) throw std::invalid_argument("spurious scan needs a domain with known spectrum (square)");
  if (levels.empty()) throw std::invalid_argument("spurious scan needs at least one level");
  if (n_eigs == 0) throw std::invalid_argument("spurious scan needs n_eigs >= 1");

  SpuriousReport rep;
  rep.k = k;
  rep.threshold = threshold;
  rep.exact = exact_square_spectrum(n_eigs);
  const std::vector<double> targets = exact_square_spectrum(4 * n_eigs + 16);

  SolveOptions so = opts;
  so.n_eigs = n_eigs;
  for (int n : levels) {
    const TriMesh mesh = criss_cross(build_rect_grid(0.0, 0.0, std::numbers::pi, std::numbers::pi, n, n));
    SpuriousLevel lv;
    lv.n = n;
    lv.h = mesh_stats(mesh).h;
    lv.eigenvalues = solve_fem2(mesh, k, so).eigenvalues;
    for (double v : lv.eigenvalues) lv.distances.push_back(nearest_distance(v, targets));
    rep.levels.push_back(std::move(lv));
  }

  std::size_t common = n_eigs;
  for (const auto& lv : rep.levels) common = std::min(common, lv.eigenvalues.size());
  for (std::size_t i = 0; i < common; ++i) {
    bool flag = true;
    for (std::size_t l = 0; l < rep.levels.size() && flag; ++l) {
      const double d = rep.levels[l].distances[i];
      if (d <= threshold) flag = false;
      if (l > 0 && d <= 0.5 * rep.levels[l - 1].distances[i]) flag = false;
    }
    if (!flag) continue;
    SpuriousFlag f;
    f.index = i;
    for (const auto& lv : rep.levels) {
      f.values.push_back(lv.eigenvalues[i]);
      f.distances.push_back(lv.distances[i]);
    }
    rep.flags.push_back(std::move(f));
  }
  return rep;
}

}  // namespace ccx
