#include "ccx/eigsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <Eigen/Eigenvalues>

#include "ccx/assembly.hpp"
#include "ccx/error.hpp"
#include "ccx/fespace.hpp"

namespace ccx {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

double dense_inf_norm(const MatrixXd& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

double dense_backward_error(const MatrixXd& B, const MatrixXd& A, double normB, double normA, double lambda,
                            const VectorXd& x) {
  const VectorXd r = B * x - lambda * (A * x);
  const double scale = (normB + std::abs(lambda) * normA) * x.norm();
  return scale > 0.0 ? r.norm() / scale : r.norm();
}

std::size_t count_zeros(const std::vector<double>& w, double tol_zero) {
  double lmax = 0.0;
  for (double v : w) lmax = std::max(lmax, std::abs(v));
  const double thresh = tol_zero * std::max(1.0, lmax);
  return static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [&](double v) { return std::abs(v) <= thresh; }));
}

// Every spectrum handed to callers is trimmed to `n` leading eigenvalues
// (0 keeps everything) with clusters tagged.
Spectrum take_leading(Spectrum s, std::size_t n) {
  if (n != 0 && s.eigenvalues.size() > n) {
    s.eigenvalues.resize(n);
    if (s.residuals.size() > n) s.residuals.resize(n);
    if (s.vectors.cols() > static_cast<Index>(n)) s.vectors.conservativeResize(Eigen::NoChange, static_cast<Index>(n));
  }
  s.cluster = tag_clusters(s.eigenvalues);
  return s;
}

void check_square_pair(std::size_t bn, std::size_t bm, std::size_t an, std::size_t am) {
  if (bn != bm || an != am || bn != an) throw std::invalid_argument("pencil matrices must be square and of equal size");
}

}  // namespace

const char* backend_name(Backend b) { return b == Backend::Dense ? "dense" : "lanczos"; }

std::vector<int> tag_clusters(const std::vector<double>& eigenvalues, double rel_tol) {
  std::vector<int> ids(eigenvalues.size());
  int id = 0;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    if (i > 0) {
      const double a = eigenvalues[i - 1], b = eigenvalues[i];
      const double scale = std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
      if (std::abs(b - a) > rel_tol * scale) ++id;
    }
    ids[i] = id;
  }
  return ids;
}

namespace {

// Solves (T - mu I) y = x for symmetric tridiagonal T by Gaussian
// elimination with partial pivoting; x is overwritten with y.
void tridiagonal_shifted_solve(const VectorXd& diag, const VectorXd& sub, double mu, VectorXd& x) {
  const Index n = diag.size();
  // Row i of U holds u0 (diagonal), u1, u2 (two superdiagonals after pivoting).
  VectorXd u0(n), u1 = VectorXd::Zero(n), u2 = VectorXd::Zero(n), lmul = VectorXd::Zero(n);
  std::vector<char> swapped(n, 0);
  const double tiny = std::max(std::abs(mu), 1.0) * std::numeric_limits<double>::epsilon();
  // Current working row: (a, b, c) at columns (i, i+1, i+2).
  double a = diag(0) - mu;
  double b = n > 1 ? sub(0) : 0.0;
  double c = 0.0;
  for (Index i = 0; i + 1 < n; ++i) {
    const double below_a = sub(i);
    const double below_b = diag(i + 1) - mu;
    const double below_c = i + 2 < n ? sub(i + 1) : 0.0;
    if (std::abs(below_a) > std::abs(a)) {
      swapped[i] = 1;
      u0(i) = below_a;
      u1(i) = below_b;
      u2(i) = below_c;
      const double m = a / below_a;
      lmul(i) = m;
      a = b - m * below_b;
      b = c - m * below_c;
    } else {
      if (a == 0.0) a = tiny;
      u0(i) = a;
      u1(i) = b;
      u2(i) = c;
      const double m = below_a / a;
      lmul(i) = m;
      a = below_b - m * b;
      b = below_c - m * c;
    }
    c = 0.0;
  }
  if (a == 0.0) a = tiny;
  u0(n - 1) = a;
  // Forward elimination on the right-hand side.
  for (Index i = 0; i + 1 < n; ++i) {
    if (swapped[i]) std::swap(x(i), x(i + 1));
    x(i + 1) -= lmul(i) * x(i);
  }
  // Back substitution.
  for (Index i = n - 1; i >= 0; --i) {
    double s = x(i);
    if (i + 1 < n) s -= u1(i) * x(i + 1);
    if (i + 2 < n) s -= u2(i) * x(i + 2);
    x(i) = s / u0(i);
  }
}

// Eigenvectors of the tridiagonal matrix for the given eigenvalues by inverse
// iteration; vectors of nearby eigenvalues are kept orthogonal.
MatrixXd tridiagonal_vectors(const VectorXd& diag, const VectorXd& sub, const std::vector<double>& lambdas) {
  const Index n = diag.size();
  const auto m = static_cast<Index>(lambdas.size());
  MatrixXd Z(n, m);
  double tnorm = 0.0;
  for (Index i = 0; i < n; ++i)
    tnorm = std::max(tnorm, std::abs(diag(i)) + (i > 0 ? std::abs(sub(i - 1)) : 0.0) +
                                (i + 1 < n ? std::abs(sub(i)) : 0.0));
  const double cluster_gap = 1e-3 * std::max(tnorm, 1.0);
  std::mt19937_64 rng(20240607);
  for (Index j = 0; j < m; ++j) {
    VectorXd x(n);
    for (Index i = 0; i < n; ++i) x(i) = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
    const double mu = lambdas[j] + 4.0 * std::numeric_limits<double>::epsilon() * std::max(tnorm, 1.0);
    for (int it = 0; it < 4; ++it) {
      for (Index p = 0; p < j; ++p)
        if (std::abs(lambdas[p] - lambdas[j]) <= cluster_gap) x -= Z.col(p).dot(x) * Z.col(p);
      x.normalize();
      tridiagonal_shifted_solve(diag, sub, mu, x);
      for (Index p = 0; p < j; ++p)
        if (std::abs(lambdas[p] - lambdas[j]) <= cluster_gap) x -= Z.col(p).dot(x) * Z.col(p);
      x.normalize();
    }
    Z.col(j) = x;
  }
  return Z;
}

// Core dense route. Consumes B and A; `resid(lambda, x)` evaluates the
// backward error against the caller's original matrices.
template <typename Residual>
Spectrum dense_gevp_impl(MatrixXd B, MatrixXd A, const DenseOptions& opts, Residual resid) {
  const Index n = A.rows();
  Spectrum spec;
  spec.backend = Backend::Dense;
  spec.tol_zero = opts.tol_zero;
  if (n == 0) {
    spec.zero_count = 0;
    return spec;
  }

  Eigen::LLT<Eigen::Ref<MatrixXd>> llt(A);
  if (llt.info() != Eigen::Success) {
    // Locate the failing pivot for the message.
    Index bad = 0;
    double pivot = 0.0;
    for (Index i = 1; i <= n; ++i) {
      Eigen::LLT<MatrixXd> probe(A.topLeftCorner(i, i));
      if (probe.info() != Eigen::Success) {
        bad = i - 1;
        pivot = A(bad, bad);
        break;
      }
    }
    throw SolverError("mass matrix is not positive definite: Cholesky breaks down at pivot " +
                      std::to_string(bad) + " (diagonal " + std::to_string(pivot) + ")");
  }
  const auto L = A.triangularView<Eigen::Lower>();

  // C = L^{-1} B L^{-T}, formed in place.
  L.solveInPlace(B);
  B.transposeInPlace();
  L.solveInPlace(B);

  Eigen::Tridiagonalization<MatrixXd> tri(n);
  tri.compute(B);
  B.resize(0, 0);
  const VectorXd diag = tri.diagonal();
  const VectorXd sub = tri.subDiagonal();

  // Eigen's deflation test assumes a unit-scaled matrix.
  const double scale = std::max(diag.cwiseAbs().maxCoeff(), n > 1 ? sub.cwiseAbs().maxCoeff() : 0.0);
  const double inv_scale = scale > 0.0 ? 1.0 / scale : 1.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es;
  es.computeFromTridiagonal(diag * inv_scale, sub * inv_scale, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("tridiagonal QR iteration did not converge");
  spec.eigenvalues.resize(n);
  for (Index i = 0; i < n; ++i) spec.eigenvalues[i] = es.eigenvalues()(i) / inv_scale;
  spec.zero_count = count_zeros(spec.eigenvalues, opts.tol_zero);

  const std::size_t first = *spec.zero_count;
  const std::size_t m_want = std::min(opts.n_vectors, static_cast<std::size_t>(n) - first);
  if (m_want > 0) {
    const std::vector<double> wanted(spec.eigenvalues.begin() + first, spec.eigenvalues.begin() + first + m_want);
    MatrixXd Y = tri.matrixQ() * tridiagonal_vectors(diag, sub, wanted);
    // x = L^{-T} y
    A.transpose().triangularView<Eigen::Upper>().solveInPlace(Y);
    spec.vectors = std::move(Y);
    spec.residuals.assign(n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t j = 0; j < m_want; ++j)
      spec.residuals[first + j] = resid(wanted[j], spec.vectors.col(static_cast<Index>(j)));
  }
  spec.cluster = tag_clusters(spec.eigenvalues);
  return spec;
}

void check_dense_cap(std::size_t n, const DenseOptions& opts) {
  if (n > opts.dense_cap)
    throw SolverError("pencil of size " + std::to_string(n) + " exceeds the dense cap of " +
                      std::to_string(opts.dense_cap) + "; use the lanczos backend");
}

}  // namespace

Spectrum dense_gevp(const MatrixXd& B, const MatrixXd& A, const DenseOptions& opts) {
  check_square_pair(B.rows(), B.cols(), A.rows(), A.cols());
  check_dense_cap(A.rows(), opts);
  const double normB = dense_inf_norm(B), normA = dense_inf_norm(A);
  return dense_gevp_impl(B, A, opts, [&](double lambda, const VectorXd& x) {
    return dense_backward_error(B, A, normB, normA, lambda, x);
  });
}

Spectrum dense_gevp(const SparseMatrix& B, const SparseMatrix& A, const DenseOptions& opts) {
  check_square_pair(B.rows(), B.cols(), A.rows(), A.cols());
  check_dense_cap(A.rows(), opts);
  return dense_gevp_impl(B.to_dense(), A.to_dense(), opts,
                         [&](double lambda, const VectorXd& x) { return backward_error(B, A, lambda, x); });
}

Spectrum filter_nonzero(const Spectrum& spec, double tol_zero) {
  Spectrum out = spec;
  out.tol_zero = tol_zero;
  out.eigenvalues.clear();
  out.residuals.clear();
  out.vectors.resize(0, 0);

  double lmax = 0.0;
  for (double v : spec.eigenvalues) lmax = std::max(lmax, std::abs(v));
  const double thresh = tol_zero * std::max(1.0, lmax);

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i)
    if (std::abs(spec.eigenvalues[i]) > thresh) keep.push_back(i);
  std::stable_sort(keep.begin(), keep.end(),
                   [&](std::size_t a, std::size_t b) { return spec.eigenvalues[a] < spec.eigenvalues[b]; });

  out.zero_count = spec.eigenvalues.size() - keep.size();
  // Stored vectors cover the leading nonzero eigenvalues after the kernel block.
  const std::size_t vec_offset = spec.zero_count.value_or(0);
  const bool have_vectors = spec.vectors.cols() > 0;
  std::vector<Index> vec_cols;
  for (std::size_t i : keep) {
    out.eigenvalues.push_back(spec.eigenvalues[i]);
    if (i < spec.residuals.size()) out.residuals.push_back(spec.residuals[i]);
    if (have_vectors && i >= vec_offset && i - vec_offset < static_cast<std::size_t>(spec.vectors.cols()))
      vec_cols.push_back(static_cast<Index>(i - vec_offset));
  }
  if (!vec_cols.empty()) {
    out.vectors.resize(spec.vectors.rows(), static_cast<Index>(vec_cols.size()));
    for (std::size_t j = 0; j < vec_cols.size(); ++j) out.vectors.col(static_cast<Index>(j)) = spec.vectors.col(vec_cols[j]);
  }
  // Drop trailing NaN residuals of eigenvalues without vectors.
  while (!out.residuals.empty() && std::isnan(out.residuals.back())) out.residuals.pop_back();
  out.cluster = tag_clusters(out.eigenvalues);
  return out;
}

double backward_error(const SparseMatrix& B, const SparseMatrix& A, double lambda, const VectorXd& x) {
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  const auto bx = B * xs;
  const auto ax = A * xs;
  double r2 = 0.0;
  for (std::size_t i = 0; i < bx.size(); ++i) r2 += (bx[i] - lambda * ax[i]) * (bx[i] - lambda * ax[i]);
  const double scale = (B.norm_inf() + std::abs(lambda) * A.norm_inf()) * x.norm();
  return scale > 0.0 ? std::sqrt(r2) / scale : std::sqrt(r2);
}

Spectrum shift_invert_lanczos(const SparseMatrix& B, const SparseMatrix& A, const LanczosOptions& opts) {
  check_square_pair(B.rows(), B.cols(), A.rows(), A.cols());
  if (opts.n_eigs == 0) throw std::invalid_argument("lanczos needs n_eigs >= 1");
  if (opts.block_size == 0) throw std::invalid_argument("lanczos needs a positive block size");
  const auto n = static_cast<Index>(A.rows());
  const auto p = static_cast<Index>(opts.block_size);

  const Eigen::SparseMatrix<double> As = A.to_eigen();
  const Eigen::SparseMatrix<double> Bs = B.to_eigen();
  Eigen::SparseMatrix<double> K = Bs - opts.sigma * As;
  K.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(K);
  if (lu.info() != Eigen::Success)
    throw SolverError("factorization of B - sigma A failed at sigma = " + std::to_string(opts.sigma) +
                      "; try a different shift");

  const Index max_dim = std::min<Index>(n, p * static_cast<Index>(opts.max_iter + 1));
  MatrixXd V(n, max_dim), AV(n, max_dim), W(n, max_dim);
  MatrixXd H = MatrixXd::Zero(max_dim, max_dim);
  Index m = 0;        // basis size
  Index m_done = 0;   // columns whose operator image is known

  std::mt19937_64 rng(opts.seed);
  const auto random_vector = [&] {
    VectorXd v(n);
    for (Index i = 0; i < n; ++i) v(i) = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
    return v;
  };

  // A-orthonormalize w against the basis and append it; false if w collapses.
  const auto append = [&](VectorXd w) {
    const double w0 = std::sqrt(std::max(0.0, w.dot(As * w)));
    for (int pass = 0; pass < 2 && m > 0; ++pass) {
      const VectorXd c = AV.leftCols(m).transpose() * w;
      w -= V.leftCols(m) * c;
    }
    const VectorXd aw = As * w;
    const double norm = std::sqrt(std::max(0.0, w.dot(aw)));
    if (!(norm > 1e-10 * w0) || m >= max_dim) return false;
    V.col(m) = w / norm;
    AV.col(m) = aw / norm;
    ++m;
    return true;
  };

  for (Index j = 0; j < p; ++j)
    for (int tries = 0; tries < 5 && !append(random_vector()); ++tries) {
    }

  Spectrum spec;
  spec.backend = Backend::Lanczos;
  spec.tol = opts.tol;
  spec.converged = false;

  std::vector<double> best_lambda;
  std::vector<double> best_resid;
  MatrixXd best_vectors;

  for (std::size_t iter = 0; iter <= opts.max_iter && m_done < m; ++iter) {
    // Operator images of the newest block.
    const Index b0 = m_done, b1 = m;
    for (Index j = b0; j < b1; ++j) {
      const VectorXd rhs = AV.col(j);
      W.col(j) = lu.solve(rhs);
    }
    H.block(0, b0, b1, b1 - b0) = AV.leftCols(b1).transpose() * W.middleCols(b0, b1 - b0);
    H.block(b0, 0, b1 - b0, b0) = H.block(0, b0, b0, b1 - b0).transpose();
    m_done = b1;
    spec.iterations = iter + 1;

    const MatrixXd Hs = 0.5 * (H.topLeftCorner(m_done, m_done) + H.topLeftCorner(m_done, m_done).transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(Hs);
    // Largest positive theta <-> smallest lambda above sigma.
    std::vector<Index> order;
    for (Index i = m_done - 1; i >= 0; --i)
      if (es.eigenvalues()(i) > 0.0) order.push_back(i);
    const std::size_t have = std::min(order.size(), opts.n_eigs);

    std::vector<double> lam(have), res(have);
    MatrixXd X(n, static_cast<Index>(have));
    bool all_ok = have == opts.n_eigs;
    for (std::size_t r = 0; r < have; ++r) {
      const double theta = es.eigenvalues()(order[r]);
      lam[r] = opts.sigma + 1.0 / theta;
      X.col(static_cast<Index>(r)) = V.leftCols(m_done) * es.eigenvectors().col(order[r]);
      res[r] = backward_error(B, A, lam[r], X.col(static_cast<Index>(r)));
      if (!(res[r] <= opts.tol)) all_ok = false;
    }
    best_lambda = lam;
    best_resid = res;
    best_vectors = X;
    if (all_ok) {
      spec.converged = true;
      break;
    }
    // Next block from the images of the newest block.
    for (Index j = b0; j < b1; ++j)
      if (!append(W.col(j))) {
        for (int tries = 0; tries < 5 && !append(random_vector()); ++tries) {
        }
      }
  }

  // Ritz values sorted ascending in lambda already (theta descending).
  spec.eigenvalues = best_lambda;
  spec.residuals = best_resid;
  spec.vectors = best_vectors;
  spec.cluster = tag_clusters(spec.eigenvalues);
  return spec;
}

namespace {

std::vector<int> interior_dofs(const DofMap& space) {
  std::vector<int> interior;
  std::size_t b = 0;
  for (int i = 0; i < static_cast<int>(space.n_dofs); ++i) {
    if (b < space.boundary_dofs.size() && space.boundary_dofs[b] == i) {
      ++b;
      continue;
    }
    interior.push_back(i);
  }
  return interior;
}

Spectrum solve_pencil(const SparseMatrix& B, const SparseMatrix& A, const SolveOptions& opts) {
  if (opts.backend == Backend::Dense) {
    DenseOptions d;
    d.dense_cap = opts.dense_cap;
    d.tol_zero = opts.tol_zero;
    d.n_vectors = opts.n_eigs == 0 ? A.rows() : opts.n_eigs;
    Spectrum all = dense_gevp(B, A, d);
    Spectrum nz = filter_nonzero(all, opts.tol_zero);
    nz.tol = opts.tol;
    return take_leading(std::move(nz), opts.n_eigs);
  }
  if (opts.n_eigs == 0) throw std::invalid_argument("the lanczos backend needs an explicit eigenvalue count");
  LanczosOptions l;
  l.sigma = opts.sigma;
  l.n_eigs = opts.n_eigs;
  l.max_iter = opts.max_iter;
  l.tol = opts.tol;
  l.seed = opts.seed;
  Spectrum s = shift_invert_lanczos(B, A, l);
  s.tol_zero = opts.tol_zero;
  return s;
}

}  // namespace

Spectrum solve_fem2(const TriMesh& mesh, int k, const SolveOptions& opts) {
  if (k < 1 || k > 3) throw std::invalid_argument("div-div solve supports k = 1, 2, 3");
  const DofMap space = build_vector_space(mesh, k);
  const QuadRule& rule = default_rule(k);
  const SparseMatrix A = assemble_vector_mass(space, mesh, rule);
  const SparseMatrix B = assemble_divdiv(space, mesh, rule);
  return solve_pencil(B, A, opts);
}

Spectrum solve_fem1(const TriMesh& mesh, int k, const SolveOptions& opts) {
  if (k != 2 && k != 3) throw std::invalid_argument("mixed solve needs the W_h basis: k = 2 or 3");
  const DofMap space = build_vector_space(mesh, k);
  const WhBasis wh = build_wh_space(mesh, k);
  const QuadRule& rule = default_rule(k);
  if (wh.n_dofs > opts.dense_cap)
    throw SolverError("W_h dimension " + std::to_string(wh.n_dofs) + " exceeds the dense cap");

  const SparseMatrix A = assemble_vector_mass(space, mesh, rule);
  const SparseMatrix D = assemble_div_coupling(space, wh, mesh, rule);
  const SparseMatrix M = assemble_wh_mass(wh, mesh, rule);

  const Eigen::SparseMatrix<double> As = A.to_eigen();
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> chol(As);
  if (chol.info() != Eigen::Success) throw SolverError("sparse Cholesky of the vector mass matrix failed");

  const MatrixXd Dt = D.transpose().to_dense();
  MatrixXd X = chol.solve(Dt);
  const double rhs_norm = std::max(Dt.norm(), std::numeric_limits<double>::min());
  for (int step = 0; step < 3; ++step) {
    const MatrixXd R = Dt - As * X;
    if (R.norm() <= 1e-12 * rhs_norm) break;
    X += chol.solve(R);
  }
  const MatrixXd S0 = D.to_eigen() * X;
  const MatrixXd S = 0.5 * (S0 + S0.transpose());

  DenseOptions d;
  d.dense_cap = opts.dense_cap;
  d.tol_zero = opts.tol_zero;
  d.n_vectors = opts.n_eigs == 0 ? wh.n_dofs : opts.n_eigs;
  Spectrum all = dense_gevp(S, M.to_dense(), d);
  Spectrum nz = filter_nonzero(all, opts.tol_zero);
  nz.tol = opts.tol;
  return take_leading(std::move(nz), opts.n_eigs);
}

Spectrum solve_primal(const TriMesh& mesh, int k, const SolveOptions& opts) {
  if (k < 1 || k > 3) throw std::invalid_argument("primal solve supports k = 1, 2, 3");
  const DofMap space = build_scalar_space(mesh, k);
  const QuadRule& rule = default_rule(k);
  const SparseMatrix K = assemble_scalar_stiffness(space, mesh, rule);
  const SparseMatrix M = assemble_scalar_mass(space, mesh, rule);

  const std::vector<int> interior = interior_dofs(space);
  return solve_pencil(K.submatrix(interior), M.submatrix(interior), opts);
}

const char* form_name(Form f) {
  switch (f) {
    case Form::Fem1: return "fem1";
    case Form::Fem2: return "fem2";
    case Form::Primal: return "primal";
  }
  return "?";
}

Spectrum solve(const TriMesh& mesh, int k, Form form, const SolveOptions& opts) {
  switch (form) {
    case Form::Fem1: return solve_fem1(mesh, k, opts);
    case Form::Fem2: return solve_fem2(mesh, k, opts);
    case Form::Primal: return solve_primal(mesh, k, opts);
  }
  throw std::invalid_argument("unknown formulation");
}

std::vector<std::pair<std::string, SparseMatrix>> assemble_system(const TriMesh& mesh, int k, Form form) {
  const QuadRule& rule = default_rule(k);
  std::vector<std::pair<std::string, SparseMatrix>> out;
  if (form == Form::Primal) {
    if (k < 1 || k > 3) throw std::invalid_argument("primal formulation supports k = 1, 2, 3");
    const DofMap space = build_scalar_space(mesh, k);
    const std::vector<int> keep = interior_dofs(space);
    out.emplace_back("K", assemble_scalar_stiffness(space, mesh, rule).submatrix(keep));
    out.emplace_back("M", assemble_scalar_mass(space, mesh, rule).submatrix(keep));
    return out;
  }
  const DofMap space = build_vector_space(mesh, k);
  if (form == Form::Fem2) {
    if (k < 1 || k > 3) throw std::invalid_argument("div-div formulation supports k = 1, 2, 3");
    out.emplace_back("B", assemble_divdiv(space, mesh, rule));
    out.emplace_back("A", assemble_vector_mass(space, mesh, rule));
    return out;
  }
  const WhBasis wh = build_wh_space(mesh, k);
  out.emplace_back("A", assemble_vector_mass(space, mesh, rule));
  out.emplace_back("D", assemble_div_coupling(space, wh, mesh, rule));
  out.emplace_back("M", assemble_wh_mass(wh, mesh, rule));
  return out;
}

std::vector<double> exact_square_spectrum(std::size_t count) {
  const std::size_t m_max = count + 1;
  std::vector<double> all;
  all.reserve(m_max * m_max);
  for (std::size_t a = 1; a <= m_max; ++a)
    for (std::size_t b = 1; b <= m_max; ++b) all.push_back(static_cast<double>(a * a + b * b));
  std::sort(all.begin(), all.end());
  all.resize(count);
  return all;
}

}  // namespace ccx
