#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ccx/mesh.hpp"
#include "ccx/sparse.hpp"

namespace ccx {

enum class Backend { Dense, Lanczos };

const char* backend_name(Backend b);

/// Sorted generalized eigenvalues of a pencil B x = lambda A x.
struct Spectrum {
  std::vector<double> eigenvalues;
  /// Eigenvalues classified as kernel; empty when the backend cannot know
  /// (shift-invert only sees the kernel as a single cluster).
  std::optional<std::size_t> zero_count;
  Backend backend = Backend::Dense;
  /// Relative backward errors |Bx - lambda Ax| / ((|B| + |lambda| |A|) |x|),
  /// one per eigenvalue when eigenvectors were computed.
  std::vector<double> residuals;
  /// Columns are eigenvectors (A-normalized) when requested.
  Eigen::MatrixXd vectors;
  /// Equal ids mark eigenvalues within the cluster tolerance of each other.
  std::vector<int> cluster;
  double tol_zero = 1e-9;
  double tol = 1e-10;
  bool converged = true;
  std::size_t iterations = 0;
};

struct DenseOptions {
  std::size_t dense_cap = 6000;
  double tol_zero = 1e-9;
  /// Eigenvectors are computed for the first `n_vectors` nonzero eigenvalues.
  std::size_t n_vectors = 0;
};

/// All eigenvalues of B x = lambda A x with A SPD, via Cholesky congruence
/// and a symmetric tridiagonal eigensolver.
Spectrum dense_gevp(const Eigen::MatrixXd& B, const Eigen::MatrixXd& A, const DenseOptions& opts = {});
Spectrum dense_gevp(const SparseMatrix& B, const SparseMatrix& A, const DenseOptions& opts = {});

struct LanczosOptions {
  double sigma = 1.0;
  std::size_t n_eigs = 10;
  std::size_t max_iter = 60;  // block steps
  std::size_t block_size = 4;
  double tol = 1e-10;
  std::uint64_t seed = 12345;
};

/// Smallest eigenvalues above sigma of B x = lambda A x by block Lanczos on
/// (B - sigma A)^{-1} A with full reorthogonalization in the A inner product.
Spectrum shift_invert_lanczos(const SparseMatrix& B, const SparseMatrix& A, const LanczosOptions& opts);

/// Drops |lambda| <= tol_zero * max(1, lambda_max) and records how many.
Spectrum filter_nonzero(const Spectrum& spec, double tol_zero);

/// Cluster ids: consecutive eigenvalues within rel_tol share an id.
std::vector<int> tag_clusters(const std::vector<double>& eigenvalues, double rel_tol = 1e-8);

/// Relative backward error of an eigenpair.
double backward_error(const SparseMatrix& B, const SparseMatrix& A, double lambda, const Eigen::VectorXd& x);

struct SolveOptions {
  std::size_t n_eigs = 10;
  Backend backend = Backend::Dense;
  double sigma = 1.0;
  double tol_zero = 1e-9;
  double tol = 1e-10;
  std::size_t max_iter = 60;
  std::size_t dense_cap = 6000;
  std::uint64_t seed = 12345;
};

/// Div-div pencil (div s, div t) = lambda (s, t) on vector Lagrange V_h^k.
Spectrum solve_fem2(const TriMesh& mesh, int k, const SolveOptions& opts = {});

/// Mixed system on V_h^k x W_h^{k-1}, reduced to (D A^{-1} D^T) u = lambda M u.
Spectrum solve_fem1(const TriMesh& mesh, int k, const SolveOptions& opts = {});

/// Scalar Lagrange (grad u, grad v) = lambda (u, v) with homogeneous Dirichlet DOFs removed.
Spectrum solve_primal(const TriMesh& mesh, int k, const SolveOptions& opts = {});

enum class Form { Fem1, Fem2, Primal };

const char* form_name(Form f);

Spectrum solve(const TriMesh& mesh, int k, Form form, const SolveOptions& opts = {});

/// Named sparse matrices of a formulation: fem2 gives B, A; fem1 gives A, D, M
/// (D against the W_h basis); primal gives K, M with boundary DOFs removed.
std::vector<std::pair<std::string, SparseMatrix>> assemble_system(const TriMesh& mesh, int k, Form form);

/// Sorted multiset {m^2 + n^2 : m, n >= 1}, the Dirichlet spectrum of (0,pi)^2.
std::vector<double> exact_square_spectrum(std::size_t count);

}  // namespace ccx
