#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "ccx/assembly.hpp"
#include "ccx/eigsolve.hpp"
#include "ccx/error.hpp"

using namespace ccx;

namespace {

constexpr double pi = std::numbers::pi;

TriMesh square(int n) { return criss_cross(build_rect_grid(0, 0, pi, pi, n, n)); }

long long kernel_law(const TriMesh& m, int k) {
  return 3LL * m.num_quad_vertices + (2LL * k - 3) * m.num_quad_edges + 4LL * (k - 2) * m.num_quads - 1;
}

}  // namespace

TEST_SUITE("eigsolve") {

TEST_CASE("dense pencil solver against Eigen's generalized solver") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (int n : {5, 40, 120}) {
    Eigen::MatrixXd X(n, n), Y(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        X(i, j) = g(rng);
        Y(i, j) = g(rng);
      }
    const Eigen::MatrixXd A = X * X.transpose() + n * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd B = 0.5 * (Y + Y.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ref(B, A);
    DenseOptions opts;
    opts.n_vectors = std::size_t(n);
    const Spectrum s = dense_gevp(B, A, opts);
    REQUIRE(s.eigenvalues.size() == std::size_t(n));
    for (int i = 0; i < n; ++i) CHECK(s.eigenvalues[i] == doctest::Approx(ref.eigenvalues()(i)).epsilon(1e-10));
    for (double r : s.residuals) CHECK(r < 1e-13);
    // A-orthonormal vectors.
    const Eigen::MatrixXd G = s.vectors.transpose() * A * s.vectors;
    CHECK((G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("dense solver errors") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(3, 3);
  A(2, 2) = -1.0;
  CHECK_THROWS_AS(dense_gevp(Eigen::MatrixXd::Identity(3, 3), A), SolverError);
  DenseOptions tiny;
  tiny.dense_cap = 2;
  CHECK_THROWS_AS(dense_gevp(Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Identity(3, 3), tiny), SolverError);
  CHECK_THROWS_AS(dense_gevp(Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Identity(4, 4)), std::invalid_argument);
}

TEST_CASE("zero filter and clusters") {
  Spectrum s;
  s.eigenvalues = {-1e-12, 3e-11, 2.0, 5.0, 5.0 + 1e-9, 8.0};
  const Spectrum f = filter_nonzero(s, 1e-9);
  CHECK(f.zero_count == 2);
  CHECK(f.eigenvalues.size() == 4);
  CHECK(f.cluster == std::vector<int>{0, 1, 1, 2});
  CHECK(tag_clusters({1.0, 1.0 + 1e-7, 1.0 + 2e-7}) == std::vector<int>{0, 1, 2});
  CHECK(tag_clusters({1.0, 1.0 + 1e-9}) == std::vector<int>{0, 0});
}

TEST_CASE("exact square spectrum") {
  CHECK(exact_square_spectrum(10) == std::vector<double>{2, 5, 5, 8, 10, 10, 13, 13, 17, 17});
  const auto v = exact_square_spectrum(40);
  for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] >= v[i - 1]);
  CHECK(v[10] == 18);
}

TEST_CASE("single square kernel and spectrum size") {
  const TriMesh m = square(1);
  SolveOptions all;
  all.n_eigs = 0;
  const Spectrum s = solve_fem2(m, 2, all);
  CHECK(s.zero_count == 15);
  CHECK(s.eigenvalues.size() == 11);
  const Spectrum s3 = solve_fem2(m, 3, all);
  CHECK(s3.zero_count == 27);
  CHECK(s3.eigenvalues.size() == 23);
}

TEST_CASE("kernel law of the div-div pencil") {
  SolveOptions all;
  all.n_eigs = 0;
  for (const TriMesh& m : {square(2), square(3), criss_cross(build_lshape_grid(1)), criss_cross(build_lshape_grid(2)),
                           criss_cross(perturb_quad_grid(build_rect_grid(0, 0, 1, 1, 3, 3), 0.2, 1))})
    for (int k : {2, 3}) {
      const Spectrum s = solve_fem2(m, k, all);
      REQUIRE(s.zero_count.has_value());
      CHECK((long long)*s.zero_count == kernel_law(m, k));
    }
}

TEST_CASE("first eigenvalue on the square converges from above") {
  SolveOptions o;
  o.n_eigs = 10;
  const Spectrum s4 = solve_fem2(square(4), 2, o);
  const Spectrum s8 = solve_fem2(square(8), 2, o);
  const auto exact = exact_square_spectrum(10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(s4.eigenvalues[i] > exact[i]);
    CHECK(s8.eigenvalues[i] > exact[i]);
    CHECK(s8.eigenvalues[i] - exact[i] < s4.eigenvalues[i] - exact[i]);
  }
  CHECK(s8.eigenvalues[0] - 2.0 == doctest::Approx(3.918771488331529e-05).epsilon(5e-6));
  const double rate = std::log2((s4.eigenvalues[0] - 2) / (s8.eigenvalues[0] - 2));
  CHECK(rate > 3.9);
  CHECK(rate < 4.1);
  // Doublets at 5, 13, 17 are symmetry-forced.
  CHECK(s8.cluster[1] == s8.cluster[2]);
  CHECK(s8.cluster[6] == s8.cluster[7]);
  CHECK(s8.cluster[8] == s8.cluster[9]);
  for (double r : s8.residuals) CHECK(r < 1e-12);
}

TEST_CASE("lanczos agrees with the dense backend") {
  const TriMesh m = square(6);
  for (int k : {1, 2, 3}) {
    SolveOptions d;
    d.n_eigs = 8;
    SolveOptions l = d;
    l.backend = Backend::Lanczos;
    const Spectrum sd = solve_fem2(m, k, d);
    const Spectrum sl = solve_fem2(m, k, l);
    CHECK(sl.converged);
    CHECK_FALSE(sl.zero_count.has_value());
    REQUIRE(sl.eigenvalues.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) CHECK(sl.eigenvalues[i] == doctest::Approx(sd.eigenvalues[i]).epsilon(1e-10));
    for (double r : sl.residuals) CHECK(r <= 1e-10);
  }
  SolveOptions bad;
  bad.backend = Backend::Lanczos;
  bad.n_eigs = 0;
  CHECK_THROWS_AS(solve_fem2(m, 2, bad), std::invalid_argument);
}

TEST_CASE("backward error of computed pairs") {
  const TriMesh m = square(3);
  const DofMap v = build_vector_space(m, 2);
  const SparseMatrix A = assemble_vector_mass(v, m, default_rule(2));
  const SparseMatrix B = assemble_divdiv(v, m, default_rule(2));
  SolveOptions o;
  o.n_eigs = 3;
  const Spectrum s = solve_fem2(m, 2, o);
  REQUIRE(s.vectors.cols() >= 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(backward_error(B, A, s.eigenvalues[i], s.vectors.col(i)) < 1e-13);
    CHECK(backward_error(B, A, s.eigenvalues[i] * 1.01, s.vectors.col(i)) > 1e-4);
  }
}

TEST_CASE("mixed and div-div formulations share nonzero spectra") {
  SolveOptions all;
  all.n_eigs = 0;
  for (const TriMesh& m : {square(1), square(2), criss_cross(build_lshape_grid(1)),
                           criss_cross(perturb_quad_grid(build_rect_grid(0, 0, 1, 1, 2, 2), 0.2, 3))})
    for (int k : {2, 3}) {
      const Spectrum a = solve_fem1(m, k, all);
      const Spectrum b = solve_fem2(m, k, all);
      REQUIRE(a.eigenvalues.size() == b.eigenvalues.size());
      CHECK(a.zero_count == 0);
      for (std::size_t i = 0; i < a.eigenvalues.size(); ++i)
        CHECK(a.eigenvalues[i] == doctest::Approx(b.eigenvalues[i]).epsilon(1e-9));
    }
  CHECK_THROWS_AS(solve_fem1(square(1), 1), std::invalid_argument);
}

TEST_CASE("primal formulation") {
  SolveOptions o;
  o.n_eigs = 4;
  const Spectrum p = solve_primal(square(8), 2, o);
  CHECK(p.zero_count == 0);
  const auto exact = exact_square_spectrum(4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(p.eigenvalues[i] > exact[i]);
    CHECK(p.eigenvalues[i] - exact[i] < 1e-2);
  }
  // P1 on one criss-cross square has a single interior node, the center:
  // lambda = K_cc / M_cc = 4 / (4 * area/6) with triangle area pi^2/4.
  SolveOptions all;
  all.n_eigs = 0;
  const Spectrum one = solve_primal(square(1), 1, all);
  REQUIRE(one.eigenvalues.size() == 1);
  CHECK(one.eigenvalues[0] == doctest::Approx(4.0 / (4.0 * (pi * pi / 4.0) / 6.0)));
}

TEST_CASE("system export has the expected shapes") {
  const TriMesh m = square(2);
  const auto fem2 = assemble_system(m, 2, Form::Fem2);
  REQUIRE(fem2.size() == 2);
  CHECK(fem2[0].first == "B");
  CHECK(fem2[0].second.rows() == build_vector_space(m, 2).n_dofs);
  const auto fem1 = assemble_system(m, 2, Form::Fem1);
  REQUIRE(fem1.size() == 3);
  CHECK(fem1[1].second.rows() == build_wh_space(m, 2).n_dofs);
  const auto primal = assemble_system(m, 2, Form::Primal);
  CHECK(primal[0].second.rows() == build_scalar_space(m, 2).n_dofs - build_scalar_space(m, 2).boundary_dofs.size());
}

}  // TEST_SUITE
