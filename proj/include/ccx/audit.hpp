#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ccx/eigsolve.hpp"
#include "ccx/mesh.hpp"

namespace ccx {

/// 3 V_Q + (2k - 3) E_Q + 4 (k - 2) Q, the dimension of the discrete
/// potential space that precedes V_h^k in the complex.
long long dim_sigma(int k, long long vq, long long eq, long long q);

struct ComplexReport {
  int k = 0;
  std::size_t vq = 0;
  std::size_t eq = 0;
  std::size_t q = 0;
  long long dim_sigma = 0;
  std::size_t dim_v = 0;
  std::size_t dim_wh = 0;
  std::size_t dim_dg = 0;
  std::size_t rank_div = 0;
  std::size_t nullity_b = 0;
  long long euler_residual = 0;
  bool euler_ok = false;
  bool rank_ok = false;
  bool nullity_ok = false;
  bool ok() const { return euler_ok && rank_ok && nullity_ok; }
};

/// Dense rank and nullity checks of the discrete complex. Throws AuditError
/// when the vector space exceeds `dense_cap` DOFs.
ComplexReport exactness_check(const TriMesh& mesh, int k, double rank_tol = 1e-9,
                              std::size_t dense_cap = 3000);

struct WhLocalReport {
  int k = 0;
  std::size_t samples = 0;
  std::size_t rank = 0;
  std::size_t expected_rank = 0;
  double max_alternating_residual = 0.0;
  double checkerboard_distance = 0.0;
  bool ok() const {
    return rank == expected_rank && max_alternating_residual < 1e-10 && checkerboard_distance > 0.1;
  }
};

/// Samples div of random fields of V_h^k on one criss-cross quad and checks the
/// image against the alternating center condition.
WhLocalReport wh_local_audit(const std::array<Point, 4>& quad, int k, std::uint64_t seed = 1,
                             std::size_t samples = 200);

enum class Domain { Square, LShape, SquarePerturbed };

struct SpuriousLevel {
  int n = 0;
  double h = 0.0;
  std::vector<double> eigenvalues;
  std::vector<double> distances;  // to the nearest exact eigenvalue
};

struct SpuriousFlag {
  std::size_t index = 0;
  std::vector<double> values;
  std::vector<double> distances;
};

struct SpuriousReport {
  int k = 0;
  double threshold = 0.0;
  std::vector<double> exact;
  std::vector<SpuriousLevel> levels;
  std::vector<SpuriousFlag> flags;
};

/// Solves the div-div pencil on each level and flags indices whose distance to
/// the exact spectrum exceeds `threshold` on every level without halving
/// between consecutive levels. Only the square has a known spectrum.
SpuriousReport spurious_scan(Domain domain, int k, const std::vector<int>& levels, std::size_t n_eigs,
                             double threshold = 0.5, const SolveOptions& opts = {});

}  // namespace ccx
