#include "ccx/ccx.h"

#include <fstream>
#include <new>
#include <stdexcept>
#include <string>

#include "ccx/audit.hpp"
#include "ccx/eigsolve.hpp"
#include "ccx/error.hpp"
#include "ccx/mesh.hpp"
#include "ccx/sparse.hpp"

struct ccx_quadmesh {
  ccx::QuadMesh mesh;
};
struct ccx_trimesh {
  ccx::TriMesh mesh;
};
struct ccx_spectrum {
  ccx::Spectrum spec;
};
struct ccx_spurious {
  ccx::SpuriousReport report;
};

namespace {

thread_local std::string g_last_error;

ccx_status fail(ccx_status s, const char* what) {
  g_last_error = what;
  return s;
}

template <class F>
ccx_status guarded(F&& f) {
  try {
    f();
    return CCX_OK;
  } catch (const std::invalid_argument& e) {
    return fail(CCX_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(CCX_ERR_INVALID_ARGUMENT, e.what());
  } catch (const ccx::SolverError& e) {
    return fail(CCX_ERR_SOLVER, e.what());
  } catch (const ccx::AuditError& e) {
    return fail(CCX_ERR_AUDIT, e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(CCX_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CCX_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CCX_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CCX_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) throw std::invalid_argument(std::string(name) + " is null");
}

ccx::SolveOptions to_cpp(const ccx_solve_options* o) {
  ccx::SolveOptions s;
  if (o == nullptr) return s;
  s.n_eigs = o->n_eigs;
  if (o->backend != CCX_BACKEND_DENSE && o->backend != CCX_BACKEND_LANCZOS)
    throw std::invalid_argument("unknown backend");
  s.backend = o->backend == CCX_BACKEND_DENSE ? ccx::Backend::Dense : ccx::Backend::Lanczos;
  s.sigma = o->sigma;
  s.tol_zero = o->tol_zero;
  s.tol = o->tol;
  s.max_iter = o->max_iter;
  s.dense_cap = o->dense_cap;
  s.seed = o->seed;
  return s;
}

ccx::Form to_cpp(ccx_form f) {
  switch (f) {
    case CCX_FORM_FEM1: return ccx::Form::Fem1;
    case CCX_FORM_FEM2: return ccx::Form::Fem2;
    case CCX_FORM_PRIMAL: return ccx::Form::Primal;
  }
  throw std::invalid_argument("unknown formulation");
}

ccx::Domain to_cpp(ccx_domain d) {
  switch (d) {
    case CCX_DOMAIN_SQUARE: return ccx::Domain::Square;
    case CCX_DOMAIN_LSHAPE: return ccx::Domain::LShape;
    case CCX_DOMAIN_SQUARE_PERTURBED: return ccx::Domain::SquarePerturbed;
  }
  throw std::invalid_argument("unknown domain");
}

}  // namespace

extern "C" {

const char* ccx_last_error(void) { return g_last_error.c_str(); }

const char* ccx_version(void) { return "1.0.0"; }

ccx_status ccx_quadmesh_rect(double x0, double y0, double x1, double y1, int nx, int ny, ccx_quadmesh** out) {
  return guarded([&] {
    require(out, "out");
    *out = new ccx_quadmesh{ccx::build_rect_grid(x0, y0, x1, y1, nx, ny)};
  });
}

ccx_status ccx_quadmesh_lshape(int n, ccx_quadmesh** out) {
  return guarded([&] {
    require(out, "out");
    *out = new ccx_quadmesh{ccx::build_lshape_grid(n)};
  });
}

ccx_status ccx_quadmesh_perturb(const ccx_quadmesh* mesh, double amplitude, uint64_t seed, ccx_quadmesh** out) {
  return guarded([&] {
    require(mesh, "mesh");
    require(out, "out");
    *out = new ccx_quadmesh{ccx::perturb_quad_grid(mesh->mesh, amplitude, seed)};
  });
}

ccx_status ccx_quadmesh_counts(const ccx_quadmesh* mesh, size_t* vertices, size_t* edges, size_t* quads) {
  return guarded([&] {
    require(mesh, "mesh");
    if (vertices) *vertices = mesh->mesh.num_vertices();
    if (edges) *edges = mesh->mesh.num_edges();
    if (quads) *quads = mesh->mesh.num_quads();
  });
}

void ccx_quadmesh_free(ccx_quadmesh* mesh) { delete mesh; }

ccx_status ccx_criss_cross(const ccx_quadmesh* mesh, ccx_trimesh** out) {
  return guarded([&] {
    require(mesh, "mesh");
    require(out, "out");
    *out = new ccx_trimesh{ccx::criss_cross(mesh->mesh)};
  });
}

void ccx_trimesh_free(ccx_trimesh* mesh) { delete mesh; }

ccx_status ccx_trimesh_stats(const ccx_trimesh* mesh, ccx_mesh_stats* out) {
  return guarded([&] {
    require(mesh, "mesh");
    require(out, "out");
    const ccx::MeshStats s = ccx::mesh_stats(mesh->mesh);
    out->h = s.h;
    out->h_min = s.h_min;
    out->shape_regularity = s.shape_regularity;
    out->num_vertices = s.num_vertices;
    out->num_edges = s.num_edges;
    out->num_triangles = s.num_triangles;
    out->num_quads = s.num_quads;
    out->num_quad_vertices = s.num_quad_vertices;
    out->num_quad_edges = s.num_quad_edges;
    out->euler_check = s.euler_check ? 1 : 0;
  });
}

ccx_status ccx_trimesh_write(const ccx_trimesh* mesh, const char* path) {
  return guarded([&] {
    require(mesh, "mesh");
    require(path, "path");
    std::ofstream os(path);
    if (!os) throw std::ios_base::failure(std::string("cannot open ") + path);
    ccx::write_mesh(os, mesh->mesh);
    if (!os) throw std::ios_base::failure(std::string("write failed: ") + path);
  });
}

void ccx_solve_options_default(ccx_solve_options* opts) {
  if (opts == nullptr) return;
  const ccx::SolveOptions s;
  opts->n_eigs = s.n_eigs;
  opts->backend = CCX_BACKEND_DENSE;
  opts->sigma = s.sigma;
  opts->tol_zero = s.tol_zero;
  opts->tol = s.tol;
  opts->max_iter = s.max_iter;
  opts->dense_cap = s.dense_cap;
  opts->seed = s.seed;
}

ccx_status ccx_solve(const ccx_trimesh* mesh, int k, ccx_form form, const ccx_solve_options* opts,
                     ccx_spectrum** out) {
  return guarded([&] {
    require(mesh, "mesh");
    require(out, "out");
    *out = new ccx_spectrum{ccx::solve(mesh->mesh, k, to_cpp(form), to_cpp(opts))};
  });
}

void ccx_spectrum_free(ccx_spectrum* spec) { delete spec; }

size_t ccx_spectrum_size(const ccx_spectrum* spec) { return spec ? spec->spec.eigenvalues.size() : 0; }

double ccx_spectrum_value(const ccx_spectrum* spec, size_t i) {
  if (!spec || i >= spec->spec.eigenvalues.size()) return 0.0;
  return spec->spec.eigenvalues[i];
}

double ccx_spectrum_residual(const ccx_spectrum* spec, size_t i) {
  if (!spec || i >= spec->spec.residuals.size()) return -1.0;
  return spec->spec.residuals[i];
}

int ccx_spectrum_cluster(const ccx_spectrum* spec, size_t i) {
  if (!spec || i >= spec->spec.cluster.size()) return -1;
  return spec->spec.cluster[i];
}

long long ccx_spectrum_zero_count(const ccx_spectrum* spec) {
  if (!spec || !spec->spec.zero_count) return -1;
  return static_cast<long long>(*spec->spec.zero_count);
}

int ccx_spectrum_converged(const ccx_spectrum* spec) { return spec && spec->spec.converged ? 1 : 0; }

size_t ccx_spectrum_iterations(const ccx_spectrum* spec) { return spec ? spec->spec.iterations : 0; }

const char* ccx_spectrum_backend(const ccx_spectrum* spec) {
  return spec ? ccx::backend_name(spec->spec.backend) : "";
}

ccx_status ccx_export_matrices(const ccx_trimesh* mesh, int k, ccx_form form, const char* prefix) {
  return guarded([&] {
    require(mesh, "mesh");
    require(prefix, "prefix");
    for (const auto& [name, m] : ccx::assemble_system(mesh->mesh, k, to_cpp(form))) {
      const std::string path = std::string(prefix) + "_" + name + ".mtx";
      std::ofstream os(path);
      if (!os) throw std::ios_base::failure("cannot open " + path);
      ccx::write_matrix_market(os, m);
      if (!os) throw std::ios_base::failure("write failed: " + path);
    }
  });
}

ccx_status ccx_exact_square_spectrum(size_t count, double* out) {
  return guarded([&] {
    if (count > 0) require(out, "out");
    const auto v = ccx::exact_square_spectrum(count);
    for (size_t i = 0; i < count; ++i) out[i] = v[i];
  });
}

ccx_status ccx_dim_sigma(int k, long long vq, long long eq, long long q, long long* out) {
  return guarded([&] {
    require(out, "out");
    *out = ccx::dim_sigma(k, vq, eq, q);
  });
}

ccx_status ccx_audit_complex(const ccx_trimesh* mesh, int k, ccx_complex_report* out) {
  return guarded([&] {
    require(mesh, "mesh");
    require(out, "out");
    const ccx::ComplexReport r = ccx::exactness_check(mesh->mesh, k);
    out->k = r.k;
    out->vq = r.vq;
    out->eq = r.eq;
    out->q = r.q;
    out->dim_sigma = r.dim_sigma;
    out->dim_v = r.dim_v;
    out->dim_wh = r.dim_wh;
    out->dim_dg = r.dim_dg;
    out->rank_div = r.rank_div;
    out->nullity_b = r.nullity_b;
    out->euler_residual = r.euler_residual;
    out->euler_ok = r.euler_ok;
    out->rank_ok = r.rank_ok;
    out->nullity_ok = r.nullity_ok;
  });
}

ccx_status ccx_audit_wh_local(const double* xy, int k, uint64_t seed, size_t samples, ccx_wh_report* out) {
  return guarded([&] {
    require(xy, "xy");
    require(out, "out");
    std::array<ccx::Point, 4> quad;
    for (int i = 0; i < 4; ++i) quad[i] = {xy[2 * i], xy[2 * i + 1]};
    const ccx::WhLocalReport r = ccx::wh_local_audit(quad, k, seed, samples);
    out->k = r.k;
    out->samples = r.samples;
    out->rank = r.rank;
    out->expected_rank = r.expected_rank;
    out->max_alternating_residual = r.max_alternating_residual;
    out->checkerboard_distance = r.checkerboard_distance;
    out->ok = r.ok() ? 1 : 0;
  });
}

ccx_status ccx_spurious_scan(ccx_domain domain, int k, const int* levels, size_t n_levels, size_t n_eigs,
                             double threshold, const ccx_solve_options* opts, ccx_spurious** out) {
  return guarded([&] {
    require(out, "out");
    if (n_levels > 0) require(levels, "levels");
    const std::vector<int> lv(levels, levels + n_levels);
    *out = new ccx_spurious{ccx::spurious_scan(to_cpp(domain), k, lv, n_eigs, threshold, to_cpp(opts))};
  });
}

void ccx_spurious_free(ccx_spurious* rep) { delete rep; }

size_t ccx_spurious_level_count(const ccx_spurious* rep) { return rep ? rep->report.levels.size() : 0; }

ccx_status ccx_spurious_level(const ccx_spurious* rep, size_t level, int* n, double* h, size_t* count) {
  return guarded([&] {
    require(rep, "report");
    const auto& lv = rep->report.levels.at(level);
    if (n) *n = lv.n;
    if (h) *h = lv.h;
    if (count) *count = lv.eigenvalues.size();
  });
}

double ccx_spurious_level_value(const ccx_spurious* rep, size_t level, size_t i) {
  if (!rep || level >= rep->report.levels.size()) return 0.0;
  const auto& v = rep->report.levels[level].eigenvalues;
  return i < v.size() ? v[i] : 0.0;
}

double ccx_spurious_level_distance(const ccx_spurious* rep, size_t level, size_t i) {
  if (!rep || level >= rep->report.levels.size()) return 0.0;
  const auto& v = rep->report.levels[level].distances;
  return i < v.size() ? v[i] : 0.0;
}

size_t ccx_spurious_flag_count(const ccx_spurious* rep) { return rep ? rep->report.flags.size() : 0; }

size_t ccx_spurious_flag_index(const ccx_spurious* rep, size_t flag) {
  if (!rep || flag >= rep->report.flags.size()) return static_cast<size_t>(-1);
  return rep->report.flags[flag].index;
}

}  // extern "C"
