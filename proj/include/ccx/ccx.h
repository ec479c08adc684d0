#ifndef CCX_CCX_H
#define CCX_CCX_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CCX_BUILDING_LIBRARY)
#    define CCX_API __declspec(dllexport)
#  else
#    define CCX_API __declspec(dllimport)
#  endif
#else
#  define CCX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns a status; on failure ccx_last_error() holds a
   message for the calling thread until its next failing call. */
typedef enum ccx_status {
  CCX_OK = 0,
  CCX_ERR_INVALID_ARGUMENT = 1,
  CCX_ERR_SOLVER = 2,
  CCX_ERR_AUDIT = 3,
  CCX_ERR_IO = 4,
  CCX_ERR_INTERNAL = 5
} ccx_status;

typedef enum ccx_form { CCX_FORM_FEM1 = 0, CCX_FORM_FEM2 = 1, CCX_FORM_PRIMAL = 2 } ccx_form;
typedef enum ccx_backend { CCX_BACKEND_DENSE = 0, CCX_BACKEND_LANCZOS = 1 } ccx_backend;
typedef enum ccx_domain {
  CCX_DOMAIN_SQUARE = 0,
  CCX_DOMAIN_LSHAPE = 1,
  CCX_DOMAIN_SQUARE_PERTURBED = 2
} ccx_domain;

typedef struct ccx_quadmesh ccx_quadmesh;
typedef struct ccx_trimesh ccx_trimesh;
typedef struct ccx_spectrum ccx_spectrum;
typedef struct ccx_spurious ccx_spurious;

CCX_API const char* ccx_last_error(void);
CCX_API const char* ccx_version(void);

/* Meshes */
CCX_API ccx_status ccx_quadmesh_rect(double x0, double y0, double x1, double y1, int nx, int ny,
                                     ccx_quadmesh** out);
CCX_API ccx_status ccx_quadmesh_lshape(int n, ccx_quadmesh** out);
CCX_API ccx_status ccx_quadmesh_perturb(const ccx_quadmesh* mesh, double amplitude, uint64_t seed,
                                        ccx_quadmesh** out);
CCX_API ccx_status ccx_quadmesh_counts(const ccx_quadmesh* mesh, size_t* vertices, size_t* edges,
                                       size_t* quads);
CCX_API void ccx_quadmesh_free(ccx_quadmesh* mesh);

CCX_API ccx_status ccx_criss_cross(const ccx_quadmesh* mesh, ccx_trimesh** out);
CCX_API void ccx_trimesh_free(ccx_trimesh* mesh);

typedef struct ccx_mesh_stats {
  double h;
  double h_min;
  double shape_regularity;
  size_t num_vertices;
  size_t num_edges;
  size_t num_triangles;
  size_t num_quads;
  size_t num_quad_vertices;
  size_t num_quad_edges;
  int euler_check;
} ccx_mesh_stats;

CCX_API ccx_status ccx_trimesh_stats(const ccx_trimesh* mesh, ccx_mesh_stats* out);
CCX_API ccx_status ccx_trimesh_write(const ccx_trimesh* mesh, const char* path);

/* Eigenvalue solves */
typedef struct ccx_solve_options {
  size_t n_eigs; /* 0 = all (dense only) */
  ccx_backend backend;
  double sigma;
  double tol_zero;
  double tol;
  size_t max_iter;
  size_t dense_cap;
  uint64_t seed;
} ccx_solve_options;

CCX_API void ccx_solve_options_default(ccx_solve_options* opts);
CCX_API ccx_status ccx_solve(const ccx_trimesh* mesh, int k, ccx_form form, const ccx_solve_options* opts,
                             ccx_spectrum** out);
CCX_API void ccx_spectrum_free(ccx_spectrum* spec);

CCX_API size_t ccx_spectrum_size(const ccx_spectrum* spec);
CCX_API double ccx_spectrum_value(const ccx_spectrum* spec, size_t i);
CCX_API double ccx_spectrum_residual(const ccx_spectrum* spec, size_t i); /* -1 if unknown */
CCX_API int ccx_spectrum_cluster(const ccx_spectrum* spec, size_t i);
CCX_API long long ccx_spectrum_zero_count(const ccx_spectrum* spec); /* -1 if unknown */
CCX_API int ccx_spectrum_converged(const ccx_spectrum* spec);
CCX_API size_t ccx_spectrum_iterations(const ccx_spectrum* spec);
CCX_API const char* ccx_spectrum_backend(const ccx_spectrum* spec);

/* Writes <prefix>_<name>.mtx for every matrix of the formulation. */
CCX_API ccx_status ccx_export_matrices(const ccx_trimesh* mesh, int k, ccx_form form, const char* prefix);

/* Writes the first `count` values of {m^2 + n^2 : m, n >= 1}. */
CCX_API ccx_status ccx_exact_square_spectrum(size_t count, double* out);

/* Audits */
typedef struct ccx_complex_report {
  int k;
  size_t vq;
  size_t eq;
  size_t q;
  long long dim_sigma;
  size_t dim_v;
  size_t dim_wh;
  size_t dim_dg;
  size_t rank_div;
  size_t nullity_b;
  long long euler_residual;
  int euler_ok;
  int rank_ok;
  int nullity_ok;
} ccx_complex_report;

CCX_API ccx_status ccx_dim_sigma(int k, long long vq, long long eq, long long q, long long* out);
CCX_API ccx_status ccx_audit_complex(const ccx_trimesh* mesh, int k, ccx_complex_report* out);

typedef struct ccx_wh_report {
  int k;
  size_t samples;
  size_t rank;
  size_t expected_rank;
  double max_alternating_residual;
  double checkerboard_distance;
  int ok;
} ccx_wh_report;

/* `xy` holds the four counterclockwise corners as x0, y0, ..., x3, y3. */
CCX_API ccx_status ccx_audit_wh_local(const double* xy, int k, uint64_t seed, size_t samples,
                                      ccx_wh_report* out);

CCX_API ccx_status ccx_spurious_scan(ccx_domain domain, int k, const int* levels, size_t n_levels,
                                     size_t n_eigs, double threshold, const ccx_solve_options* opts,
                                     ccx_spurious** out);
CCX_API void ccx_spurious_free(ccx_spurious* rep);
CCX_API size_t ccx_spurious_level_count(const ccx_spurious* rep);
CCX_API ccx_status ccx_spurious_level(const ccx_spurious* rep, size_t level, int* n, double* h, size_t* count);
CCX_API double ccx_spurious_level_value(const ccx_spurious* rep, size_t level, size_t i);
CCX_API double ccx_spurious_level_distance(const ccx_spurious* rep, size_t level, size_t i);
CCX_API size_t ccx_spurious_flag_count(const ccx_spurious* rep);
CCX_API size_t ccx_spurious_flag_index(const ccx_spurious* rep, size_t flag);

#ifdef __cplusplus
}
#endif

#endif
