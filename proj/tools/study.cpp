#include "study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

namespace ccx::cli {

namespace {

template <class T, void (*F)(T*)>
struct Deleter {
  void operator()(T* p) const { F(p); }
};

using QuadPtr = std::unique_ptr<ccx_quadmesh, Deleter<ccx_quadmesh, ccx_quadmesh_free>>;
using TriPtr = std::unique_ptr<ccx_trimesh, Deleter<ccx_trimesh, ccx_trimesh_free>>;
using SpecPtr = std::unique_ptr<ccx_spectrum, Deleter<ccx_spectrum, ccx_spectrum_free>>;
using SpuriousPtr = std::unique_ptr<ccx_spurious, Deleter<ccx_spurious, ccx_spurious_free>>;

void check(ccx_status s) {
  if (s != CCX_OK) throw ApiError(s, ccx_last_error());
}

TriPtr build_level(const StudyConfig& cfg, int n) {
  ccx_quadmesh* q = nullptr;
  if (cfg.domain == DomainKind::LShape) {
    check(ccx_quadmesh_lshape(n, &q));
  } else {
    check(ccx_quadmesh_rect(0.0, 0.0, std::numbers::pi, std::numbers::pi, n, n, &q));
  }
  QuadPtr quad(q);
  if (cfg.domain == DomainKind::SquarePerturbed) {
    ccx_quadmesh* p = nullptr;
    check(ccx_quadmesh_perturb(quad.get(), cfg.perturb, cfg.seed, &p));
    quad.reset(p);
  }
  ccx_trimesh* t = nullptr;
  check(ccx_criss_cross(quad.get(), &t));
  return TriPtr(t);
}

ccx_solve_options solve_options(const StudyConfig& cfg) {
  ccx_solve_options o;
  ccx_solve_options_default(&o);
  o.n_eigs = cfg.n_eigs;
  o.backend = cfg.backend;
  o.sigma = cfg.sigma;
  o.tol_zero = cfg.tol_zero;
  o.tol = cfg.tol;
  o.seed = cfg.seed;
  return o;
}

double mesh_h(const ccx_trimesh* mesh) {
  ccx_mesh_stats st;
  check(ccx_trimesh_stats(mesh, &st));
  return st.h;
}

std::string level_path(const std::string& base, int n, bool multi, const std::string& ext = "") {
  if (!multi) return base;
  const auto dot = base.rfind('.');
  const auto slash = base.rfind('/');
  if (!ext.empty() || dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return base + "_n" + std::to_string(n);
  return base.substr(0, dot) + "_n" + std::to_string(n) + base.substr(dot);
}

void export_level(const StudyConfig& cfg, const ccx_trimesh* mesh, int n) {
  const bool multi = cfg.levels.size() > 1;
  if (!cfg.export_mesh.empty()) check(ccx_trimesh_write(mesh, level_path(cfg.export_mesh, n, multi).c_str()));
  if (!cfg.export_matrices.empty())
    check(ccx_export_matrices(mesh, cfg.degree, cfg.form, level_path(cfg.export_matrices, n, multi, "mtx").c_str()));
}

SpecPtr run_solve(const ccx_trimesh* mesh, int k, ccx_form form, const ccx_solve_options& o) {
  ccx_spectrum* s = nullptr;
  check(ccx_solve(mesh, k, form, &o, &s));
  SpecPtr spec(s);
  if (!ccx_spectrum_converged(spec.get()))
    throw ApiError(CCX_ERR_SOLVER, "eigensolver did not converge in " +
                                       std::to_string(ccx_spectrum_iterations(spec.get())) + " iterations");
  if (o.n_eigs > 0 && ccx_spectrum_size(spec.get()) < o.n_eigs)
    throw ApiError(CCX_ERR_SOLVER, "only " + std::to_string(ccx_spectrum_size(spec.get())) +
                                       " nonzero eigenvalues available, " + std::to_string(o.n_eigs) +
                                       " requested");
  return spec;
}

StudyReport run_study(const StudyConfig& cfg) {
  StudyReport rep;
  const std::vector<double> exact = exact_targets(cfg, cfg.n_eigs);
  const ccx_solve_options o = solve_options(cfg);
  for (std::size_t l = 0; l < cfg.levels.size(); ++l) {
    const int n = cfg.levels[l];
    TriPtr mesh = build_level(cfg, n);
    export_level(cfg, mesh.get(), n);
    LevelInfo info;
    info.level = n;
    info.h = mesh_h(mesh.get());
    const auto t0 = std::chrono::steady_clock::now();
    SpecPtr spec = run_solve(mesh.get(), cfg.degree, cfg.form, o);
    info.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    info.zero_count = ccx_spectrum_zero_count(spec.get());
    rep.levels.push_back(info);

    const std::size_t count = std::min(cfg.n_eigs, ccx_spectrum_size(spec.get()));
    for (std::size_t i = 0; i < count; ++i) {
      StudyRow row;
      row.level = n;
      row.h = info.h;
      row.index = i + 1;
      row.lambda_h = ccx_spectrum_value(spec.get(), i);
      row.cluster = ccx_spectrum_cluster(spec.get(), i);
      if (i < exact.size()) {
        row.exact = exact[i];
        row.abs_error = std::abs(row.lambda_h - exact[i]);
      }
      if (l > 0 && n == 2 * cfg.levels[l - 1] && row.abs_error) {
        for (const StudyRow& p : rep.rows)
          if (p.level == cfg.levels[l - 1] && p.index == row.index && p.abs_error && *p.abs_error > 0.0 &&
              *row.abs_error > 0.0)
            row.rate = std::log2(*p.abs_error / *row.abs_error);
      }
      rep.rows.push_back(row);
    }
  }

  if (cfg.max_error) {
    for (const StudyRow& r : rep.rows)
      if (r.abs_error && *r.abs_error >= *cfg.max_error)
        rep.failures.push_back("n=" + std::to_string(r.level) + " index " + std::to_string(r.index) +
                               ": error " + fmt17(*r.abs_error) + " >= " + fmt17(*cfg.max_error));
  }
  if (cfg.check_rate) {
    bool any = false;
    for (const StudyRow& r : rep.rows) {
      if (r.index != 1 || !r.rate) continue;
      any = true;
      if (*r.rate < cfg.check_rate->first || *r.rate > cfg.check_rate->second)
        rep.failures.push_back("n=" + std::to_string(r.level) + ": rate " + fmt17(*r.rate) + " outside [" +
                               fmt17(cfg.check_rate->first) + ", " + fmt17(cfg.check_rate->second) + "]");
    }
    if (!any) rep.failures.push_back("no rate available for the first eigenvalue");
  }
  return rep;
}

std::string opt17(const std::optional<double>& v) { return v ? fmt17(*v) : std::string(); }

std::string kv(const std::string& key, const std::string& value) { return key + "=" + value; }

}  // namespace

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

DomainKind parse_domain(const std::string& s) {
  if (s == "square") return DomainKind::Square;
  if (s == "lshape") return DomainKind::LShape;
  if (s == "square-perturbed") return DomainKind::SquarePerturbed;
  throw ConfigError("unknown domain '" + s + "' (square | lshape | square-perturbed)");
}

ccx_form parse_form(const std::string& s) {
  if (s == "fem1") return CCX_FORM_FEM1;
  if (s == "fem2") return CCX_FORM_FEM2;
  if (s == "primal") return CCX_FORM_PRIMAL;
  throw ConfigError("unknown formulation '" + s + "' (fem1 | fem2 | primal)");
}

ccx_backend parse_backend(const std::string& s) {
  if (s == "dense") return CCX_BACKEND_DENSE;
  if (s == "lanczos") return CCX_BACKEND_LANCZOS;
  throw ConfigError("unknown backend '" + s + "' (dense | lanczos)");
}

const char* domain_name(DomainKind d) {
  switch (d) {
    case DomainKind::Square: return "square";
    case DomainKind::LShape: return "lshape";
    case DomainKind::SquarePerturbed: return "square-perturbed";
  }
  return "?";
}

void validate(const StudyConfig& cfg, bool multi_level) {
  if (cfg.levels.empty()) throw ConfigError("at least one level is required");
  for (int n : cfg.levels)
    if (n < 1) throw ConfigError("levels must be >= 1");
  for (std::size_t i = 1; i < cfg.levels.size(); ++i)
    if (cfg.levels[i] <= cfg.levels[i - 1]) throw ConfigError("levels must be strictly increasing");
  if (multi_level && cfg.levels.size() < 2) throw ConfigError("a convergence study needs at least two levels");
  if (cfg.n_eigs < 1) throw ConfigError("--neigs must be >= 1");
  if (cfg.degree < 1 || cfg.degree > 3) throw ConfigError("--degree must be 1, 2 or 3");
  if (cfg.form == CCX_FORM_FEM1 && cfg.degree == 1) throw ConfigError("fem1 needs degree 2 or 3");
  if (!(cfg.tol_zero > 0.0)) throw ConfigError("--tol-zero must be positive");
  if (!(cfg.perturb >= 0.0 && cfg.perturb < 0.5)) throw ConfigError("--perturb must lie in [0, 0.5)");
  if (cfg.check_rate && cfg.check_rate->first > cfg.check_rate->second)
    throw ConfigError("--check-rate needs LO <= HI");
}

std::vector<double> exact_targets(const StudyConfig& cfg, std::size_t count) {
  if (!cfg.exact.empty()) {
    std::vector<double> v = cfg.exact;
    if (v.size() > count) v.resize(count);
    return v;
  }
  if (cfg.domain == DomainKind::LShape) return {};
  std::vector<double> v(count);
  check(ccx_exact_square_spectrum(count, v.data()));
  return v;
}

StudyReport cmd_eig(const StudyConfig& cfg) {
  validate(cfg, false);
  if (cfg.levels.size() != 1) throw ConfigError("eig runs a single level");
  return run_study(cfg);
}

StudyReport cmd_converge(const StudyConfig& cfg) {
  validate(cfg, true);
  if (exact_targets(cfg, cfg.n_eigs).empty())
    throw ConfigError("convergence needs exact targets: use the square or pass --exact");
  return run_study(cfg);
}

CompareReport cmd_compare(const StudyConfig& cfg) {
  validate(cfg, false);
  if (cfg.degree != 2 && cfg.degree != 3) throw ConfigError("compare needs degree 2 or 3");
  CompareReport rep;
  const ccx_solve_options o = solve_options(cfg);
  for (int n : cfg.levels) {
    TriPtr mesh = build_level(cfg, n);
    export_level(cfg, mesh.get(), n);
    const double h = mesh_h(mesh.get());
    SpecPtr mixed = run_solve(mesh.get(), cfg.degree, CCX_FORM_FEM2, o);
    SpecPtr primal = run_solve(mesh.get(), cfg.degree, CCX_FORM_PRIMAL, o);
    const std::size_t count = std::min(ccx_spectrum_size(mixed.get()), ccx_spectrum_size(primal.get()));
    for (std::size_t i = 0; i < count; ++i) {
      CompareRow r;
      r.level = n;
      r.h = h;
      r.index = i + 1;
      r.lambda_mixed = ccx_spectrum_value(mixed.get(), i);
      r.lambda_primal = ccx_spectrum_value(primal.get(), i);
      r.gap = std::abs(r.lambda_mixed - r.lambda_primal);
      rep.rows.push_back(r);
    }
  }
  if (cfg.max_error) {
    for (const CompareRow& r : rep.rows)
      if (r.gap >= *cfg.max_error)
        rep.failures.push_back("n=" + std::to_string(r.level) + " index " + std::to_string(r.index) + ": gap " +
                               fmt17(r.gap) + " >= " + fmt17(*cfg.max_error));
  }
  return rep;
}

AuditSummary cmd_audit(const StudyConfig& cfg) {
  validate(cfg, false);
  AuditSummary out;
  const int k = cfg.degree;
  if (k == 1 && cfg.domain != DomainKind::Square)
    throw ConfigError("degree 1 audits only run the spurious scan, which needs the square");

  if (k >= 2) {
    for (int n : cfg.levels) {
      TriPtr mesh = build_level(cfg, n);
      ccx_complex_report r;
      check(ccx_audit_complex(mesh.get(), k, &r));
      std::ostringstream os;
      os << "complex domain=" << domain_name(cfg.domain) << " n=" << n << " k=" << k << " vq=" << r.vq
         << " eq=" << r.eq << " q=" << r.q << " dim_sigma=" << r.dim_sigma << " dim_v=" << r.dim_v
         << " dim_wh=" << r.dim_wh << " dim_dg=" << r.dim_dg << " rank_div=" << r.rank_div
         << " nullity_b=" << r.nullity_b << " euler_residual=" << r.euler_residual << " euler_ok=" << r.euler_ok
         << " rank_ok=" << r.rank_ok << " nullity_ok=" << r.nullity_ok;
      out.lines.push_back(os.str());
      if (!(r.euler_ok && r.rank_ok && r.nullity_ok))
        out.failures.push_back("complex check failed at n=" + std::to_string(n));
    }

    const double quads[2][8] = {{0, 0, 1, 0, 1, 1, 0, 1}, {0, 0, 2, 0, 1.8, 1.1, 0.2, 0.9}};
    const char* names[2] = {"unit-square", "skewed"};
    for (int g = 0; g < 2; ++g) {
      ccx_wh_report r;
      check(ccx_audit_wh_local(quads[g], k, cfg.seed, 200, &r));
      std::ostringstream os;
      os << "wh_local quad=" << names[g] << " k=" << k << " samples=" << r.samples << " rank=" << r.rank
         << " expected_rank=" << r.expected_rank << " max_alternating_residual=" << fmt17(r.max_alternating_residual)
         << " checkerboard_distance=" << fmt17(r.checkerboard_distance) << " ok=" << r.ok;
      out.lines.push_back(os.str());
      if (!r.ok) out.failures.push_back(std::string("W_h local audit failed on ") + names[g]);
    }
  }

  if (cfg.domain == DomainKind::Square) {
    const ccx_solve_options o = solve_options(cfg);
    ccx_spurious* s = nullptr;
    check(ccx_spurious_scan(CCX_DOMAIN_SQUARE, k, cfg.spurious_levels.data(), cfg.spurious_levels.size(), cfg.n_eigs,
                            cfg.spurious_threshold, &o, &s));
    SpuriousPtr rep(s);
    for (std::size_t l = 0; l < ccx_spurious_level_count(rep.get()); ++l) {
      int n = 0;
      double h = 0.0;
      std::size_t count = 0;
      check(ccx_spurious_level(rep.get(), l, &n, &h, &count));
      std::ostringstream os;
      os << "spurious_level n=" << n << " h=" << fmt17(h) << " values=";
      for (std::size_t i = 0; i < count; ++i) os << (i ? "," : "") << fmt17(ccx_spurious_level_value(rep.get(), l, i));
      out.lines.push_back(os.str());
    }
    const std::size_t flags = ccx_spurious_flag_count(rep.get());
    std::ostringstream os;
    os << "spurious k=" << k << " threshold=" << fmt17(cfg.spurious_threshold) << " flags=" << flags << " indices=";
    for (std::size_t f = 0; f < flags; ++f) os << (f ? "," : "") << ccx_spurious_flag_index(rep.get(), f) + 1;
    out.lines.push_back(os.str());
    if (k == 1 && flags == 0) out.failures.push_back("degree 1 scan found no spurious eigenvalue");
    if (k >= 2 && flags > 0) out.failures.push_back("spurious eigenvalues flagged for degree " + std::to_string(k));
  }
  return out;
}

std::vector<std::string> cmd_mesh(const StudyConfig& cfg) {
  validate(cfg, false);
  std::vector<std::string> lines;
  for (int n : cfg.levels) {
    TriPtr mesh = build_level(cfg, n);
    export_level(cfg, mesh.get(), n);
    ccx_mesh_stats st;
    check(ccx_trimesh_stats(mesh.get(), &st));
    std::ostringstream os;
    os << "mesh domain=" << domain_name(cfg.domain) << " n=" << n << " h=" << fmt17(st.h)
       << " h_min=" << fmt17(st.h_min) << " shape_regularity=" << fmt17(st.shape_regularity)
       << " vertices=" << st.num_vertices << " edges=" << st.num_edges << " triangles=" << st.num_triangles
       << " quads=" << st.num_quads << " quad_vertices=" << st.num_quad_vertices
       << " quad_edges=" << st.num_quad_edges << " euler=" << st.euler_check;
    lines.push_back(os.str());
  }
  return lines;
}

void write_csv(std::ostream& os, const StudyReport& rep) {
  os << "level,h,index,lambda_h,exact,abs_error,rate\n";
  for (const StudyRow& r : rep.rows)
    os << r.level << ',' << fmt17(r.h) << ',' << r.index << ',' << fmt17(r.lambda_h) << ',' << opt17(r.exact) << ','
       << opt17(r.abs_error) << ',' << opt17(r.rate) << '\n';
}

void write_csv(std::ostream& os, const CompareReport& rep) {
  os << "level,h,index,lambda_mixed,lambda_primal,gap\n";
  for (const CompareRow& r : rep.rows)
    os << r.level << ',' << fmt17(r.h) << ',' << r.index << ',' << fmt17(r.lambda_mixed) << ','
       << fmt17(r.lambda_primal) << ',' << fmt17(r.gap) << '\n';
}

void print_table(std::ostream& os, const StudyReport& rep) {
  char buf[256];
  for (const LevelInfo& lv : rep.levels) {
    std::snprintf(buf, sizeof buf, "n=%d  h=%.6g  zeros=%lld  time=%.3fs\n", lv.level, lv.h, lv.zero_count, lv.seconds);
    os << buf;
    os << "   i  lambda_h                 exact   abs_error                rate     cluster\n";
    for (const StudyRow& r : rep.rows) {
      if (r.level != lv.level) continue;
      std::snprintf(buf, sizeof buf, "  %2zu  %-23.16g  %-6s  %-23s  %-7s  %d\n", r.index, r.lambda_h,
                    r.exact ? fmt17(*r.exact).c_str() : "-", r.abs_error ? fmt17(*r.abs_error).c_str() : "-",
                    r.rate ? std::to_string(*r.rate).substr(0, 6).c_str() : "-", r.cluster);
      os << buf;
    }
  }
}

void print_table(std::ostream& os, const CompareReport& rep) {
  char buf[256];
  int last = -1;
  for (const CompareRow& r : rep.rows) {
    if (r.level != last) {
      std::snprintf(buf, sizeof buf, "n=%d  h=%.6g\n   i  mixed                    primal                   gap\n",
                    r.level, r.h);
      os << buf;
      last = r.level;
    }
    std::snprintf(buf, sizeof buf, "  %2zu  %-23.16g  %-23.16g  %.3e\n", r.index, r.lambda_mixed, r.lambda_primal,
                  r.gap);
    os << buf;
  }
}

}  // namespace ccx::cli
