#include "selftest.hpp"

#include "canon.hpp"
#include "errors.hpp"
#include "homotopy.hpp"
#include "jsonio.hpp"
#include "levi.hpp"
#include "pairs.hpp"
#include "surface.hpp"

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>

namespace crpt::selftest {

using namespace crpt;
using kernel::cx;
using kernel::Mat2;
using kernel::norm_fro;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

MatrixPair random_nondegenerate(Rng& rng, double floor_det = 0.0) {
  for (;;) {
    MatrixPair p = random_pair(rng, 1.0);
    SignClass sc = sign_class(p);
    if (sc.tag == SignTag::Degenerate) continue;
    if (std::abs(sc.det4_normalized) <= floor_det) continue;
    return p;
  }
}

// 1. sign classifier vs the exact cofactor determinant, Im(det4) bound
CriterionResult crit1(const Options& o) {
  CriterionResult r{1, "sign classifier agrees with the cofactor determinant", true, 0, ""};
  Rng rng(o.seed + 1);
  int n = 10000 / o.reduction;
  double worst_im = 0;
  for (int k = 0; k < n; ++k) {
    MatrixPair p = random_pair(rng, 1.0);
    cx raw = kernel::det(kernel::block4(p.a, p.b));
    double scale = 1.0 + norm_fro(p.a) + norm_fro(p.b);
    double s4 = scale * scale * scale * scale;
    worst_im = std::max(worst_im, std::abs(raw.imag()) / s4);
    if (std::abs(raw.imag()) >= 1e-10 * s4) r.pass = false;
    SignClass sc = sign_class(p);
    switch (sc.tag) {
      case SignTag::Elliptic:
        if (!(raw.real() > 0)) r.pass = false;
        break;
      case SignTag::Hyperbolic:
        if (!(raw.real() < 0)) r.pass = false;
        break;
      case SignTag::Degenerate:
        // threshold cases: the normalized magnitude must really be tiny
        if (std::abs(sc.det4_normalized) > 1e-10) r.pass = false;
        break;
    }
  }
  r.detail = fmt("%d pairs, max |Im|/scale = %.3g", n, worst_im);
  return r;
}

// 2. printed det1/det2 polynomials vs structural det4
CriterionResult crit2(const Options& o) {
  CriterionResult r{2, "printed determinant polynomials match det4", true, 0, ""};
  Rng rng(o.seed + 2);
  int n = 10000 / o.reduction;
  double worst = 0;
  for (int k = 0; k < n; ++k) {
    double a = rng.normal(), d = rng.normal();
    cx b = rng.complex_normal();
    double phi = kPi * rng.uniform();
    MatrixPair p{Mat2::diag(cx(1), std::exp(cx(0, phi))), {{cx(a), b, b, cx(d)}}};
    double lhs = det4(p);
    double rhs = homotopy::det1_formula(a, d, b, phi);
    double rel = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
    worst = std::max(worst, rel);
    if (rel >= 1e-9) r.pass = false;
  }
  for (int k = 0; k < n; ++k) {
    double tau = 0.05 + 0.9 * rng.uniform();
    cx a = rng.complex_normal(), b = rng.complex_normal();
    MatrixPair p{{{cx(0), cx(1), cx(tau), cx(0)}}, {{a, b, b, std::conj(a)}}};
    double lhs = det4(p);
    double rhs = homotopy::det2_formula(tau, a, b);
    double rel = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
    worst = std::max(worst, rel);
    if (rel >= 1e-9) r.pass = false;
  }
  r.detail = fmt("2 x %d draws, worst relative %.3g", n, worst);
  return r;
}

// 3. sign invariance and |det P|^4 scaling under the group action
CriterionResult crit3(const Options& o) {
  CriterionResult r{3, "group invariance of the sign and the det scaling law", true, 0, ""};
  Rng rng(o.seed + 3);
  int npairs = 100 / std::max(1, o.reduction / 10);
  int ngroup = 1000 / o.reduction;
  double worst = 0;
  for (int i = 0; i < npairs; ++i) {
    MatrixPair p = random_nondegenerate(rng, 1e-6);
    SignClass sc0 = sign_class(p);
    double d0 = det4(p);
    for (int j = 0; j < ngroup; ++j) {
      GroupElement g = random_group_element(rng);
      MatrixPair q = act(g, p);
      if (sign_class(q).tag != sc0.tag) r.pass = false;
      double factor = std::pow(std::abs(kernel::det(g.p)), 4.0);
      double rel = std::abs(det4(q) - factor * d0) / std::max(1.0, std::abs(factor * d0));
      worst = std::max(worst, rel);
      if (rel >= 1e-8) r.pass = false;
    }
  }
  r.detail = fmt("%d pairs x %d elements, worst scaling residual %.3g", npairs, ngroup, worst);
  return r;
}

// 4. normal-form witness soundness and theta/mu invariance
CriterionResult crit4(const Options& o) {
  CriterionResult r{4, "normal-form witness soundness and invariant stability", true, 0, ""};
  Rng rng(o.seed + 4);
  int n = 1000 / o.reduction;
  int done = 0;
  double worst_rec = 0, worst_inv = 0;
  while (done < n) {
    MatrixPair p = random_pair(rng, 1.0);
    canon::NormalForm nf;
    try {
      nf = canon::normal_form(p);
    } catch (const error&) {
      continue;
    }
    ++done;
    MatrixPair rec = act(nf.witness, p);
    double scale = std::max(1.0, norm_fro(rec.a) + norm_fro(rec.b));
    double resid =
        (norm_fro(rec.a - nf.canonical_a) + norm_fro(rec.b - nf.b_reduced)) / scale;
    worst_rec = std::max(worst_rec, resid);
    if (resid >= 1e-8) r.pass = false;

    GroupElement g = random_group_element(rng);
    MatrixPair q = act(g, p);
    try {
      canon::CosquareClass c0 = canon::classify_cosquare(p.a);
      canon::CosquareClass c1 = canon::classify_cosquare(q.a);
      if (c0.tag != c1.tag) {
        r.pass = false;
      } else if (c0.tag == canon::CosquareClass::Tag::TypeI) {
        worst_inv = std::max(worst_inv, std::abs(c0.theta - c1.theta));
        if (std::abs(c0.theta - c1.theta) >= 1e-7) r.pass = false;
      } else if (c0.tag == canon::CosquareClass::Tag::TypeIII) {
        worst_inv = std::max(worst_inv, std::abs(c0.mu - c1.mu));
        if (std::abs(c0.mu - c1.mu) >= 1e-7) r.pass = false;
      }
    } catch (const error&) {
      // conjugation may push a borderline class across the tol band; skip
    }
  }
  r.detail = fmt("%d generic pairs, worst witness %.3g, worst invariant drift %.3g", n,
                 worst_rec, worst_inv);
  return r;
}

// 5. homotopy certification at N = 512 with margin 1e-6, bump formulas, eta = 0
CriterionResult crit5(const Options& o) {
  CriterionResult r{5, "certified homotopies to the model pairs", true, 0, ""};
  Rng rng(o.seed + 5);
  homotopy::ConnectOptions copts;
  copts.samples = 512;
  copts.margin = 1e-6;
  copts.threads = o.threads;
  int n = 1000 / o.reduction;
  int ne = 0, nh = 0;
  double min_cert = std::numeric_limits<double>::infinity();
  double worst_end = 0;
  for (int k = 0; k < n; ++k) {
    MatrixPair p = random_nondegenerate(rng);
    copts.seed = o.seed + 100000 + static_cast<std::uint64_t>(k);
    SignClass sc = sign_class(p);
    try {
      homotopy::HomotopyPath path = homotopy::connect_to_model(p, copts);
      if (!path.certificate.pass || path.certificate.min_abs_det4 <= 1e-6 ||
          path.certificate.min_abs_det4_normalized <= 1e-6)
        r.pass = false;
      min_cert = std::min(min_cert, path.certificate.min_abs_det4);
      double scale = 1.0 + norm_fro(p.a) + norm_fro(p.b);
      MatrixPair p0 = homotopy::eval_path(path, 0.0);
      MatrixPair p1 = homotopy::eval_path(path, 1.0);
      MatrixPair tgt = homotopy::model_pair(sc);
      double e0 = (norm_fro(p0.a - p.a) + norm_fro(p0.b - p.b)) / scale;
      double e1 = norm_fro(p1.a - tgt.a) + norm_fro(p1.b - tgt.b);
      worst_end = std::max({worst_end, e0, e1});
      if (e0 >= 1e-9 || e1 >= 1e-9) r.pass = false;
      (sc.tag == SignTag::Elliptic ? ne : nh)++;
    } catch (const error&) {
      r.pass = false;
    }
  }

  // printed bump-segment determinant laws
  homotopy::Segment eli = homotopy::catalog_segment("eli3-to-eli2-bump", {{"eta", 0.5}});
  homotopy::Segment hyp = homotopy::catalog_segment("hyp-final-bump", {{"eta", 0.5}});
  for (int j = 0; j <= 2000; ++j) {
    double u = static_cast<double>(j) / 2000;
    double x = homotopy::bump(u, 0.5);
    double de = det4(homotopy::eval_segment(eli, u));
    double fe = (1 - 2 * u) * (1 - 2 * u) + x * x * (x * x + 2 * u * u);
    double dh = det4(homotopy::eval_segment(hyp, u));
    double fh = -((1 - 2 * u) * (1 - 2 * u) + u * u * x * x);
    if (std::abs(de - fe) >= 1e-9 || std::abs(dh - fh) >= 1e-9) r.pass = false;
  }

  // degenerate bump (eta = 0) rejected at t = 1/2
  for (const char* nm : {"eli3-to-eli2-bump", "hyp-final-bump"}) {
    homotopy::HomotopyPath bad{{homotopy::catalog_segment(nm, {{"eta", 0.0}})}, {}};
    homotopy::Certificate c = homotopy::verify_nondegenerate(bad, 513, 1e-6, o.threads);
    if (c.pass) r.pass = false;
  }

  r.detail = fmt("%d pairs (%d elliptic, %d hyperbolic), min certificate %.3g, worst endpoint %.3g",
                 n, ne, nh, min_cert, worst_end);
  return r;
}

// 6. Theorem-1 bounds and no-new-complex-points verification
CriterionResult crit6(const Options& o) {
  CriterionResult r{6, "radial interpolation creates no new complex points", true, 0, ""};
  surface::GridSpec grid;
  grid.threads = o.threads;
  grid.seed = o.seed + 6;
  if (o.reduction > 1) {
    grid.s_count = 16;
    grid.sphere_u = 9;
    grid.sphere_t1 = 8;
    grid.sphere_t2 = 8;
  }

  // exact model bounds
  for (SignTag tag : {SignTag::Elliptic, SignTag::Hyperbolic}) {
    homotopy::HomotopyPath path{{homotopy::constant_segment(homotopy::model_pair(tag))}, {}};
    path.certificate = homotopy::verify_nondegenerate(path, 64, 1e-6, o.threads);
    surface::SurfaceSpec sp;
    sp.path = path;
    sp = surface::flatten(sp);
    surface::Bounds b = surface::bounds(sp, grid);
    if (std::abs(b.delta - 1.0) >= 1e-12 || std::abs(b.m) >= 1e-12 || b.n_required != 1)
      r.pass = false;
  }

  // certified nontrivial paths at n = n_required
  Rng rng(o.seed + 66);
  homotopy::ConnectOptions copts;
  copts.samples = 512;
  copts.threads = o.threads;
  int npaths = std::max(2, 10 / o.reduction);
  double worst_fd = 0;
  double worst_min = std::numeric_limits<double>::infinity();
  for (int k = 0; k < npaths; ++k) {
    MatrixPair p = random_nondegenerate(rng, 1e-4);
    copts.seed = o.seed + 200000 + static_cast<std::uint64_t>(k);
    try {
      surface::SurfaceSpec sp;
      sp.path = homotopy::connect_to_model(p, copts);
      sp = surface::flatten(sp);
      surface::Bounds b = surface::bounds(sp, grid);
      sp.n = b.n_required;
      surface::NoNewReport rep = surface::verify_no_new_complex_points(sp, grid, 1e-9);
      worst_fd = std::max(worst_fd, rep.fd_max_err);
      worst_min = std::min(worst_min, rep.min_inequality);
      if (!rep.pass || rep.fd_max_err >= 1e-6) r.pass = false;
    } catch (const error&) {
      r.pass = false;
    }
  }
  r.detail = fmt("%d certified paths, min inequality %.3g, worst FD error %.3g", npaths,
                 worst_min, worst_fd);
  return r;
}

// 7. Levi forms: FD agreement, positivity scans, minor identity
CriterionResult crit7(const Options& o) {
  CriterionResult r{7, "Levi forms: oracle agreement, positivity scans, minor identity", true, 0, ""};
  Rng rng(o.seed + 7);
  int n = 1000 / o.reduction;
  double worst_fd = 0;
  for (levi::ModelKind kind : {levi::ModelKind::Elliptic, levi::ModelKind::Hyperbolic}) {
    for (int k = 0; k < n; ++k) {
      kernel::Vec3 q;
      double r2;
      do {
        r2 = 0;
        for (int j = 0; j < 3; ++j) {
          q[j] = 0.1 * cx(2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
          r2 += std::norm(q[j]);
        }
      } while (r2 > 0.01);
      kernel::Mat3 a = levi::levi_closed_form(kind, q);
      kernel::Mat3 b = levi::levi_fd(kind, q, 1e-4);
      double diff = 0;
      for (int i = 0; i < 9; ++i) diff = std::max(diff, std::abs(a.m[i] - b.m[i]));
      worst_fd = std::max(worst_fd, diff);
      if (diff >= 1e-6) r.pass = false;
    }
  }

  levi::ScanOptions sopts;
  sopts.radius = 0.05;
  sopts.gridsize = 117649 / o.reduction; // 7^6-equivalent sampling
  sopts.seed = o.seed;
  sopts.threads = o.threads;
  levi::LeviReport eli = levi::positivity_scan(levi::ModelKind::Elliptic, sopts);
  if (!eli.violations.empty() || eli.positive_definite != eli.points_scanned) r.pass = false;
  levi::LeviReport hyp = levi::positivity_scan(levi::ModelKind::Hyperbolic, sopts);
  if (!hyp.violations.empty() || hyp.min_trace <= 0) r.pass = false;

  int nm = 10000 / o.reduction;
  double worst_minor = 0;
  for (int k = 0; k < nm; ++k) {
    cx z2 = 0.99 * cx(2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
    if (std::abs(z2) >= 1.0) continue;
    cx u = cx(rng.normal(), rng.normal());
    cx z1 = cx(rng.normal(), rng.normal());
    cx w = u + std::norm(z1) + std::conj(z2) * std::conj(z2);
    worst_minor = std::max(worst_minor, levi::minor_identity_residual({z1, z2, w}));
  }
  if (worst_minor >= 1e-10) r.pass = false;
  r.detail = fmt("FD worst %.3g, scans %d+%d points clean, minor residual %.3g", worst_fd,
                 eli.points_scanned, hyp.points_scanned, worst_minor);
  return r;
}

// 8. growth-bound estimates
CriterionResult crit8(const Options& o) {
  CriterionResult r{8, "growth bounds c dist^2 <= f <= C dist^2", true, 0, ""};
  int n = 5000 / o.reduction;
  double cmin = std::numeric_limits<double>::infinity(), cmax = 0;
  for (levi::ModelKind kind : {levi::ModelKind::Elliptic, levi::ModelKind::Hyperbolic}) {
    levi::GrowthBounds gb = levi::growth_bounds(kind, 0.05, n, o.seed, o.threads);
    cmin = std::min(cmin, gb.c_est);
    cmax = std::max(cmax, gb.C_est);
    if (!(gb.c_est > 0.0) || !(gb.C_est < 1e3) || gb.points_used == 0) r.pass = false;
  }
  r.detail = fmt("%d points/model, c_est %.3g, C_est %.3g", n, cmin, cmax);
  return r;
}

} // namespace

CriterionResult run_criterion(int id, const Options& opts) {
  using Fn = CriterionResult (*)(const Options&);
  static constexpr Fn table[8] = {crit1, crit2, crit3, crit4, crit5, crit6, crit7, crit8};
  if (id < 1 || id > 8) throw_invalid("bad_criterion", "selftest: criterion ids are 1..8");
  auto t0 = std::chrono::steady_clock::now();
  CriterionResult r = table[id - 1](opts);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<CriterionResult> run_all(const Options& opts) {
  std::vector<CriterionResult> rs;
  for (int id = 1; id <= 8; ++id) rs.push_back(run_criterion(id, opts));
  return rs;
}

std::string summary_json(const std::vector<CriterionResult>& rs) {
  std::string s = "{\"criteria\":[";
  bool all = true;
  for (size_t i = 0; i < rs.size(); ++i) {
    if (i) s += ",";
    s += "{\"id\":" + std::to_string(rs[i].id);
    s += ",\"name\":\"" + rs[i].name + "\"";
    s += ",\"pass\":";
    s += rs[i].pass ? "true" : "false";
    // wall-clock timing stays out of the JSON so repeated runs are byte-identical
    s += ",\"detail\":\"" + rs[i].detail + "\"}";
    all = all && rs[i].pass;
  }
  s += "],\"all_pass\":";
  s += all ? "true" : "false";
  s += "}";
  return s;
}

} // namespace crpt::selftest
