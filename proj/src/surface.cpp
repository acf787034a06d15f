#include "surface.hpp"

#include "errors.hpp"
#include "threads.hpp"

#include <cmath>

namespace crpt::surface {

using homotopy::deriv_segment;
using homotopy::eval_segment;
using kernel::Mat2;
using kernel::norm2;

namespace {

constexpr double kPi = 3.14159265358979323846;

double g_exp(double v) { return (v <= 0.0) ? 0.0 : std::exp(-1.0 / v); }
double g_exp_deriv(double v) { return (v <= 0.0) ? 0.0 : std::exp(-1.0 / v) / (v * v); }

} // namespace

double smooth_clock(double v) {
  if (v <= 0.0) return 0.0;
  if (v >= 1.0) return 1.0;
  double a = g_exp(v), b = g_exp(1.0 - v);
  return a / (a + b);
}

double smooth_clock_deriv(double v) {
  if (v <= 0.0 || v >= 1.0) return 0.0;
  double a = g_exp(v), b = g_exp(1.0 - v);
  double ap = g_exp_deriv(v), bp = -g_exp_deriv(1.0 - v);
  double s = a + b;
  return (ap * s - a * (ap + bp)) / (s * s);
}

double flatten_sigma(double t) { return smooth_clock((t - 0.1) / 0.8); }
double flatten_sigma_deriv(double t) { return smooth_clock_deriv((t - 0.1) / 0.8) / 0.8; }

SurfaceSpec flatten(SurfaceSpec spec) {
  if (spec.path.segments.empty())
    throw_invalid("empty_path", "flatten: path has no segments");
  if (!spec.path.certificate.pass)
    throw_verify("uncertified_path", "flatten: path certificate must pass first");
  // segment-local sampling traverses the identical value set, so this is an
  // exact re-verification rather than a re-estimate
  homotopy::Certificate re = homotopy::verify_nondegenerate(
      spec.path, spec.path.certificate.samples, spec.path.certificate.margin);
  spec.path.certificate = re;
  if (!re.pass) throw_verify("uncertified_path", "flatten: certificate failed re-verification");
  spec.flattened = true;
  return spec;
}

MatrixPair spec_path_eval(const SurfaceSpec& spec, double t) {
  if (t < 0.0 || t > 1.0) throw_invalid("t_out_of_range", "spec_path_eval: t outside [0,1]");
  double tau = spec.flattened ? flatten_sigma(t) : t;
  if (spec.reverse) tau = 1.0 - tau;
  const auto& segs = spec.path.segments;
  size_t k = std::min(static_cast<size_t>(tau * segs.size()), segs.size() - 1);
  double uraw = tau * segs.size() - static_cast<double>(k);
  double u = spec.flattened ? smooth_clock(uraw) : uraw;
  return eval_segment(segs[k], u);
}

PairDeriv spec_path_deriv(const SurfaceSpec& spec, double t) {
  if (t < 0.0 || t > 1.0) throw_invalid("t_out_of_range", "spec_path_deriv: t outside [0,1]");
  double tau = spec.flattened ? flatten_sigma(t) : t;
  double dtau = spec.flattened ? flatten_sigma_deriv(t) : 1.0;
  if (spec.reverse) {
    tau = 1.0 - tau;
    dtau = -dtau;
  }
  const auto& segs = spec.path.segments;
  size_t k = std::min(static_cast<size_t>(tau * segs.size()), segs.size() - 1);
  double uraw = tau * segs.size() - static_cast<double>(k);
  double u = spec.flattened ? smooth_clock(uraw) : uraw;
  double du = spec.flattened ? smooth_clock_deriv(uraw) : 1.0;
  PairDeriv d = deriv_segment(segs[k], u);
  cx scale(du * static_cast<double>(segs.size()) * dtau);
  return {scale * d.da, scale * d.db};
}

cx surface_eval(const SurfaceSpec& spec, const Vec2& z) {
  if (!spec.flattened) throw_invalid("not_flattened", "surface_eval: spec must be flattened");
  double r = norm2(z);
  double s = 1.0;
  if (r < spec.epsilon) s = std::pow(r / spec.epsilon, 1.0 / spec.n);
  MatrixPair p = spec_path_eval(spec, s);
  Vec2 az = p.a * z;
  Vec2 bz = p.b * z;
  cx herm = std::conj(z[0]) * az[0] + std::conj(z[1]) * az[1];
  cx quad = z[0] * bz[0] + z[1] * bz[1];
  return herm + quad.real();
}

namespace {

Vec2 sphere_point(double u, double t1, double t2) {
  return {std::cos(u) * std::exp(cx(0, t1)), std::sin(u) * std::exp(cx(0, t2))};
}

struct SGridRow {
  MatrixPair p;
  PairDeriv d;
};

std::vector<SGridRow> sample_s_grid(const SurfaceSpec& spec, int s_count) {
  std::vector<SGridRow> rows(s_count);
  for (int j = 0; j < s_count; ++j) {
    double s = static_cast<double>(j + 1) / s_count;
    rows[j].p = spec_path_eval(spec, s);
    rows[j].d = spec_path_deriv(spec, s);
  }
  return rows;
}

double kernel_norm(const MatrixPair& p, const Vec2& zp) {
  Vec2 az = p.a * zp;
  Vec2 bzc = kernel::conjugate(p.b) * Vec2{std::conj(zp[0]), std::conj(zp[1])};
  return norm2({az[0] + bzc[0], az[1] + bzc[1]});
}

double radial_scalar(const MatrixPair&, const PairDeriv& d, const Vec2& zp) {
  Vec2 dz = d.da * zp;
  cx herm = std::conj(zp[0]) * dz[0] + std::conj(zp[1]) * dz[1];
  Vec2 bz = d.db * zp;
  cx quad = zp[0] * bz[0] + zp[1] * bz[1];
  return (herm + quad.real()).real();
}

} // namespace

Bounds bounds(const SurfaceSpec& spec, const GridSpec& grid) {
  if (!spec.flattened) throw_invalid("not_flattened", "bounds: spec must be flattened");
  if (!spec.path.certificate.pass)
    throw_verify("uncertified_path", "bounds: path certificate must pass");
  auto rows = sample_s_grid(spec, grid.s_count);

  std::vector<double> dmin(grid.s_count, std::numeric_limits<double>::infinity());
  std::vector<double> mmax(grid.s_count, 0.0);
  parallel_for(rows.size(), grid.threads, [&](size_t j) {
    const auto& row = rows[j];
    double dm = std::numeric_limits<double>::infinity();
    double mm = 0.0;
    for (int iu = 0; iu < grid.sphere_u; ++iu) {
      double u = 0.5 * kPi * iu / (grid.sphere_u - 1);
      for (int i1 = 0; i1 < grid.sphere_t1; ++i1) {
        double t1 = 2.0 * kPi * i1 / grid.sphere_t1;
        for (int i2 = 0; i2 < grid.sphere_t2; ++i2) {
          double t2 = 2.0 * kPi * i2 / grid.sphere_t2;
          Vec2 zp = sphere_point(u, t1, t2);
          dm = std::min(dm, kernel_norm(row.p, zp));
          mm = std::max(mm, std::abs(radial_scalar(row.p, row.d, zp)));
        }
      }
    }
    dmin[j] = dm;
    mmax[j] = mm;
  });
  Bounds out;
  out.delta = std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid.s_count; ++j) {
    out.delta = std::min(out.delta, dmin[j]);
    out.m = std::max(out.m, mmax[j]);
  }
  if (out.delta < 1e-9)
    throw error(errc::degenerate, "delta_zero",
                "bounds: kernel vector on the grid (degenerate pair along the path)");
  out.n_required = static_cast<int>(std::floor(out.m / (2.0 * out.delta))) + 1;
  return out;
}

NoNewReport verify_no_new_complex_points(const SurfaceSpec& spec, const GridSpec& grid,
                                         double tol) {
  if (!spec.flattened)
    throw_invalid("not_flattened", "verify_no_new_complex_points: spec must be flattened");
  Bounds bd = bounds(spec, grid);
  NoNewReport rep;
  rep.delta = bd.delta;
  rep.m = bd.m;
  rep.n_required = bd.n_required;
  rep.n_used = spec.n;

  auto rows = sample_s_grid(spec, grid.s_count);
  struct Worst {
    double v = std::numeric_limits<double>::infinity();
    double s = 0;
    Vec2 zp{};
    double step = 0; // largest adjacent-sample variation seen in this row
  };
  std::vector<Worst> worst(grid.s_count);
  parallel_for(rows.size(), grid.threads, [&](size_t j) {
    double s = static_cast<double>(j + 1) / grid.s_count;
    const auto& row = rows[j];
    Worst w;
    for (int iu = 0; iu < grid.sphere_u; ++iu) {
      double u = 0.5 * kPi * iu / (grid.sphere_u - 1);
      for (int i1 = 0; i1 < grid.sphere_t1; ++i1) {
        double t1 = 2.0 * kPi * i1 / grid.sphere_t1;
        double prev = -1.0;
        for (int i2 = 0; i2 < grid.sphere_t2; ++i2) {
          double t2 = 2.0 * kPi * i2 / grid.sphere_t2;
          Vec2 zp = sphere_point(u, t1, t2);
          Vec2 az = row.p.a * zp;
          Vec2 bzc = kernel::conjugate(row.p.b) * Vec2{std::conj(zp[0]), std::conj(zp[1])};
          double corr = s / (2.0 * spec.n) * radial_scalar(row.p, row.d, zp);
          Vec2 e = {az[0] + bzc[0] + corr * zp[0], az[1] + bzc[1] + corr * zp[1]};
          double v = norm2(e);
          if (prev >= 0.0) w.step = std::max(w.step, std::abs(v - prev));
          prev = v;
          if (v < w.v) {
            w.v = v;
            w.s = s;
            w.zp = zp;
          }
        }
      }
    }
    worst[j] = w;
  });
  Worst global;
  double hint = 0;
  for (size_t j = 0; j < worst.size(); ++j) {
    hint = std::max(hint, worst[j].step);
    if (j > 0) hint = std::max(hint, std::abs(worst[j].v - worst[j - 1].v));
    if (worst[j].v < global.v) global = worst[j];
  }
  rep.min_inequality = global.v;
  rep.worst_s = global.s;
  rep.worst_zprime = global.zp;
  rep.pass = global.v > tol;
  rep.lipschitz_hint = hint;

  // Wirtinger finite-difference oracle at random interior points
  Rng rng(grid.seed);
  double fd_err = 0.0;
  auto f = [&](const Vec2& z) { return surface_eval(spec, z); };
  for (int k = 0; k < grid.fd_checks; ++k) {
    // draw |z| at O(epsilon) so the comparison runs at meaningful magnitudes
    double r = spec.epsilon * (0.3 + 0.6 * rng.uniform());
    double s = std::pow(r / spec.epsilon, 1.0 / spec.n);
    double u = 0.5 * kPi * rng.uniform();
    double t1 = 2.0 * kPi * rng.uniform();
    double t2 = 2.0 * kPi * rng.uniform();
    Vec2 zp = sphere_point(u, t1, t2);
    Vec2 z = {r * zp[0], r * zp[1]};
    Vec2 fd = wirtinger_gradient(f, z, 1e-5);
    MatrixPair p = spec_path_eval(spec, s);
    PairDeriv d = spec_path_deriv(spec, s);
    Vec2 az = p.a * zp;
    Vec2 bzc = kernel::conjugate(p.b) * Vec2{std::conj(zp[0]), std::conj(zp[1])};
    double corr = s / (2.0 * spec.n) * radial_scalar(p, d, zp);
    Vec2 analytic = {r * (az[0] + bzc[0] + corr * zp[0]), r * (az[1] + bzc[1] + corr * zp[1])};
    fd_err = std::max(fd_err, norm2({fd[0] - analytic[0], fd[1] - analytic[1]}));
  }
  rep.fd_max_err = fd_err;
  return rep;
}

Vec2 wirtinger_gradient(const std::function<cx(const Vec2&)>& f, const Vec2& z, double h) {
  if (h <= 0) throw_invalid("bad_h", "wirtinger_gradient: h must be positive");
  Vec2 out;
  for (int j = 0; j < 2; ++j) {
    Vec2 zp = z, zm = z;
    zp[j] += h;
    zm[j] -= h;
    cx dx = (f(zp) - f(zm)) / (2.0 * h);
    Vec2 zpi = z, zmi = z;
    zpi[j] += cx(0, h);
    zmi[j] -= cx(0, h);
    cx dy = (f(zpi) - f(zmi)) / (2.0 * h);
    out[j] = 0.5 * (dx + cx(0, 1) * dy);
  }
  return out;
}

} // namespace crpt::surface
