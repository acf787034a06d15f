#include "levi.hpp"

#include "errors.hpp"
#include "threads.hpp"

#include <algorithm>
#include <cmath>

namespace crpt::levi {

using kernel::herm_eigs3;
using kernel::norm_fro;

namespace {

cx graph_value(ModelKind kind, cx z1, cx z2) {
  if (kind == ModelKind::Elliptic) return std::conj(z1) * std::conj(z1) + std::conj(z2) * std::conj(z2);
  return std::norm(z1) + std::conj(z2) * std::conj(z2);
}

double weight(ModelKind kind, cx z1, cx z2) {
  if (kind == ModelKind::Elliptic) return 1.0 + std::norm(z1) + std::norm(z2);
  return 1.0 + std::norm(z2);
}

} // namespace

double model_f(ModelKind kind, const Vec3& q) {
  cx u = q[2] - graph_value(kind, q[0], q[1]);
  return weight(kind, q[0], q[1]) * std::norm(u);
}

Mat3 levi_closed_form(ModelKind kind, const Vec3& q) {
  cx z1 = q[0], z2 = q[1];
  cx u = q[2] - graph_value(kind, z1, z2);
  cx ub = std::conj(u);
  Mat3 l;
  if (kind == ModelKind::Elliptic) {
    double g = 1.0 + std::norm(z1) + std::norm(z2);
    l(0, 0) = 4.0 * std::norm(z1) * g + std::norm(u) - 2.0 * (z1 * z1 * u + std::conj(z1 * z1) * ub);
    l(0, 1) = 4.0 * z1 * std::conj(z2) * g - 2.0 * (z1 * z2 * u + std::conj(z1 * z2) * ub);
    l(0, 2) = std::conj(z1) * u;
    l(1, 1) = 4.0 * std::norm(z2) * g + std::norm(u) - 2.0 * (z2 * z2 * u + std::conj(z2 * z2) * ub);
    l(1, 2) = std::conj(z2) * u;
    l(2, 2) = g;
  } else {
    double g = 1.0 + std::norm(z2);
    l(0, 0) = (2.0 * std::norm(z1) - (u + ub)) * g;
    l(0, 1) = 2.0 * std::conj(z1) * std::conj(z2) * g - std::conj(z1) * z2 * (u + ub);
    l(0, 2) = -std::conj(z1) * g;
    l(1, 1) = std::norm(u) - 2.0 * (z2 * z2 * u + std::conj(z2 * z2) * ub) + 4.0 * std::norm(z2) * g;
    l(1, 2) = std::conj(z2) * u;
    l(2, 2) = g;
  }
  l(1, 0) = std::conj(l(0, 1));
  l(2, 0) = std::conj(l(0, 2));
  l(2, 1) = std::conj(l(1, 2));
  return l;
}

Mat3 levi_fd(ModelKind kind, const Vec3& q, double h) {
  return levi_fd_of([&](const Vec3& p) { return model_f(kind, p); }, q, h);
}

Mat3 levi_fd_of(const std::function<double(const Vec3&)>& f, const Vec3& q, double h) {
  if (h <= 0) throw_invalid("bad_h", "levi_fd: h must be positive");
  auto shift = [&](int j, cx step) {
    Vec3 p = q;
    p[j] += step;
    return p;
  };
  Mat3 l;
  double f0 = f(q);
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      // mixed real second difference in directions (vj at j, vk at k)
      auto second = [&](cx vj, cx vk) {
        if (j == k && vj == vk) {
          return (f(shift(j, vj * h)) - 2.0 * f0 + f(shift(j, -vj * h))) / (h * h);
        }
        Vec3 pp = shift(j, vj * h); pp[k] += vk * h;
        Vec3 pm = shift(j, vj * h); pm[k] -= vk * h;
        Vec3 mp = shift(j, -vj * h); mp[k] += vk * h;
        Vec3 mm = shift(j, -vj * h); mm[k] -= vk * h;
        return (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
      };
      double fxx = second(1, 1);
      double fyy = second(cx(0, 1), cx(0, 1));
      if (j == k) {
        // the antisymmetric part vanishes for real f
        l(j, k) = cx(0.25 * (fxx + fyy), 0.0);
      } else {
        double fxy = second(1, cx(0, 1));
        double fyx = second(cx(0, 1), 1);
        l(j, k) = 0.25 * cx(fxx + fyy, fxy - fyx);
      }
    }
  }
  // symmetrize against roundoff
  for (int j = 0; j < 3; ++j)
    for (int k = j + 1; k < 3; ++k) {
      cx avg = 0.5 * (l(j, k) + std::conj(l(k, j)));
      l(j, k) = avg;
      l(k, j) = std::conj(avg);
    }
  return l;
}

bool sylvester_pd(const Mat3& m, double tol) {
  double scale = norm_fro(m);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > 1e-8 * (1.0 + scale))
        throw_invalid("non_hermitian", "sylvester_pd: input is not Hermitian");
  double m1 = m(0, 0).real();
  double m2 = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
  double m3 = kernel::det(m).real();
  return m1 > tol && m2 > tol && m3 > tol;
}

namespace {

double radical_inverse(std::uint64_t idx, int base) {
  double inv = 1.0 / base, r = 0.0, f = inv;
  while (idx > 0) {
    r += f * static_cast<double>(idx % base);
    idx /= base;
    f *= inv;
  }
  return r;
}

constexpr int kBases[6] = {2, 3, 5, 7, 11, 13};

} // namespace

std::vector<Vec3> halton_ball(int count, double radius, std::uint64_t seed) {
  std::vector<Vec3> pts;
  pts.reserve(count);
  std::uint64_t idx = 1 + seed * 7919; // deterministic leapfrog offset per seed
  while (static_cast<int>(pts.size()) < count) {
    double c[6];
    double norm2 = 0;
    for (int d = 0; d < 6; ++d) {
      c[d] = 2.0 * radical_inverse(idx, kBases[d]) - 1.0;
      norm2 += c[d] * c[d];
    }
    ++idx;
    if (norm2 > 1.0) continue;
    pts.push_back({cx(radius * c[0], radius * c[1]), cx(radius * c[2], radius * c[3]),
                   cx(radius * c[4], radius * c[5])});
  }
  return pts;
}

LeviReport positivity_scan(ModelKind kind, const ScanOptions& opts) {
  if (opts.radius > 0.1)
    throw_invalid("radius_too_large", "positivity_scan: the claims are local, radius <= 0.1");
  auto pts = halton_ball(opts.gridsize, opts.radius, opts.seed);
  return positivity_scan_points(kind, pts, opts);
}

LeviReport positivity_scan_points(ModelKind kind, const std::vector<Vec3>& pts,
                                  const ScanOptions& opts) {
  struct Row {
    std::array<double, 3> w;
    double trace;
    bool skip;
  };
  std::vector<Row> rows(pts.size());
  parallel_for(pts.size(), opts.threads, [&](size_t i) {
    const Vec3& q = pts[i];
    double nq = std::sqrt(std::norm(q[0]) + std::norm(q[1]) + std::norm(q[2]));
    if (nq < opts.origin_tol) {
      rows[i].skip = true;
      return;
    }
    rows[i].skip = false;
    Mat3 l = levi_closed_form(kind, q);
    rows[i].w = herm_eigs3(l);
    rows[i].trace = (l(0, 0) + l(1, 1) + l(2, 2)).real();
  });

  LeviReport rep;
  rep.keep_spectra = opts.keep_spectra;
  rep.min_margin = std::numeric_limits<double>::infinity();
  rep.min_trace = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < pts.size(); ++i) {
    if (rows[i].skip) continue;
    ++rep.points_scanned;
    const auto& w = rows[i].w;
    if (opts.keep_spectra) rep.spectra.push_back(w);
    rep.min_trace = std::min(rep.min_trace, rows[i].trace);
    if (kind == ModelKind::Elliptic) {
      rep.min_margin = std::min(rep.min_margin, w[2]);
      if (w[2] > opts.eig_tol)
        ++rep.positive_definite;
      else
        rep.violations.push_back({pts[i], w[2]});
    } else {
      rep.min_margin = std::min(rep.min_margin, w[1]);
      if (w[2] > opts.eig_tol) {
        ++rep.positive_definite;
      } else if (w[1] > opts.eig_tol) {
        ++rep.two_positive;
      } else {
        rep.violations.push_back({pts[i], w[1]});
      }
    }
  }
  return rep;
}

double minor_identity_residual(const Vec3& point) {
  cx z2 = point[1];
  cx u = point[2] - graph_value(ModelKind::Hyperbolic, point[0], point[1]);
  double g = 1.0 + std::norm(z2);
  // direct determinant of the displayed 2x2 minor
  cx m11 = std::norm(u) - 2.0 * (z2 * z2 * u + std::conj(z2 * z2) * std::conj(u)) +
           4.0 * std::norm(z2) * g;
  cx lhs = m11 * g - (std::conj(z2) * u) * (z2 * std::conj(u));
  // printed rearrangement
  double au = std::abs(u), nz = std::norm(z2);
  double rhs = std::pow(au - 2.0 * nz * g, 2.0) +
               2.0 * g * (2.0 * au * nz - (z2 * z2 * u + std::conj(z2 * z2) * std::conj(u)).real()) +
               4.0 * nz * g * g * (1.0 - nz);
  return std::abs(lhs.real() - rhs) + std::abs(lhs.imag());
}

double graph_distance(ModelKind kind, const Vec3& q) {
  // minimize |q_z - z|^2 + |q_w - G(z)|^2 over z in C^2 by Wirtinger gradient
  // descent with backtracking; the bowl is near-quadratic at these radii
  cx z1 = q[0], z2 = q[1];
  auto value = [&](cx a, cx b) {
    cx dw = q[2] - graph_value(kind, a, b);
    return std::norm(q[0] - a) + std::norm(q[1] - b) + std::norm(dw);
  };
  // d/dzbar_j |dw|^2 = (d dw/dzbar_j) conj(dw) + dw (d conj(dw)/dzbar_j)
  auto grad = [&](cx a, cx b, cx* g1, cx* g2) {
    cx dw = q[2] - graph_value(kind, a, b);
    cx dwb = std::conj(dw);
    if (kind == ModelKind::Elliptic) {
      // G = conj(z1)^2 + conj(z2)^2; conj(G) is holomorphic in z
      *g1 = -(q[0] - a) - 2.0 * std::conj(a) * dwb;
      *g2 = -(q[1] - b) - 2.0 * std::conj(b) * dwb;
    } else {
      // G = |z1|^2 + conj(z2)^2: dG/dzbar = (z1, 2 conj(z2)), dGbar/dzbar = (z1, 0)
      *g1 = -(q[0] - a) - a * (dw + dwb);
      *g2 = -(q[1] - b) - 2.0 * std::conj(b) * dwb;
    }
  };
  double v = value(z1, z2);
  double step = 0.4;
  for (int it = 0; it < 400; ++it) {
    cx g1, g2;
    grad(z1, z2, &g1, &g2);
    double gn = std::sqrt(std::norm(g1) + std::norm(g2));
    if (gn < 1e-13) break;
    cx n1 = z1 - step * 2.0 * g1;
    cx n2 = z2 - step * 2.0 * g2;
    double nv = value(n1, n2);
    if (nv < v) {
      z1 = n1;
      z2 = n2;
      v = nv;
      step = std::min(0.5, step * 1.2);
    } else {
      step *= 0.5;
      if (step < 1e-12) break;
    }
  }
  return std::sqrt(std::max(v, 0.0));
}

GrowthBounds growth_bounds(ModelKind kind, double radius, int gridsize, std::uint64_t seed,
                           int threads) {
  if (radius > 0.1)
    throw_invalid("radius_too_large", "growth_bounds: the claims are local, radius <= 0.1");
  auto pts = halton_ball(gridsize, radius, seed);
  std::vector<double> ratio(pts.size(), -1.0);
  parallel_for(pts.size(), threads, [&](size_t i) {
    double f = model_f(kind, pts[i]);
    double d = graph_distance(kind, pts[i]);
    if (d * d < 1e-16) return; // on Y: 0/0 guard
    ratio[i] = f / (d * d);
  });
  GrowthBounds out;
  out.c_est = std::numeric_limits<double>::infinity();
  for (double r : ratio) {
    if (r < 0) {
      ++out.points_skipped;
      continue;
    }
    ++out.points_used;
    out.c_est = std::min(out.c_est, r);
    out.C_est = std::max(out.C_est, r);
  }
  return out;
}

} // namespace crpt::levi
