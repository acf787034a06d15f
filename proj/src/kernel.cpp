#include "kernel.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>

namespace crpt::kernel {

Mat3 Mat3::identity() {
  Mat3 r;
  r(0, 0) = r(1, 1) = r(2, 2) = cx(1);
  return r;
}

Mat2 operator+(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 4; ++i) r.m[i] = a.m[i] + b.m[i];
  return r;
}

Mat2 operator-(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 4; ++i) r.m[i] = a.m[i] - b.m[i];
  return r;
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 r;
  r(0, 0) = a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0);
  r(0, 1) = a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1);
  r(1, 0) = a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0);
  r(1, 1) = a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1);
  return r;
}

Mat2 operator*(cx s, const Mat2& a) {
  Mat2 r;
  for (int i = 0; i < 4; ++i) r.m[i] = s * a.m[i];
  return r;
}

Vec2 operator*(const Mat2& a, const Vec2& v) {
  return {a(0, 0) * v[0] + a(0, 1) * v[1], a(1, 0) * v[0] + a(1, 1) * v[1]};
}

Mat2 transpose(const Mat2& a) {
  Mat2 r = a;
  std::swap(r.m[1], r.m[2]);
  return r;
}

Mat2 conjugate(const Mat2& a) {
  Mat2 r;
  for (int i = 0; i < 4; ++i) r.m[i] = std::conj(a.m[i]);
  return r;
}

Mat2 adjoint(const Mat2& a) { return transpose(conjugate(a)); }

double norm_fro(const Mat2& a) {
  double s = 0;
  for (const auto& e : a.m) s += std::norm(e);
  return std::sqrt(s);
}

double norm_fro(const Mat3& a) {
  double s = 0;
  for (const auto& e : a.m) s += std::norm(e);
  return std::sqrt(s);
}

double norm2(const Vec2& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1])); }

cx dot(const Vec2& a, const Vec2& b) { return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1]; }

bool is_finite(const Mat2& a) {
  for (const auto& e : a.m)
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
  return true;
}

bool is_finite(const Mat3& a) {
  for (const auto& e : a.m)
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
  return true;
}

Mat2 inverse(const Mat2& a) {
  cx d = det(a);
  double scale = norm_fro(a);
  if (std::abs(d) <= kAbsFloor * std::max(1.0, scale * scale))
    throw_degenerate("singular_matrix", "inverse: 2x2 matrix is numerically singular");
  cx inv_d = cx(1) / d;
  Mat2 r;
  r(0, 0) = a(1, 1) * inv_d;
  r(0, 1) = -a(0, 1) * inv_d;
  r(1, 0) = -a(1, 0) * inv_d;
  r(1, 1) = a(0, 0) * inv_d;
  return r;
}

Mat4 block4(const Mat2& a, const Mat2& b) {
  Mat4 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      r(i, j) = a(i, j);
      r(i, j + 2) = std::conj(b(i, j));
      r(i + 2, j) = b(i, j);
      r(i + 2, j + 2) = std::conj(a(i, j));
    }
  return r;
}

cx det(const Mat2& a) { return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0); }

cx det(const Mat3& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

cx det(const Mat4& a) {
  cx r = 0;
  for (int j = 0; j < 4; ++j) {
    Mat3 minor;
    int col = 0;
    for (int jj = 0; jj < 4; ++jj) {
      if (jj == j) continue;
      for (int ii = 1; ii < 4; ++ii) minor(ii - 1, col) = a(ii, jj);
      ++col;
    }
    cx term = a(0, j) * det(minor);
    r += (j % 2 == 0) ? term : -term;
  }
  return r;
}

std::pair<cx, cx> quadratic_roots(cx c1, cx c0) {
  // Citardauq-stabilized: r1 = q, r2 = c0/q with q chosen to avoid cancellation.
  cx disc = std::sqrt(c1 * c1 - 4.0 * c0); // principal branch
  cx q;
  if (std::real(std::conj(c1) * disc) >= 0.0)
    q = -0.5 * (c1 + disc);
  else
    q = -0.5 * (c1 - disc);
  if (std::abs(q) == 0.0) return {cx(0), -c1};
  return {q, c0 / q};
}

Eig2 eig2(const Mat2& a) {
  auto [l1, l2] = quadratic_roots(-(a(0, 0) + a(1, 1)), det(a));
  auto vec_for = [&](cx lam) -> Vec2 {
    // rows of (A - lam I) are orthogonal to the eigenvector's "dual"; use the
    // larger of the two candidate constructions for stability
    Vec2 c1 = {a(0, 1), lam - a(0, 0)};
    Vec2 c2 = {lam - a(1, 1), a(1, 0)};
    Vec2 v = (norm2(c1) >= norm2(c2)) ? c1 : c2;
    double n = norm2(v);
    if (n < 1e-150) return {cx(1), cx(0)}; // A ~ lam I, any vector works
    return {v[0] / n, v[1] / n};
  };
  return {l1, l2, vec_for(l1), vec_for(l2)};
}

HermEig2 herm_eig2(const Mat2& a) {
  double p = a(0, 0).real();
  double q = a(1, 1).real();
  cx b = a(0, 1);
  double tr = p + q;
  double d = std::sqrt(std::max(0.0, (p - q) * (p - q) / 4.0 + std::norm(b)));
  double w1 = tr / 2 + d, w2 = tr / 2 - d;
  Mat2 u = Mat2::identity();
  if (std::abs(b) > 1e-300) {
    // eigenvector for w1: (b, w1 - p), normalized; orthonormal complement for w2
    Vec2 v = {b, cx(w1 - p)};
    double n = norm2(v);
    if (n < 1e-300) {
      v = {cx(w1 - q), std::conj(b)};
      n = norm2(v);
    }
    v = {v[0] / n, v[1] / n};
    u(0, 0) = v[0];
    u(1, 0) = v[1];
    u(0, 1) = -std::conj(v[1]);
    u(1, 1) = std::conj(v[0]);
  } else if (p < q) {
    u = {{cx(0), cx(1), cx(1), cx(0)}};
  }
  return {{w1, w2}, u};
}

Takagi2 takagi2(const Mat2& b) {
  double bn = norm_fro(b);
  if (std::abs(b(0, 1) - b(1, 0)) > 1e-12 * (1.0 + bn))
    throw_invalid("non_symmetric_B", "takagi2: input is not symmetric within tolerance");
  Mat2 bs = b;
  cx off = 0.5 * (b(0, 1) + b(1, 0));
  bs(0, 1) = bs(1, 0) = off;

  if (bn < 1e-300) return {Mat2::identity(), {0.0, 0.0}};

  // BB^bar is Hermitian PSD with U's columns as eigenvectors; recover the
  // con-eigenvector by u = B conj(v) + s v (falls back to iv when B conj(v) = -s v),
  // then fix each column's phase so u* B conj(u) is real nonnegative.
  Mat2 m = bs * conjugate(bs);
  HermEig2 he = herm_eig2(m);
  double s1 = std::sqrt(std::max(0.0, he.w[0]));

  Vec2 v = {he.u(0, 0), he.u(1, 0)};
  Vec2 bv = bs * Vec2{std::conj(v[0]), std::conj(v[1])};
  Vec2 u1 = {bv[0] + s1 * v[0], bv[1] + s1 * v[1]};
  if (norm2(u1) < 1e-8 * std::max(1.0, s1)) u1 = {cx(0, 1) * v[0], cx(0, 1) * v[1]};
  double n1 = norm2(u1);
  u1 = {u1[0] / n1, u1[1] / n1};
  auto con_form = [&](const Vec2& u) {
    Vec2 bu = bs * Vec2{std::conj(u[0]), std::conj(u[1])};
    return dot(u, bu);
  };
  cx c1 = con_form(u1);
  if (std::abs(c1) > 1e-300) {
    cx ph = std::exp(cx(0, std::arg(c1) / 2));
    u1 = {u1[0] * ph, u1[1] * ph};
  }
  Vec2 u2 = {-std::conj(u1[1]), std::conj(u1[0])};
  cx c2 = con_form(u2);
  if (std::abs(c2) > 1e-300) {
    cx ph = std::exp(cx(0, std::arg(c2) / 2));
    u2 = {u2[0] * ph, u2[1] * ph};
  }
  double sv1 = std::abs(con_form(u1));
  double sv2 = std::abs(con_form(u2));
  Mat2 u;
  if (sv1 >= sv2) {
    u(0, 0) = u1[0]; u(1, 0) = u1[1];
    u(0, 1) = u2[0]; u(1, 1) = u2[1];
    return {u, {sv1, sv2}};
  }
  u(0, 0) = u2[0]; u(1, 0) = u2[1];
  u(0, 1) = u1[0]; u(1, 1) = u1[1];
  return {u, {sv2, sv1}};
}

Polar2 polar2(const Mat2& p) {
  double pn = norm_fro(p);
  cx dp = det(p);
  if (std::abs(dp) <= kAbsFloor * std::max(1.0, pn * pn))
    throw_degenerate("singular_matrix", "polar2: matrix is numerically singular");

  // H = sqrt(P*P) via the closed 2x2 PD square root, then one Newton polish of
  // the unitary factor.
  Mat2 m = adjoint(p) * p;
  double t = (m(0, 0) + m(1, 1)).real();
  double dm = std::max(0.0, det(m).real());
  double sd = std::sqrt(dm);
  double denom = std::sqrt(std::max(t + 2.0 * sd, 1e-300));
  Mat2 h = m;
  h(0, 0) += sd;
  h(1, 1) += sd;
  h = cx(1.0 / denom) * h;
  Mat2 u = p * inverse(h);
  // Newton step toward unitarity: U <- U (3I - U*U)/2
  Mat2 corr = Mat2::identity();
  corr = cx(3.0) * corr - adjoint(u) * u;
  u = cx(0.5) * (u * corr);
  h = adjoint(u) * p;
  // re-Hermitize against roundoff
  Mat2 hh = cx(0.5) * (h + adjoint(h));
  return {u, hh};
}

std::array<double, 3> herm_eigs3(const Mat3& m) {
  double scale = norm_fro(m);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > 1e-10 * (1.0 + scale))
        throw_invalid("non_hermitian", "herm_eigs3: input is not Hermitian within tolerance");

  if (scale < 1e-300) return {0.0, 0.0, 0.0};

  // trigonometric closed form for the symmetrized matrix, then one Newton
  // polish per root on the characteristic polynomial
  Mat3 a = m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));

  double q = (a(0, 0) + a(1, 1) + a(2, 2)).real() / 3.0;
  double p1 = std::norm(a(0, 1)) + std::norm(a(0, 2)) + std::norm(a(1, 2));
  double p2 = 0;
  for (int i = 0; i < 3; ++i) {
    double di = a(i, i).real() - q;
    p2 += di * di;
  }
  p2 += 2.0 * p1;
  double p = std::sqrt(std::max(p2 / 6.0, 0.0));
  std::array<double, 3> w;
  if (p < 1e-300) {
    w = {q, q, q};
  } else {
    Mat3 bmat;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) bmat(i, j) = (a(i, j) - ((i == j) ? cx(q) : cx(0))) / p;
    double r = std::clamp(det(bmat).real() / 2.0, -1.0, 1.0);
    double phi = std::acos(r) / 3.0;
    double w0 = q + 2.0 * p * std::cos(phi);
    double w2 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    double w1 = 3.0 * q - w0 - w2;
    w = {w0, w1, w2};
  }

  // characteristic polynomial coefficients: lambda^3 - c2 l^2 + c1 l - c0
  double c2 = (a(0, 0) + a(1, 1) + a(2, 2)).real();
  double c0 = det(a).real();
  double c1 = (a(0, 0) * a(1, 1) - std::norm(a(0, 1))).real() +
              (a(0, 0) * a(2, 2) - std::norm(a(0, 2))).real() +
              (a(1, 1) * a(2, 2) - std::norm(a(1, 2))).real();

  // Newton-polish the best separated root (quadratic convergence there), then
  // deflate: the remaining pair solves the exact quadratic factor, which stays
  // accurate through double eigenvalues where plain Newton degrades.
  std::sort(w.begin(), w.end(), std::greater<double>());
  double gap01 = w[0] - w[1], gap12 = w[1] - w[2];
  int far = (gap01 >= gap12) ? 0 : 2;
  double lam = w[far];
  for (int it = 0; it < 3; ++it) {
    double f = ((lam - c2) * lam + c1) * lam - c0;
    double df = (3.0 * lam - 2.0 * c2) * lam + c1;
    if (std::abs(df) > 1e-30 * std::max(1.0, scale * scale)) {
      double step = f / df;
      if (std::abs(step) < 0.5 * std::max(1.0, scale)) lam -= step;
    }
  }
  double s = c2 - lam;
  double prod = (std::abs(lam) > 1e-14 * std::max(1.0, scale)) ? c0 / lam : c1 - s * lam;
  double disc = std::max(0.0, s * s - 4.0 * prod);
  double sq = std::sqrt(disc);
  double r1 = 0.5 * (s + sq), r2 = 0.5 * (s - sq);
  w = {lam, r1, r2};
  std::sort(w.begin(), w.end(), std::greater<double>());
  return w;
}

} // namespace crpt::kernel
