#include "pairs.hpp"

#include "errors.hpp"

#include <cmath>

namespace crpt {

using kernel::adjoint;
using kernel::block4;
using kernel::conjugate;
using kernel::det;
using kernel::norm_fro;
using kernel::transpose;

MatrixPair make_pair(const Mat2& a, const Mat2& b) {
  if (!kernel::is_finite(a) || !kernel::is_finite(b))
    throw_invalid("non_finite", "pair: entries must be finite");
  double bn = norm_fro(b);
  if (std::abs(b(0, 1) - b(1, 0)) > 1e-12 * (1.0 + bn))
    throw_invalid("non_symmetric_B",
                  "pair: B violates the symmetry invariant ||B - B^T|| < 1e-12 (1+||B||)");
  Mat2 bs = b;
  cx off = 0.5 * (b(0, 1) + b(1, 0));
  bs(0, 1) = bs(1, 0) = off;
  return {a, bs};
}

GroupElement make_group_element(cx zeta, const Mat2& p) {
  if (std::abs(std::abs(zeta) - 1.0) > 1e-12)
    throw_invalid("zeta_not_unimodular", "group element: |zeta| must be 1");
  double pn = norm_fro(p);
  if (std::abs(det(p)) <= kernel::kAbsFloor * std::max(1.0, pn * pn))
    throw_degenerate("singular_P", "group element: P must be invertible");
  return {zeta, p};
}

GroupElement compose(const GroupElement& g2, const GroupElement& g1) {
  return {g2.zeta * g1.zeta, g1.p * g2.p};
}

MatrixPair act(const GroupElement& g, const MatrixPair& p) {
  double pn = norm_fro(g.p);
  if (std::abs(det(g.p)) <= kernel::kAbsFloor * std::max(1.0, pn * pn))
    throw_degenerate("singular_P", "act: P must be invertible");
  Mat2 a = g.zeta * (adjoint(g.p) * p.a * g.p);
  Mat2 b = std::conj(g.zeta) * (transpose(g.p) * p.b * g.p);
  cx off = 0.5 * (b(0, 1) + b(1, 0));
  b(0, 1) = b(1, 0) = off;
  return {a, b};
}

double det4(const MatrixPair& p) {
  cx d = det(block4(p.a, p.b));
  double scale = 1.0 + norm_fro(p.a) + norm_fro(p.b);
  double s4 = scale * scale * scale * scale;
  if (std::abs(d.imag()) > 1e-10 * s4)
    throw error(errc::internal, "det4_imaginary",
                "det4: imaginary part exceeds the block-symmetry bound");
  return d.real();
}

double det4_normalized(const MatrixPair& p) {
  double s = std::max({norm_fro(p.a), norm_fro(p.b), 1e-300});
  cx inv = cx(1.0 / s);
  MatrixPair q{inv * p.a, inv * p.b};
  return det4(q);
}

SignClass sign_class(const MatrixPair& p, double tol) {
  if (tol <= 0) throw_invalid("bad_tol", "sign_class: tol must be positive");
  double raw = det4(p);
  double s = std::max({norm_fro(p.a), norm_fro(p.b), 1e-300});
  cx inv = cx(1.0 / s);
  MatrixPair q{inv * p.a, inv * p.b};
  double dn = det4(q);
  double scale = 1.0 + norm_fro(q.a) + norm_fro(q.b);
  double thresh = tol * scale * scale * scale * scale;
  SignClass out;
  out.det4 = raw;
  out.det4_normalized = dn;
  if (dn > thresh)
    out.tag = SignTag::Elliptic;
  else if (dn < -thresh)
    out.tag = SignTag::Hyperbolic;
  else
    out.tag = SignTag::Degenerate;
  return out;
}

int lai_index(const std::vector<SignClass>& classes) {
  int e = 0, h = 0;
  for (const auto& c : classes) {
    switch (c.tag) {
      case SignTag::Elliptic: ++e; break;
      case SignTag::Hyperbolic: ++h; break;
      case SignTag::Degenerate:
        throw_degenerate("degenerate_entry", "lai_index: Degenerate entries are not countable");
    }
  }
  return e - h;
}

double Rng::uniform() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform(), u2 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double th = 2.0 * M_PI * u2;
  spare_ = r * std::sin(th);
  have_spare_ = true;
  return r * std::cos(th);
}

cx Rng::complex_normal() {
  double re = normal();
  double im = normal();
  return {re, im};
}

MatrixPair random_pair(Rng& rng, double scale) {
  Mat2 a, c;
  for (int i = 0; i < 4; ++i) a.m[i] = scale * rng.complex_normal();
  for (int i = 0; i < 4; ++i) c.m[i] = scale * rng.complex_normal();
  Mat2 b = cx(0.5) * (c + transpose(c));
  return {a, b};
}

MatrixPair random_pair(std::uint64_t seed, double scale) {
  Rng rng(seed);
  return random_pair(rng, scale);
}

GroupElement random_group_element(Rng& rng) {
  cx zeta = std::exp(cx(0, 2.0 * M_PI * rng.uniform()));
  Mat2 p;
  do {
    for (int i = 0; i < 4; ++i) p.m[i] = rng.complex_normal();
  } while (std::abs(det(p)) < 0.1);
  return {zeta, p};
}

GroupElement random_group_element(std::uint64_t seed) {
  Rng rng(seed);
  return random_group_element(rng);
}

} // namespace crpt
