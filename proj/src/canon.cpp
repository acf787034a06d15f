#include "canon.hpp"

#include "errors.hpp"

#include <cmath>

namespace crpt::canon {

using kernel::adjoint;
using kernel::cx;
using kernel::det;
using kernel::dot;
using kernel::Eig2;
using kernel::eig2;
using kernel::inverse;
using kernel::Mat2;
using kernel::norm_fro;
using kernel::Vec2;

namespace {

constexpr double kPi = 3.14159265358979323846;

double fold_theta(double t) {
  // reduce mod 2*pi into [0, 2*pi)
  t = std::fmod(t, 2.0 * kPi);
  if (t < 0) t += 2.0 * kPi;
  return t;
}

// phase of v* A v for a unit eigenvector v of the cosquare; the pair of these
// phases is the sign-resolved data behind theta
cx quad_form(const Mat2& a, const Vec2& v) { return dot(v, a * v); }

void require_invertible(const Mat2& a) {
  double n = norm_fro(a);
  if (std::abs(det(a)) <= kernel::kAbsFloor * std::max(1.0, n * n))
    throw_degenerate("degenerate_A", "canon: A is numerically singular");
}

} // namespace

Mat2 cosquare(const Mat2& a) {
  require_invertible(a);
  return inverse(adjoint(a)) * a;
}

double genericity_defect(const Mat2& a) {
  require_invertible(a);
  cx aa = a(0, 0), bb = a(0, 1), cc = a(1, 0), dd = a(1, 1);
  double lhs = std::abs(aa * std::conj(dd) + std::conj(aa) * dd - std::norm(cc) - std::norm(bb));
  double rhs = 2.0 * std::abs(aa * dd - bb * cc);
  return std::abs(lhs - rhs);
}

CosquareClass classify_cosquare(const Mat2& a, double tol) {
  require_invertible(a);
  cx aa = a(0, 0), bb = a(0, 1), cc = a(1, 0), dd = a(1, 1);
  cx d = aa * dd - bb * cc;
  double t = std::abs(aa * std::conj(dd) + std::conj(aa) * dd - std::norm(cc) - std::norm(bb)) /
             std::abs(d);

  Mat2 q = cosquare(a);
  Eig2 e = eig2(q);

  CosquareClass out;
  if (t < 2.0 - tol) {
    out.tag = CosquareClass::Tag::TypeI;
    cx d1 = quad_form(a, e.v1);
    cx d2 = quad_form(a, e.v2);
    double an = norm_fro(a);
    double theta0;
    if (std::abs(d1) > 1e-14 * an && std::abs(d2) > 1e-14 * an) {
      theta0 = fold_theta(std::arg(d2) - std::arg(d1));
    } else {
      // measure-zero fallback: spectrum only pins {2theta, 2pi-2theta}
      theta0 = fold_theta(std::arg(e.lambda2 / e.lambda1) / 2.0);
    }
    out.theta = (theta0 > kPi) ? 2.0 * kPi - theta0 : theta0;
    return out;
  }
  if (t > 2.0 + tol) {
    out.tag = CosquareClass::Tag::TypeIII;
    double m1 = std::abs(e.lambda1), m2 = std::abs(e.lambda2);
    double lo = std::min(m1, m2), hi = std::max(m1, m2);
    out.mu = std::sqrt(lo / hi);
    return out;
  }

  // on or near the variety: Jordan-defect test
  out.defect = std::abs(t - 2.0);
  double gap = std::abs(e.lambda1 - e.lambda2);
  if (gap * gap > 8.0 * tol) {
    out.tag = CosquareClass::Tag::NearBoundary;
    return out;
  }
  cx lam = 0.5 * (e.lambda1 + e.lambda2);
  Mat2 n = q - Mat2::diag(lam, lam);
  if (norm_fro(n) > 10.0 * std::sqrt(tol) * std::max(1.0, norm_fro(q))) {
    out.tag = CosquareClass::Tag::TypeII;
    return out;
  }
  // diagonalizable double eigenvalue e^{i alpha}: A = e^{i alpha/2} H with H
  // Hermitian; definite -> theta = 0, indefinite -> theta = pi
  double alpha = std::arg(lam);
  Mat2 h = std::exp(cx(0, -alpha / 2.0)) * a;
  double deth = det(h).real();
  out.tag = (deth > 0) ? CosquareClass::Tag::BoundaryThetaZero : CosquareClass::Tag::BoundaryThetaPi;
  return out;
}

std::pair<CosquareClass, GroupElement> canonical_A(const Mat2& a, double tol) {
  CosquareClass cls = classify_cosquare(a, tol);
  Mat2 q = cosquare(a);
  Eig2 e = eig2(q);
  double an = norm_fro(a);

  if (cls.tag == CosquareClass::Tag::TypeI) {
    cx d1 = quad_form(a, e.v1);
    cx d2 = quad_form(a, e.v2);
    if (std::abs(d1) < tol * an || std::abs(d2) < tol * an)
      throw error(errc::degenerate, "non_generic:isotropic_eigenvector",
                  "canonical_A: cosquare eigenvector is A-isotropic");
    double r1 = std::abs(d1), r2 = std::abs(d2);
    Mat2 p;
    p(0, 0) = e.v1[0] / std::sqrt(r1);
    p(1, 0) = e.v1[1] / std::sqrt(r1);
    p(0, 1) = e.v2[0] / std::sqrt(r2);
    p(1, 1) = e.v2[1] / std::sqrt(r2);
    cx zeta = std::exp(cx(0, -std::arg(d1)));
    GroupElement g = make_group_element(zeta, p);
    double theta0 = fold_theta(std::arg(d2) - std::arg(d1));
    if (theta0 > kPi) {
      // interchange the diagonal entries: theta -> 2*pi - theta
      Mat2 swap{{cx(0), cx(1), cx(1), cx(0)}};
      GroupElement g2 = make_group_element(std::exp(cx(0, -theta0)), swap);
      g = compose(g2, g);
      theta0 = 2.0 * kPi - theta0;
    }
    cls.theta = theta0;
    return {cls, g};
  }

  if (cls.tag == CosquareClass::Tag::TypeIII) {
    // order so |lambda_1| < 1
    cx l1 = e.lambda1, l2 = e.lambda2;
    Vec2 v1 = e.v1, v2 = e.v2;
    if (std::abs(l1) > std::abs(l2)) {
      std::swap(l1, l2);
      std::swap(v1, v2);
    }
    cx c = dot(v2, a * v1);
    if (std::abs(c) < tol * an)
      throw error(errc::degenerate, "non_generic:isotropic_pairing",
                  "canonical_A: eigenvector cross-pairing vanished");
    double qmod = 1.0 / std::abs(l2);
    double omega = std::arg(l2);
    cx q_target = qmod * std::exp(cx(0, omega / 2.0));
    cx alpha = q_target / c;
    double bal = 1.0 / std::sqrt(std::max(std::abs(alpha), 1e-150));
    Mat2 p;
    p(0, 0) = alpha * bal * v1[0];
    p(1, 0) = alpha * bal * v1[1];
    p(0, 1) = v2[0] / bal;
    p(1, 1) = v2[1] / bal;
    cx zeta = cx(1) / (l2 * std::conj(q_target));
    zeta /= std::abs(zeta);
    GroupElement g = make_group_element(zeta, p);
    cls.mu = qmod;
    return {cls, g};
  }

  const char* reason = "non_generic:near_boundary";
  if (cls.tag == CosquareClass::Tag::TypeII) reason = "non_generic:type_ii";
  if (cls.tag == CosquareClass::Tag::BoundaryThetaZero) reason = "non_generic:boundary_theta_zero";
  if (cls.tag == CosquareClass::Tag::BoundaryThetaPi) reason = "non_generic:boundary_theta_pi";
  throw error(errc::degenerate, reason,
              "canonical_A: class has no generic canonical reduction");
}

namespace {

// which canonical shape does A match (within reltol)?
enum class CanonShape { TypeI, TypeIII, None };

CanonShape detect_canonical(const Mat2& a, double reltol, double* theta, double* mu) {
  double off = std::abs(a(0, 1)) + std::abs(a(1, 0));
  if (std::abs(a(0, 0) - cx(1)) < reltol && off < reltol &&
      std::abs(std::abs(a(1, 1)) - 1.0) < reltol) {
    *theta = std::arg(a(1, 1));
    if (*theta > 0 && *theta < kPi) return CanonShape::TypeI;
  }
  double diag = std::abs(a(0, 0)) + std::abs(a(1, 1));
  if (diag < reltol && std::abs(a(0, 1) - cx(1)) < reltol) {
    cx m = a(1, 0);
    if (std::abs(m.imag()) < reltol && m.real() > reltol && m.real() < 1.0 - reltol) {
      *mu = m.real();
      return CanonShape::TypeIII;
    }
  }
  return CanonShape::None;
}

} // namespace

NormalForm reduce_B(const MatrixPair& p, double tol) {
  double theta = 0, mu = 0;
  CanonShape shape = detect_canonical(p.a, 1e-8 * (1.0 + norm_fro(p.a)), &theta, &mu);
  if (shape == CanonShape::None)
    throw_invalid("not_canonical_A", "reduce_B: A is not in canonical form");

  double bn = norm_fro(p.b);
  cx b11 = p.b(0, 0), b22 = p.b(1, 1);
  if (std::abs(b11) < tol * bn || std::abs(b22) < tol * bn)
    throw error(errc::degenerate, "non_generic:zero_B_diagonal",
                "reduce_B: a diagonal entry of B is numerically zero");

  NormalForm nf;
  nf.canonical_a = p.a;
  if (shape == CanonShape::TypeI) {
    nf.cls.tag = CosquareClass::Tag::TypeI;
    nf.cls.theta = theta;
    double al = -std::arg(b11) / 2.0;
    double be = -std::arg(b22) / 2.0;
    Mat2 s = Mat2::diag(std::exp(cx(0, al)), std::exp(cx(0, be)));
    nf.witness = make_group_element(cx(1), s);
    MatrixPair r = act(nf.witness, p);
    r.b(0, 0) = std::abs(b11); // exact by construction
    r.b(1, 1) = std::abs(b22);
    nf.b_reduced = r.b;
    nf.canonical_a = r.a;
    return nf;
  }

  nf.cls.tag = CosquareClass::Tag::TypeIII;
  nf.cls.mu = mu;
  // stabilizer (1, diag(x, 1/conj(x))) with conj(x)^4 = b22 / conj(b11)
  cx w = b22 / std::conj(b11);
  cx root = std::pow(w, 0.25); // principal
  cx x = std::conj(root);
  Mat2 s = Mat2::diag(x, cx(1) / std::conj(x));
  nf.witness = make_group_element(cx(1), s);
  MatrixPair r = act(nf.witness, p);
  r.b(1, 1) = std::conj(r.b(0, 0)); // exact by construction
  nf.b_reduced = r.b;
  nf.canonical_a = r.a;
  return nf;
}

NormalForm normal_form(const MatrixPair& p, double tol) {
  require_invertible(p.a);
  auto [cls, g1] = canonical_A(p.a, tol);
  MatrixPair p1 = act(g1, p);
  // snap A onto the exact canonical matrix before the B-stage shape check
  NormalForm nf = reduce_B(p1, tol);
  nf.cls = cls;
  nf.witness = compose(nf.witness, g1);
  nf.degenerate_warning = (sign_class(p).tag == SignTag::Degenerate);

  MatrixPair check = act(nf.witness, p);
  double scale = std::max(1.0, norm_fro(check.a) + norm_fro(check.b));
  double resid = norm_fro(check.a - nf.canonical_a) + norm_fro(check.b - nf.b_reduced);
  if (resid > 1e-8 * scale)
    throw error(errc::internal, "witness_reconstruction",
                "normal_form: witness does not reproduce the normal form");
  return nf;
}

} // namespace crpt::canon
