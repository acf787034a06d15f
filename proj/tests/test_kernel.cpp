#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kernel.hpp"
#include "errors.hpp"
#include "pairs.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace crpt;
using namespace crpt::kernel;

namespace {
const double kSqrt5 = std::sqrt(5.0);
}

TEST_CASE("det: identity and permutation blocks") {
  CHECK(det(Mat2::identity()) == cx(1));

  // [[A, conj B],[B, conj A]] with A=(1,0;0,0), B=(0,0;0,1): one transposition
  Mat2 a = Mat2::diag(1, 0);
  Mat2 b = Mat2::diag(0, 1);
  Mat4 m = block4(a, b);
  CHECK(det(m).real() == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(std::abs(det(m) - oracles::det4_leibniz(m)) < 1e-14);

  // [[0, I],[I, 0]]: double transposition, sign +1
  Mat4 swap{};
  for (int i = 0; i < 2; ++i) {
    swap(i, i + 2) = 1;
    swap(i + 2, i) = 1;
  }
  CHECK(det(swap).real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(det(swap) - oracles::det4_leibniz(swap)) < 1e-14);
}

TEST_CASE("det4 cofactor agrees with Leibniz oracle on random matrices") {
  Rng rng(42);
  for (int k = 0; k < 500; ++k) {
    Mat4 m;
    for (auto& e : m.m) e = rng.complex_normal();
    cx d1 = det(m);
    cx d2 = oracles::det4_leibniz(m);
    CHECK(std::abs(d1 - d2) < 1e-10 * std::max(1.0, std::abs(d2)));
  }
}

TEST_CASE("quadratic_roots") {
  auto [r1, r2] = quadratic_roots(cx(-2), cx(1));
  CHECK(std::abs(r1 - cx(1)) < 1e-12);
  CHECK(std::abs(r2 - cx(1)) < 1e-12);

  auto [s1, s2] = quadratic_roots(cx(0), cx(-1));
  CHECK(std::abs(s1 * s2 + cx(1)) < 1e-12);
  CHECK(std::abs(s1 + s2) < 1e-12);

  // roots of the cosquare characteristic polynomial of A=(0,1;1/2,0)
  // c1 = -(a db + ab d - |c|^2 - |b|^2)/conj(ad-bc) = -2.5, c0 = 1
  auto [t1, t2] = quadratic_roots(cx(-2.5), cx(1));
  double lo = std::min(std::abs(t1), std::abs(t2));
  double hi = std::max(std::abs(t1), std::abs(t2));
  CHECK(lo == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(hi == doctest::Approx(2.0).epsilon(1e-12));

  // residual property on random coefficients
  Rng rng(7);
  for (int k = 0; k < 2000; ++k) {
    cx c1 = rng.complex_normal(), c0 = rng.complex_normal();
    for (cx r : {quadratic_roots(c1, c0).first, quadratic_roots(c1, c0).second}) {
      double res = std::abs(r * r + c1 * r + c0);
      CHECK(res <= 1e-12 * std::max(1.0, std::norm(r)));
    }
  }
}

TEST_CASE("takagi2: examples and reconstruction sweep") {
  SUBCASE("zero matrix") {
    auto [u, s] = takagi2(Mat2::zero());
    CHECK(norm_fro(u - Mat2::identity()) < 1e-15);
    CHECK(s[0] == 0.0);
    CHECK(s[1] == 0.0);
  }
  SUBCASE("diag(-2, 3)") {
    Mat2 b = Mat2::diag(-2, 3);
    auto [u, s] = takagi2(b);
    CHECK(s[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(s[1] == doctest::Approx(2.0).epsilon(1e-12));
    Mat2 rec = u * Mat2::diag(s[0], s[1]) * transpose(u);
    CHECK(norm_fro(rec - b) < 1e-10);
  }
  SUBCASE("antidiagonal ones") {
    Mat2 b{{cx(0), cx(1), cx(1), cx(0)}};
    auto [u, s] = takagi2(b);
    CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s[1] == doctest::Approx(1.0).epsilon(1e-12));
    Mat2 rec = u * Mat2::diag(s[0], s[1]) * transpose(u);
    CHECK(norm_fro(rec - b) < 1e-10);
  }
  SUBCASE("symmetry violation rejected") {
    Mat2 b{{cx(0), cx(1), cx(2), cx(0)}};
    CHECK_THROWS_AS(takagi2(b), error);
  }
  SUBCASE("random sweep") {
    Rng rng(3);
    double worst = 0;
    for (int k = 0; k < 10000; ++k) {
      Mat2 c;
      for (auto& e : c.m) e = rng.complex_normal();
      Mat2 b = cx(0.5) * (c + transpose(c));
      auto [u, s] = takagi2(b);
      CHECK(s[0] >= s[1]);
      CHECK(s[1] >= 0.0);
      Mat2 rec = u * Mat2::diag(s[0], s[1]) * transpose(u);
      worst = std::max(worst, norm_fro(rec - b));
      worst = std::max(worst, norm_fro(adjoint(u) * u - Mat2::identity()));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("polar2: examples and reconstruction sweep") {
  SUBCASE("2I") {
    auto [u, h] = polar2(cx(2) * Mat2::identity());
    CHECK(norm_fro(u - Mat2::identity()) < 1e-12);
    CHECK(norm_fro(h - cx(2) * Mat2::identity()) < 1e-12);
  }
  SUBCASE("already unitary") {
    Mat2 p{{cx(0), cx(1), cx(1), cx(0)}};
    auto [u, h] = polar2(p);
    CHECK(norm_fro(u - p) < 1e-12);
    CHECK(norm_fro(h - Mat2::identity()) < 1e-12);
  }
  SUBCASE("singular rejected") {
    CHECK_THROWS_AS(polar2(Mat2::diag(1, 0)), error);
  }
  SUBCASE("random sweep") {
    Rng rng(11);
    double worst = 0;
    for (int k = 0; k < 10000; ++k) {
      Mat2 p;
      do {
        for (auto& e : p.m) e = rng.complex_normal();
      } while (std::abs(det(p)) < 0.05);
      auto [u, h] = polar2(p);
      worst = std::max(worst, norm_fro(u * h - p));
      worst = std::max(worst, norm_fro(adjoint(u) * u - Mat2::identity()));
      worst = std::max(worst, norm_fro(h - adjoint(h)));
      // positive definiteness of H
      CHECK(h(0, 0).real() > 0);
      CHECK(det(h).real() > 0);
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("herm_eigs3: examples") {
  Mat3 m;
  m(2, 2) = 1;
  auto w = herm_eigs3(m);
  CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(w[1]) < 1e-12);
  CHECK(std::abs(w[2]) < 1e-12);

  auto wi = herm_eigs3(Mat3::identity());
  for (double v : wi) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

  // hyperbolic-model Levi matrix at z1=1, z2=0, u=0
  Mat3 l;
  l(0, 0) = 2; l(0, 2) = -1;
  l(2, 0) = -1; l(2, 2) = 1;
  auto wl = herm_eigs3(l);
  CHECK(wl[0] == doctest::Approx((3.0 + kSqrt5) / 2.0).epsilon(1e-12));
  CHECK(wl[1] == doctest::Approx((3.0 - kSqrt5) / 2.0).epsilon(1e-12));
  CHECK(std::abs(wl[2]) < 1e-12);

  Mat3 bad;
  bad(0, 1) = 1; // not Hermitian (bad(1,0) = 0)
  CHECK_THROWS_AS(herm_eigs3(bad), error);
}

TEST_CASE("herm_eigs3: trace and determinant consistency sweep") {
  Rng rng(5);
  for (int k = 0; k < 5000; ++k) {
    Mat3 m;
    for (int i = 0; i < 3; ++i) {
      m(i, i) = rng.normal();
      for (int j = i + 1; j < 3; ++j) {
        cx v = rng.complex_normal();
        m(i, j) = v;
        m(j, i) = std::conj(v);
      }
    }
    auto w = herm_eigs3(m);
    double tr = (m(0, 0) + m(1, 1) + m(2, 2)).real();
    double dt = det(m).real();
    double scale = std::max(1.0, norm_fro(m));
    CHECK(std::abs(w[0] + w[1] + w[2] - tr) < 1e-10 * scale);
    CHECK(std::abs(w[0] * w[1] * w[2] - dt) < 1e-8 * scale * scale * scale);
  }
}

TEST_CASE("eig2 and herm_eig2 residuals") {
  Rng rng(13);
  for (int k = 0; k < 2000; ++k) {
    Mat2 m;
    for (auto& e : m.m) e = rng.complex_normal();
    Eig2 e = eig2(m);
    for (auto [lam, v] : {std::pair{e.lambda1, e.v1}, std::pair{e.lambda2, e.v2}}) {
      Vec2 mv = m * v;
      Vec2 r = {mv[0] - lam * v[0], mv[1] - lam * v[1]};
      CHECK(norm2(r) < 1e-7 * std::max(1.0, norm_fro(m)));
    }
  }
}
