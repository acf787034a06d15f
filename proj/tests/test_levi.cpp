#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levi.hpp"
#include "errors.hpp"
#include "pairs.hpp"

#include <cmath>

using namespace crpt;
using namespace crpt::levi;
using namespace crpt::kernel;

TEST_CASE("model_f examples") {
  CHECK(model_f(ModelKind::Elliptic, {cx(0), cx(0), cx(0)}) == 0.0);
  cx w(0.03, -0.02);
  CHECK(model_f(ModelKind::Elliptic, {cx(0), cx(0), w}) == doctest::Approx(std::norm(w)));
  cx z1(0.04, 0.05);
  CHECK(model_f(ModelKind::Hyperbolic, {z1, cx(0), cx(std::norm(z1))}) ==
        doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("levi_closed_form: examples") {
  Mat3 l0 = levi_closed_form(ModelKind::Elliptic, {cx(0), cx(0), cx(0)});
  CHECK(norm_fro(l0) == doctest::Approx(1.0));
  CHECK(l0(2, 2).real() == doctest::Approx(1.0));

  // elliptic at the w-axis point (0, 0, 0.01)
  Mat3 lw = levi_closed_form(ModelKind::Elliptic, {cx(0), cx(0), cx(0.01)});
  CHECK(lw(0, 0).real() == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK(lw(1, 1).real() == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK(lw(2, 2).real() == doctest::Approx(1.0));
  CHECK(std::abs(lw(0, 1)) + std::abs(lw(0, 2)) + std::abs(lw(1, 2)) < 1e-15);

  // hyperbolic on the z1-axis graph: [[2|z1|^2,0,-conj z1],[0,0,0],[-z1,0,1]]
  cx z1(0.5, 0.25);
  Mat3 lh = levi_closed_form(ModelKind::Hyperbolic, {z1, cx(0), cx(std::norm(z1))});
  CHECK(std::abs(lh(0, 0) - cx(2 * std::norm(z1))) < 1e-14);
  CHECK(std::abs(lh(0, 2) + std::conj(z1)) < 1e-14);
  CHECK(std::abs(lh(1, 1)) < 1e-14);
  CHECK(std::abs(lh(1, 0)) < 1e-14);
  CHECK(std::abs(lh(2, 2) - cx(1)) < 1e-14);
}

TEST_CASE("closed form vs finite differences at random points (both models)") {
  Rng rng(17);
  for (ModelKind kind : {ModelKind::Elliptic, ModelKind::Hyperbolic}) {
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
      Vec3 q;
      double r2 = 0;
      do {
        r2 = 0;
        for (int j = 0; j < 3; ++j) {
          q[j] = 0.1 * cx(2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
          r2 += std::norm(q[j]);
        }
      } while (r2 > 0.01);
      Mat3 a = levi_closed_form(kind, q);
      Mat3 b = levi_fd(kind, q, 1e-4);
      Mat3 diff;
      for (int i = 0; i < 9; ++i) diff.m[i] = a.m[i] - b.m[i];
      worst = std::max(worst, norm_fro(diff));
      // Hermitian within tolerance
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::abs(b(i, j) - std::conj(b(j, i))) < 1e-8);
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("Richardson h/2 cross-check tightens the FD error") {
  Vec3 q{cx(0.05, 0.02), cx(-0.03, 0.04), cx(0.01, -0.06)};
  Mat3 exact = levi_closed_form(ModelKind::Hyperbolic, q);
  Mat3 h1 = levi_fd(ModelKind::Hyperbolic, q, 1e-4);
  Mat3 h2 = levi_fd(ModelKind::Hyperbolic, q, 5e-5);
  Mat3 rich;
  for (int i = 0; i < 9; ++i) rich.m[i] = (4.0 * h2.m[i] - h1.m[i]) / 3.0;
  Mat3 d1, dr;
  for (int i = 0; i < 9; ++i) {
    d1.m[i] = h1.m[i] - exact.m[i];
    dr.m[i] = rich.m[i] - exact.m[i];
  }
  CHECK(norm_fro(dr) <= norm_fro(d1) + 1e-12);
}

TEST_CASE("levi_fd_of on the squared-distance test hook gives the identity") {
  auto dist2 = [](const Vec3& p) {
    return std::norm(p[0]) + std::norm(p[1]) + std::norm(p[2]);
  };
  Mat3 l = levi_fd_of(dist2, {cx(0.3, 0.1), cx(-0.2), cx(0.05, 0.04)}, 1e-4);
  Mat3 diff;
  for (int i = 0; i < 9; ++i) diff.m[i] = l.m[i] - Mat3::identity().m[i];
  CHECK(norm_fro(diff) < 1e-7);
}

TEST_CASE("sylvester_pd: examples and eigenvalue coupling") {
  CHECK(sylvester_pd(Mat3::identity(), 0.0));
  Mat3 d001;
  d001(2, 2) = 1;
  CHECK_FALSE(sylvester_pd(d001, 0.0));
  Mat3 bad;
  bad(0, 1) = 1;
  CHECK_THROWS_AS(sylvester_pd(bad, 0.0), error);

  // agreement with the eigenvalue route away from near-singular cases
  Rng rng(23);
  int checked = 0;
  for (int k = 0; k < 10000; ++k) {
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
    double scale = std::max(1.0, norm_fro(m));
    if (std::abs(w[2]) < 1e-8 * scale) continue; // tolerance coupling: skip near-singular
    ++checked;
    bool pd_eig = w[2] > 0;
    CHECK(sylvester_pd(m, 0.0) == pd_eig);
  }
  CHECK(checked > 9900);

  // elliptic Levi matrix near the origin must agree between the two routes
  Vec3 q{cx(0.01), cx(0.01), cx(0.0003)};
  Mat3 l = levi_closed_form(ModelKind::Elliptic, q);
  CHECK(sylvester_pd(l, 0.0) == (herm_eigs3(l)[2] > 0));
}

TEST_CASE("positivity scans") {
  ScanOptions opts;
  opts.radius = 0.05;
  opts.gridsize = 4000; // acceptance runs the full grid
  SUBCASE("elliptic: positive definite off the origin") {
    LeviReport rep = positivity_scan(ModelKind::Elliptic, opts);
    CHECK(rep.points_scanned == rep.positive_definite);
    CHECK(rep.violations.empty());
    CHECK(rep.min_margin > 0.0);
  }
  SUBCASE("hyperbolic: at least two positive eigenvalues, positive trace") {
    LeviReport rep = positivity_scan(ModelKind::Hyperbolic, opts);
    CHECK(rep.violations.empty());
    CHECK(rep.positive_definite + rep.two_positive == rep.points_scanned);
    CHECK(rep.min_margin > 0.0);
    CHECK(rep.min_trace > 0.0);
  }
  SUBCASE("scan through the origin reports exactly the origin violation") {
    std::vector<Vec3> pts = {{cx(0), cx(0), cx(0)},
                             {cx(0.01), cx(0), cx(0)},
                             {cx(0), cx(0.01), cx(0.02)}};
    ScanOptions o2;
    o2.origin_tol = 0.0;
    LeviReport rep = positivity_scan_points(ModelKind::Elliptic, pts, o2);
    CHECK(rep.points_scanned == 3);
    CHECK(rep.violations.size() == 1);
    double vn = std::sqrt(std::norm(rep.violations[0].point[0]) +
                          std::norm(rep.violations[0].point[1]) +
                          std::norm(rep.violations[0].point[2]));
    CHECK(vn == 0.0);
  }
  SUBCASE("hyperbolic z2 = u = 0 points carry exactly one zero eigenvalue") {
    for (double r : {0.01, 0.03, 0.05}) {
      Vec3 q{cx(r), cx(0), cx(r * r)};
      auto w = herm_eigs3(levi_closed_form(ModelKind::Hyperbolic, q));
      CHECK(w[1] > 1e-12);
      CHECK(std::abs(w[2]) < 1e-14);
    }
  }
  SUBCASE("radius beyond the local regime is refused") {
    ScanOptions o3;
    o3.radius = 0.5;
    CHECK_THROWS_AS(positivity_scan(ModelKind::Elliptic, o3), error);
  }
}

TEST_CASE("minor identity residual") {
  CHECK(minor_identity_residual({cx(0.3), cx(0), cx(0.09)}) ==
        doctest::Approx(0.0).epsilon(1e-15)); // z2 = 0, u = 0
  // z2 = 0.1, u = 0.02 + 0.01i
  cx z2(0.1);
  cx u(0.02, 0.01);
  cx z1(0.3);
  cx w = u + std::norm(z1) + std::conj(z2) * std::conj(z2);
  CHECK(minor_identity_residual({z1, z2, w}) < 1e-12);

  Rng rng(29);
  double worst = 0;
  for (int k = 0; k < 10000; ++k) {
    cx zz2 = 0.99 * cx(2 * rng.uniform() - 1, 2 * rng.uniform() - 1);
    if (std::abs(zz2) >= 1.0) continue;
    cx uu = cx(rng.normal(), rng.normal());
    cx zz1 = cx(rng.normal(), rng.normal());
    cx ww = uu + std::norm(zz1) + std::conj(zz2) * std::conj(zz2);
    worst = std::max(worst, minor_identity_residual({zz1, zz2, ww}));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("graph_distance and growth bounds") {
  // on the graph the distance vanishes
  cx z1(0.03, 0.01), z2(-0.02, 0.04);
  Vec3 on_graph{z1, z2, std::norm(z1) + std::conj(z2) * std::conj(z2)};
  CHECK(graph_distance(ModelKind::Hyperbolic, on_graph) < 1e-7);

  // straight above the origin the nearest point is essentially the origin
  CHECK(graph_distance(ModelKind::Elliptic, {cx(0), cx(0), cx(0.01)}) ==
        doctest::Approx(0.01).epsilon(1e-4));

  // f / dist^2 tends to 1 on the w-axis for the elliptic model
  for (double w : {1e-3, 1e-4}) {
    double f = model_f(ModelKind::Elliptic, {cx(0), cx(0), cx(w)});
    double d = graph_distance(ModelKind::Elliptic, {cx(0), cx(0), cx(w)});
    CHECK(f / (d * d) == doctest::Approx(1.0).epsilon(1e-3));
  }

  for (ModelKind kind : {ModelKind::Elliptic, ModelKind::Hyperbolic}) {
    GrowthBounds gb = growth_bounds(kind, 0.05, 2000, 1);
    CHECK(gb.c_est > 0.0);
    CHECK(gb.C_est < 1e3);
    CHECK(gb.points_used > 1500);
  }
}

TEST_CASE("halton_ball determinism and containment") {
  auto a = halton_ball(500, 0.05, 0);
  auto b = halton_ball(500, 0.05, 0);
  CHECK(a.size() == 500);
  for (size_t i = 0; i < a.size(); ++i)
    for (int j = 0; j < 3; ++j) CHECK(a[i][j] == b[i][j]);
  for (const auto& q : a)
    CHECK(std::sqrt(std::norm(q[0]) + std::norm(q[1]) + std::norm(q[2])) <= 0.05 + 1e-12);
}
