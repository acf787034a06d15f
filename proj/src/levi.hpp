#pragma once

// Neighborhood functions of the two model complex points and the numerical
// 2-completeness evidence: closed-form 3x3 Levi matrices, a finite-difference
// oracle, Sylvester positivity, low-discrepancy positivity scans, the printed
// minor-determinant identity and the growth-bound estimates.

#include "kernel.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace crpt::levi {

using kernel::cx;
using kernel::Mat3;
using kernel::Vec3;

enum class ModelKind {
  Elliptic,   // f = (1+|z|^2)   |w - conj(z1)^2 - conj(z2)^2|^2
  Hyperbolic, // f = (1+|z2|^2) |w - |z1|^2    - conj(z2)^2|^2
};

double model_f(ModelKind kind, const Vec3& point);

// FD Levi form of an arbitrary real function (test hook for e.g. |.|^2).
Mat3 levi_fd_of(const std::function<double(const Vec3&)>& f, const Vec3& point, double h);

// Entry-by-entry evaluation of the displayed Levi matrices (the hyperbolic
// (1,1) entry carries the (1+|z2|^2) factor on both terms, which is what the
// finite-difference oracle confirms).
Mat3 levi_closed_form(ModelKind kind, const Vec3& point);

// Mixed Wirtinger second differences, symmetrized; O(h^2) accurate.
Mat3 levi_fd(ModelKind kind, const Vec3& point, double h = 1e-4);

// true iff all three leading principal minors exceed tol. Throws on
// non-Hermitian input.
bool sylvester_pd(const Mat3& m, double tol);

struct Violation {
  Vec3 point;
  double margin; // the failed quantity (smallest relevant eigenvalue / minor)
};

struct LeviReport {
  int points_scanned = 0;
  int positive_definite = 0;
  int two_positive = 0; // at least two eigenvalues above tol, not PD
  std::vector<Violation> violations;
  double min_margin = 0;   // smallest relevant eigenvalue seen off the origin
  double min_trace = 0;    // hyperbolic trace claim support
  std::vector<std::array<double, 3>> spectra; // populated when keep_spectra
  bool keep_spectra = false;
};

struct ScanOptions {
  double radius = 0.05;
  int gridsize = 20000;      // accepted low-discrepancy points in the ball
  double origin_tol = 1e-6;  // excluded ball around the origin
  double eig_tol = 1e-12;    // strict-positivity threshold
  std::uint64_t seed = 0;
  int threads = 1;
  bool keep_spectra = false;
};

// Elliptic: expects positive definiteness everywhere sampled; hyperbolic:
// expects at least two eigenvalues above eig_tol everywhere sampled.
LeviReport positivity_scan(ModelKind kind, const ScanOptions& opts);

// Same checks over a caller-supplied point list (directed tests).
LeviReport positivity_scan_points(ModelKind kind, const std::vector<Vec3>& pts,
                                  const ScanOptions& opts);

// |direct minor determinant - printed rearranged sum| at the point's (z2, u).
double minor_identity_residual(const Vec3& point);

struct GrowthBounds {
  double c_est = 0;
  double C_est = 0;
  int points_used = 0;
  int points_skipped = 0; // on Y (dist ~ 0) or minimization failures
};

GrowthBounds growth_bounds(ModelKind kind, double radius, int gridsize,
                           std::uint64_t seed = 0, int threads = 1);

// dist(q, Y) by local minimization over the graph coordinate, seeded at q's
// z-coordinates. Exposed for tests.
double graph_distance(ModelKind kind, const Vec3& q);

// Halton points in the centered unit ball of R^6 mapped to C^3 (test hook).
std::vector<Vec3> halton_ball(int count, double radius, std::uint64_t seed);

} // namespace crpt::levi
