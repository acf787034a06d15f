#pragma once

// Certified homotopies (A(t), B(t)) from a nondegenerate pair to its sign's
// model pair, staying inside M^+ or M^-: segment catalog with closed-form
// values and derivatives, group-action paths through the connected group
// S^1 x GL(2,C)/Z2, and nondegeneracy certificates from dense det4 sampling.

#include "canon.hpp"
#include "errors.hpp"
#include "pairs.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace crpt::homotopy {

// Smooth compactly supported bump on (0,1) with x(1/2) = eta.
double bump(double t, double eta);
double bump_deriv(double t, double eta);

// The printed determinant polynomials of the connectedness proof.
// det1: pair (diag(1, e^{i phi}), (a,b;b,d)) with a, d real.
double det1_formula(double a, double d, cx b, double phi);
// det2: pair ((0,1;tau,0), (a,b;b,conj a)) with the corrected corner entry.
double det2_formula(double tau, cx a, cx b);

struct PairDeriv {
  Mat2 da, db;
};

struct Segment {
  enum class Kind { Constant, Linear, Group, Catalog };
  Kind kind = Kind::Constant;

  MatrixPair p0, p1; // cached endpoints

  // Linear: interpolates p0 -> p1.

  // Group: t -> act((zeta(t), P(t)), base), P(t) = U(t) ((1-t)I + tH).
  MatrixPair base;
  GroupElement g;
  Mat2 w;                   // unitary eigenbasis of the polar factor U
  double phi1 = 0, phi2 = 0; // eigenphases of U
  Mat2 h_target;             // Hermitian positive definite factor
  double arg_zeta = 0;

  // Catalog: closed-form recipe identified by name.
  std::string name;
  std::map<std::string, double> params;
};

MatrixPair eval_segment(const Segment& s, double u);
PairDeriv deriv_segment(const Segment& s, double u);

Segment constant_segment(const MatrixPair& p);
Segment linear_segment(const MatrixPair& from, const MatrixPair& to);
Segment group_segment(const MatrixPair& base, const GroupElement& g);
// Throws invalid_input for unknown names or out-of-domain parameters.
Segment catalog_segment(const std::string& name, const std::map<std::string, double>& params);

struct Certificate {
  int samples = 0;           // per segment
  double min_abs_det4 = 0.0; // raw determinant scale (parabola-refined)
  double min_abs_det4_normalized = 0.0; // after unit-scale pair normalization
  int sign = 0;              // +1 / -1; 0 when a sign flip or zero was hit
  double max_step = 0.0;     // largest adjacent-sample variation (normalized)
  double margin = 0.0;
  bool pass = false;         // sign constant, normalized minimum above margin
};

struct HomotopyPath {
  std::vector<Segment> segments;
  Certificate certificate;
};

// Global parametrization: equal t-length per segment.
MatrixPair eval_path(const HomotopyPath& path, double t);
PairDeriv path_derivative(const HomotopyPath& path, double t);

// Samples det4 at N Chebyshev-distributed points per segment (endpoints
// included); reports the refined minimum of |det4| on the normalized scale and
// sign constancy. Failure is a reported outcome, not an error.
Certificate verify_nondegenerate(const HomotopyPath& path, int samples, double margin,
                                 int threads = 1);

// Homotopy targets: Hyperbolic -> ((1,0;0,0),(0,0;0,1)), Elliptic -> (0, I).
MatrixPair model_pair(const SignClass& s);
MatrixPair model_pair(SignTag tag);

// Fixed chart identifications between the Theorem-1 / neighborhood-function
// model equations and the homotopy targets, with their witnesses.
MatrixPair theorem_model_i_pair();        // w = |z1|^2 + |z2|^2  -> (I, 0)
MatrixPair theorem_model_ii_pair();       // w = |z1|^2 + conj(z2)^2 -> ((1,0;0,0), diag(0,2))
GroupElement model_ii_to_hyp1_witness();  // maps the latter onto the hyperbolic target
MatrixPair antiholo_elliptic_model_pair(); // w = conj(z1)^2 + conj(z2)^2 -> (0, 2I)
GroupElement antiholo_to_eli2_witness();   // maps it onto (0, I)

// Path from the identity group element to g (polar interpolation); singular P throws.
std::vector<Segment> group_path(const MatrixPair& base, const GroupElement& g);

struct ConnectOptions {
  double tol = 1e-7;        // canon tolerance
  int samples = 512;        // certificate samples per segment
  double margin = 1e-6;     // certificate floor on normalized |det4|
  std::uint64_t seed = 0;
  int max_retries = 32;
  double eta = 0.5;         // bump amplitude
  double perturb_eta = 1e-2;
  int threads = 1;
};

class search_failed : public error {
public:
  search_failed(std::string what, Certificate best)
      : error(errc::verify_failed, "search_failed", std::move(what)), best_certificate(best) {}
  Certificate best_certificate;
};

// Nearby pair that is generic for the canon pipeline (invertible A, defect
// above tol, nonzero B diagonal in canonical coordinates), with ||delta||
// bounded by eta * scale and the sign class preserved. Returns the input
// unchanged when it is already generic.
MatrixPair perturb_generic(const MatrixPair& p, double eta, std::uint64_t seed = 0,
                           double tol = 1e-7);

// Certified path from p to model_pair(sign_class(p)). Throws degenerate for
// degenerate pairs and search_failed with the best certificate when no
// candidate path verifies within opts.max_retries.
HomotopyPath connect_to_model(const MatrixPair& p, const ConnectOptions& opts = {});

} // namespace crpt::homotopy
