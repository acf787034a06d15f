#pragma once

// *-cosquare classification and h-congruence normal forms with explicit
// witness group elements: A reduces to diag(1, e^{i theta}) (0 < theta < pi)
// or to (0,1; mu,0) (0 < mu < 1) in the generic strata, and the stabilizer of
// each canonical A is then used to normalize B.

#include "pairs.hpp"

namespace crpt::canon {

struct CosquareClass {
  enum class Tag {
    TypeI,            // two distinct unimodular cosquare eigenvalues
    TypeII,           // defective unimodular double eigenvalue
    TypeIII,          // eigenvalues {mu', 1/conj(mu')} off the circle
    BoundaryThetaZero,
    BoundaryThetaPi,
    NearBoundary,     // within tol of the genericity variety, not resolved
  };
  Tag tag = Tag::NearBoundary;
  double theta = 0.0;  // TypeI, in (0, pi)
  double mu = 0.0;     // TypeIII, in (0, 1)
  double defect = 0.0; // NearBoundary: | t - 2 |
};

struct NormalForm {
  CosquareClass cls;
  Mat2 canonical_a;           // the exact canonical matrix achieved
  Mat2 b_reduced;
  GroupElement witness;       // act(witness, input) == (canonical_a, b_reduced)
  bool degenerate_warning = false; // input pair classified Degenerate
};

// A^{-*} A. Throws degenerate on singular A.
Mat2 cosquare(const Mat2& a);

// | |a conj(d) + conj(a) d - |c|^2 - |b|^2| - 2|ad - bc| |, zero exactly on
// the codimension-1 variety separating TypeI from TypeIII.
double genericity_defect(const Mat2& a);

CosquareClass classify_cosquare(const Mat2& a, double tol = 1e-7);

// Witness g with (g.A-part applied to A) equal to the canonical form of the
// class. Throws non-generic for TypeII / boundary / near-boundary classes.
std::pair<CosquareClass, GroupElement> canonical_A(const Mat2& a, double tol = 1e-7);

// p.a must already equal a canonical form within 1e-8; normalizes B with the
// stabilizer of that form. Throws non-generic when a diagonal entry of B is
// below tol * ||B||.
NormalForm reduce_B(const MatrixPair& p, double tol = 1e-7);

// classify -> canonical_A -> reduce_B with composed witness; checks the
// reconstruction invariant before returning.
NormalForm normal_form(const MatrixPair& p, double tol = 1e-7);

} // namespace crpt::canon
