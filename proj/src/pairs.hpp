#pragma once

// The (A,B) quadratic-model pair, the h-congruence group action of
// S^1 x GL(2,C)/Z2, and the elliptic/hyperbolic sign classifier given by the
// determinant of [[A, conj(B)], [B, conj(A)]].

#include "kernel.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace crpt {

using kernel::cx;
using kernel::Mat2;

struct MatrixPair {
  Mat2 a; // arbitrary complex 2x2
  Mat2 b; // complex symmetric 2x2
};

// Validates finiteness and B-symmetry (||B - B^T|| < 1e-12 (1+||B||)),
// then symmetrizes B exactly. Throws invalid_input on violation.
MatrixPair make_pair(const Mat2& a, const Mat2& b);

// (zeta, P) with |zeta| = 1, P invertible, modulo P ~ -P.
struct GroupElement {
  cx zeta{1.0, 0.0};
  Mat2 p = Mat2::identity();
};

GroupElement make_group_element(cx zeta, const Mat2& p);

// Left-action composition: act(compose(g2, g1), p) == act(g2, act(g1, p)),
// i.e. compose((z2,P2),(z1,P1)) = (z2 z1, P1 P2).
GroupElement compose(const GroupElement& g2, const GroupElement& g1);

// (zeta, P)(A, B) = (zeta P*AP, conj(zeta) P^T B P); resymmetrizes B against
// roundoff. Throws on singular P.
MatrixPair act(const GroupElement& g, const MatrixPair& p);

enum class SignTag { Elliptic, Hyperbolic, Degenerate };

struct SignClass {
  SignTag tag = SignTag::Degenerate;
  double det4 = 0.0;            // raw determinant
  double det4_normalized = 0.0; // after dividing A, B by max(||A||,||B||)
};

// Real part of det [[A, conj B],[B, conj A]]; the imaginary part is asserted
// below 1e-10 (1+||A||+||B||)^4 and discarded.
double det4(const MatrixPair& p);

// det4 of the pair scaled by 1/max(||A||_F, ||B||_F, 1e-300).
double det4_normalized(const MatrixPair& p);

// Classification happens on the normalized determinant against
// tol * (1 + ||An|| + ||Bn||)^4; Degenerate is a value, not an error.
SignClass sign_class(const MatrixPair& p, double tol = 1e-12);

// I = e - h. Throws degenerate if any entry is Degenerate.
int lai_index(const std::vector<SignClass>& classes);

// Deterministic generators; mt19937_64 streams are fully specified by the
// standard, so fixtures are portable.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform();             // [0, 1)
  double normal();              // Box-Muller, deterministic
  cx complex_normal();

private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

MatrixPair random_pair(std::uint64_t seed, double scale);
MatrixPair random_pair(Rng& rng, double scale);
GroupElement random_group_element(std::uint64_t seed);
GroupElement random_group_element(Rng& rng);

} // namespace crpt
