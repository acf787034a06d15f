#pragma once

// Fixed-size complex linear algebra used by every other module: 2x2/3x3/4x4
// matrices over std::complex<double>, exact cofactor determinants, quadratic
// roots, 2x2 Takagi and polar factorizations, 3x3 Hermitian spectra.
// Everything is a pure function of its arguments; no global state.
//
// All fractional powers (sqrt in quadratic_roots, the fourth root used by the
// B-reduction) take the principal branch, cut along the negative real axis.

#include <array>
#include <complex>
#include <utility>

namespace crpt::kernel {

using cx = std::complex<double>;

inline constexpr double kAbsFloor = 1e-12; // default absolute tolerance floor

struct Mat2 {
  std::array<cx, 4> m{}; // row-major

  cx& operator()(int i, int j) { return m[2 * i + j]; }
  const cx& operator()(int i, int j) const { return m[2 * i + j]; }

  static Mat2 identity() { return {{cx(1), cx(0), cx(0), cx(1)}}; }
  static Mat2 zero() { return {}; }
  static Mat2 diag(cx a, cx d) { return {{a, cx(0), cx(0), d}}; }
};

struct Mat3 {
  std::array<cx, 9> m{};
  cx& operator()(int i, int j) { return m[3 * i + j]; }
  const cx& operator()(int i, int j) const { return m[3 * i + j]; }
  static Mat3 identity();
};

struct Mat4 {
  std::array<cx, 16> m{};
  cx& operator()(int i, int j) { return m[4 * i + j]; }
  const cx& operator()(int i, int j) const { return m[4 * i + j]; }
};

using Vec2 = std::array<cx, 2>;
using Vec3 = std::array<cx, 3>;

// --- arithmetic ---

Mat2 operator+(const Mat2& a, const Mat2& b);
Mat2 operator-(const Mat2& a, const Mat2& b);
Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator*(cx s, const Mat2& a);
Vec2 operator*(const Mat2& a, const Vec2& v);

Mat2 transpose(const Mat2& a);
Mat2 conjugate(const Mat2& a);
Mat2 adjoint(const Mat2& a); // conjugate transpose
Mat2 inverse(const Mat2& a); // throws on |det| below scale floor

double norm_fro(const Mat2& a);
double norm_fro(const Mat3& a);
double norm2(const Vec2& v);
cx dot(const Vec2& a, const Vec2& b); // conj(a) . b

bool is_finite(const Mat2& a);
bool is_finite(const Mat3& a);

// 4x4 block matrix [[A, conj(B)], [B, conj(A)]] of the sign criterion.
Mat4 block4(const Mat2& a, const Mat2& b);

// --- determinants (exact cofactor expansion; Mat4 doubles as the
// brute-force oracle for the sign classifier) ---

cx det(const Mat2& a);
cx det(const Mat3& a);
cx det(const Mat4& a);

// --- roots of lambda^2 + c1*lambda + c0 (principal branch sqrt) ---

std::pair<cx, cx> quadratic_roots(cx c1, cx c0);

// Eigen pair of a general 2x2: values plus (unnormalized) right eigenvectors.
struct Eig2 {
  cx lambda1, lambda2;
  Vec2 v1, v2;
};
Eig2 eig2(const Mat2& a);

// Hermitian 2x2 eigendecomposition, eigenvalues descending, orthonormal
// eigenvectors as columns of u.
struct HermEig2 {
  std::array<double, 2> w;
  Mat2 u;
};
HermEig2 herm_eig2(const Mat2& a);

// --- Takagi factorization of a complex symmetric 2x2: B = U diag(s) U^T,
// U unitary, s1 >= s2 >= 0. Throws on symmetry violation. ---

struct Takagi2 {
  Mat2 u;
  std::array<double, 2> s;
};
Takagi2 takagi2(const Mat2& b);

// --- polar decomposition P = U H, U unitary, H Hermitian positive definite.
// Throws on singular P. ---

struct Polar2 {
  Mat2 u, h;
};
Polar2 polar2(const Mat2& p);

// --- sorted (descending) real spectrum of a Hermitian 3x3.
// Throws on non-Hermitian input. ---

std::array<double, 3> herm_eigs3(const Mat3& m);

} // namespace crpt::kernel
