#pragma once

// Test-only oracles, kept independent of the implementation paths they check.

#include "kernel.hpp"
#include "pairs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace oracles {

using crpt::kernel::cx;
using crpt::kernel::Mat2;
using crpt::kernel::Mat4;

// Leibniz determinant: signed sum over all 24 permutations. Independent of
// the library's cofactor expansion.
inline cx det4_leibniz(const Mat4& m) {
  std::array<int, 4> perm{0, 1, 2, 3};
  cx total = 0;
  do {
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (perm[i] > perm[j]) ++inversions;
    cx prod = 1;
    for (int i = 0; i < 4; ++i) prod *= m(i, perm[i]);
    total += (inversions % 2 == 0) ? prod : -prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline cx det4_pair_leibniz(const crpt::MatrixPair& p) {
  return det4_leibniz(crpt::kernel::block4(p.a, p.b));
}

// 1-D golden-section minimizer for smooth unimodal restriction scans; used as
// the independent oracle for certificate minima (scan + refine).
inline double min_scan_1d(const std::function<double(double)>& f, double lo, double hi,
                          int coarse = 4096) {
  double best = f(lo);
  double best_t = lo;
  for (int i = 1; i <= coarse; ++i) {
    double t = lo + (hi - lo) * i / coarse;
    double v = f(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  double a = std::max(lo, best_t - (hi - lo) / coarse);
  double b = std::min(hi, best_t + (hi - lo) / coarse);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  for (int it = 0; it < 200; ++it) {
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - gr * (b - a);
    d = a + gr * (b - a);
  }
  return std::min({best, f(0.5 * (a + b)), f(a), f(b)});
}

} // namespace oracles
