#pragma once
/**
 * Uniform tensor grids on the box [-B, B]^n (n = 1 or 2) and potential
 * values sampled on them.
 *
 * The discrete Hessian is the classical centered stencil: second
 * differences on the axes, the four-corner centered cross difference for
 * the mixed term.
 *
 * Node values are stored wide.  Near the box corners the density
 * det(D^2 phi) = e^{-alpha phi} decays like the squared facet values, so
 * the smallest Hessian eigenvalue reaches ~1e-10 while phi itself is ~30.
 * The log-det residual a solver can pin at such a node is bounded by the
 * value-storage granularity: one ulp of phi moves log det there by
 * ~ (4 ulp(phi) / h^2) / lambda_min, which is ~1e-2 for double and ~1e-6
 * for the x86 long double — both above the tolerances we target.  With
 * quad storage the bound drops to ~1e-20 and Newton converges to the
 * tolerance the evaluation deserves.  Only +, -, * and comparisons run in
 * quad; logs and everything downstream narrow first, which costs nothing
 * (the narrowing error is relative, not amplified by 1/lambda_min).
 */

#include <array>
#include <cmath>
#include <vector>

#include "torickit/guillemin.hpp"

namespace torickit {

#if defined(__SIZEOF_FLOAT128__)
using wide_real = __float128;
#else
using wide_real = long double;
#endif

struct RhoGrid {
  int n = 0;      // 1 or 2
  int M = 0;      // nodes per axis, odd so the origin is a node
  double B = 0;   // half-width of the box
  double h = 0;   // spacing, 2B / (M - 1)

  static RhoGrid make(int n, int M, double B) {
    if (n != 1 && n != 2)
      throw ValidationError("grid dimension must be 1 or 2");
    if (M < 9 || M % 2 == 0)
      throw ValidationError("grid needs an odd node count >= 9 per axis");
    if (!(B > 0)) throw ValidationError("box half-width must be positive");
    RhoGrid g;
    g.n = n;
    g.M = M;
    g.B = B;
    g.h = 2.0 * B / (M - 1);
    return g;
  }

  long num_nodes() const { return n == 1 ? M : static_cast<long>(M) * M; }
  long num_interior() const {
    const long m = M - 2;
    return n == 1 ? m : m * m;
  }
  double coord(int i) const { return -B + h * i; }
  long index(int i, int j = 0) const {
    return n == 1 ? i : static_cast<long>(i) * M + j;
  }
  bool interior(int i, int j = 0) const {
    if (i < 1 || i > M - 2) return false;
    return n == 1 || (j >= 1 && j <= M - 2);
  }
  Vec rho(int i, int j = 0) const {
    Vec r(n);
    r[0] = coord(i);
    if (n == 2) r[1] = coord(j);
    return r;
  }
};

struct PotentialGrid {
  RhoGrid grid;
  std::vector<wide_real> values;   // row-major, values[grid.index(i,j)]

  static PotentialGrid zeros(const RhoGrid& g) {
    PotentialGrid p;
    p.grid = g;
    p.values.assign(static_cast<size_t>(g.num_nodes()), wide_real(0));
    return p;
  }

  wide_real& at(int i, int j = 0) { return values[grid.index(i, j)]; }
  wide_real at(int i, int j = 0) const { return values[grid.index(i, j)]; }

  /// {d_xx, d_yy, d_xy} at an interior node (d_yy = d_xy = 0 in one
  /// dimension).
  std::array<wide_real, 3> hess_components(int i, int j = 0) const {
    const wide_real h2 = wide_real(grid.h) * wide_real(grid.h);
    std::array<wide_real, 3> H{wide_real(0), wide_real(0), wide_real(0)};
    auto V = [&](int a, int b) -> wide_real {
      return values[grid.index(a, b)];
    };
    if (grid.n == 1) {
      H[0] = (V(i - 1, 0) - wide_real(2) * V(i, 0) + V(i + 1, 0)) / h2;
      return H;
    }
    H[0] = (V(i - 1, j) - wide_real(2) * V(i, j) + V(i + 1, j)) / h2;
    H[1] = (V(i, j - 1) - wide_real(2) * V(i, j) + V(i, j + 1)) / h2;
    H[2] = (V(i + 1, j + 1) + V(i - 1, j - 1) - V(i + 1, j - 1) -
            V(i - 1, j + 1)) /
           (wide_real(4) * h2);
    return H;
  }

  wide_real det_hess(int i, int j = 0) const {
    const auto H = hess_components(i, j);
    return grid.n == 1 ? H[0] : H[0] * H[1] - H[2] * H[2];
  }

  /// Smallest eigenvalue of the discrete Hessian (the component itself in
  /// one dimension).  Long double is enough here: the eigenvalue emerges
  /// from the trace and discriminant at the scale of the larger
  /// eigenvalue, so the narrowing error is ~ulp(lambda_max).
  double min_eig_hess(int i, int j = 0) const {
    const auto H = hess_components(i, j);
    if (grid.n == 1) return static_cast<double>(H[0]);
    const long double a = static_cast<long double>(H[0]);
    const long double b = static_cast<long double>(H[1]);
    const long double c = static_cast<long double>(H[2]);
    const long double tr = a + b;
    const long double disc = (a - b) * (a - b) + 4.0L * c * c;
    return static_cast<double>((tr - std::sqrt(disc)) / 2.0L);
  }

  /// Centered first differences at an interior node.
  Vec grad(int i, int j = 0) const {
    Vec g(grid.n);
    const double th = 2.0 * grid.h;
    if (grid.n == 1) {
      g[0] = static_cast<double>(at(i + 1) - at(i - 1)) / th;
      return g;
    }
    g[0] = static_cast<double>(at(i + 1, j) - at(i - 1, j)) / th;
    g[1] = static_cast<double>(at(i, j + 1) - at(i, j - 1)) / th;
    return g;
  }

  /// Discrete convexity: positive-definite Hessian at every interior node.
  bool convex_interior() const {
    for (int i = 1; i <= grid.M - 2; ++i) {
      if (grid.n == 1) {
        if (!(hess_components(i)[0] > 0)) return false;
        continue;
      }
      for (int j = 1; j <= grid.M - 2; ++j) {
        const auto H = hess_components(i, j);
        if (!(H[0] > 0 && H[0] * H[1] - H[2] * H[2] > 0)) return false;
      }
    }
    return true;
  }
};

/**
 * Composite-Simpson quadrature weight over the interior sub-grid
 * (nodes 1 .. M-2; an odd count, so Simpson applies cleanly).  Used by the
 * mass and barycenter diagnostics, where the integrand decays toward the
 * boundary and the excluded one-cell ring is part of the reported
 * truncation bias.
 */
inline double simpson_weight_1d(const RhoGrid& g, int i) {
  const int p = i - 1;            // position within the interior range
  const int last = g.M - 3;
  double w;
  if (p == 0 || p == last) w = 1.0;
  else if (p % 2 == 1) w = 4.0;
  else w = 2.0;
  return w * g.h / 3.0;
}

inline double quad_weight(const RhoGrid& g, int i, int j = 0) {
  return g.n == 1 ? simpson_weight_1d(g, i)
                  : simpson_weight_1d(g, i) * simpson_weight_1d(g, j);
}

}  // namespace torickit
