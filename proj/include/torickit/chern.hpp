#pragma once
/**
 * chern.hpp
 *
 * Chern-number data of the smooth toric variety attached to a Fano Delzant
 * polytope, plus the conical (log) corrections used alongside the angle
 * deformation:
 *
 *   c1^n          = n! vol(P)
 *   c2 . c1^{n-2} = sum of lattice-normalized volumes of codim-2 faces
 *   euler         = number of vertices (torus fixed points)
 *
 * and for surfaces the full toric intersection matrix, recovered from the
 * fan: consecutive rays u_{i-1}, u_{i+1} satisfy u_{i-1} + u_{i+1} = -D_i^2 u_i.
 */

#include "torickit/invariants.hpp"

namespace torickit {

// --------------------------------------------------------- chern numbers ----

struct ChernData {
  int n = 0;
  Rat c1n;                 // c1^n
  Rat c2c1;                // c2 . c1^{n-2}; zero for n = 1 (no codim-2 faces)
  long euler = 0;          // topological Euler characteristic
  bool hasSigma = false;   // surfaces only
  Rat sigma;               // (c1^2 - 2 c2) / 3
  RatVec codim2Volumes;    // per codim-2 face, in enumeration order
};

inline ChernData toric_chern_numbers(const FanoPolytope& P) {
  ChernData cd;
  cd.n = P.dim();
  Rat fact = 1;
  for (int i = 2; i <= cd.n; ++i) fact *= i;
  cd.c1n = fact * P.volume;
  cd.euler = P.verts.num_vertices();
  cd.c2c1 = 0;
  if (cd.n >= 2) {
    for (const auto& f : faces_of_codim(P.facets, P.verts, 2)) {
      cd.codim2Volumes.push_back(normalized_face_volume(P.facets, P.verts, f));
      cd.c2c1 += cd.codim2Volumes.back();
    }
  }
  if (cd.n == 2) {
    cd.hasSigma = true;
    cd.sigma = (cd.c1n - 2 * cd.c2c1) / 3;
    if (cd.c2c1 != cd.euler)
      throw InternalInconsistency("surface euler number mismatch");
  }
  return cd;
}

// ------------------------------------------------- surface intersections ----

struct SurfaceIntersection {
  std::vector<int> order;            // facet indices in counterclockwise ray order
  std::vector<std::int64_t> selfInt; // D_j . D_j, in facet order
  RatMat matrix;                     // full pairing, facet order

  Rat pair(const RatVec& a, const RatVec& b) const {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) s += a[i] * matrix[i][j] * b[j];
    return s;
  }
  /// D . c1 = sum_j a_j (2 + D_j^2), by adjunction on each toric curve.
  Rat degree_c1(const RatVec& a) const {
    Rat s = 0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * (2 + selfInt[j]);
    return s;
  }
  /// chi(D) = -D.(D + K) = D.c1 - D.D for a smooth member.
  Rat adjunction_chi(const RatVec& a) const { return degree_c1(a) - pair(a, a); }
};

inline SurfaceIntersection surface_intersection_matrix(const FanoPolytope& P) {
  if (P.dim() != 2)
    throw ValidationError("intersection matrix requires a surface");
  const int N = P.facets.num_facets();
  SurfaceIntersection si;
  si.order.resize(N);
  for (int j = 0; j < N; ++j) si.order[j] = j;
  AngularLess less;
  std::sort(si.order.begin(), si.order.end(), [&](int a, int b) {
    return less({Rat(P.facets.normals[a][0]), Rat(P.facets.normals[a][1])},
                {Rat(P.facets.normals[b][0]), Rat(P.facets.normals[b][1])});
  });

  si.selfInt.assign(N, 0);
  si.matrix.assign(N, RatVec(N, 0));
  for (int k = 0; k < N; ++k) {
    const int i = si.order[k];
    const IVec& u = P.facets.normals[i];
    const IVec& up = P.facets.normals[si.order[(k + N - 1) % N]];
    const IVec& un = P.facets.normals[si.order[(k + 1) % N]];
    if (up[0] * u[1] - up[1] * u[0] != 1 || u[0] * un[1] - u[1] * un[0] != 1)
      throw InternalInconsistency("fan is not smooth and complete in order");
    // u_{k-1} + u_{k+1} = a u_k with a = -D^2, read off a nonzero component.
    const std::int64_t sx = up[0] + un[0], sy = up[1] + un[1];
    std::int64_t a;
    if (u[0] != 0) {
      if (sx % u[0] != 0) throw InternalInconsistency("ray relation not integral");
      a = sx / u[0];
    } else {
      if (sy % u[1] != 0) throw InternalInconsistency("ray relation not integral");
      a = sy / u[1];
    }
    if (a * u[0] != sx || a * u[1] != sy)
      throw InternalInconsistency("ray relation violated");
    si.selfInt[i] = -a;
    si.matrix[i][i] = Rat(-a);
    si.matrix[i][si.order[(k + 1) % N]] = 1;
    si.matrix[si.order[(k + 1) % N]][i] = 1;
  }
  // Row identity: (-K) . D_i = 2 + D_i^2.
  for (int i = 0; i < N; ++i) {
    Rat row = 0;
    for (int j = 0; j < N; ++j) row += si.matrix[i][j];
    if (row != 2 + si.selfInt[i])
      throw InternalInconsistency("anticanonical row identity failed");
  }
  return si;
}

// ------------------------------------------------------- conical shifts ----

struct ConicalChernShift {
  Rat beta;
  Rat Dc1, D2;        // degree data of the divisor being given the cone angle
  Rat c1_shift;       // (c1 - (1-beta) D) . c1
  Rat c2_shift;       // orbifold Euler number c2 - (1-beta) chi(D)
  Rat c1sq_shift;     // (c1 - (1-beta) D)^2
  bool extrapolated;  // true when beta <= 1/2, outside the proven angle range
};

/// Shift for an arbitrary smooth divisor with given D.c1 and D^2 (surfaces);
/// chi(D) is taken from adjunction.
inline ConicalChernShift conical_chern_shift(const ChernData& cd, const Rat& beta,
                                             const Rat& Dc1, const Rat& D2) {
  if (cd.n != 2)
    throw ValidationError("conical shift data requires a surface");
  if (beta <= 0 || beta > 1)
    throw AlphaOutOfRange("cone angle beta = " + rat_str(beta) + " outside (0, 1]");
  ConicalChernShift s;
  s.beta = beta;
  s.Dc1 = Dc1;
  s.D2 = D2;
  const Rat om = 1 - beta;
  const Rat chiD = Dc1 - D2;
  s.c1_shift = cd.c1n - om * Dc1;
  s.c2_shift = cd.c2c1 - om * chiD;
  s.c1sq_shift = cd.c1n - 2 * om * Dc1 + om * om * D2;
  s.extrapolated = beta <= Rat(1) / 2;
  return s;
}

/// Convenience form for D a smooth member of |-m K|: D.c1 = m c1^2, D^2 = m^2 c1^2.
inline ConicalChernShift conical_chern_shift(const ChernData& cd, const Rat& beta,
                                             int m) {
  if (m < 1) throw ValidationError("anticanonical multiple m must be >= 1");
  return conical_chern_shift(cd, beta, Rat(m) * cd.c1n, Rat(m) * m * cd.c1n);
}

// -------------------------------------------------- inequality / euler ----

struct MiyaokaYauCheck {
  bool holds = false;
  bool equality = false;
  Rat lhs, rhs;        // c2 . c1^{n-2}  vs  n beta^2 / (2(n+1)) . c1^n
  Rat betaMaxSq;       // exact square of the largest admissible angle (capped at 1)
  double betaMax = 0;
};

inline MiyaokaYauCheck miyaoka_yau_check(const ChernData& cd, const Rat& beta) {
  if (cd.n < 2)
    throw ValidationError("inequality check requires n >= 2");
  if (beta <= 0 || beta > 1)
    throw AlphaOutOfRange("cone angle beta = " + rat_str(beta) + " outside (0, 1]");
  MiyaokaYauCheck my;
  my.lhs = cd.c2c1;
  my.rhs = Rat(cd.n) * beta * beta / (2 * (cd.n + 1)) * cd.c1n;
  my.holds = my.lhs >= my.rhs;
  my.equality = my.lhs == my.rhs;
  my.betaMaxSq = std::min(Rat(1), Rat(2 * (cd.n + 1)) * cd.c2c1 / (Rat(cd.n) * cd.c1n));
  my.betaMax = std::sqrt(to_double(my.betaMaxSq));
  return my;
}

/// Global conical Euler characteristic and signature of (X, (1-beta) D):
/// chi_g = chi - (1-beta) chi(D),  sigma_g = sigma - (1 - beta^2) D^2 / 3.
struct ConicalEulerSignature {
  Rat chi_g, sigma_g;
};

inline ConicalEulerSignature conical_euler_signature(const Rat& chiX,
                                                     const Rat& sigmaX,
                                                     const Rat& chiD, const Rat& D2,
                                                     const Rat& beta) {
  if (beta <= 0 || beta > 1)
    throw AlphaOutOfRange("cone angle beta = " + rat_str(beta) + " outside (0, 1]");
  ConicalEulerSignature out;
  out.chi_g = chiX - (1 - beta) * chiD;
  out.sigma_g = sigmaX - (1 - beta * beta) * D2 / 3;
  return out;
}

}  // namespace torickit
