#pragma once
/**
 * invariants.hpp
 *
 * Holomorphic invariants of a Fano Delzant polytope, all exact:
 *
 *   - greatest Ricci lower bound R(X) from the barycenter P_c of P via
 *     s* = 1 / max_j <v_j, P_c>,  R = s* / (1 + s*), with R = 1 when P_c = 0;
 *   - the deformation path tau(alpha) = -(alpha/(1-alpha)) P_c and the
 *     boundary point Q = -s* P_c it reaches at alpha = R;
 *   - conical angles beta_j(alpha) = alpha * l_j(P_c) along the toric
 *     divisors, tied to the path by (1-alpha) l_j(tau(alpha)) = 1 - beta_j;
 *   - the limiting divisor with coefficients l_j(tau(R)) and the
 *     effectiveness window [0, R].
 */

#include "torickit/polytope.hpp"

namespace torickit {

struct RIsOne : Error { using Error::Error; };

struct FanoReport {
  RatVec barycenter;              // P_c
  Rat sStar = 0;                  // 1 / max_j <v_j, P_c>;  unused when P_c = 0
  Rat R = 1;                      // greatest Ricci lower bound
  RatVec Q;                       // -s* P_c, the boundary point; zero when P_c = 0
  std::vector<int> argminFacets;  // facets attaining the max; empty when P_c = 0

  bool barycenter_is_zero() const { return argminFacets.empty(); }
};

struct ToricDivisorClass {
  RatVec coeffs;    // coefficient along each facet divisor, in facet order
  bool effective = false;
};

struct ConeAngles {
  Rat alpha;
  RatVec betas;     // beta_j in facet order

  bool all_in_unit_range() const {
    for (const auto& b : betas)
      if (b <= 0 || b > 1) return false;
    return true;
  }
};

inline bool is_zero_vec(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& c) { return c == 0; });
}

inline FanoReport greatest_ricci_lower_bound(const FanoPolytope& P) {
  FanoReport rep;
  rep.barycenter = P.barycenter;
  rep.Q = RatVec(P.dim(), 0);
  if (is_zero_vec(P.barycenter)) return rep;  // R = 1, no distinguished facet

  // The ray { -s P_c : s >= 0 } leaves P through the facets maximizing
  // <v_j, P_c>; boundedness guarantees the maximum is positive.
  Rat best = 0;
  for (int j = 0; j < P.facets.num_facets(); ++j) {
    const Rat t = dot(P.facets.normals[j], P.barycenter);
    if (t > best) best = t;
  }
  if (best <= 0)
    throw InternalInconsistency("nonzero barycenter but no positive pairing");
  for (int j = 0; j < P.facets.num_facets(); ++j)
    if (dot(P.facets.normals[j], P.barycenter) == best)
      rep.argminFacets.push_back(j);
  rep.sStar = 1 / best;
  rep.R = rep.sStar / (1 + rep.sStar);
  for (int c = 0; c < P.dim(); ++c) rep.Q[c] = -rep.sStar * P.barycenter[c];
  return rep;
}

/// tau(alpha) = -(alpha/(1-alpha)) P_c.  Defined for 0 <= alpha < 1, and for
/// alpha = 1 exactly when P_c = 0 (the path is constant at the origin).
inline RatVec tau_of_alpha(const FanoReport& rep, const Rat& alpha) {
  const int n = static_cast<int>(rep.barycenter.size());
  if (alpha < 0 || alpha > 1)
    throw AlphaOutOfRange("alpha = " + rat_str(alpha) + " outside [0, 1]");
  if (alpha == 1) {
    if (!rep.barycenter_is_zero())
      throw AlphaOutOfRange("alpha = 1 requires a vanishing barycenter");
    return RatVec(n, 0);
  }
  const Rat f = alpha / (1 - alpha);
  RatVec tau(n);
  for (int c = 0; c < n; ++c) tau[c] = -f * rep.barycenter[c];
  return tau;
}

/// Divisor with coefficients l_j(tau); effective iff tau lies in closure(P).
inline ToricDivisorClass divisor_of_point(const FanoPolytope& P, const RatVec& tau) {
  ToricDivisorClass D;
  D.effective = true;
  for (int j = 0; j < P.facets.num_facets(); ++j) {
    D.coeffs.push_back(P.facets.l(j, tau));
    if (D.coeffs.back() < 0) D.effective = false;
  }
  return D;
}

inline ConeAngles cone_angles(const FanoPolytope& P, const FanoReport& rep,
                              const Rat& alpha) {
  if (alpha < 0 || alpha > 1)
    throw AlphaOutOfRange("alpha = " + rat_str(alpha) + " outside [0, 1]");
  ConeAngles ca;
  ca.alpha = alpha;
  for (int j = 0; j < P.facets.num_facets(); ++j)
    ca.betas.push_back(alpha * P.facets.l(j, rep.barycenter));
  return ca;
}

/// Coefficients (1 - beta_j(R)) / (1 - R) = l_j(tau(R)) of the divisor the
/// deformation degenerates onto.  Undefined when R = 1.
inline ToricDivisorClass limiting_divisor(const FanoPolytope& P,
                                          const FanoReport& rep) {
  if (rep.R == 1)
    throw RIsOne("R = 1: the deformation path stays at the origin");
  auto D = divisor_of_point(P, tau_of_alpha(rep, rep.R));
  if (!D.effective)
    throw InternalInconsistency("limiting divisor must be effective");
  return D;
}

struct EffectivenessWindow {
  Rat lo, hi;   // [0, R]
};

/// The divisor of tau(alpha) is effective exactly for alpha in [0, R]; the
/// endpoints are re-verified directly against the facet inequalities.
inline EffectivenessWindow effectiveness_window(const FanoPolytope& P,
                                                const FanoReport& rep) {
  EffectivenessWindow w{0, rep.R};
  if (!divisor_of_point(P, tau_of_alpha(rep, rep.R)).effective)
    throw InternalInconsistency("divisor at alpha = R is not effective");
  if (rep.R < 1) {
    const Rat eps = std::min(Rat((1 - rep.R) / 2), Rat(1) / 100);
    if (divisor_of_point(P, tau_of_alpha(rep, rep.R + eps)).effective)
      throw InternalInconsistency("divisor just above R is still effective");
  }
  return w;
}

}  // namespace torickit
