#pragma once
/**
 * Independent cross-checks for the unit tests: Monte-Carlo volume/barycenter
 * estimates, a lattice-point vertex scan, and planar convex-hull facet
 * reconstruction.  These deliberately use different methods (sampling,
 * double-precision angles) from the library so that agreement with the exact
 * code is evidence, not a tautology.
 */

#include "torickit/polytope.hpp"

#include <cmath>
#include <random>

namespace oracles {

using torickit::FacetPresentation;
using torickit::IVec;
using torickit::Rat;
using torickit::RatVec;
using torickit::VertexSet;

struct MCEstimate {
  double volume = 0, volumeSigma = 0;
  std::vector<double> barycenter;
};

inline MCEstimate mc_volume_barycenter(const FacetPresentation& fp,
                                       const VertexSet& vs, int samples,
                                       unsigned seed) {
  const int n = fp.n;
  std::vector<double> lo(n, 1e300), hi(n, -1e300);
  for (const auto& w : vs.coords)
    for (int c = 0; c < n; ++c) {
      const double x = torickit::to_double(w[c]);
      lo[c] = std::min(lo[c], x);
      hi[c] = std::max(hi[c], x);
    }
  double boxVol = 1;
  for (int c = 0; c < n; ++c) boxVol *= hi[c] - lo[c];

  std::vector<std::vector<double>> vn;
  std::vector<double> voff;
  for (int j = 0; j < fp.num_facets(); ++j) {
    vn.emplace_back(fp.normals[j].begin(), fp.normals[j].end());
    voff.push_back(torickit::to_double(fp.offsets[j]));
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  long hits = 0;
  std::vector<double> sums(n, 0.0), x(n);
  for (int s = 0; s < samples; ++s) {
    for (int c = 0; c < n; ++c) x[c] = lo[c] + U(rng) * (hi[c] - lo[c]);
    bool inside = true;
    for (std::size_t j = 0; j < vn.size() && inside; ++j) {
      double l = voff[j];
      for (int c = 0; c < n; ++c) l += vn[j][c] * x[c];
      inside = l >= 0;
    }
    if (inside) {
      ++hits;
      for (int c = 0; c < n; ++c) sums[c] += x[c];
    }
  }
  MCEstimate out;
  const double p = double(hits) / samples;
  out.volume = p * boxVol;
  out.volumeSigma = boxVol * std::sqrt(p * (1 - p) / samples);
  out.barycenter.resize(n);
  for (int c = 0; c < n; ++c) out.barycenter[c] = sums[c] / std::max(1L, hits);
  return out;
}

/// Scan an integer box for feasible points whose active normals span R^n.
/// For polytopes with lattice vertices this enumerates exactly the vertex set
/// without going through the library's subset solver.
inline std::vector<RatVec> lattice_vertex_scan(const FacetPresentation& fp,
                                               int range) {
  const int n = fp.n;
  std::vector<RatVec> out;
  std::vector<int> p(n, -range);
  for (;;) {
    RatVec x(p.begin(), p.end());
    bool feasible = true;
    std::vector<torickit::IVec> act;
    for (int j = 0; j < fp.num_facets() && feasible; ++j) {
      const Rat l = fp.l(j, x);
      if (l < 0) feasible = false;
      else if (l == 0) act.push_back(fp.normals[j]);
    }
    if (feasible && torickit::rank_i(act) == n) out.push_back(x);
    int c = 0;
    while (c < n && p[c] == range) p[c++] = -range;
    if (c == n) break;
    ++p[c];
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Reconstruct the inward facet data (primitive normal, offset) of a full-
/// dimensional planar polytope from its vertex list alone, via a convex hull
/// walked in double-precision angle order.
inline std::vector<std::pair<IVec, Rat>> hull_facets_2d(
    const std::vector<RatVec>& verts) {
  const std::size_t m = verts.size();
  double cx = 0, cy = 0;
  for (const auto& w : verts) {
    cx += torickit::to_double(w[0]);
    cy += torickit::to_double(w[1]);
  }
  cx /= double(m);
  cy /= double(m);
  std::vector<int> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = int(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::atan2(torickit::to_double(verts[a][1]) - cy,
                      torickit::to_double(verts[a][0]) - cx) <
           std::atan2(torickit::to_double(verts[b][1]) - cy,
                      torickit::to_double(verts[b][0]) - cx);
  });
  RatVec cent(2, 0);
  for (const auto& w : verts) {
    cent[0] += w[0];
    cent[1] += w[1];
  }
  cent[0] /= int(m);
  cent[1] /= int(m);
  std::vector<std::pair<IVec, Rat>> facets;
  for (std::size_t i = 0; i < m; ++i) {
    const RatVec& p = verts[order[i]];
    const RatVec& q = verts[order[(i + 1) % m]];
    RatVec e{q[0] - p[0], q[1] - p[1]};
    IVec v = torickit::primitive_direction({-e[1], e[0]});  // candidate inward
    const Rat side = Rat(v[0]) * (cent[0] - p[0]) + Rat(v[1]) * (cent[1] - p[1]);
    if (side < 0) { v[0] = -v[0]; v[1] = -v[1]; }
    const Rat lambda = -(Rat(v[0]) * p[0] + Rat(v[1]) * p[1]);
    facets.emplace_back(std::move(v), lambda);
  }
  std::sort(facets.begin(), facets.end());
  return facets;
}

/// Feasibility plus active-rank certificate that x is a vertex of P.
inline bool vertex_certificate(const FacetPresentation& fp, const RatVec& x) {
  std::vector<torickit::IVec> act;
  for (int j = 0; j < fp.num_facets(); ++j) {
    const Rat l = fp.l(j, x);
    if (l < 0) return false;
    if (l == 0) act.push_back(fp.normals[j]);
  }
  return torickit::rank_i(act) == fp.n;
}

}  // namespace oracles
