#pragma once
/**
 * polytope.hpp
 *
 * Rational convex polytopes in facet presentation
 *
 *     P = { x in R^n : l_j(x) = <v_j, x> + lambda_j >= 0,  j = 1..N },
 *
 * with primitive integer inward normals v_j, n <= 3.  Everything here is
 * exact: vertex enumeration, volume/barycenter (fan triangulation over an
 * interior point), the face lattice of a simple polytope, lattice-normalized
 * face volumes, and the Delzant test.  A FanoPolytope is the validated
 * special case lambda_j = 1 with integral vertices.
 */

#include "torickit/rational.hpp"

#include <map>
#include <set>
#include <utility>

namespace torickit {

// --------------------------------------------------- facet presentation ----

struct FacetPresentation {
  int n = 0;                       // ambient dimension, 1..3
  std::vector<IVec> normals;       // primitive inward normals v_j
  RatVec offsets;                  // lambda_j

  int num_facets() const { return static_cast<int>(normals.size()); }

  /// l_j(x) = <v_j, x> + lambda_j
  Rat l(int j, const RatVec& x) const { return dot(normals[j], x) + offsets[j]; }
};

inline FacetPresentation make_presentation(int n, std::vector<IVec> normals,
                                           RatVec offsets) {
  if (n < 1 || n > 3) throw ValidationError("dimension must be 1, 2 or 3");
  if (normals.size() != offsets.size())
    throw ValidationError("normals/offsets length mismatch");
  if (normals.empty()) throw ValidationError("no facets given");
  for (std::size_t j = 0; j < normals.size(); ++j) {
    if (static_cast<int>(normals[j].size()) != n)
      throw ValidationError("normal " + std::to_string(j) + " has wrong dimension");
    if (is_zero(normals[j]))
      throw ValidationError("normal " + std::to_string(j) + " is zero");
    if (primitive(normals[j]) != normals[j])
      throw ValidationError("normal " + std::to_string(j) + " is not primitive");
  }
  for (std::size_t a = 0; a < normals.size(); ++a)
    for (std::size_t b = a + 1; b < normals.size(); ++b)
      if (normals[a] == normals[b] && offsets[a] == offsets[b])
        throw ValidationError("duplicate facet " + std::to_string(a) + "/" +
                              std::to_string(b));
  return FacetPresentation{n, std::move(normals), std::move(offsets)};
}

// ------------------------------------------------------------ utilities ----

template <class F>
void for_each_subset(int N, int k, F&& fn) {
  if (k < 0 || k > N) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    fn(static_cast<const std::vector<int>&>(idx));
    int i = k - 1;
    while (i >= 0 && idx[i] == N - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Exact angular "counterclockwise from the positive x-axis" comparator for
/// nonzero rational plane vectors.  Collinear same-direction pairs are not
/// expected by callers (rays from an interior point to distinct boundary
/// points, or distinct primitive fan rays).
struct AngularLess {
  static int quadrant(const Rat& x, const Rat& y) {
    if (x > 0 && y >= 0) return 0;
    if (x <= 0 && y > 0) return 1;
    if (x < 0 && y <= 0) return 2;
    return 3;  // x >= 0 && y < 0
  }
  bool operator()(const std::pair<Rat, Rat>& a, const std::pair<Rat, Rat>& b) const {
    const int qa = quadrant(a.first, a.second), qb = quadrant(b.first, b.second);
    if (qa != qb) return qa < qb;
    const Rat cross = a.first * b.second - a.second * b.first;
    if (cross == 0)
      throw InternalInconsistency("angular sort: collinear rays");
    return cross > 0;
  }
};

// ------------------------------------------------------------- vertices ----

struct VertexSet {
  std::vector<RatVec> coords;             // lexicographically sorted
  std::vector<std::vector<int>> active;   // sorted facet indices active at coords[i]

  int num_vertices() const { return static_cast<int>(coords.size()); }
};

namespace detail {

/// True iff the recession cone { d : <v_j, d> >= 0 for all j } is nontrivial.
inline bool has_recession_direction(const FacetPresentation& fp) {
  const int n = fp.n;
  std::vector<IVec> all(fp.normals.begin(), fp.normals.end());
  if (rank_i(all) < n) return true;  // cone contains a line
  // Pointed cone: nontrivial iff it has an extreme ray, which activates some
  // n-1 independent normals.
  bool found = false;
  for_each_subset(fp.num_facets(), n - 1, [&](const std::vector<int>& S) {
    if (found) return;
    std::vector<IVec> rows;
    for (int j : S) rows.push_back(fp.normals[j]);
    const auto d = kernel_vector(rows, n);
    if (!d) return;
    for (int sign : {+1, -1}) {
      bool ok = true;
      for (const auto& v : fp.normals)
        if (sign * dot(v, *d) < 0) { ok = false; break; }
      if (ok) { found = true; return; }
    }
  });
  return found;
}

}  // namespace detail

/// Enumerate the vertices of P exactly, with their active facet sets.
/// Throws UnboundedPolytope / EmptyPolytope as appropriate.
inline VertexSet vertices_from_facets(const FacetPresentation& fp) {
  const int n = fp.n, N = fp.num_facets();
  if (detail::has_recession_direction(fp))
    throw UnboundedPolytope("facet normals do not positively span R^n");

  std::map<RatVec, std::vector<int>> found;
  for_each_subset(N, n, [&](const std::vector<int>& S) {
    RatMat A;
    RatVec b;
    for (int j : S) {
      A.emplace_back(fp.normals[j].begin(), fp.normals[j].end());
      b.push_back(-fp.offsets[j]);
    }
    const auto x = solve_linear(std::move(A), std::move(b));
    if (!x) return;
    for (int j = 0; j < N; ++j)
      if (fp.l(j, *x) < 0) return;
    if (found.count(*x)) return;
    std::vector<int> act;
    for (int j = 0; j < N; ++j)
      if (fp.l(j, *x) == 0) act.push_back(j);
    found.emplace(*x, std::move(act));
  });

  if (found.empty()) throw EmptyPolytope("no vertex satisfies all facet inequalities");
  VertexSet vs;
  for (auto& [x, act] : found) {
    vs.coords.push_back(x);
    vs.active.push_back(act);
  }
  return vs;
}

// --------------------------------------------------- volume / barycenter ----

struct VolumeData {
  Rat volume;
  RatVec barycenter;
};

namespace detail {

/// Vertices incident to facet j, as indices into vs.
inline std::vector<int> facet_vertices(const VertexSet& vs, int j) {
  std::vector<int> out;
  for (int i = 0; i < vs.num_vertices(); ++i)
    if (std::binary_search(vs.active[i].begin(), vs.active[i].end(), j))
      out.push_back(i);
  return out;
}

inline RatVec vertex_average(const VertexSet& vs) {
  const int n = static_cast<int>(vs.coords[0].size());
  RatVec a(n, 0);
  for (const auto& w : vs.coords)
    for (int c = 0; c < n; ++c) a[c] += w[c];
  for (int c = 0; c < n; ++c) a[c] /= vs.num_vertices();
  return a;
}

/// Order a planar convex cycle of rational 2-D points counterclockwise
/// around their average; returns a permutation.
inline std::vector<int> polygon_order(const std::vector<std::pair<Rat, Rat>>& pts) {
  Rat cx = 0, cy = 0;
  for (const auto& p : pts) { cx += p.first; cy += p.second; }
  cx /= static_cast<int>(pts.size());
  cy /= static_cast<int>(pts.size());
  std::vector<int> order(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) order[i] = static_cast<int>(i);
  AngularLess less;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return less({pts[a].first - cx, pts[a].second - cy},
                {pts[b].first - cx, pts[b].second - cy});
  });
  return order;
}

/// Express 3-D points of a planar set in exact coordinates w.r.t. two given
/// independent direction rows (b1, b2), relative to base point w0.
inline std::vector<std::pair<Rat, Rat>> plane_coordinates(
    const std::vector<RatVec>& pts, const RatVec& w0, const RatVec& b1,
    const RatVec& b2) {
  // Choose an invertible 2x2 coordinate minor.
  int p = -1, q = -1;
  for (int i = 0; i < 3 && p < 0; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (b1[i] * b2[j] - b1[j] * b2[i] != 0) { p = i; q = j; break; }
  if (p < 0) throw InternalInconsistency("plane basis is degenerate");
  const Rat D = b1[p] * b2[q] - b1[q] * b2[p];
  std::vector<std::pair<Rat, Rat>> out;
  out.reserve(pts.size());
  for (const auto& w : pts) {
    const Rat dp = w[p] - w0[p], dq = w[q] - w0[q];
    const Rat y1 = (dp * b2[q] - dq * b2[p]) / D;
    const Rat y2 = (b1[p] * dq - b1[q] * dp) / D;
    // Consistency on the remaining coordinate.
    for (int c = 0; c < 3; ++c) {
      if (c == p || c == q) continue;
      if (y1 * b1[c] + y2 * b2[c] != w[c] - w0[c])
        throw InternalInconsistency("point not in claimed plane");
    }
    out.emplace_back(y1, y2);
  }
  return out;
}

}  // namespace detail

/// Exact Euclidean volume and barycenter by fan triangulation over the
/// vertex average.  Throws DegeneratePolytope when the volume vanishes.
inline VolumeData volume_and_barycenter(const FacetPresentation& fp,
                                        const VertexSet& vs) {
  const int n = fp.n;
  Rat vol = 0;
  RatVec mom(n, 0);  // volume-weighted centroid accumulator

  if (n == 1) {
    const Rat lo = vs.coords.front()[0], hi = vs.coords.back()[0];
    vol = hi - lo;
    mom[0] = vol * (lo + hi) / 2;
  } else {
    const RatVec a = detail::vertex_average(vs);
    for (int j = 0; j < fp.num_facets(); ++j) {
      const auto fv = detail::facet_vertices(vs, j);
      if (static_cast<int>(fv.size()) < n) continue;  // redundant facet
      if (n == 2) {
        if (fv.size() != 2)
          throw InternalInconsistency("edge with more than two vertices");
        const RatVec &p = vs.coords[fv[0]], &q = vs.coords[fv[1]];
        const Rat piece =
            rat_abs((p[0] - a[0]) * (q[1] - a[1]) - (p[1] - a[1]) * (q[0] - a[0])) / 2;
        vol += piece;
        for (int c = 0; c < 2; ++c) mom[c] += piece * (a[c] + p[c] + q[c]) / 3;
      } else {  // n == 3: order the facet polygon, then fan it into triangles
        std::vector<RatVec> poly;
        for (int i : fv) poly.push_back(vs.coords[i]);
        RatVec cF(3, 0);
        for (const auto& w : poly)
          for (int c = 0; c < 3; ++c) cF[c] += w[c];
        for (int c = 0; c < 3; ++c) cF[c] /= static_cast<int>(poly.size());
        RatVec b1(3), b2(3);
        bool have1 = false, have2 = false;
        for (const auto& w : poly) {
          RatVec d(3);
          for (int c = 0; c < 3; ++c) d[c] = w[c] - cF[c];
          if (!have1) {
            if (d != RatVec(3, Rat(0))) { b1 = d; have1 = true; }
          } else if (!have2) {
            if (rank({b1, d}) == 2) { b2 = d; have2 = true; }
          }
        }
        if (!have1 || !have2)
          throw InternalInconsistency("facet polygon is not two-dimensional");
        const auto yc = detail::plane_coordinates(poly, cF, b1, b2);
        const auto order = detail::polygon_order(yc);
        for (std::size_t t = 1; t + 1 < order.size(); ++t) {
          const RatVec &w0 = poly[order[0]], &wi = poly[order[t]],
                       &wk = poly[order[t + 1]];
          RatMat M = {{w0[0] - a[0], w0[1] - a[1], w0[2] - a[2]},
                      {wi[0] - a[0], wi[1] - a[1], wi[2] - a[2]},
                      {wk[0] - a[0], wk[1] - a[1], wk[2] - a[2]}};
          const Rat piece = rat_abs(det(M)) / 6;
          vol += piece;
          for (int c = 0; c < 3; ++c)
            mom[c] += piece * (a[c] + w0[c] + wi[c] + wk[c]) / 4;
        }
      }
    }
  }

  if (vol == 0) throw DegeneratePolytope("polytope has zero volume");
  RatVec bc(n);
  for (int c = 0; c < n; ++c) bc[c] = mom[c] / vol;
  return {vol, bc};
}

// ---------------------------------------------------------------- faces ----

struct Face {
  int dim = 0;                      // intrinsic dimension d = n - codim
  std::vector<int> activeFacets;    // full active set, sorted
  std::vector<int> vertices;        // indices into the VertexSet, sorted
  std::vector<IVec> latticeBasis;   // d rows: Hermite basis of the direction lattice
};

namespace detail {

inline std::vector<IVec> face_direction_basis(const VertexSet& vs,
                                              const std::vector<int>& verts,
                                              int n) {
  std::vector<IVec> dirs;
  const RatVec& w0 = vs.coords[verts[0]];
  for (std::size_t i = 1; i < verts.size(); ++i) {
    RatVec d(n);
    for (int c = 0; c < n; ++c) d[c] = vs.coords[verts[i]][c] - w0[c];
    dirs.push_back(primitive_direction(d));
  }
  return hnf_basis(std::move(dirs));
}

}  // namespace detail

/// All codimension-k faces of a (simple) polytope, each with its canonical
/// full active set and a lattice basis of its direction space.
inline std::vector<Face> faces_of_codim(const FacetPresentation& fp,
                                        const VertexSet& vs, int k) {
  const int n = fp.n;
  if (k < 0 || k > n) throw ValidationError("face codimension out of range");

  std::vector<Face> out;
  if (k == 0) {
    Face f;
    f.dim = n;
    f.activeFacets = vs.active[0];
    for (int i = 1; i < vs.num_vertices(); ++i) {
      std::vector<int> inter;
      std::set_intersection(f.activeFacets.begin(), f.activeFacets.end(),
                            vs.active[i].begin(), vs.active[i].end(),
                            std::back_inserter(inter));
      f.activeFacets = std::move(inter);
    }
    for (int i = 0; i < vs.num_vertices(); ++i) f.vertices.push_back(i);
    for (int c = 0; c < n; ++c) {
      IVec e(n, 0);
      e[c] = 1;
      f.latticeBasis.push_back(std::move(e));
    }
    out.push_back(std::move(f));
    return out;
  }

  if (k == n) {
    for (int i = 0; i < vs.num_vertices(); ++i) {
      Face f;
      f.dim = 0;
      f.activeFacets = vs.active[i];
      f.vertices = {i};
      out.push_back(std::move(f));
    }
    return out;
  }

  std::set<std::vector<int>> seen;  // keyed by full active set
  for (int i = 0; i < vs.num_vertices(); ++i) {
    const auto& act = vs.active[i];
    const int m = static_cast<int>(act.size());
    for_each_subset(m, k, [&](const std::vector<int>& pick) {
      std::vector<int> S;
      for (int p : pick) S.push_back(act[p]);
      // Vertices of the face P ∩ {l_j = 0 : j in S}.
      std::vector<int> fverts;
      for (int w = 0; w < vs.num_vertices(); ++w)
        if (std::includes(vs.active[w].begin(), vs.active[w].end(), S.begin(),
                          S.end()))
          fverts.push_back(w);
      // Canonical active set = facets active on all face vertices.
      std::vector<int> full = vs.active[fverts[0]];
      for (std::size_t w = 1; w < fverts.size(); ++w) {
        std::vector<int> inter;
        std::set_intersection(full.begin(), full.end(),
                              vs.active[fverts[w]].begin(),
                              vs.active[fverts[w]].end(),
                              std::back_inserter(inter));
        full = std::move(inter);
      }
      std::vector<IVec> rows;
      for (int j : full) rows.push_back(fp.normals[j]);
      if (rank_i(rows) != k) return;  // lower-dimensional than codim k
      if (!seen.insert(full).second) return;
      Face f;
      f.dim = n - k;
      f.activeFacets = std::move(full);
      f.vertices = std::move(fverts);
      f.latticeBasis = detail::face_direction_basis(vs, f.vertices, n);
      if (static_cast<int>(f.latticeBasis.size()) != f.dim)
        throw InternalInconsistency("face lattice basis has wrong rank");
      out.push_back(std::move(f));
    });
  }
  return out;
}

/// Lattice-normalized volume of a face: 1 for points, lattice length for
/// segments, 2!·(lattice area) for polygons, n!·vol for the full polytope.
inline Rat normalized_face_volume(const FacetPresentation& fp, const VertexSet& vs,
                                  const Face& face) {
  const int n = fp.n, d = face.dim;
  if (d == 0) return 1;
  if (d == n) {
    Rat f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f * volume_and_barycenter(fp, vs).volume;
  }
  if (d == 1) {
    if (face.vertices.size() != 2)
      throw InternalInconsistency("1-face without exactly two vertices");
    const RatVec &p = vs.coords[face.vertices[0]], &q = vs.coords[face.vertices[1]];
    const IVec& e = face.latticeBasis[0];
    for (int c = 0; c < n; ++c)
      if (e[c] != 0) return rat_abs((q[c] - p[c]) / e[c]);
    throw InternalInconsistency("zero lattice direction on a 1-face");
  }
  // d == 2, n == 3: lattice-coordinate shoelace.
  std::vector<RatVec> poly;
  for (int i : face.vertices) poly.push_back(vs.coords[i]);
  RatVec b1(face.latticeBasis[0].begin(), face.latticeBasis[0].end());
  RatVec b2(face.latticeBasis[1].begin(), face.latticeBasis[1].end());
  const auto yc = detail::plane_coordinates(poly, poly[0], b1, b2);
  const auto order = detail::polygon_order(yc);
  Rat twice_area = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& p = yc[order[i]];
    const auto& q = yc[order[(i + 1) % order.size()]];
    twice_area += p.first * q.second - p.second * q.first;
  }
  return rat_abs(twice_area);
}

// -------------------------------------------------------------- Delzant ----

struct DelzantCheck {
  bool ok = true;
  int badVertex = -1;            // index into the VertexSet when !ok
  std::string reason;
};

inline DelzantCheck is_delzant(const FacetPresentation& fp, const VertexSet& vs) {
  const int n = fp.n;
  for (int i = 0; i < vs.num_vertices(); ++i) {
    if (static_cast<int>(vs.active[i].size()) != n)
      return {false, i,
              "vertex has " + std::to_string(vs.active[i].size()) +
                  " active facets, expected " + std::to_string(n)};
    std::vector<IVec> m;
    for (int j : vs.active[i]) m.push_back(fp.normals[j]);
    const std::int64_t D = det_i(m);
    if (D != 1 && D != -1)
      return {false, i, "active normals have determinant " + std::to_string(D)};
  }
  return {};
}

// ----------------------------------------------------------- Fano check ----

struct FanoPolytope {
  FacetPresentation facets;
  VertexSet verts;
  Rat volume;
  RatVec barycenter;

  int dim() const { return facets.n; }
};

/// Validate a presentation as a Fano Delzant polytope: all offsets 1,
/// integral vertices, simple with unimodular vertex cones, positive volume.
inline FanoPolytope make_fano(FacetPresentation fp) {
  using boost::multiprecision::denominator;
  for (int j = 0; j < fp.num_facets(); ++j)
    if (fp.offsets[j] != 1)
      throw ValidationError("facet " + std::to_string(j) +
                            " has lambda != 1 in fano mode");
  VertexSet vs = vertices_from_facets(fp);
  for (int i = 0; i < vs.num_vertices(); ++i)
    for (const auto& c : vs.coords[i])
      if (denominator(c) != 1)
        throw ValidationError("vertex " + std::to_string(i) +
                              " is not a lattice point");
  const auto dz = is_delzant(fp, vs);
  if (!dz.ok) {
    std::string at = "(";
    for (std::size_t c = 0; c < vs.coords[dz.badVertex].size(); ++c)
      at += (c ? ", " : "") + rat_str(vs.coords[dz.badVertex][c]);
    throw ValidationError("not Delzant at vertex " + at + "): " + dz.reason);
  }
  auto vb = volume_and_barycenter(fp, vs);
  return FanoPolytope{std::move(fp), std::move(vs), std::move(vb.volume),
                      std::move(vb.barycenter)};
}

}  // namespace torickit
