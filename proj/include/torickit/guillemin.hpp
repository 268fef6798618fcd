#pragma once
/**
 * guillemin.hpp
 *
 * Weighted Guillemin symplectic potentials on the polytope,
 *
 *     u(x) = sum_j (1/beta_j) l_j(x) log l_j(x)  (+ optional smooth part),
 *
 * their exact derivative structure
 *
 *     grad u = sum_j (1/beta_j) (log l_j + 1) v_j,
 *     hess u = sum_j (1/beta_j) v_j v_j^T / l_j,
 *
 * and the Legendre transform phi(rho) = sup_x [ <x, rho> - u(x) ] producing a
 * Kahler potential on R^n. The supremum is found by a damped Newton iteration
 * on grad u(x) = rho (steps keep every l_j above half its current minimum),
 * with a bisection fallback in one dimension.  Floating point starts here:
 * everything below this header is exact, everything from here on is double.
 */

#include "torickit/invariants.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>

namespace torickit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct NoConvergence : Error { using Error::Error; };

// ------------------------------------------------- symplectic potential ----

struct SmoothPart {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  std::function<Mat(const Vec&)> hess;
};

struct SymplecticPotential {
  int n = 0;
  std::vector<Vec> v;            // inward normals
  std::vector<double> lam;       // offsets
  std::vector<double> invBeta;   // 1 / beta_j
  Vec start;                     // strictly interior Newton start (barycenter)
  std::optional<SmoothPart> smooth;

  int num_facets() const { return static_cast<int>(v.size()); }
  double l(int j, const Vec& x) const { return v[j].dot(x) + lam[j]; }

  double min_l(const Vec& x) const {
    double m = std::numeric_limits<double>::infinity();
    for (int j = 0; j < num_facets(); ++j) m = std::min(m, l(j, x));
    return m;
  }
  bool inside(const Vec& x) const { return min_l(x) > 0; }

  double value(const Vec& x) const {
    double s = 0;
    for (int j = 0; j < num_facets(); ++j) {
      const double lj = l(j, x);
      if (lj < 0) throw Error("symplectic potential evaluated outside the domain");
      if (lj > 0) s += invBeta[j] * lj * std::log(lj);
    }
    if (smooth) s += smooth->value(x);
    return s;
  }
  Vec grad(const Vec& x) const {
    Vec g = Vec::Zero(n);
    for (int j = 0; j < num_facets(); ++j)
      g += invBeta[j] * (std::log(l(j, x)) + 1.0) * v[j];
    if (smooth) g += smooth->grad(x);
    return g;
  }
  Mat hess(const Vec& x) const {
    Mat H = Mat::Zero(n, n);
    for (int j = 0; j < num_facets(); ++j)
      H += (invBeta[j] / l(j, x)) * (v[j] * v[j].transpose());
    if (smooth) H += smooth->hess(x);
    return H;
  }
};

inline SymplecticPotential make_symplectic_potential(const FacetPresentation& fp,
                                                     std::vector<double> betas) {
  if (betas.size() != static_cast<std::size_t>(fp.num_facets()))
    throw ValidationError("one cone angle per facet required");
  for (double b : betas)
    if (!(b > 0)) throw ValidationError("cone angles must be positive");
  SymplecticPotential u;
  u.n = fp.n;
  for (int j = 0; j < fp.num_facets(); ++j) {
    Vec w(fp.n);
    for (int c = 0; c < fp.n; ++c) w[c] = double(fp.normals[j][c]);
    u.v.push_back(std::move(w));
    u.lam.push_back(to_double(fp.offsets[j]));
    u.invBeta.push_back(1.0 / betas[j]);
  }
  const auto vs = vertices_from_facets(fp);
  const auto vb = volume_and_barycenter(fp, vs);
  u.start = Vec(fp.n);
  for (int c = 0; c < fp.n; ++c) u.start[c] = to_double(vb.barycenter[c]);
  return u;
}

inline SymplecticPotential weighted_guillemin_potential(const FanoPolytope& P,
                                                        const ConeAngles& ca) {
  std::vector<double> betas;
  for (const auto& b : ca.betas) betas.push_back(to_double(b));
  return make_symplectic_potential(P.facets, std::move(betas));
}

// ---------------------------------------------------- convexity sampling ----

struct ConvexitySample {
  bool positiveDefinite = true;
  int testedPoints = 0;   // finite resolution: evidence, not proof
};

inline ConvexitySample verify_strict_convexity(const SymplecticPotential& u,
                                               const FacetPresentation& fp,
                                               int samplesPerAxis = 17) {
  const auto vs = vertices_from_facets(fp);
  const int n = fp.n;
  std::vector<double> lo(n, 1e300), hi(n, -1e300);
  for (const auto& w : vs.coords)
    for (int c = 0; c < n; ++c) {
      lo[c] = std::min(lo[c], to_double(w[c]));
      hi[c] = std::max(hi[c], to_double(w[c]));
    }
  ConvexitySample out;
  std::vector<int> idx(n, 0);
  for (;;) {
    Vec x(n);
    for (int c = 0; c < n; ++c)
      x[c] = lo[c] + (hi[c] - lo[c]) * (idx[c] + 1.0) / (samplesPerAxis + 1.0);
    if (u.min_l(x) > 1e-9) {
      ++out.testedPoints;
      Eigen::LLT<Mat> llt(u.hess(x));
      if (llt.info() != Eigen::Success) out.positiveDefinite = false;
    }
    int c = 0;
    while (c < n && idx[c] == samplesPerAxis - 1) idx[c++] = 0;
    if (c == n) break;
    ++idx[c];
  }
  return out;
}

// ----------------------------------------------------- Legendre transform ----

struct LegendreResult {
  double phi = 0;        // phi(rho) = <x, rho> - u(x)
  Vec x;                 // maximizer (moment map preimage of rho)
  int iters = 0;
  double resid = 0;      // ||grad u(x) - rho||_inf
  bool usedBisection = false;
  bool atRoundingFloor = false;  // stopped at the double-precision floor
};

inline LegendreResult legendre_transform(const SymplecticPotential& u,
                                         const Vec& rho, double tol = 1e-12,
                                         int maxIter = 200,
                                         const Vec* warmStart = nullptr) {
  const double scale = std::max(1.0, rho.lpNorm<Eigen::Infinity>());
  Vec x = (warmStart && u.inside(*warmStart)) ? *warmStart : u.start;

  // Near a vertex some l_j is exponentially small while x stays O(1), so the
  // log-space residual cannot be made smaller than ~eps/l_j.  Estimate that
  // floor to tell an honest stall from a genuine failure.
  const double eps = std::numeric_limits<double>::epsilon();
  auto rounding_floor = [&](const Vec& xx) {
    double fl = eps * scale;
    for (int j = 0; j < u.num_facets(); ++j)
      fl = std::max(fl, u.invBeta[j] * eps *
                            (std::abs(u.v[j].dot(xx)) + std::abs(u.lam[j]) + 1.0) /
                            u.l(j, xx));
    return fl;
  };

  LegendreResult res;
  Vec best = x;
  double bestR = std::numeric_limits<double>::infinity();
  int doneIters = 0;
  for (int it = 0; it < maxIter; ++it) {
    const Vec g = u.grad(x) - rho;
    const double r = g.lpNorm<Eigen::Infinity>();
    if (r < bestR) {
      best = x;
      bestR = r;
    }
    if (r <= tol * scale) {
      res.phi = x.dot(rho) - u.value(x);
      res.x = x;
      res.iters = it;
      res.resid = r;
      return res;
    }
    const Vec dx = u.hess(x).ldlt().solve(-g);
    double s = 1.0;
    const double cur = u.min_l(x);
    while (s > 1e-14 && u.min_l(x + s * dx) <= 0.5 * cur) s *= 0.5;
    while (s > 1e-14 &&
           (u.grad(x + s * dx) - rho).lpNorm<Eigen::Infinity>() >= r)
      s *= 0.5;
    doneIters = it + 1;
    if (s <= 1e-14) break;
    x += s * dx;
  }

  if (bestR <= 100.0 * rounding_floor(best) + tol * scale) {
    res.phi = best.dot(rho) - u.value(best);
    res.x = best;
    res.iters = doneIters;
    res.resid = bestR;
    res.atRoundingFloor = true;
    return res;
  }

  if (u.n == 1) {
    // Monotone 1-D dual problem: grad u runs from -inf to +inf across the
    // interval, so bisect it between the domain endpoints.
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int j = 0; j < u.num_facets(); ++j) {
      const double bound = -u.lam[j] / u.v[j][0];
      if (u.v[j][0] > 0) lo = std::max(lo, bound);
      else hi = std::min(hi, bound);
    }
    const double margin = 1e-14 * (hi - lo);
    double a = lo + margin, b = hi - margin;
    Vec t(1);
    for (int it = 0; it < 200; ++it) {
      t[0] = 0.5 * (a + b);
      (u.grad(t)[0] < rho[0] ? a : b) = t[0];
    }
    t[0] = 0.5 * (a + b);
    res.phi = t[0] * rho[0] - u.value(t);
    res.x = t;
    res.iters = maxIter;
    res.resid = std::abs(u.grad(t)[0] - rho[0]);
    res.usedBisection = true;
    return res;
  }
  throw NoConvergence("legendre_transform: Newton stalled at residual " +
                      std::to_string((u.grad(x) - rho).lpNorm<Eigen::Infinity>()));
}

// -------------------------------------------------------- Kahler side ----

struct KahlerPotentialFn {
  std::string provenance;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;   // the moment map
  std::function<Mat(const Vec&)> hessian;    // (hess u)^{-1} at the maximizer
};

inline KahlerPotentialFn to_kahler(const SymplecticPotential& u,
                                   double tol = 1e-12) {
  KahlerPotentialFn phi;
  phi.provenance = "legendre transform of a weighted Guillemin potential";
  phi.value = [u, tol](const Vec& rho) {
    return legendre_transform(u, rho, tol).phi;
  };
  phi.gradient = [u, tol](const Vec& rho) {
    return legendre_transform(u, rho, tol).x;
  };
  phi.hessian = [u, tol](const Vec& rho) {
    const auto r = legendre_transform(u, rho, tol);
    return Mat(u.hess(r.x).inverse());
  };
  return phi;
}

inline Vec moment_map(const KahlerPotentialFn& phi, const Vec& rho) {
  return phi.gradient(rho);
}

// ------------------------------------------------------ duality checks ----

struct DualityReport {
  double maxFenchelDefect = 0;    // |phi(rho) + u(x) - <x, rho>| at x = grad phi
  double maxInvolutionDefect = 0; // |u(x) - [ <x, grad u(x)> - phi(grad u(x)) ]|
};

inline DualityReport verify_duality(const SymplecticPotential& u,
                                    const KahlerPotentialFn& phi,
                                    const std::vector<Vec>& rhoSamples,
                                    const std::vector<Vec>& xSamples) {
  DualityReport rep;
  for (const auto& rho : rhoSamples) {
    const Vec x = phi.gradient(rho);
    rep.maxFenchelDefect = std::max(
        rep.maxFenchelDefect, std::abs(phi.value(rho) + u.value(x) - x.dot(rho)));
  }
  for (const auto& x : xSamples) {
    const Vec rho = u.grad(x);
    rep.maxInvolutionDefect =
        std::max(rep.maxInvolutionDefect,
                 std::abs(u.value(x) - (x.dot(rho) - phi.value(rho))));
  }
  return rep;
}

}  // namespace torickit
