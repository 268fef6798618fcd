#pragma once
/**
 * Continuity-method Newton solver for the real Monge-Ampère equation
 *
 *     det(D^2 phi) = exp(-alpha (phi - <P_c, rho>))        on R^n, n <= 2,
 *
 * truncated to the box [-B, B]^n with Dirichlet data taken from the
 * reference potential phi0 (the Legendre transform of the weighted
 * Guillemin potential at the cone angles beta(alpha)).
 *
 * The family marched in t is
 *
 *     G_t(phi) = log det(D^2 phi) + t (phi - <P_c,rho>)
 *                                 + (alpha - t)(w - <P_c,rho>) = 0,
 *
 * with w := <P_c,rho> - alpha^{-1} log det(D^2 phi0) built from the
 * analytic Hessian of the transform, so t = 0 is satisfied exactly up to
 * the O(h^2) gap between the analytic and discrete Hessians.  phi0 is
 * shifted by a constant so the discrete masses of both sides of the
 * target equation agree; without the shift the Dirichlet data carries a
 * spurious constant that the interior solve cannot remove.
 *
 * Residuals are accumulated in long double (see grid.hpp); the Newton
 * linearization trace((D^2 phi)^{-1} D^2 psi) + t psi is assembled in
 * double and solved with SparseLU (the discrete operator is mildly
 * non-symmetric because the Hessian inverse varies node to node).
 */

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "torickit/grid.hpp"
#include "torickit/invariants.hpp"

namespace torickit {

struct GridMismatch : Error { using Error::Error; };
struct AlphaAboveR : ValidationError { using ValidationError::ValidationError; };

struct SolverConfig {
  double alpha = 0.5;      // target parameter, 0 < alpha <= 1
  double tInit = 0.1;      // initial continuity step
  double tMin = 1e-4;      // step underflow bound (stall)
  double tMax = 0.1;       // step cap
  // Discrete log det at a node with Hessian eigenvalue lambda moves by
  // ~ ulp(phi) / (lambda h^2) per value rounding, ~1e-10 for the hardest
  // tail nodes at desk scales; tolerances below that floor are noise.
  double newtonTol = 1e-9;
  int maxNewton = 40;
  double damping = 0.5;    // line-search backoff factor
  bool force = false;      // permit alpha above R(X) (experimental runs)
  int verbose = 0;         // 1: per-step, 2: per-iteration stderr notes
};

struct ReferenceData {
  RhoGrid grid;
  PotentialGrid phi0;            // mass-normalized reference potential
  std::vector<double> w;         // per node
  std::vector<double> logdet0;   // analytic log det(D^2 phi0) per node
  std::vector<Vec> x;            // moment image of the transform part
  Vec Pc;                        // barycenter, as doubles
  double alpha = 0;
  double shift = 0;              // additive mass normalization applied
  double hessShift = 0;          // quadratic regularization epsilon (below)
};

struct TraceEntry {
  double t = 0;
  int newtonIters = 0;
  double residual = 0;     // interior sup-norm of G_t after the solve
  double minEig = 0;       // smallest discrete-Hessian eigenvalue
};

enum class SolveStatus { Success, Stalled, ConvexityLost };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Success: return "success";
    case SolveStatus::Stalled: return "stalled";
    default: return "convexity-lost";
  }
}

struct ContinuityTrace {
  std::vector<TraceEntry> steps;
  SolveStatus status = SolveStatus::Stalled;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Stalled;
  double tReached = 0;     // equals alpha on success
  PotentialGrid phi;       // potential at tReached
  ContinuityTrace trace;
  ReferenceData ref;
  std::string message;
};

namespace detail {

inline long double pc_dot(const Vec& Pc, const RhoGrid& g, int i, int j) {
  long double s = static_cast<long double>(Pc[0]) * g.coord(i);
  if (g.n == 2) s += static_cast<long double>(Pc[1]) * g.coord(j);
  return s;
}

/// Blended residual over interior nodes.  Returns false if the discrete
/// Hessian loses positivity anywhere (G is then meaningless).
inline bool eval_residual(const PotentialGrid& phi, const Vec& Pc,
                          double alpha, double t, const std::vector<double>& w,
                          std::vector<double>& G, double& norm) {
  const RhoGrid& g = phi.grid;
  const int M = g.M;
  G.assign(static_cast<size_t>(g.num_interior()), 0.0);
  long double worst = 0.0L;
  size_t k = 0;
  for (int i = 1; i <= M - 2; ++i) {
    for (int j = g.n == 1 ? 0 : 1; j <= (g.n == 1 ? 0 : M - 2); ++j) {
      const auto H = phi.hess_components(i, j);
      const wide_real det = g.n == 1 ? H[0] : H[0] * H[1] - H[2] * H[2];
      if (!(det > 0) || (g.n == 2 && !(H[0] > 0))) return false;
      const long double pc = pc_dot(Pc, g, i, j);
      const long double r =
          std::log(static_cast<long double>(det)) +
          static_cast<long double>(t) *
              (static_cast<long double>(phi.values[g.index(i, j)]) - pc) +
          static_cast<long double>(alpha - t) * (w[g.index(i, j)] - pc);
      G[k++] = static_cast<double>(r);
      const long double a = r < 0 ? -r : r;
      if (a > worst) worst = a;
    }
  }
  norm = static_cast<double>(worst);
  return true;
}

struct NewtonOutcome {
  bool converged = false;
  bool convexityIssue = false;
  int iters = 0;
  double residual = std::numeric_limits<double>::infinity();
};

/// Rows of the linearization of G_t at phi (interior unknowns only).
inline void jacobian_triplets(const PotentialGrid& phi, double t,
                              std::vector<Eigen::Triplet<double>>& trip) {
  const RhoGrid& g = phi.grid;
  const int M = g.M;
  const int m = M - 2;
  const double h2 = g.h * g.h;
  auto row_of = [&](int i, int j) -> long {
    return g.n == 1 ? i - 1 : static_cast<long>(i - 1) * m + (j - 1);
  };
  auto push = [&](long row, int i2, int j2, double val) {
    if (g.interior(i2, j2)) trip.emplace_back(row, row_of(i2, j2), val);
  };
  trip.clear();
  for (int i = 1; i <= M - 2; ++i) {
    for (int j = g.n == 1 ? 0 : 1; j <= (g.n == 1 ? 0 : M - 2); ++j) {
      const long row = row_of(i, j);
      const auto H = phi.hess_components(i, j);
      if (g.n == 1) {
        const double inv = static_cast<double>(1.0L / H[0]);
        push(row, i, 0, -2.0 * inv / h2 + t);
        push(row, i - 1, 0, inv / h2);
        push(row, i + 1, 0, inv / h2);
        continue;
      }
      const double det = static_cast<double>(H[0] * H[1] - H[2] * H[2]);
      const double a00 = static_cast<double>(H[1]) / det;
      const double a11 = static_cast<double>(H[0]) / det;
      const double a01 = -static_cast<double>(H[2]) / det;
      push(row, i, j, -2.0 * (a00 + a11) / h2 + t);
      push(row, i - 1, j, a00 / h2);
      push(row, i + 1, j, a00 / h2);
      push(row, i, j - 1, a11 / h2);
      push(row, i, j + 1, a11 / h2);
      push(row, i + 1, j + 1, a01 / (2.0 * h2));
      push(row, i - 1, j - 1, a01 / (2.0 * h2));
      push(row, i + 1, j - 1, -a01 / (2.0 * h2));
      push(row, i - 1, j + 1, -a01 / (2.0 * h2));
    }
  }
}

/// Largest relative Hessian perturbation of the update direction:
/// max over nodes of ||A^{1/2} dH A^{1/2}||_F where dH is the discrete
/// Hessian of the direction.  Any step s with s * qmax < 1 keeps every
/// nodal Hessian positive definite (log det is concave along the step).
inline double hessian_step_measure(const PotentialGrid& phi,
                                   const PotentialGrid& dir) {
  const RhoGrid& g = phi.grid;
  const int M = g.M;
  double qmax = 0;
  for (int i = 1; i <= M - 2; ++i) {
    for (int j = g.n == 1 ? 0 : 1; j <= (g.n == 1 ? 0 : M - 2); ++j) {
      const auto H = phi.hess_components(i, j);
      const auto dH = dir.hess_components(i, j);
      double q2;
      if (g.n == 1) {
        const double b = static_cast<double>(dH[0] / H[0]);
        q2 = b * b;
      } else {
        const double det = static_cast<double>(H[0] * H[1] - H[2] * H[2]);
        const double a00 = static_cast<double>(H[1]) / det;
        const double a11 = static_cast<double>(H[0]) / det;
        const double a01 = -static_cast<double>(H[2]) / det;
        const double B00 = a00 * static_cast<double>(dH[0]) +
                           a01 * static_cast<double>(dH[2]);
        const double B01 = a00 * static_cast<double>(dH[2]) +
                           a01 * static_cast<double>(dH[1]);
        const double B10 = a01 * static_cast<double>(dH[0]) +
                           a11 * static_cast<double>(dH[2]);
        const double B11 = a01 * static_cast<double>(dH[2]) +
                           a11 * static_cast<double>(dH[1]);
        q2 = B00 * B00 + 2.0 * B01 * B10 + B11 * B11;
      }
      if (q2 > qmax) qmax = q2;
    }
  }
  return std::sqrt(qmax);
}

/// Newton for G_t = 0 at fixed t, updating phi in place.
///
/// Steps are capped at s = c / qmax (see hessian_step_measure), which keeps
/// the iterate discretely convex by the concavity of log det; subject to
/// that cap they are accepted without a monotonicity test.  Near-degenerate
/// tail Hessians force qmax >> 1 there, and insisting on a monotone
/// residual norm in that regime stalls the iteration at the step size the
/// worst node tolerates; the capped iteration instead lets the norm rise
/// transiently while the tail reshapes, then converges quadratically.
/// phi is left at the best iterate seen when the iteration fails.
inline NewtonOutcome newton_at_t(PotentialGrid& phi, const Vec& Pc,
                                 double alpha, double t,
                                 const std::vector<double>& w,
                                 const SolverConfig& cfg) {
  const RhoGrid& g = phi.grid;
  const int M = g.M;
  const long N = g.num_interior();

  NewtonOutcome out;
  std::vector<double> G, Gc;
  double norm = 0;
  if (!eval_residual(phi, Pc, alpha, t, w, G, norm)) {
    out.convexityIssue = true;
    return out;
  }
  const double normCap = std::max(norm, 1.0) * 1e6;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(N) * (g.n == 1 ? 3 : 9));
  PotentialGrid cand = phi, dir = phi;
  PotentialGrid best = phi;
  double bestNorm = norm;

  for (int iter = 0; iter <= cfg.maxNewton; ++iter) {
    out.iters = iter;
    out.residual = norm;
    if (norm <= cfg.newtonTol) {
      out.converged = true;
      return out;
    }
    if (iter == cfg.maxNewton) break;

    jacobian_triplets(phi, t, trip);
    Eigen::SparseMatrix<double> J(N, N);
    J.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(J);
    if (lu.info() != Eigen::Success) break;
    Eigen::VectorXd rhs(N);
    for (long k = 0; k < N; ++k) rhs[k] = -G[static_cast<size_t>(k)];
    Eigen::VectorXd delta = lu.solve(rhs);
    if (lu.info() != Eigen::Success) break;

    {
      long k = 0;
      for (long q = 0; q < static_cast<long>(dir.values.size()); ++q)
        dir.values[static_cast<size_t>(q)] = 0;
      for (int i = 1; i <= M - 2; ++i)
        for (int j = g.n == 1 ? 0 : 1; j <= (g.n == 1 ? 0 : M - 2); ++j)
          dir.values[g.index(i, j)] = delta[k++];
    }
    const double qmax = hessian_step_measure(phi, dir);
    double s = qmax > 0 ? std::min(1.0, 0.9 / qmax) : 1.0;

    bool accepted = false;
    for (int ls = 0; ls < 20; ++ls) {
      long k = 0;
      for (int i = 1; i <= M - 2; ++i)
        for (int j = g.n == 1 ? 0 : 1; j <= (g.n == 1 ? 0 : M - 2); ++j)
          cand.values[g.index(i, j)] =
              phi.values[g.index(i, j)] + s * delta[k++];
      double nc = 0;
      if (eval_residual(cand, Pc, alpha, t, w, Gc, nc) &&
          std::isfinite(nc) && nc <= normCap) {
        phi.values.swap(cand.values);
        G.swap(Gc);
        norm = nc;
        accepted = true;
        break;
      }
      s *= cfg.damping;
    }
    if (cfg.verbose >= 2)
      std::fprintf(stderr,
                   "    newton t=%.6f iter=%d norm=%.3e qmax=%.3e s=%.3e\n",
                   t, iter, norm, qmax, accepted ? s : 0.0);
    if (!accepted) {
      out.convexityIssue = true;
      out.residual = norm;
      break;
    }
    if (norm < bestNorm) {
      bestNorm = norm;
      best = phi;
    }
  }
  if (!out.converged && bestNorm < norm) {
    phi = best;
    out.residual = bestNorm;
  }
  return out;
}

inline double min_hessian_eig(const PotentialGrid& phi) {
  double me = std::numeric_limits<double>::infinity();
  const int M = phi.grid.M;
  for (int i = 1; i <= M - 2; ++i)
    for (int j = phi.grid.n == 1 ? 0 : 1; j <= (phi.grid.n == 1 ? 0 : M - 2);
         ++j)
      me = std::min(me, phi.min_eig_hess(i, j));
  return me;
}

}  // namespace detail

/**
 * Reference potential, moment image, and the weight w on a grid.  The
 * Legendre transforms are warm-started along grid rows; nodes deep in the
 * tail may stop at the double-precision rounding floor (flagged inside
 * legendre_transform), which perturbs phi0 by O(eps) only.
 *
 * Near the box corners the true density can sit far below the O(h^2)
 * cross-difference truncation error, in which case the discrete Hessian
 * of the sampled transform is indefinite even though the function is
 * convex.  When that happens the reference is regularized: phi0 gains
 * (eps/2)|rho|^2 and w is rebuilt from det(H^{-1} + eps I), so the t = 0
 * equation is again exact by construction and the discrete Hessian is
 * shifted by exactly eps I (second differences of quadratics are exact).
 * The t = alpha equation never sees w, so the target problem is
 * unchanged; only the Dirichlet data carries the (reported) eps bias.
 *
 * The bias is not free: the data gradient gains eps * rho, which dilates
 * the moment image of the solve by O(eps B) along the whole rim and shows
 * up directly in the pushforward mass (roughly eps * B * |dP| in excess).
 * Fading the quadratic back out of the data is not an option at desk
 * scale: without it the rim rows lose their Hessian margin at a rate the
 * continuation cannot survive in double precision, so the solver keeps
 * the full eps data and reports the resulting mass defect as measured.
 */
inline ReferenceData reference_data(const FanoPolytope& P,
                                    const FanoReport& rep, double alpha,
                                    const RhoGrid& g) {
  if (g.n != P.dim())
    throw GridMismatch("grid dimension does not match the polytope");
  if (!(alpha > 0) || alpha > 1)
    throw AlphaOutOfRange("alpha must lie in (0, 1]");

  const ConeAngles ca = cone_angles(P, rep, Rat(alpha));
  std::vector<double> betas;
  betas.reserve(ca.betas.size());
  for (const Rat& b : ca.betas) betas.push_back(to_double(b));
  const SymplecticPotential u = make_symplectic_potential(P.facets, betas);

  ReferenceData ref;
  ref.grid = g;
  ref.alpha = alpha;
  ref.Pc = Vec(g.n);
  for (int c = 0; c < g.n; ++c) ref.Pc[c] = to_double(rep.barycenter[c]);
  const long N = g.num_nodes();
  ref.phi0 = PotentialGrid::zeros(g);
  ref.w.assign(static_cast<size_t>(N), 0.0);
  ref.logdet0.assign(static_cast<size_t>(N), 0.0);
  ref.x.assign(static_cast<size_t>(N), Vec());

  Vec rowStart;   // first solution of the previous row
  for (int i = 0; i < g.M; ++i) {
    Vec prev;     // solution at the previous node in this row
    for (int j = 0; j < (g.n == 1 ? 1 : g.M); ++j) {
      const Vec rho = g.rho(i, j);
      const Vec* warm = nullptr;
      if (prev.size() > 0) warm = &prev;
      else if (rowStart.size() > 0) warm = &rowStart;
      const LegendreResult r = legendre_transform(u, rho, 1e-12, 200, warm);
      const long k = g.index(i, j);
      ref.phi0.values[static_cast<size_t>(k)] = r.phi;
      ref.x[static_cast<size_t>(k)] = r.x;
      prev = r.x;
      if (j == 0) rowStart = r.x;
      if (g.n == 1) rowStart = r.x;
    }
  }

  // Pick the regularization from the worst discrete-Hessian eigenvalue of
  // the sampled transform, aiming it at a small positive floor.
  const double floorEig = 1e-6;
  const double minEig = detail::min_hessian_eig(ref.phi0);
  ref.hessShift =
      minEig >= floorEig ? 0.0 : 1.5 * (floorEig - minEig);
  if (ref.hessShift > 0)
    for (int i = 0; i < g.M; ++i)
      for (int j = 0; j < (g.n == 1 ? 1 : g.M); ++j) {
        const Vec rho = g.rho(i, j);
        ref.phi0.values[static_cast<size_t>(g.index(i, j))] +=
            ref.hessShift / 2 * rho.squaredNorm();
      }

  for (int i = 0; i < g.M; ++i)
    for (int j = 0; j < (g.n == 1 ? 1 : g.M); ++j) {
      const long k = g.index(i, j);
      const Mat Hu = u.hess(ref.x[static_cast<size_t>(k)]);
      Mat Hphi = Hu.inverse();
      for (int c = 0; c < g.n; ++c) Hphi(c, c) += ref.hessShift;
      const double det =
          g.n == 1 ? Hphi(0, 0)
                   : Hphi(0, 0) * Hphi(1, 1) - Hphi(0, 1) * Hphi(1, 0);
      ref.logdet0[static_cast<size_t>(k)] = std::log(det);
      ref.w[static_cast<size_t>(k)] =
          static_cast<double>(detail::pc_dot(ref.Pc, g, i, j)) -
          ref.logdet0[static_cast<size_t>(k)] / alpha;
    }

  // Mass normalization: shift phi0 so the discrete masses of
  // e^{-alpha(phi0 - <P_c,rho>)} and det(D^2 phi0) agree over the grid.
  // Both sums use log-sum-exp; the cell volume h^n cancels.
  auto lse = [&](auto&& expo) {
    long double mx = -std::numeric_limits<long double>::infinity();
    for (long k = 0; k < N; ++k)
      mx = std::max(mx, static_cast<long double>(expo(k)));
    long double s = 0.0L;
    for (long k = 0; k < N; ++k)
      s += std::exp(static_cast<long double>(expo(k)) - mx);
    return mx + std::log(s);
  };
  const long double num = lse([&](long k) {
    const int i = g.n == 1 ? static_cast<int>(k) : static_cast<int>(k / g.M);
    const int j = g.n == 1 ? 0 : static_cast<int>(k % g.M);
    return -alpha * (ref.phi0.values[static_cast<size_t>(k)] -
                     static_cast<double>(detail::pc_dot(ref.Pc, g, i, j)));
  });
  const long double den =
      lse([&](long k) { return ref.logdet0[static_cast<size_t>(k)]; });
  ref.shift = static_cast<double>((num - den) / alpha);
  for (auto& v : ref.phi0.values) v += ref.shift;
  return ref;
}

/**
 * March t from 0 to alpha.  Guards alpha against R(X) unless cfg.force;
 * each accepted step appends to the trace, whose t column is strictly
 * increasing.  On stall the best reached potential is returned with
 * status Stalled (step underflow) or ConvexityLost (the line search died
 * against the convexity guard).
 */
inline SolveResult continuity_solve(const FanoPolytope& P,
                                    const FanoReport& rep,
                                    const SolverConfig& cfg,
                                    const RhoGrid& g) {
  if (!(cfg.alpha > 0) || cfg.alpha > 1)
    throw AlphaOutOfRange("alpha must lie in (0, 1]");
  const double R = to_double(rep.R);
  if (!cfg.force && cfg.alpha > R + 1e-12)
    throw AlphaAboveR("alpha = " + std::to_string(cfg.alpha) +
                      " exceeds R(X) = " + rat_str(rep.R) +
                      "; pass force to experiment above the window");

  SolveResult res;
  res.ref = reference_data(P, rep, cfg.alpha, g);
  res.phi = res.ref.phi0;

  auto record = [&](double t, const detail::NewtonOutcome& o) {
    res.trace.steps.push_back(
        {t, o.iters, o.residual, detail::min_hessian_eig(res.phi)});
  };

  // Polish at t = 0: close the O(h^2) gap between the analytic w and the
  // discrete Hessian of phi0 before the march starts.
  detail::NewtonOutcome o0 =
      detail::newton_at_t(res.phi, res.ref.Pc, cfg.alpha, 0.0, res.ref.w, cfg);
  record(0.0, o0);
  if (!o0.converged) {
    res.status = o0.convexityIssue ? SolveStatus::ConvexityLost
                                   : SolveStatus::Stalled;
    res.trace.status = res.status;
    res.tReached = 0;
    res.message = "Newton failed at t = 0";
    return res;
  }

  double t = 0;
  double dt = std::clamp(cfg.tInit, cfg.tMin, cfg.tMax);
  bool lastConvexity = false;
  while (t < cfg.alpha) {
    double dtTry = std::min(dt, cfg.alpha - t);
    const double tNext =
        (cfg.alpha - t - dtTry <= 1e-15) ? cfg.alpha : t + dtTry;
    PotentialGrid save = res.phi;
    detail::NewtonOutcome o = detail::newton_at_t(res.phi, res.ref.Pc,
                                                  cfg.alpha, tNext, res.ref.w,
                                                  cfg);
    if (cfg.verbose >= 1)
      std::fprintf(stderr, "  step t=%.6f dt=%.3e iters=%d resid=%.3e ok=%d\n",
                   tNext, dtTry, o.iters, o.residual, o.converged ? 1 : 0);
    if (o.converged) {
      t = tNext;
      record(t, o);
      if (o.iters <= 12) dt = std::min(dt * 2, cfg.tMax);
    } else {
      res.phi = std::move(save);
      lastConvexity = o.convexityIssue;
      dt = dtTry / 2;
      if (dt < cfg.tMin) {
        res.status = lastConvexity ? SolveStatus::ConvexityLost
                                   : SolveStatus::Stalled;
        res.trace.status = res.status;
        res.tReached = t;
        res.message = "continuity step underflow at t = " + std::to_string(t);
        return res;
      }
    }
  }
  res.status = SolveStatus::Success;
  res.trace.status = res.status;
  res.tReached = cfg.alpha;
  res.message = "reached t = alpha";
  return res;
}

/// Plain Monge-Ampère residual sup |log det D^2 phi + alpha (phi - <P_c,rho>)|
/// over interior nodes.
inline double ma_residual(const PotentialGrid& phi, const Vec& Pc,
                          double alpha) {
  std::vector<double> G;
  double norm = 0;
  std::vector<double> w(static_cast<size_t>(phi.grid.num_nodes()), 0.0);
  if (!detail::eval_residual(phi, Pc, alpha, alpha, w, G, norm))
    throw ValidationError("ma_residual needs an interior-convex potential");
  return norm;
}

/// Blended residual of the continuity family at parameter t.
inline double ma_residual_blended(const PotentialGrid& phi, const Vec& Pc,
                                  double alpha, double t,
                                  const std::vector<double>& w) {
  std::vector<double> G;
  double norm = 0;
  if (!detail::eval_residual(phi, Pc, alpha, t, w, G, norm))
    throw ValidationError("ma_residual needs an interior-convex potential");
  return norm;
}

struct MassCheck {
  double mass = 0;     // Simpson quadrature of det D^2 phi over the interior
  double target = 0;   // Euclidean volume of P
  double defect() const { return std::abs(mass - target); }
};

/// Pushforward mass: the discrete Monge-Ampère measure of the box against
/// the Euclidean volume of P.  The gap is truncation bias (box tail plus
/// the one-cell boundary ring excluded from the quadrature).
inline MassCheck pushforward_mass_check(const PotentialGrid& phi,
                                        const FanoPolytope& P) {
  MassCheck mc;
  mc.target = to_double(P.volume);
  const RhoGrid& g = phi.grid;
  long double sum = 0.0L;
  for (int i = 1; i <= g.M - 2; ++i)
    for (int j = g.n == 1 ? 0 : 1; j <= (g.n == 1 ? 0 : g.M - 2); ++j)
      sum += static_cast<long double>(quad_weight(g, i, j)) *
             phi.det_hess(i, j);
  mc.mass = static_cast<double>(sum);
  return mc;
}

struct BarycenterCheck {
  Vec pushforward;     // barycenter of the discrete MA measure
  double defect = 0;   // sup-norm distance to P_c
};

inline BarycenterCheck barycenter_identity_check(const PotentialGrid& phi,
                                                 const Vec& Pc) {
  const RhoGrid& g = phi.grid;
  long double mass = 0.0L;
  std::vector<long double> num(static_cast<size_t>(g.n), 0.0L);
  for (int i = 1; i <= g.M - 2; ++i)
    for (int j = g.n == 1 ? 0 : 1; j <= (g.n == 1 ? 0 : g.M - 2); ++j) {
      const long double wgt = static_cast<long double>(quad_weight(g, i, j)) *
                              phi.det_hess(i, j);
      mass += wgt;
      const Vec gr = phi.grad(i, j);
      for (int c = 0; c < g.n; ++c) num[static_cast<size_t>(c)] += wgt * gr[c];
    }
  BarycenterCheck bc;
  bc.pushforward = Vec(g.n);
  for (int c = 0; c < g.n; ++c) {
    bc.pushforward[c] = static_cast<double>(num[static_cast<size_t>(c)] / mass);
    bc.defect = std::max(bc.defect, std::abs(bc.pushforward[c] - Pc[c]));
  }
  return bc;
}

/// Worst violation of the facet inequalities by the discrete moment image
/// (centered gradients at interior nodes); <= 0 means the image sits
/// inside the closed polytope.
inline double moment_image_defect(const PotentialGrid& phi,
                                  const FanoPolytope& P) {
  const RhoGrid& g = phi.grid;
  const int F = P.facets.num_facets();
  std::vector<Vec> vn(static_cast<size_t>(F));
  std::vector<double> lam(static_cast<size_t>(F));
  for (int jf = 0; jf < F; ++jf) {
    vn[static_cast<size_t>(jf)] = Vec(g.n);
    for (int c = 0; c < g.n; ++c)
      vn[static_cast<size_t>(jf)][c] = double(P.facets.normals[jf][c]);
    lam[static_cast<size_t>(jf)] = to_double(P.facets.offsets[jf]);
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= g.M - 2; ++i)
    for (int j = g.n == 1 ? 0 : 1; j <= (g.n == 1 ? 0 : g.M - 2); ++j) {
      const Vec gr = phi.grad(i, j);
      for (int jf = 0; jf < F; ++jf)
        worst = std::max(worst, -(vn[static_cast<size_t>(jf)].dot(gr) +
                                  lam[static_cast<size_t>(jf)]));
    }
  return worst;
}

struct Functionals {
  double I = 0;
  double J = 0;
  double F = 0;
};

/**
 * Aubin-Yau I, J and the paired F functional of psi = phi - phiRef,
 * reduced to rho-space quadrature against the reference Monge-Ampère
 * density.  V is the discrete reference mass, which makes the psi = 0 and
 * psi = constant identities exact at floating-point level.  In two
 * dimensions the wedge between the two Hessians is the polarized mixed
 * determinant MD(A, B) = (a11 b22 + a22 b11)/2 - a12 b12.
 */
inline Functionals toric_functionals(const PotentialGrid& phi,
                                     const PotentialGrid& phiRef,
                                     double alpha) {
  const RhoGrid& g = phi.grid;
  if (g.n != phiRef.grid.n || g.M != phiRef.grid.M || g.B != phiRef.grid.B)
    throw GridMismatch("functional arguments must share one grid");
  if (!(alpha > 0)) throw AlphaOutOfRange("alpha must be positive");

  long double V = 0.0L;        // discrete reference mass
  long double sRef = 0.0L;     // sum psi det(ref)
  long double sPhi = 0.0L;     // sum psi det(phi)
  long double sMix = 0.0L;     // sum psi MD(ref, phi)   (n = 2 only)
  long double lseMax = -std::numeric_limits<long double>::infinity();
  std::vector<long double> expo;
  expo.reserve(static_cast<size_t>(g.num_interior()));

  const long double hn = g.n == 1 ? static_cast<long double>(g.h)
                                  : static_cast<long double>(g.h) * g.h;
  for (int i = 1; i <= g.M - 2; ++i)
    for (int j = g.n == 1 ? 0 : 1; j <= (g.n == 1 ? 0 : g.M - 2); ++j) {
      const auto A = phiRef.hess_components(i, j);
      const auto Bh = phi.hess_components(i, j);
      const long double dRef = g.n == 1 ? A[0] : A[0] * A[1] - A[2] * A[2];
      const long double dPhi =
          g.n == 1 ? Bh[0] : Bh[0] * Bh[1] - Bh[2] * Bh[2];
      const long double psi =
          static_cast<long double>(phi.values[g.index(i, j)]) -
          phiRef.values[g.index(i, j)];
      V += dRef * hn;
      sRef += psi * dRef * hn;
      sPhi += psi * dPhi * hn;
      if (g.n == 2)
        sMix += psi * ((A[0] * Bh[1] + A[1] * Bh[0]) / 2.0L - A[2] * Bh[2]) *
                hn;
      const long double e =
          -static_cast<long double>(alpha) * psi + std::log(dRef * hn);
      expo.push_back(e);
      lseMax = std::max(lseMax, e);
    }

  long double lse = 0.0L;
  for (const long double e : expo) lse += std::exp(e - lseMax);
  const long double logMoment = lseMax + std::log(lse);   // log sum e^{-a psi} dRef h^n

  Functionals f;
  f.I = static_cast<double>((sRef - sPhi) / V);
  if (g.n == 1)
    f.J = static_cast<double>((sRef - sPhi) / (2.0L * V));
  else
    f.J = static_cast<double>(
        (2.0L / 3.0L * sRef - (sPhi + sMix) / 3.0L) / V);
  f.F = static_cast<double>(static_cast<long double>(f.J) - sRef / V -
                            (logMoment - std::log(V)) /
                                static_cast<long double>(alpha));
  return f;
}

/// Whitespace-separated per-node dump (interior nodes): coordinates,
/// potential, discrete MA density, centered gradient.
inline void write_dump(std::ostream& os, const PotentialGrid& phi) {
  const RhoGrid& g = phi.grid;
  os << (g.n == 1 ? "# rho phi det grad\n" : "# rho1 rho2 phi det grad1 grad2\n");
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, " %.16g", v);
    os << buf;
  };
  for (int i = 1; i <= g.M - 2; ++i)
    for (int j = g.n == 1 ? 0 : 1; j <= (g.n == 1 ? 0 : g.M - 2); ++j) {
      put(g.coord(i));
      if (g.n == 2) put(g.coord(j));
      put(phi.at(i, j));
      put(static_cast<double>(phi.det_hess(i, j)));
      const Vec gr = phi.grad(i, j);
      for (int c = 0; c < g.n; ++c) put(gr[c]);
      os << '\n';
    }
}

}  // namespace torickit
