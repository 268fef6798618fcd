#pragma once
/**
 * special.hpp
 *
 * Closed-form conical solutions:
 *
 *   - the P^1 conical metric on the interval (-1, 1),
 *       phi(rho) = (2/beta) log(1 + e^{beta rho}) - rho - (1/beta) log(2 beta),
 *     which solves phi'' = e^{-beta phi} exactly (the 1-D real Monge-Ampere
 *     equation with angle parameter beta and centered moment interval);
 *
 *   - the Calabi-symmetry profile on [a, b]: the linear two-point problem
 *       Y'(x) + (1/x + alpha) Y(x) = 2,   Y(a) = Y(b) = 0,
 *     whose Y(a) = 0 branch is Y = 2/alpha - 2/(alpha^2 x) + c/(x e^{alpha x})
 *     with c = (2/alpha^2) e^{alpha a} (1 - a alpha).  Consistency at x = b is
 *     measured by the defect |Y(b)|, a positive multiple of
 *       g_{a,b}(alpha) = (b alpha - 1) e^{alpha (b - a)} - a alpha + 1,
 *     and the certificate below proves g > 0 on (0, 1]: no profile exists.
 */

#include "torickit/rational.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace torickit {

struct CertificateFailed : Error { using Error::Error; };

// ------------------------------------------------------------ P^1 conical ----

/// phi(rho) = (2/beta) log(1 + e^{beta rho}) - rho - (1/beta) log(2 beta).
/// Legendre dual of the weighted interval potential; moment image (-1, 1),
/// gradient tanh(beta rho / 2), angle 2 pi beta at both ends.
struct P1ConicalPotential {
  double beta = 1;

  double operator()(double rho) const {
    // softplus(x) = max(x, 0) + log1p(e^{-|x|}) never overflows
    const double x = beta * rho;
    const double sp = std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
    return 2 / beta * sp - rho - std::log(2 * beta) / beta;
  }
  double prime(double rho) const { return std::tanh(beta * rho / 2); }
  double second(double rho) const {
    const double t = std::exp(-beta * std::abs(rho));
    return 2 * beta * t / ((1 + t) * (1 + t));
  }
};

inline P1ConicalPotential p1_conical_potential(double beta) {
  if (!(beta > 0) || beta > 1)
    throw AlphaOutOfRange("cone parameter beta = " + std::to_string(beta) +
                          " outside (0, 1]");
  return P1ConicalPotential{beta};
}

// -------------------------------------------------------- Calabi symmetry ----

/// Y(a) = 0 branch of Y' + (1/x + alpha) Y = 2 (integrating factor x e^{alpha x}).
/// Evaluated as Y = (2/(alpha^2 x)) [ z + (1 - a alpha) expm1(-z) ] with
/// z = alpha (x - a); the cancellation in z + expm1(-z) is quadratically small,
/// leaving absolute error ~ eps/alpha — negligible for alpha >= 1e-6.  alpha = 0
/// is the exact limit branch (x Y)' = 2x, i.e. Y = x - a^2/x.
inline double calabi_Y(double alpha, double a, double x) {
  if (alpha == 0) return x - a * a / x;
  const double z = alpha * (x - a);
  const double e = std::expm1(-z);
  return 2 / (alpha * alpha * x) * ((e + z) - a * alpha * e);
}

/// Y'(x) of the same branch: (2/(alpha^2 x^2)) (1 - u e^{-z}) with
/// u = (1 - a alpha)(1 + alpha x), rearranged against the cancellation as
/// (a x alpha^2 - z) - u expm1(-z).
inline double calabi_Yprime(double alpha, double a, double x) {
  if (alpha == 0) return 1 + a * a / (x * x);
  const double z = alpha * (x - a);
  const double u = (1 - a * alpha) * (1 + alpha * x);
  return 2 / (alpha * alpha * x * x) *
         ((a * x * alpha * alpha - z) - u * std::expm1(-z));
}

struct CalabiProfile {
  double alpha = 0;
  double a = 0, b = 0;
  double c = 0;    // coefficient of 1/(x e^{alpha x}); meaningless at alpha = 0

  double operator()(double x) const { return calabi_Y(alpha, a, x); }
  double derivative(double x) const { return calabi_Yprime(alpha, a, x); }
  /// |Y' + (1/x + alpha) Y - 2|
  double ode_residual(double x) const {
    const double y = calabi_Y(alpha, a, x);
    return std::abs(derivative(x) + (1 / x + alpha) * y - 2);
  }
};

struct CalabiSolve {
  std::optional<CalabiProfile> profile;  // engaged iff defect <= tol
  double defect = 0;                     // |Y(b)| of the Y(a) = 0 branch
};

/// Solve the two-point problem on [a, b]: fit Y(a) = 0 exactly, report the
/// consistency defect |Y(b)|, and hand out the profile only when the defect
/// is below tol.  alpha = 0 is accepted as the exact limit branch.
inline CalabiSolve calabi_coefficients(double alpha, double a, double b,
                                       double tol = 1e-10) {
  if (!(a > 0) || !(b > a))
    throw ValidationError("moment interval requires 0 < a < b");
  if (alpha < 0 || alpha > 1)
    throw AlphaOutOfRange("alpha = " + std::to_string(alpha) +
                          " outside [0, 1]");
  CalabiSolve out;
  out.defect = std::abs(calabi_Y(alpha, a, b));
  if (out.defect <= tol) {
    CalabiProfile p;
    p.alpha = alpha;
    p.a = a;
    p.b = b;
    p.c = alpha > 0 ? 2 / (alpha * alpha) * std::exp(alpha * a) * (1 - a * alpha)
                    : std::numeric_limits<double>::quiet_NaN();
    out.profile = p;
  }
  return out;
}

/// g_{a,b}(alpha) = (b alpha - 1) e^{alpha (b - a)} - a alpha + 1.
/// Y(b) = (2/(alpha^2 b)) e^{-alpha (b - a)} g_{a,b}(alpha), so roots of g are
/// exactly the alphas where the two-point problem is solvable.
inline double calabi_constraint(double alpha, double a, double b) {
  return (b * alpha - 1) * std::exp(alpha * (b - a)) - a * alpha + 1;
}

// ------------------------------------------------------------ certificate ----

struct NonexistenceCertificate {
  double g0 = 0;          // g(0), exactly zero in closed form
  double gprime0 = 0;     // g'(0) from g'(alpha) = (6 alpha + 1) e^{2 alpha} - 1
  double minSecond = 0;   // min of g''(alpha) = (12 alpha + 8) e^{2 alpha} on [0, 1]
  double minG = 0;        // min of g on [1e-3, 1]
  int samples = 0;
};

/// Certify g(alpha) = (3 alpha - 1) e^{2 alpha} - alpha + 1 > 0 on (0, 1]:
/// g(0) = 0 and g'(0) = 0 in closed form, convexity g'' > 0 sampled densely,
/// plus a direct positive minimum away from 0.  Together these rule out the
/// two-point profile on [1, 3] for every angle parameter in (0, 1].
inline NonexistenceCertificate nonexistence_certificate(double a = 1,
                                                        double b = 3) {
  if (a != 1 || b != 3)
    throw ValidationError("certificate is specific to the interval [1, 3]");
  NonexistenceCertificate cert;
  cert.samples = 10000;
  cert.g0 = calabi_constraint(0, 1, 3);                    // (-1) + 1
  cert.gprime0 = (6 * 0.0 + 1) * std::exp(2 * 0.0) - 1;    // 1 - 1
  if (cert.g0 != 0 || cert.gprime0 != 0)
    throw CertificateFailed("closed-form values at 0 are nonzero");

  cert.minSecond = std::numeric_limits<double>::infinity();
  cert.minG = std::numeric_limits<double>::infinity();
  for (int k = 0; k < cert.samples; ++k) {
    const double al = static_cast<double>(k) / (cert.samples - 1);
    const double gpp = (12 * al + 8) * std::exp(2 * al);
    cert.minSecond = std::min(cert.minSecond, gpp);
    const double am = 1e-3 + (1 - 1e-3) * al;
    cert.minG = std::min(cert.minG, calabi_constraint(am, 1, 3));
  }
  if (!(cert.minSecond > 0))
    throw CertificateFailed("sampled g'' is not positive");
  if (!(cert.minG > 0))
    throw CertificateFailed("sampled g touches zero on [1e-3, 1]");
  return cert;
}

// -------------------------------------------------------------- root scan ----

struct RootScan {
  double a = 0, b = 0;
  int samples = 0;
  bool rootFound = false;
  double root = 0;        // bisection refinement when a sign change shows up
  double minValue = 0;    // over the sampled alphas
  double argmin = 0;
};

/// Sign-change scan of g_{a,b} on (0, 1].  Exploratory: reports whether the
/// two-point constraint admits a root at the sampled resolution, with no
/// claim about which intervals correspond to metrics.  (g(0) = g'(0) = 0 and
/// g'' = (b-a) e^{alpha(b-a)} ((a+b) + b(b-a) alpha) > 0, so the expected
/// outcome is "no root" for every 0 < a < b; the scan verifies it concretely.)
inline RootScan scan_constraint_root(double a, double b, int samples = 10001) {
  if (!(a > 0) || !(b > a))
    throw ValidationError("moment interval requires 0 < a < b");
  if (samples < 2) throw ValidationError("need at least two samples");
  RootScan scan;
  scan.a = a;
  scan.b = b;
  scan.samples = samples;
  scan.minValue = std::numeric_limits<double>::infinity();
  double prevAlpha = 0, prevG = 0;
  for (int k = 1; k < samples; ++k) {
    const double al = static_cast<double>(k) / (samples - 1);
    const double g = calabi_constraint(al, a, b);
    if (g < scan.minValue) {
      scan.minValue = g;
      scan.argmin = al;
    }
    // A root of record is any sampled g <= 0 (g -> 0+ near alpha = 0); a
    // strict sign change against the previous sample is refined by bisection.
    if (!scan.rootFound && g <= 0) {
      scan.rootFound = true;
      scan.root = al;
      if (g < 0 && k > 1 && prevG > 0) {
        double lo = prevAlpha, hi = al;  // g(lo) > 0 > g(hi)
        for (int it = 0; it < 100; ++it) {
          const double mid = (lo + hi) / 2;
          (calabi_constraint(mid, a, b) > 0 ? lo : hi) = mid;
        }
        scan.root = (lo + hi) / 2;
      }
    }
    prevAlpha = al;
    prevG = g;
  }
  return scan;
}

}  // namespace torickit
