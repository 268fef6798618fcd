#pragma once
/**
 * rational.hpp
 *
 * Exact rational scalars plus the small dense / lattice linear algebra the
 * polytope layer needs.  Ambient dimension is <= 3 throughout the library and
 * all inputs are desk scale, so lattice integers are int64 and rationals are
 * boost::multiprecision::cpp_rational (header-only, arbitrary precision).
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace torickit {

using Rat    = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;
using IVec   = std::vector<std::int64_t>;

// --------------------------------------------------------------- errors ----

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : Error { using Error::Error; };
struct UnboundedPolytope : Error { using Error::Error; };
struct EmptyPolytope : Error { using Error::Error; };
struct DegeneratePolytope : Error { using Error::Error; };
struct AlphaOutOfRange : Error { using Error::Error; };
struct InternalInconsistency : Error { using Error::Error; };

struct ParseError : Error {
  int line = 0;
  explicit ParseError(const std::string& msg, int ln = 0) : Error(msg), line(ln) {}
};

// -------------------------------------------------------------- scalars ----

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

/// "p/q" when q != 1, else "p".
inline std::string rat_str(const Rat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

/// Accepts "p", "-p", "p/q" (q != 0); normalizes sign into the numerator.
inline Rat parse_rat(const std::string& tok) {
  auto parse_int = [&](const std::string& s) -> std::int64_t {
    if (s.empty()) throw ParseError("empty number in '" + tok + "'");
    std::size_t pos = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      throw ParseError("bad number '" + s + "'");
    }
    if (pos != s.size()) throw ParseError("trailing junk in number '" + s + "'");
    return v;
  };
  const auto slash = tok.find('/');
  if (slash == std::string::npos) return Rat(parse_int(tok));
  const std::int64_t p = parse_int(tok.substr(0, slash));
  const std::int64_t q = parse_int(tok.substr(slash + 1));
  if (q == 0) throw ParseError("zero denominator in '" + tok + "'");
  return Rat(p) / q;
}

// ------------------------------------------------------ integer vectors ----

inline bool is_zero(const IVec& v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t c) { return c == 0; });
}

inline IVec primitive(IVec v) {
  std::int64_t g = 0;
  for (auto c : v) g = std::gcd(g, c);
  if (g > 1)
    for (auto& c : v) c /= g;
  return v;
}

inline std::int64_t dot(const IVec& a, const IVec& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rat dot(const IVec& v, const RatVec& x) {
  Rat s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += Rat(v[i]) * x[i];
  return s;
}

inline Rat dot(const RatVec& a, const RatVec& b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Scale a rational direction to its primitive integer representative.
inline IVec primitive_direction(const RatVec& d) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  BigInt L = 1;
  for (const auto& r : d) L = lcm(L, denominator(r));
  std::vector<BigInt> w;
  w.reserve(d.size());
  for (const auto& r : d) w.push_back(numerator(r) * (L / denominator(r)));
  BigInt g = 0;
  for (const auto& c : w) g = gcd(g, c);
  IVec out(d.size(), 0);
  if (g != 0)
    for (std::size_t i = 0; i < w.size(); ++i)
      out[i] = BigInt(w[i] / g).convert_to<std::int64_t>();
  return out;
}

// --------------------------------------------------- dense exact algebra ----

inline Rat det(const RatMat& m) {
  switch (m.size()) {
    case 1: return m[0][0];
    case 2: return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    case 3:
      return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
             m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    default: throw InternalInconsistency("det: only sizes 1..3 supported");
  }
}

inline std::int64_t det_i(const std::vector<IVec>& m) {
  switch (m.size()) {
    case 1: return m[0][0];
    case 2: return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    case 3:
      return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
             m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    default: throw InternalInconsistency("det_i: only sizes 1..3 supported");
  }
}

/// Exact solve of A x = b (square).  nullopt when A is singular.
inline std::optional<RatVec> solve_linear(RatMat A, RatVec b) {
  const int k = static_cast<int>(A.size());
  for (int c = 0; c < k; ++c) {
    int piv = -1;
    for (int i = c; i < k; ++i)
      if (A[i][c] != 0) { piv = i; break; }
    if (piv < 0) return std::nullopt;
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    for (int i = c + 1; i < k; ++i) {
      if (A[i][c] == 0) continue;
      const Rat f = A[i][c] / A[c][c];
      for (int j = c; j < k; ++j) A[i][j] -= f * A[c][j];
      b[i] -= f * b[c];
    }
  }
  RatVec x(k);
  for (int i = k - 1; i >= 0; --i) {
    Rat s = b[i];
    for (int j = i + 1; j < k; ++j) s -= A[i][j] * x[j];
    x[i] = s / A[i][i];
  }
  return x;
}

inline int rank(RatMat rows) {
  if (rows.empty()) return 0;
  const int n = static_cast<int>(rows[0].size());
  int r = 0;
  for (int c = 0; c < n && r < static_cast<int>(rows.size()); ++c) {
    int piv = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i)
      if (rows[i][c] != 0) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(rows[r], rows[piv]);
    for (int i = r + 1; i < static_cast<int>(rows.size()); ++i) {
      if (rows[i][c] == 0) continue;
      const Rat f = rows[i][c] / rows[r][c];
      for (int j = c; j < n; ++j) rows[i][j] -= f * rows[r][j];
    }
    ++r;
  }
  return r;
}

inline int rank_i(const std::vector<IVec>& rows) {
  RatMat m;
  m.reserve(rows.size());
  for (const auto& r : rows) m.emplace_back(r.begin(), r.end());
  return rank(std::move(m));
}

/// Primitive integer spanning vector of the kernel of an (n-1) x n integer
/// matrix of rank n-1; nullopt when the rows are dependent.  (n <= 3.)
inline std::optional<IVec> kernel_vector(const std::vector<IVec>& rows, int n) {
  if (n == 1) {
    if (!rows.empty()) throw InternalInconsistency("kernel_vector: n=1 expects 0 rows");
    return IVec{1};
  }
  if (n == 2) {
    IVec k{rows[0][1], -rows[0][0]};
    if (is_zero(k)) return std::nullopt;
    return primitive(std::move(k));
  }
  if (n == 3) {
    const IVec& u = rows[0];
    const IVec& v = rows[1];
    IVec k{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
           u[0] * v[1] - u[1] * v[0]};
    if (is_zero(k)) return std::nullopt;
    return primitive(std::move(k));
  }
  throw InternalInconsistency("kernel_vector: only n <= 3 supported");
}

// ---------------------------------------------------------- lattice HNF ----

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  const std::int64_t q = a / b, rem = a % b;
  return (rem != 0 && ((rem < 0) != (b < 0))) ? q - 1 : q;
}

/// Row-style Hermite reduction: returns a canonical basis (positive pivots,
/// entries above a pivot reduced mod the pivot) of the lattice spanned by the
/// input rows.
inline std::vector<IVec> hnf_basis(std::vector<IVec> rows) {
  rows.erase(std::remove_if(rows.begin(), rows.end(),
                            [](const IVec& r) { return is_zero(r); }),
             rows.end());
  if (rows.empty()) return {};
  const int n = static_cast<int>(rows[0].size());
  int r = 0;
  for (int col = 0; col < n && r < static_cast<int>(rows.size()); ++col) {
    for (;;) {
      int piv = -1;
      for (int i = r; i < static_cast<int>(rows.size()); ++i)
        if (rows[i][col] != 0 &&
            (piv < 0 || std::llabs(rows[i][col]) < std::llabs(rows[piv][col])))
          piv = i;
      if (piv < 0) break;
      std::swap(rows[r], rows[piv]);
      bool clean = true;
      for (int i = r + 1; i < static_cast<int>(rows.size()); ++i) {
        if (rows[i][col] == 0) continue;
        const std::int64_t q = rows[i][col] / rows[r][col];
        for (int c = 0; c < n; ++c) rows[i][c] -= q * rows[r][c];
        if (rows[i][col] != 0) clean = false;
      }
      if (clean) break;
    }
    if (rows[r][col] != 0) {
      if (rows[r][col] < 0)
        for (auto& c : rows[r]) c = -c;
      for (int i = 0; i < r; ++i) {
        const std::int64_t q = floor_div(rows[i][col], rows[r][col]);
        if (q != 0)
          for (int c = 0; c < n; ++c) rows[i][c] -= q * rows[r][c];
      }
      ++r;
    }
  }
  rows.resize(r);
  return rows;
}

}  // namespace torickit
