#ifndef QUASIPERM_LINALG_HPP
#define QUASIPERM_LINALG_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "quasiperm/error.hpp"
#include "quasiperm/rational.hpp"

namespace quasiperm {

/// Symmetric matrix of exact rationals.
class SymmetricForm {
public:
  SymmetricForm() = default;
  explicit SymmetricForm(int m) : m_(m), e_(static_cast<std::size_t>(m) * static_cast<std::size_t>(m)) {}

  static SymmetricForm from_rows(const std::vector<std::vector<Rational>>& rows) {
    const int m = static_cast<int>(rows.size());
    SymmetricForm f(m);
    for (int i = 0; i < m; ++i) {
      if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != m)
        fail(errc::not_square, "symmetric form rows have unequal lengths");
      for (int j = 0; j < m; ++j) f.at(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (f.at(i, j) != f.at(j, i)) fail(errc::validation_error, "matrix is not symmetric");
    return f;
  }

  int order() const { return m_; }
  Rational& at(int i, int j) { return e_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(j)]; }
  const Rational& at(int i, int j) const {
    return e_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(j)];
  }

  SymmetricForm& operator+=(const SymmetricForm& o) {
    if (o.m_ != m_) fail(errc::dimension_mismatch, "adding symmetric forms of unequal order");
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
    return *this;
  }

  SymmetricForm negated() const {
    SymmetricForm f(*this);
    for (auto& x : f.e_) x = -x;
    return f;
  }

  bool operator==(const SymmetricForm&) const = default;

private:
  int m_ = 0;
  std::vector<Rational> e_;
};

struct Inertia {
  int pos = 0;
  int neg = 0;
  int zero = 0;
  bool operator==(const Inertia&) const = default;
};

/// Exact signature via congruence transformations (symmetric Gaussian
/// elimination). When no nonzero diagonal pivot exists, a row/column pair is
/// merged first; this preserves inertia by Sylvester's law.
inline Inertia inertia(SymmetricForm f) {
  const int m = f.order();
  Inertia out;
  std::vector<bool> done(static_cast<std::size_t>(m), false);
  for (int step = 0; step < m; ++step) {
    int p = -1;
    for (int i = 0; i < m; ++i)
      if (!done[static_cast<std::size_t>(i)] && f.at(i, i) != 0) {
        p = i;
        break;
      }
    if (p < 0) {
      // all remaining diagonal entries vanish; look for an off-diagonal entry
      int a = -1, b = -1;
      for (int i = 0; i < m && a < 0; ++i) {
        if (done[static_cast<std::size_t>(i)]) continue;
        for (int j = i + 1; j < m; ++j) {
          if (done[static_cast<std::size_t>(j)]) continue;
          if (f.at(i, j) != 0) {
            a = i;
            b = j;
            break;
          }
        }
      }
      if (a < 0) {
        out.zero = m - out.pos - out.neg;
        return out;
      }
      // congruence: add row/col b into a, producing diagonal entry 2*f(a,b)
      for (int j = 0; j < m; ++j) f.at(a, j) += f.at(b, j);
      for (int i = 0; i < m; ++i) f.at(i, a) += f.at(i, b);
      p = a;
    }
    const Rational pivot = f.at(p, p);
    if (pivot > 0)
      ++out.pos;
    else
      ++out.neg;
    done[static_cast<std::size_t>(p)] = true;
    for (int i = 0; i < m; ++i) {
      if (done[static_cast<std::size_t>(i)] || f.at(i, p) == 0) continue;
      const Rational factor = f.at(i, p) / pivot;
      for (int j = 0; j < m; ++j) f.at(i, j) -= factor * f.at(p, j);
      for (int j = 0; j < m; ++j) f.at(j, i) = f.at(i, j);
    }
  }
  out.zero = m - out.pos - out.neg;
  return out;
}

enum class Definiteness { positive_definite, positive_semidefinite, indefinite };

struct DefinitenessReport {
  Definiteness verdict;
  std::vector<Rational> leading_minors; // filled when all are positive
  Inertia signature;                    // filled otherwise
};

inline Rational determinant(const SymmetricForm& f, int order) {
  // fraction-free would do; plain rational elimination is fine at this scale
  std::vector<std::vector<Rational>> a(static_cast<std::size_t>(order), std::vector<Rational>(static_cast<std::size_t>(order)));
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = f.at(i, j);
  Rational det = 1;
  for (int c = 0; c < order; ++c) {
    int p = -1;
    for (int r = c; r < order; ++r)
      if (a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] != 0) {
        p = r;
        break;
      }
    if (p < 0) return 0;
    if (p != c) {
      std::swap(a[static_cast<std::size_t>(p)], a[static_cast<std::size_t>(c)]);
      det = -det;
    }
    det *= a[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
    for (int r = c + 1; r < order; ++r) {
      if (a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] == 0) continue;
      const Rational factor = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] / a[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
      for (int j = c; j < order; ++j)
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] -= factor * a[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)];
    }
  }
  return det;
}

/// PD via Sylvester's criterion (all leading principal minors positive),
/// otherwise exact inertia. `indefinite` here means "has a negative
/// eigenvalue".
inline DefinitenessReport check_pd(const SymmetricForm& f) {
  DefinitenessReport rep{};
  bool all_positive = true;
  for (int k = 1; k <= f.order(); ++k) {
    Rational minor = determinant(f, k);
    rep.leading_minors.push_back(minor);
    if (minor <= 0) {
      all_positive = false;
      break;
    }
  }
  if (all_positive) {
    rep.verdict = Definiteness::positive_definite;
    return rep;
  }
  rep.leading_minors.clear();
  rep.signature = inertia(f);
  if (rep.signature.neg == 0)
    rep.verdict = rep.signature.zero == 0 ? Definiteness::positive_definite : Definiteness::positive_semidefinite;
  else
    rep.verdict = Definiteness::indefinite;
  return rep;
}

/// Rank of a dense rational matrix given as rows; destructive elimination on
/// a copy.
inline int matrix_rank(std::vector<std::vector<Rational>> rows) {
  if (rows.empty()) return 0;
  const int nr = static_cast<int>(rows.size());
  const int nc = static_cast<int>(rows[0].size());
  int rank = 0;
  int lead = 0;
  for (int c = 0; c < nc && rank < nr; ++c) {
    int p = -1;
    for (int r = rank; r < nr; ++r)
      if (rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] != 0) {
        p = r;
        break;
      }
    if (p < 0) continue;
    std::swap(rows[static_cast<std::size_t>(p)], rows[static_cast<std::size_t>(rank)]);
    for (int r = rank + 1; r < nr; ++r) {
      if (rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] == 0) continue;
      const Rational factor = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] / rows[static_cast<std::size_t>(rank)][static_cast<std::size_t>(c)];
      for (int j = c; j < nc; ++j)
        rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] -= factor * rows[static_cast<std::size_t>(rank)][static_cast<std::size_t>(j)];
    }
    ++rank;
    ++lead;
  }
  (void)lead;
  return rank;
}

/// Eigen-decomposition of a small symmetric matrix by cyclic Jacobi
/// rotations. Heuristic only: results feed search directions, never claims.
struct EigenPair {
  double value;
  std::vector<double> vector;
};

inline std::vector<EigenPair> jacobi_eigen(const SymmetricForm& f, int sweeps = 64) {
  const int m = f.order();
  std::vector<std::vector<double>> a(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m)));
  std::vector<std::vector<double>> v(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m), 0.0));
  for (int i = 0; i < m; ++i) {
    v[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
    for (int j = 0; j < m; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = approx(f.at(i, j));
  }
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double off = 0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) off += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    if (off < 1e-26) break;
    for (int p = 0; p < m; ++p) {
      for (int q = p + 1; q < m; ++q) {
        const double apq = a[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
        if (std::fabs(apq) < 1e-18) continue;
        const double app = a[static_cast<std::size_t>(p)][static_cast<std::size_t>(p)];
        const double aqq = a[static_cast<std::size_t>(q)][static_cast<std::size_t>(q)];
        const double theta = (aqq - app) / (2 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1.0 / std::sqrt(t * t + 1);
        const double s = t * c;
        for (int i = 0; i < m; ++i) {
          const double aip = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)];
          const double aiq = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)];
          a[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)] = c * aip - s * aiq;
          a[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)] = s * aip + c * aiq;
        }
        for (int j = 0; j < m; ++j) {
          const double apj = a[static_cast<std::size_t>(p)][static_cast<std::size_t>(j)];
          const double aqj = a[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)];
          a[static_cast<std::size_t>(p)][static_cast<std::size_t>(j)] = c * apj - s * aqj;
          a[static_cast<std::size_t>(q)][static_cast<std::size_t>(j)] = s * apj + c * aqj;
        }
        for (int i = 0; i < m; ++i) {
          const double vip = v[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)];
          const double viq = v[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)];
          v[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)] = c * vip - s * viq;
          v[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)] = s * vip + c * viq;
        }
      }
    }
  }
  std::vector<EigenPair> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    EigenPair e;
    e.value = a[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
    e.vector.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) e.vector[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    out.push_back(std::move(e));
  }
  return out;
}

/// Best rational approximation with denominator at most `max_den`, by
/// continued fractions.
inline Rational rationalize(double x, std::uint64_t max_den) {
  if (!std::isfinite(x)) fail(errc::validation_error, "cannot rationalize a non-finite value");
  const bool negative = x < 0;
  double y = negative ? -x : x;
  std::uint64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(y);
    if (fl > 9e18) break;
    const std::uint64_t a = static_cast<std::uint64_t>(fl);
    if (q1 != 0 && a > (max_den - q0) / q1) break;
    const std::uint64_t p2 = a * p1 + p0;
    const std::uint64_t q2 = a * q1 + q0;
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
    const double frac = y - fl;
    if (frac < 1e-15) break;
    y = 1.0 / frac;
  }
  if (q1 == 0) return 0;
  Rational r{Integer(p1), Integer(q1)};
  if (negative) r = -r;
  return r;
}

} // namespace quasiperm

#endif
