#ifndef QUASIPERM_STEP_PERMUTON_HPP
#define QUASIPERM_STEP_PERMUTON_HPP

#include <array>
#include <utility>
#include <vector>

#include "quasiperm/error.hpp"
#include "quasiperm/matrix.hpp"
#include "quasiperm/permset.hpp"
#include "quasiperm/permutation.hpp"
#include "quasiperm/rational.hpp"

namespace quasiperm {

inline constexpr int kMaxStepPatternOrder = 6;

namespace detail {

/// All non-decreasing functions [k] -> [n] together with the reciprocal of
/// the product of the factorials of their level sizes.
struct MonotoneMap {
  std::vector<int> f; // 1-based block indices, f[0..k-1]
  Rational weight;    // 1 / prod |f^-1(i)|!
};

inline std::vector<MonotoneMap> monotone_maps(int k, int n) {
  std::vector<MonotoneMap> out;
  std::vector<int> cur(static_cast<std::size_t>(k));
  auto rec = [&](auto&& self, int pos, int low) -> void {
    if (pos == k) {
      MonotoneMap m;
      m.f = cur;
      Integer denom = 1;
      int run = 1;
      for (int i = 1; i < k; ++i) {
        if (cur[static_cast<std::size_t>(i)] == cur[static_cast<std::size_t>(i - 1)])
          denom *= ++run;
        else
          run = 1;
      }
      m.weight = Rational(Integer(1), denom);
      out.push_back(std::move(m));
      return;
    }
    for (int v = low; v <= n; ++v) {
      cur[static_cast<std::size_t>(pos)] = v;
      self(self, pos + 1, v);
    }
  };
  rec(rec, 0, 1);
  return out;
}

} // namespace detail

/// Exact density of a k-pattern in the step permuton mu[A]: the double sum
/// over non-decreasing f, g with multinomial corrections, scaled by k!/n^k.
inline Rational step_density(const RationalMatrix& A, const Permutation& pi) {
  const int k = pi.order();
  const int n = A.order();
  if (k == 0) return 1;
  if (k > kMaxStepPatternOrder)
    fail(errc::order_too_large, "step_density supports patterns of order at most " + std::to_string(kMaxStepPatternOrder));
  const auto maps = detail::monotone_maps(k, n);
  Rational total = 0;
  for (const auto& fm : maps) {
    for (const auto& gm : maps) {
      Rational prod = fm.weight * gm.weight;
      bool zero = false;
      for (int i = 1; i <= k; ++i) {
        const Rational& a = A.at(fm.f[static_cast<std::size_t>(i - 1)] - 1, gm.f[static_cast<std::size_t>(pi(i) - 1)] - 1);
        if (a == 0) {
          zero = true;
          break;
        }
        prod *= a;
      }
      if (!zero) total += prod;
    }
  }
  total *= Rational(factorial(static_cast<unsigned>(k)), int_pow(n, static_cast<unsigned>(k)));
  return total;
}

inline Rational set_density_sum(const RationalMatrix& A, const PermSet& S) {
  Rational total = 0;
  for (const auto& pi : S.members()) total += step_density(A, pi);
  return total;
}

/// All ways to write pi as a direct sum alpha (+) beta: a prefix of
/// positions carrying exactly the values 1..s, for every split point s from
/// 0 to |pi|. Empty parts included.
inline std::vector<std::pair<Permutation, Permutation>> direct_sum_decompositions(const Permutation& pi) {
  const int k = pi.order();
  std::vector<std::pair<Permutation, Permutation>> out;
  for (int s = 0; s <= k; ++s) {
    bool ok = true;
    for (int i = 1; i <= s && ok; ++i) ok = pi(i) <= s;
    if (!ok) continue;
    std::vector<int> a, b;
    for (int i = 1; i <= s; ++i) a.push_back(pi(i));
    for (int i = s + 1; i <= k; ++i) b.push_back(pi(i) - s);
    out.emplace_back(Permutation(std::move(a)), Permutation(std::move(b)));
  }
  return out;
}

/// Univariate polynomial in lambda on [1, 2], degree at most 4.
class BlendPolynomial {
public:
  BlendPolynomial() { c_.fill(Rational(0)); }

  Rational& coeff(int i) { return c_[static_cast<std::size_t>(i)]; }
  const Rational& coeff(int i) const { return c_[static_cast<std::size_t>(i)]; }

  Rational eval(const Rational& lambda) const {
    Rational v = 0;
    for (int i = 4; i >= 0; --i) v = v * lambda + c_[static_cast<std::size_t>(i)];
    return v;
  }

  BlendPolynomial& add_scaled(const BlendPolynomial& o, const Rational& s) {
    for (int i = 0; i <= 4; ++i) c_[static_cast<std::size_t>(i)] += s * o.c_[static_cast<std::size_t>(i)];
    return *this;
  }

  bool operator==(const BlendPolynomial&) const = default;

private:
  std::array<Rational, 5> c_;
};

namespace detail {
// (2-lambda)^a * (lambda-1)^b expanded in powers of lambda
inline BlendPolynomial diagonal_weight(int a, int b) {
  BlendPolynomial p;
  p.coeff(0) = 1;
  auto mul_linear = [](const BlendPolynomial& q, const Rational& c0, const Rational& c1) {
    BlendPolynomial r;
    for (int i = 0; i <= 4; ++i) {
      r.coeff(i) += c0 * q.coeff(i);
      if (i + 1 <= 4) r.coeff(i + 1) += c1 * q.coeff(i);
    }
    return r;
  };
  for (int i = 0; i < a; ++i) p = mul_linear(p, Rational(2), Rational(-1));
  for (int i = 0; i < b; ++i) p = mul_linear(p, Rational(-1), Rational(1));
  return p;
}
} // namespace detail

/// f(lambda) = sum over S of the density of pi in the diagonal blend of
/// mu[A1] (lower-left block, weight 2-lambda) and mu[A2] (upper-right block,
/// weight lambda-1). Patterns split as direct sums across the two blocks.
inline BlendPolynomial blend_polynomial(const PermSet& S, const RationalMatrix& A1, const RationalMatrix& A2) {
  BlendPolynomial f;
  // densities of all patterns of order <= 4 in each endpoint, computed lazily
  auto dens = [](const RationalMatrix& A, const Permutation& p) { return step_density(A, p); };
  for (const auto& pi : S.members()) {
    for (const auto& [alpha, beta] : direct_sum_decompositions(pi)) {
      const int a = alpha.order(), b = beta.order();
      const Rational scale = Rational(binomial(4, static_cast<unsigned>(a))) * dens(A1, alpha) * dens(A2, beta);
      if (scale == 0) continue;
      f.add_scaled(detail::diagonal_weight(a, b), scale);
    }
  }
  return f;
}

/// Certified bisection interval around a crossing of f with `target`.
struct BlendInterval {
  Rational lo, hi;   // 1 <= lo < hi <= 2
  Rational f_lo, f_hi; // exact evaluations, strictly straddling the target
};

inline BlendInterval blend_witness(const PermSet& S, const RationalMatrix& A1, const RationalMatrix& A2,
                                   const Rational& target, const Rational& tol) {
  const BlendPolynomial f = blend_polynomial(S, A1, A2);
  Rational lo = 1, hi = 2;
  Rational flo = f.eval(lo), fhi = f.eval(hi);
  if (flo == target || fhi == target || ((flo < target) == (fhi < target)))
    fail(errc::no_straddle, "f(1) and f(2) do not strictly straddle the target");
  while (hi - lo > tol) {
    // a quartic crosses the target at most four times, so one of these
    // interior points evaluates off-target
    Rational mid;
    Rational fmid;
    bool found = false;
    for (int num : {4, 3, 5, 2, 6}) {
      mid = lo + (hi - lo) * num / 8;
      fmid = f.eval(mid);
      if (fmid != target) {
        found = true;
        break;
      }
    }
    if (!found) fail(errc::validation_error, "polynomial matches target on five points");
    if ((fmid < target) == (flo < target)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }
  return BlendInterval{lo, hi, flo, fhi};
}

} // namespace quasiperm

#endif
