#ifndef QUASIPERM_PERTURBATION_HPP
#define QUASIPERM_PERTURBATION_HPP

#include <array>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "quasiperm/error.hpp"
#include "quasiperm/linalg.hpp"
#include "quasiperm/matrix.hpp"
#include "quasiperm/permset.hpp"
#include "quasiperm/permutation.hpp"
#include "quasiperm/rational.hpp"
#include "quasiperm/step_permuton.hpp"

namespace quasiperm {

/// B^{ij}: +1 at (i,j) and (i+1,j+1), -1 at (i,j+1) and (i+1,j), zero
/// elsewhere. All row and column sums vanish. Indices are 1-based, in
/// [n-1] x [n-1].
inline std::vector<std::vector<int>> basis_matrix(int i, int j, int n) {
  if (i < 1 || i > n - 1 || j < 1 || j > n - 1)
    fail(errc::index_out_of_range, "basis_matrix indices must lie in [n-1]");
  std::vector<std::vector<int>> b(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  b[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = 1;
  b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
  b[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)] = -1;
  b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)] = -1;
  return b;
}

/// Coordinates x_{ij}, (i,j) in [n-1]^2 row-major, constrained to the cube
/// |x|_inf <= 1/(4n).
class PerturbationVector {
public:
  PerturbationVector(int n, std::vector<Rational> x) : n_(n), x_(std::move(x)) {
    const int d = (n - 1) * (n - 1);
    if (static_cast<int>(x_.size()) != d)
      fail(errc::dimension_mismatch, "perturbation vector needs " + std::to_string(d) + " coordinates");
    const Rational bound(1, 4 * n);
    for (const auto& v : x_)
      if (v > bound || v < -bound) fail(errc::outside_cube, "coordinate exceeds 1/(4n)");
  }

  static PerturbationVector zero(int n) {
    return PerturbationVector(n, std::vector<Rational>(static_cast<std::size_t>((n - 1) * (n - 1)), Rational(0)));
  }

  int block_order() const { return n_; }
  int dimension() const { return (n_ - 1) * (n_ - 1); }
  const Rational& at(int i, int j) const { return x_[static_cast<std::size_t>((i - 1) * (n_ - 1) + (j - 1))]; }
  const std::vector<Rational>& coords() const { return x_; }

private:
  int n_;
  std::vector<Rational> x_;
};

/// A + sum x_ij B^{ij} around the uniform matrix A; doubly stochastic for
/// every point of the cube.
inline RationalMatrix perturbed_matrix(const PerturbationVector& x) {
  const int n = x.block_order();
  std::vector<Rational> e(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), Rational(1, n));
  auto at = [&](int r, int c) -> Rational& { return e[static_cast<std::size_t>(r - 1) * static_cast<std::size_t>(n) + static_cast<std::size_t>(c - 1)]; };
  for (int i = 1; i <= n - 1; ++i)
    for (int j = 1; j <= n - 1; ++j) {
      const Rational& v = x.at(i, j);
      if (v == 0) continue;
      at(i, j) += v;
      at(i + 1, j + 1) += v;
      at(i, j + 1) -= v;
      at(i + 1, j) -= v;
    }
  return RationalMatrix::unchecked(n, std::move(e));
}

inline Rational h_eval(const PermSet& S, const PerturbationVector& x) {
  return set_density_sum(perturbed_matrix(x), S);
}

/// 4x4 cover matrix: entry (i, j) counts members with pi(j) = i. Every row
/// and column sums to |S|.
struct CoverMatrix {
  std::array<std::array<int, 4>, 4> c{};

  int at(int i, int j) const { return c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]; }

  bool is_constant() const {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != c[0][0]) return false;
    return true;
  }

  bool operator==(const CoverMatrix&) const = default;
};

inline CoverMatrix cover_matrix(const PermSet& S) {
  CoverMatrix cm{};
  for (const auto& pi : S.members())
    for (int j = 1; j <= 4; ++j) ++cm.c[static_cast<std::size_t>(pi(j) - 1)][static_cast<std::size_t>(j - 1)];
  return cm;
}

namespace detail {

// Per-factor linear coefficients at the origin: for the factor at
// (row r, col c) of the perturbed matrix, the variables x_ab with a nonzero
// coefficient and that coefficient's sign.
struct FactorVars {
  std::array<std::pair<int, int>, 4> vars; // (row-major var index, sign)
  int count = 0;
};

inline FactorVars factor_vars(int r, int c, int n) {
  FactorVars fv;
  for (int a : {r - 1, r}) {
    if (a < 1 || a > n - 1) continue;
    for (int b : {c - 1, c}) {
      if (b < 1 || b > n - 1) continue;
      const int sign = ((a == r) == (b == c)) ? 1 : -1;
      fv.vars[static_cast<std::size_t>(fv.count++)] = {(a - 1) * (n - 1) + (b - 1), sign};
    }
  }
  return fv;
}

struct PerturbationDerivatives {
  std::vector<Rational> gradient; // (n-1)^2
  SymmetricForm hessian;          // order (n-1)^2
};

// Exact first and second partials of h_{pi,n} at the origin, by expanding
// the density polynomial whose factors are affine in x.
inline PerturbationDerivatives derivatives_single(const Permutation& pi, int n) {
  const int k = pi.order();
  const int dim = (n - 1) * (n - 1);
  PerturbationDerivatives out;
  out.gradient.assign(static_cast<std::size_t>(dim), Rational(0));
  out.hessian = SymmetricForm(dim);
  const auto maps = detail::monotone_maps(k, n);
  const Rational grad_pref(factorial(static_cast<unsigned>(k)), int_pow(n, static_cast<unsigned>(2 * k - 1)));
  const Rational hess_pref(factorial(static_cast<unsigned>(k)), int_pow(n, static_cast<unsigned>(2 * k - 2)));
  std::array<FactorVars, 6> fvs{};
  for (const auto& fm : maps) {
    for (const auto& gm : maps) {
      const Rational w = fm.weight * gm.weight;
      for (int m = 1; m <= k; ++m)
        fvs[static_cast<std::size_t>(m - 1)] =
            factor_vars(fm.f[static_cast<std::size_t>(m - 1)], gm.f[static_cast<std::size_t>(pi(m) - 1)], n);
      for (int m = 0; m < k; ++m) {
        const auto& fv = fvs[static_cast<std::size_t>(m)];
        for (int t = 0; t < fv.count; ++t)
          out.gradient[static_cast<std::size_t>(fv.vars[static_cast<std::size_t>(t)].first)] +=
              grad_pref * w * fv.vars[static_cast<std::size_t>(t)].second;
      }
      for (int m1 = 0; m1 < k; ++m1) {
        const auto& f1 = fvs[static_cast<std::size_t>(m1)];
        for (int m2 = m1 + 1; m2 < k; ++m2) {
          const auto& f2 = fvs[static_cast<std::size_t>(m2)];
          for (int t1 = 0; t1 < f1.count; ++t1) {
            const auto [v1, s1] = f1.vars[static_cast<std::size_t>(t1)];
            for (int t2 = 0; t2 < f2.count; ++t2) {
              const auto [v2, s2] = f2.vars[static_cast<std::size_t>(t2)];
              const Rational c = hess_pref * w * (s1 * s2);
              out.hessian.at(v1, v2) += c;
              out.hessian.at(v2, v1) += c;
            }
          }
        }
      }
    }
  }
  return out;
}

inline const PerturbationDerivatives& derivatives_cached(int s4_index, int n) {
  static std::map<std::pair<int, int>, PerturbationDerivatives> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(s4_index, n);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, derivatives_single(PermSet::s4()[static_cast<std::size_t>(s4_index)], n)).first;
  return it->second;
}

} // namespace detail

/// Gradient of h_{S,n} at the origin, read off the expanded polynomial.
inline std::vector<Rational> gradient_symbolic(const PermSet& S, int n) {
  const int dim = (n - 1) * (n - 1);
  std::vector<Rational> g(static_cast<std::size_t>(dim), Rational(0));
  for (int idx : S.member_indices()) {
    const auto& d = detail::derivatives_cached(idx, n);
    for (int v = 0; v < dim; ++v) g[static_cast<std::size_t>(v)] += d.gradient[static_cast<std::size_t>(v)];
  }
  return g;
}

/// Gradient as the explicit linear function of an arbitrary 4x4 cover-style
/// matrix: the four-term sum over non-decreasing f, g.
inline std::vector<Rational> gradient_from_cover(const std::array<std::array<Rational, 4>, 4>& C, int n) {
  const int dim = (n - 1) * (n - 1);
  std::vector<Rational> g(static_cast<std::size_t>(dim), Rational(0));
  const auto maps = detail::monotone_maps(4, n);
  const Rational pref(factorial(4), int_pow(n, 7));
  // preimage cell sums: for fixed (f, g), S(a, b) = sum over m in f^-1(a),
  // l in g^-1(b) of C_{l, m}, where m is a position rank and l a value rank
  for (const auto& fm : maps) {
    for (const auto& gm : maps) {
      const Rational w = fm.weight * gm.weight;
      // cell(a, b) for a, b in [n]; only blocks touched by f, g are nonzero
      auto cell = [&](int a, int b) {
        Rational s = 0;
        for (int m = 1; m <= 4; ++m) {
          if (fm.f[static_cast<std::size_t>(m - 1)] != a) continue;
          for (int l = 1; l <= 4; ++l) {
            if (gm.f[static_cast<std::size_t>(l - 1)] != b) continue;
            s += C[static_cast<std::size_t>(l - 1)][static_cast<std::size_t>(m - 1)];
          }
        }
        return s;
      };
      for (int i = 1; i <= n - 1; ++i) {
        for (int j = 1; j <= n - 1; ++j) {
          Rational term = cell(i, j) - cell(i + 1, j) - cell(i, j + 1) + cell(i + 1, j + 1);
          if (term != 0) g[static_cast<std::size_t>((i - 1) * (n - 1) + (j - 1))] += pref * w * term;
        }
      }
    }
  }
  return g;
}

inline std::vector<Rational> gradient_formula(const PermSet& S, int n) {
  const CoverMatrix cm = cover_matrix(S);
  std::array<std::array<Rational, 4>, 4> C;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) C[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = cm.c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return gradient_from_cover(C, n);
}

/// Hessian of h_{S,n} at the origin; order (n-1)^2, row-major coordinates.
inline SymmetricForm hessian(const PermSet& S, int n) {
  SymmetricForm h((n - 1) * (n - 1));
  for (int idx : S.member_indices()) h += detail::derivatives_cached(idx, n).hessian;
  return h;
}

struct KernelReport {
  int n = 0;
  int subspace_dim = 0;   // balanced 4x4 matrices: equal row sums = equal col sums
  int rank = 0;
  int kernel_dim = 0;
  bool constant_in_kernel = false;
};

/// The gradient is linear in the cover matrix. Restricted to balanced 4x4
/// matrices, its kernel must be exactly the constants; verified by exact
/// rank computation for n in {4, 5}.
inline KernelReport gradient_kernel_check(int n) {
  if (n != 4 && n != 5) fail(errc::bad_size, "gradient_kernel_check supports n in {4, 5}");
  KernelReport rep;
  rep.n = n;
  auto image = [&](const std::array<std::array<Rational, 4>, 4>& C) { return gradient_from_cover(C, n); };
  std::vector<std::vector<Rational>> rows;
  // basis of the 10-dimensional balanced subspace: the all-ones matrix plus
  // the nine E_kl - E_k4 - E_4l + E_44 with zero row/col sums
  std::array<std::array<Rational, 4>, 4> J;
  for (auto& r : J) r.fill(Rational(1));
  const auto j_img = image(J);
  bool j_zero = true;
  for (const auto& v : j_img)
    if (v != 0) j_zero = false;
  rep.constant_in_kernel = j_zero;
  rows.push_back(j_img);
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 3; ++l) {
      std::array<std::array<Rational, 4>, 4> F;
      for (auto& r : F) r.fill(Rational(0));
      F[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] = 1;
      F[static_cast<std::size_t>(k)][3] = -1;
      F[3][static_cast<std::size_t>(l)] = -1;
      F[3][3] = 1;
      rows.push_back(image(F));
    }
  }
  rep.subspace_dim = static_cast<int>(rows.size());
  rep.rank = matrix_rank(rows);
  rep.kernel_dim = rep.subspace_dim - rep.rank;
  if (rep.kernel_dim > 1 || !rep.constant_in_kernel)
    fail(errc::kernel_too_large, "gradient kernel on balanced matrices is not exactly the constants at n=" + std::to_string(n));
  return rep;
}

} // namespace quasiperm

#endif
