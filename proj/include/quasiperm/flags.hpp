#ifndef QUASIPERM_FLAGS_HPP
#define QUASIPERM_FLAGS_HPP

#include <algorithm>
#include <compare>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "quasiperm/error.hpp"
#include "quasiperm/linalg.hpp"
#include "quasiperm/permutation.hpp"
#include "quasiperm/rational.hpp"

namespace quasiperm {

/// Root types: tau1 = 12, tau2 = 21.
enum class FlagType { tau1, tau2 };

inline const char* type_name(FlagType t) { return t == FlagType::tau1 ? "tau1" : "tau2"; }
inline FlagType opposite(FlagType t) { return t == FlagType::tau1 ? FlagType::tau2 : FlagType::tau1; }

/// Permutation with two distinguished positions (ordered by first
/// coordinate) inducing the type. Rendered with the roots in square
/// brackets: "[1]2[3]4".
struct RootedPermutation {
  Permutation base;
  int r1 = 0, r2 = 0; // 1-based positions, r1 < r2

  int order() const { return base.order(); }
  FlagType type() const { return base(r1) < base(r2) ? FlagType::tau1 : FlagType::tau2; }

  std::string str() const {
    std::string s;
    for (int i = 1; i <= order(); ++i) {
      if (i == r1 || i == r2)
        s += "[" + std::to_string(base(i)) + "]";
      else
        s += std::to_string(base(i));
    }
    return s;
  }

  auto operator<=>(const RootedPermutation&) const = default;
};

/// Parses bracket notation. When `expected` is given, the roots must induce
/// that type.
inline RootedPermutation parse_rooted(std::string_view text, std::optional<FlagType> expected = std::nullopt) {
  std::vector<int> vals;
  std::vector<int> roots;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '[') {
      if (i + 2 >= text.size() || text[i + 2] != ']' || text[i + 1] < '1' || text[i + 1] > '9')
        fail(errc::parse_error, "malformed root bracket in '" + std::string(text) + "'");
      vals.push_back(text[i + 1] - '0');
      roots.push_back(static_cast<int>(vals.size()));
      i += 3;
    } else if (c >= '1' && c <= '9') {
      vals.push_back(c - '0');
      ++i;
    } else {
      fail(errc::parse_error, std::string("invalid character in rooted permutation: '") + c + "'");
    }
  }
  if (roots.size() != 2) fail(errc::bad_root_count, "expected exactly 2 roots in '" + std::string(text) + "'");
  RootedPermutation f{Permutation(std::move(vals)), roots[0], roots[1]};
  if (expected && f.type() != *expected)
    fail(errc::roots_induce_wrong_type, "roots of '" + std::string(text) + "' induce the other type");
  return f;
}

/// All flags of the given type and order, ordered by (base, root pair).
inline std::vector<RootedPermutation> enumerate_flags(FlagType type, int k) {
  if (k < 2 || k > 6) fail(errc::order_too_large, "flags of order 2..6 only");
  std::vector<RootedPermutation> out;
  for (const auto& p : all_permutations(k))
    for (int a = 1; a <= k; ++a)
      for (int b = a + 1; b <= k; ++b) {
        RootedPermutation f{p, a, b};
        if (f.type() == type) out.push_back(std::move(f));
      }
  return out;
}

/// Swaps the two root values, keeping every other point fixed; maps each
/// flag to its counterpart of the opposite type. An involution.
inline RootedPermutation mirrored(const RootedPermutation& f) {
  std::vector<int> v = f.base.one_line();
  std::swap(v[static_cast<std::size_t>(f.r1 - 1)], v[static_cast<std::size_t>(f.r2 - 1)]);
  return RootedPermutation{Permutation(std::move(v)), f.r1, f.r2};
}

/// Finite formal rational combination of flags of one type.
class FlagVector {
public:
  explicit FlagVector(FlagType type) : type_(type) {}

  FlagType type() const { return type_; }
  const std::map<RootedPermutation, Rational>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add(const RootedPermutation& f, const Rational& c) {
    if (c == 0) return;
    if (f.type() != type_) fail(errc::type_mismatch, "flag term of the wrong type");
    auto it = terms_.find(f);
    if (it == terms_.end()) {
      terms_.emplace(f, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  FlagVector& operator+=(const FlagVector& o) {
    if (o.type_ != type_) fail(errc::type_mismatch, "adding flag vectors of different types");
    for (const auto& [f, c] : o.terms_) add(f, c);
    return *this;
  }

  FlagVector& operator-=(const FlagVector& o) {
    if (o.type_ != type_) fail(errc::type_mismatch, "subtracting flag vectors of different types");
    for (const auto& [f, c] : o.terms_) add(f, -c);
    return *this;
  }

  FlagVector& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [f, c] : terms_) c *= s;
    return *this;
  }

  friend FlagVector operator+(FlagVector a, const FlagVector& b) { return a += b; }
  friend FlagVector operator-(FlagVector a, const FlagVector& b) { return a -= b; }
  friend FlagVector operator*(FlagVector a, const Rational& s) { return a *= s; }

  bool operator==(const FlagVector&) const = default;

private:
  FlagType type_;
  std::map<RootedPermutation, Rational> terms_;
};

inline FlagVector mirrored(const FlagVector& v) {
  FlagVector out(opposite(v.type()));
  for (const auto& [f, c] : v.terms()) out.add(mirrored(f), c);
  return out;
}

namespace detail {

inline int flag_index(const std::vector<RootedPermutation>& list, const RootedPermutation& f) {
  auto it = std::lower_bound(list.begin(), list.end(), f);
  if (it == list.end() || !(*it == f)) fail(errc::index_out_of_range, "flag not found in basis");
  return static_cast<int>(it - list.begin());
}

/// Induced rooted subflag of rho on the union of its roots and the given
/// non-root positions.
inline RootedPermutation induced_flag(const RootedPermutation& rho, const std::vector<int>& extra_positions) {
  std::vector<int> pos = extra_positions;
  pos.push_back(rho.r1);
  pos.push_back(rho.r2);
  std::sort(pos.begin(), pos.end());
  Permutation sub = induced_pattern(rho.base, pos);
  int a = 0, b = 0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (pos[i] == rho.r1) a = static_cast<int>(i) + 1;
    if (pos[i] == rho.r2) b = static_cast<int>(i) + 1;
  }
  return RootedPermutation{std::move(sub), a, b};
}

/// Sparse product expansion for pairs of order-4 flags of one type: for each
/// order-6 flag, the 6 ways to split its four non-root points contribute
/// probability 1/6 to one (F1, F2) pair.
struct ProductTable {
  std::vector<RootedPermutation> basis4; // sorted
  std::vector<RootedPermutation> basis6; // sorted
  // key a * 72 + b -> list of (rho index, split count)
  std::unordered_map<int, std::vector<std::pair<int, int>>> entries;
};

inline const ProductTable& product_table(FlagType type) {
  static std::map<FlagType, ProductTable> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(type);
  if (it != cache.end()) return it->second;
  ProductTable t;
  t.basis4 = enumerate_flags(type, 4);
  t.basis6 = enumerate_flags(type, 6);
  const int n4 = static_cast<int>(t.basis4.size());
  for (int r = 0; r < static_cast<int>(t.basis6.size()); ++r) {
    const auto& rho = t.basis6[static_cast<std::size_t>(r)];
    std::vector<int> nonroots;
    for (int p = 1; p <= 6; ++p)
      if (p != rho.r1 && p != rho.r2) nonroots.push_back(p);
    for (std::size_t x = 0; x < nonroots.size(); ++x) {
      for (std::size_t y = x + 1; y < nonroots.size(); ++y) {
        std::vector<int> first{nonroots[x], nonroots[y]};
        std::vector<int> second;
        for (int p : nonroots)
          if (p != nonroots[x] && p != nonroots[y]) second.push_back(p);
        // the complementary subset is itself enumerated, so record each
        // ordered split exactly once
        const int a = flag_index(t.basis4, induced_flag(rho, first));
        const int b = flag_index(t.basis4, induced_flag(rho, second));
        auto& lst = t.entries[a * n4 + b];
        bool merged = false;
        for (auto& [ri, cnt] : lst)
          if (ri == r) {
            ++cnt;
            merged = true;
            break;
          }
        if (!merged) lst.emplace_back(r, 1);
      }
    }
  }
  return cache.emplace(type, std::move(t)).first->second;
}

} // namespace detail

/// Razborov product of two flags of one type: the coefficient of each flag
/// of order k1+k2-2 is the probability that a random (k1-2)-subset of its
/// non-root points, together with the roots, induces F1 while the rest
/// induce F2.
inline FlagVector flag_product(const RootedPermutation& f1, const RootedPermutation& f2) {
  if (f1.type() != f2.type()) fail(errc::type_mismatch, "flag product requires a common type");
  const int k1 = f1.order(), k2 = f2.order();
  const int m = k1 + k2 - 2;
  if (m > 6) fail(errc::order_too_large, "flag product exceeds order 6");
  FlagVector out(f1.type());
  const Integer total = binomial(static_cast<unsigned>(m - 2), static_cast<unsigned>(k1 - 2));
  for (const auto& rho : enumerate_flags(f1.type(), m)) {
    std::vector<int> nonroots;
    for (int p = 1; p <= m; ++p)
      if (p != rho.r1 && p != rho.r2) nonroots.push_back(p);
    const int nr = static_cast<int>(nonroots.size());
    const int pick = k1 - 2;
    Integer hits = 0;
    std::vector<int> sel(static_cast<std::size_t>(pick));
    auto rec = [&](auto&& self, int start, int depth) -> void {
      if (depth == pick) {
        std::vector<int> first, second;
        for (int idx = 0; idx < nr; ++idx) {
          bool chosen = false;
          for (int s = 0; s < pick; ++s)
            if (sel[static_cast<std::size_t>(s)] == idx) chosen = true;
          (chosen ? first : second).push_back(nonroots[static_cast<std::size_t>(idx)]);
        }
        if (detail::induced_flag(rho, first) == f1 && detail::induced_flag(rho, second) == f2) ++hits;
        return;
      }
      for (int idx = start; idx < nr; ++idx) {
        sel[static_cast<std::size_t>(depth)] = idx;
        self(self, idx + 1, depth + 1);
      }
    };
    rec(rec, 0, 0);
    if (hits != 0) out.add(rho, Rational(hits, total));
  }
  return out;
}

/// sum_{a,b} M_ab w_a w_b expanded bilinearly; order-4 inputs produce an
/// order-6 combination. Uses the cached split table.
inline FlagVector quadratic_form(std::span<const FlagVector> w, const SymmetricForm& M) {
  if (static_cast<int>(w.size()) != M.order()) fail(errc::dimension_mismatch, "w and M sizes differ");
  if (w.empty()) fail(errc::dimension_mismatch, "empty quadratic form");
  const FlagType type = w[0].type();
  for (const auto& v : w)
    if (v.type() != type) fail(errc::type_mismatch, "mixed types in quadratic form");
  const auto& tbl = detail::product_table(type);
  const int n4 = static_cast<int>(tbl.basis4.size());
  std::vector<Rational> acc(tbl.basis6.size(), Rational(0));
  FlagVector out(type); // holds terms produced outside the 4x4 fast path
  for (int a = 0; a < M.order(); ++a) {
    for (int b = 0; b < M.order(); ++b) {
      if (M.at(a, b) == 0) continue;
      for (const auto& [fa, ca] : w[static_cast<std::size_t>(a)].terms()) {
        for (const auto& [fb, cb] : w[static_cast<std::size_t>(b)].terms()) {
          const Rational scale = M.at(a, b) * ca * cb;
          if (fa.order() == 4 && fb.order() == 4) {
            const int ia = detail::flag_index(tbl.basis4, fa);
            const int ib = detail::flag_index(tbl.basis4, fb);
            auto it = tbl.entries.find(ia * n4 + ib);
            if (it == tbl.entries.end()) continue;
            for (const auto& [ri, cnt] : it->second)
              acc[static_cast<std::size_t>(ri)] += scale * Rational(cnt, 6);
          } else {
            out += flag_product(fa, fb) * scale;
          }
        }
      }
    }
  }
  for (std::size_t i = 0; i < acc.size(); ++i)
    if (acc[i] != 0) out.add(tbl.basis6[i], acc[i]);
  return out;
}

/// Unlabeling: each flag maps to q(F) times its base, where q(F) is the
/// fraction of root pairs of the base realizing F.
inline std::map<Permutation, Rational> unlabel(const FlagVector& v) {
  std::map<Permutation, Rational> out;
  for (const auto& [f, c] : v.terms()) {
    const int k = f.order();
    Integer realizing = 0;
    for (int a = 1; a <= k; ++a)
      for (int b = a + 1; b <= k; ++b)
        if (RootedPermutation{f.base, a, b} == f) ++realizing;
    const Rational q(realizing, binomial(static_cast<unsigned>(k), 2));
    auto [it, inserted] = out.emplace(f.base, c * q);
    if (!inserted) it->second += c * q;
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

namespace detail {
inline const std::vector<Permutation>& s6_list() {
  static const std::vector<Permutation> list = all_permutations(6);
  return list;
}

inline int s6_index(const Permutation& p) {
  const auto& list = s6_list();
  auto it = std::lower_bound(list.begin(), list.end(), p);
  if (it == list.end() || !(*it == p)) fail(errc::index_out_of_range, "not a 6-permutation");
  return static_cast<int>(it - list.begin());
}

// d(pi, sigma) for pi in S4, sigma in S6, computed once
inline const std::vector<std::vector<Rational>>& density_4_in_6() {
  static const auto table = [] {
    std::vector<std::vector<Rational>> t(24, std::vector<Rational>(720));
    const auto s4 = all_permutations(4);
    const auto& s6 = s6_list();
    for (std::size_t i = 0; i < s4.size(); ++i)
      for (std::size_t j = 0; j < s6.size(); ++j) t[i][j] = pattern_density(s4[i], s6[j]);
    return t;
  }();
  return table;
}
} // namespace detail

/// Expands a combination of permutations (orders up to 6) plus a constant
/// into the 720-dimensional order-6 coefficient vector: the coefficient at
/// sigma is constant + sum_pi c_pi d(pi, sigma). Evaluating any permuton
/// homomorphism against the result agrees with the input.
inline std::vector<Rational> lift_to_order6(const std::map<Permutation, Rational>& combo, const Rational& constant) {
  std::vector<Rational> out(720, constant);
  const auto s4 = all_permutations(4);
  for (const auto& [pi, c] : combo) {
    if (c == 0) continue;
    if (pi.order() == 6) {
      out[static_cast<std::size_t>(detail::s6_index(pi))] += c;
    } else if (pi.order() == 4) {
      int idx = 0;
      for (; idx < 24; ++idx)
        if (s4[static_cast<std::size_t>(idx)] == pi) break;
      const auto& row = detail::density_4_in_6()[static_cast<std::size_t>(idx)];
      for (int j = 0; j < 720; ++j) out[static_cast<std::size_t>(j)] += c * row[static_cast<std::size_t>(j)];
    } else if (pi.order() > 6) {
      fail(errc::order_too_large, "lift_to_order6 accepts orders up to 6");
    } else {
      for (int j = 0; j < 720; ++j)
        out[static_cast<std::size_t>(j)] += c * pattern_density(pi, detail::s6_list()[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

} // namespace quasiperm

#endif
