#ifndef QUASIPERM_PERMUTATION_HPP
#define QUASIPERM_PERMUTATION_HPP

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quasiperm/error.hpp"
#include "quasiperm/rational.hpp"

namespace quasiperm {

/// A permutation of [k] in one-line notation, 1-based values. The empty
/// permutation (order 0) is a valid value; it shows up as a direct summand.
class Permutation {
public:
  Permutation() = default;

  explicit Permutation(std::vector<int> one_line) : img_(std::move(one_line)) {
    const int k = static_cast<int>(img_.size());
    std::vector<bool> seen(static_cast<std::size_t>(k), false);
    for (int v : img_) {
      if (v < 1 || v > k || seen[static_cast<std::size_t>(v - 1)])
        fail(errc::not_a_bijection, "sequence is not a bijection of [" + std::to_string(k) + "]");
      seen[static_cast<std::size_t>(v - 1)] = true;
    }
  }

  static Permutation identity(int k) {
    std::vector<int> v(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] = i + 1;
    return Permutation(std::move(v));
  }

  /// Parses one-line notation: "2143", or comma-separated "10,2,1,..." for
  /// values past 9.
  static Permutation parse(std::string_view text) {
    if (text.empty()) fail(errc::empty_input, "empty permutation literal");
    std::vector<int> vals;
    if (text.find(',') != std::string_view::npos) {
      std::size_t pos = 0;
      while (pos <= text.size()) {
        auto next = text.find(',', pos);
        if (next == std::string_view::npos) next = text.size();
        auto tok = text.substr(pos, next - pos);
        if (tok.empty()) fail(errc::parse_error, "empty token in permutation literal");
        int v = 0;
        for (char c : tok) {
          if (c < '0' || c > '9') fail(errc::parse_error, "invalid permutation token: '" + std::string(tok) + "'");
          v = v * 10 + (c - '0');
        }
        vals.push_back(v);
        pos = next + 1;
      }
    } else {
      for (char c : text) {
        if (c < '1' || c > '9') fail(errc::parse_error, std::string("invalid permutation digit: '") + c + "'");
        vals.push_back(c - '0');
      }
    }
    return Permutation(std::move(vals));
  }

  int order() const { return static_cast<int>(img_.size()); }

  /// Value at 1-based position.
  int operator()(int pos) const { return img_[static_cast<std::size_t>(pos - 1)]; }

  const std::vector<int>& one_line() const { return img_; }

  std::string str() const {
    std::string s;
    const bool wide = order() > 9;
    for (std::size_t i = 0; i < img_.size(); ++i) {
      if (wide && i) s += ',';
      s += std::to_string(img_[i]);
    }
    return s;
  }

  Permutation inverse() const {
    std::vector<int> inv(img_.size());
    for (int i = 1; i <= order(); ++i) inv[static_cast<std::size_t>((*this)(i)-1)] = i;
    return Permutation(std::move(inv));
  }

  bool operator==(const Permutation& o) const = default;
  auto operator<=>(const Permutation& o) const = default;

private:
  std::vector<int> img_;
};

/// The subpermutation of `host` induced by 1-based positions, which must be
/// nonempty and strictly increasing.
inline Permutation induced_pattern(const Permutation& host, std::span<const int> positions) {
  if (positions.empty()) fail(errc::empty_input, "induced_pattern: empty position set");
  const int n = host.order();
  std::vector<int> vals;
  vals.reserve(positions.size());
  int prev = 0;
  for (int p : positions) {
    if (p < 1 || p > n || p <= prev) fail(errc::index_out_of_range, "induced_pattern: bad position " + std::to_string(p));
    prev = p;
    vals.push_back(host(p));
  }
  // rank-compress the values
  std::vector<int> sorted = vals;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> out(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i)
    out[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), vals[i]) - sorted.begin()) + 1;
  return Permutation(std::move(out));
}

inline std::vector<Permutation> all_permutations(int k) {
  std::vector<int> v(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] = i + 1;
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation(v));
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

/// Exact pattern density d(pattern, host): the fraction of |pattern|-subsets
/// of positions of `host` inducing `pattern`. Zero when the host is shorter
/// than the pattern.
inline Rational pattern_density(const Permutation& pattern, const Permutation& host) {
  const int k = pattern.order();
  const int n = host.order();
  if (k == 0) return 1;
  if (n < k) return 0;
  // enumerate k-subsets of [n] in lex order
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i + 1;
  Integer hits = 0;
  while (true) {
    if (induced_pattern(host, idx) == pattern) ++hits;
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - (k - 1 - i)) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return Rational(hits, binomial(static_cast<unsigned>(n), static_cast<unsigned>(k)));
}

/// The dihedral group of order 8 acting on permutation matrices: horizontal
/// and vertical reflections, transposition, and their compositions.
enum class SymmetryOp : std::uint8_t {
  id = 0,
  reverse,
  complement,
  rev_complement,
  inverse,
  inv_reverse,
  inv_complement,
  inv_rev_complement,
};

inline constexpr std::array<SymmetryOp, 8> all_symmetry_ops{
    SymmetryOp::id,          SymmetryOp::reverse,        SymmetryOp::complement,
    SymmetryOp::rev_complement, SymmetryOp::inverse,     SymmetryOp::inv_reverse,
    SymmetryOp::inv_complement, SymmetryOp::inv_rev_complement,
};

inline const char* op_name(SymmetryOp op) {
  switch (op) {
    case SymmetryOp::id: return "id";
    case SymmetryOp::reverse: return "reverse";
    case SymmetryOp::complement: return "complement";
    case SymmetryOp::rev_complement: return "rev-complement";
    case SymmetryOp::inverse: return "inverse";
    case SymmetryOp::inv_reverse: return "inv-reverse";
    case SymmetryOp::inv_complement: return "inv-complement";
    case SymmetryOp::inv_rev_complement: return "inv-rev-complement";
  }
  return "?";
}

inline SymmetryOp parse_op(std::string_view name) {
  for (SymmetryOp op : all_symmetry_ops)
    if (name == op_name(op)) return op;
  fail(errc::parse_error, "unknown symmetry op: '" + std::string(name) + "'");
}

inline Permutation apply_symmetry(SymmetryOp op, const Permutation& p) {
  const int k = p.order();
  auto build = [&](auto&& f) {
    std::vector<int> v(static_cast<std::size_t>(k));
    for (int i = 1; i <= k; ++i) v[static_cast<std::size_t>(i - 1)] = f(i);
    return Permutation(std::move(v));
  };
  switch (op) {
    case SymmetryOp::id: return p;
    case SymmetryOp::reverse: return build([&](int i) { return p(k + 1 - i); });
    case SymmetryOp::complement: return build([&](int i) { return k + 1 - p(i); });
    case SymmetryOp::rev_complement: return build([&](int i) { return k + 1 - p(k + 1 - i); });
    case SymmetryOp::inverse: return p.inverse();
    case SymmetryOp::inv_reverse: {
      Permutation q = p.inverse();
      return build([&](int i) { return q(k + 1 - i); });
    }
    case SymmetryOp::inv_complement: {
      Permutation q = p.inverse();
      return build([&](int i) { return k + 1 - q(i); });
    }
    case SymmetryOp::inv_rev_complement: {
      Permutation q = p.inverse();
      return build([&](int i) { return k + 1 - q(k + 1 - i); });
    }
  }
  fail(errc::index_out_of_range, "unreachable symmetry op");
}

namespace detail {
// The composition table is derived once by comparing actions on all of S4,
// where the 8 ops act faithfully.
inline const std::array<std::array<SymmetryOp, 8>, 8>& compose_table() {
  static const auto table = [] {
    std::array<std::array<SymmetryOp, 8>, 8> t{};
    const auto s4 = all_permutations(4);
    for (SymmetryOp f : all_symmetry_ops) {
      for (SymmetryOp g : all_symmetry_ops) {
        bool found = false;
        for (SymmetryOp h : all_symmetry_ops) {
          bool same = true;
          for (const auto& p : s4) {
            if (apply_symmetry(h, p) != apply_symmetry(f, apply_symmetry(g, p))) {
              same = false;
              break;
            }
          }
          if (same) {
            t[static_cast<std::size_t>(f)][static_cast<std::size_t>(g)] = h;
            found = true;
            break;
          }
        }
        if (!found) fail(errc::validation_error, "symmetry ops do not close under composition");
      }
    }
    return t;
  }();
  return table;
}
} // namespace detail

/// compose(f, g) applies g first, then f.
inline SymmetryOp compose(SymmetryOp f, SymmetryOp g) {
  return detail::compose_table()[static_cast<std::size_t>(f)][static_cast<std::size_t>(g)];
}

inline SymmetryOp op_inverse(SymmetryOp f) {
  for (SymmetryOp g : all_symmetry_ops)
    if (compose(f, g) == SymmetryOp::id) return g;
  fail(errc::validation_error, "symmetry op without inverse");
}

} // namespace quasiperm

#endif
