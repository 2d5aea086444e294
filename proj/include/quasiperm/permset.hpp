#ifndef QUASIPERM_PERMSET_HPP
#define QUASIPERM_PERMSET_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "quasiperm/error.hpp"
#include "quasiperm/permutation.hpp"

namespace quasiperm {

/// Subset of the 24 permutations of order 4, stored as a bitmask. Bit i is
/// the i-th permutation of S4 in lexicographic one-line order, so bit 0 is
/// 1234 and bit 23 is 4321. This ordering is part of the JSON schema.
class PermSet {
public:
  static constexpr std::uint32_t kFullMask = (1u << 24) - 1;

  PermSet() = default;
  explicit PermSet(std::uint32_t mask) : mask_(mask & kFullMask) {}

  static const std::vector<Permutation>& s4() {
    static const std::vector<Permutation> list = all_permutations(4); // lex order
    return list;
  }

  static int index_of(const Permutation& p) {
    if (p.order() != 4) fail(errc::index_out_of_range, "PermSet holds 4-permutations only");
    const auto& list = s4();
    for (int i = 0; i < 24; ++i)
      if (list[static_cast<std::size_t>(i)] == p) return i;
    fail(errc::index_out_of_range, "permutation not in S4");
  }

  static PermSet empty() { return PermSet(0); }
  static PermSet full() { return PermSet(kFullMask); }

  /// Parses "1234,2143,3412" (whitespace tolerated around commas).
  static PermSet parse(std::string_view text) {
    PermSet s;
    std::size_t pos = 0;
    while (pos < text.size()) {
      auto next = text.find(',', pos);
      if (next == std::string_view::npos) next = text.size();
      auto tok = text.substr(pos, next - pos);
      while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
      while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t')) tok.remove_suffix(1);
      if (!tok.empty()) s = s.with(Permutation::parse(tok));
      pos = next + 1;
    }
    return s;
  }

  std::uint32_t mask() const { return mask_; }
  int size() const { return static_cast<int>(__builtin_popcount(mask_)); }
  bool contains(int idx) const { return (mask_ >> idx) & 1u; }
  bool contains(const Permutation& p) const { return contains(index_of(p)); }

  PermSet with(const Permutation& p) const { return PermSet(mask_ | (1u << index_of(p))); }
  PermSet without(const Permutation& p) const { return PermSet(mask_ & ~(1u << index_of(p))); }
  PermSet complement() const { return PermSet(~mask_ & kFullMask); }

  std::vector<Permutation> members() const {
    std::vector<Permutation> out;
    for (int i = 0; i < 24; ++i)
      if (contains(i)) out.push_back(s4()[static_cast<std::size_t>(i)]);
    return out;
  }

  std::vector<int> member_indices() const {
    std::vector<int> out;
    for (int i = 0; i < 24; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }

  std::string str() const {
    std::string s;
    for (int i = 0; i < 24; ++i) {
      if (!contains(i)) continue;
      if (!s.empty()) s += ',';
      s += s4()[static_cast<std::size_t>(i)].str();
    }
    return s;
  }

  bool operator==(const PermSet&) const = default;

private:
  std::uint32_t mask_ = 0;
};

namespace detail {
// index remap tables for the 8 symmetry ops acting on S4
inline const std::array<std::array<std::uint8_t, 24>, 8>& op_index_tables() {
  static const auto tables = [] {
    std::array<std::array<std::uint8_t, 24>, 8> t{};
    for (SymmetryOp op : all_symmetry_ops)
      for (int i = 0; i < 24; ++i)
        t[static_cast<std::size_t>(op)][static_cast<std::size_t>(i)] =
            static_cast<std::uint8_t>(PermSet::index_of(apply_symmetry(op, PermSet::s4()[static_cast<std::size_t>(i)])));
    return t;
  }();
  return tables;
}
} // namespace detail

inline PermSet apply_symmetry(SymmetryOp op, PermSet s) {
  const auto& tbl = detail::op_index_tables()[static_cast<std::size_t>(op)];
  std::uint32_t out = 0;
  std::uint32_t m = s.mask();
  while (m) {
    int i = __builtin_ctz(m);
    m &= m - 1;
    out |= 1u << tbl[static_cast<std::size_t>(i)];
  }
  return PermSet(out);
}

/// Lexicographic order on the sorted member lists: a strict subset precedes
/// its superset, otherwise the set containing the smallest element of the
/// symmetric difference comes first.
inline bool set_precedes(PermSet a, PermSet b) {
  std::uint32_t diff = a.mask() ^ b.mask();
  if (!diff) return false;
  if ((a.mask() & ~b.mask()) == 0) return true;  // a is a prefix of b
  if ((b.mask() & ~a.mask()) == 0) return false; // b is a prefix of a
  return (a.mask() >> __builtin_ctz(diff)) & 1u;
}

/// Least set over the 8 symmetry images of S (and of its complement when
/// `include_complement`). Idempotent; constant on orbits.
inline PermSet canonical_form(PermSet s, bool include_complement) {
  PermSet best = s;
  bool first = true;
  for (SymmetryOp op : all_symmetry_ops) {
    PermSet img = apply_symmetry(op, s);
    if (first || set_precedes(img, best)) best = img, first = false;
    if (include_complement) {
      PermSet imgc = img.complement();
      if (set_precedes(imgc, best)) best = imgc;
    }
  }
  return best;
}

/// Distinct images of S under the 8 symmetries (and complement when asked).
inline std::vector<PermSet> orbit(PermSet s, bool include_complement) {
  std::vector<PermSet> out;
  auto push = [&](PermSet v) {
    for (const auto& u : out)
      if (u == v) return;
    out.push_back(v);
  };
  for (SymmetryOp op : all_symmetry_ops) {
    PermSet img = apply_symmetry(op, s);
    push(img);
    if (include_complement) push(img.complement());
  }
  return out;
}

} // namespace quasiperm

#endif
