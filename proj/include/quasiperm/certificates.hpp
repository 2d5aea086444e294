#ifndef QUASIPERM_CERTIFICATES_HPP
#define QUASIPERM_CERTIFICATES_HPP

#include <map>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "quasiperm/error.hpp"
#include "quasiperm/flags.hpp"
#include "quasiperm/linalg.hpp"
#include "quasiperm/permset.hpp"
#include "quasiperm/rational.hpp"

namespace quasiperm {

/// One sum-of-squares certificate: w1 M w1^T unlabeled over tau1 plus the
/// tau2 counterpart equals a positive multiple of (sum over S) - constant.
struct Certificate {
  std::string name;
  PermSet S;
  Rational constant;      // the forced bound on the density sum
  bool lower_bound = true; // true: sum >= constant; false: sum <= constant
  SymmetricForm M;
  std::vector<FlagVector> w1; // tau1
  std::vector<FlagVector> w2; // tau2
  Rational expected_scale;
};

namespace cert_data {

struct RawTerm {
  int sign;
  const char* flag;
};

// The tau1 vectors, transcribed term by term; roots in brackets.
inline constexpr RawTerm kA1[] = {
    {+1, "[1]2[3]4"}, {-1, "[1]4[3]2"}, {+1, "1[2]3[4]"}, {-1, "3[2]1[4]"},
    {+1, "[2]3[4]1"}, {-1, "[2]1[4]3"}, {+1, "4[1]2[3]"}, {-1, "2[1]4[3]"},
};
inline constexpr RawTerm kB1[] = {
    {+1, "1[2]3[4]"}, {-1, "3[2]1[4]"}, {+1, "1[2][3]4"}, {-1, "4[2][3]1"},
    {+1, "1[2][4]3"}, {-1, "3[2][4]1"}, {+1, "1[2]4[3]"}, {-1, "4[2]1[3]"},
};
inline constexpr RawTerm kC1[] = {
    {+1, "[1]2[3]4"}, {-1, "[1]4[3]2"}, {+1, "1[2][3]4"}, {-1, "4[2][3]1"},
    {+1, "[2]1[3]4"}, {-1, "[2]4[3]1"}, {+1, "2[1][3]4"}, {-1, "4[1][3]2"},
};
inline constexpr RawTerm kD1[] = {
    {+1, "2[1]4[3]"}, {-1, "4[1]2[3]"}, {+1, "1[2][3]4"}, {-1, "4[2][3]1"},
    {+1, "2[1][3]4"}, {-1, "4[1][3]2"}, {+1, "1[2]4[3]"}, {-1, "4[2]1[3]"},
};
inline constexpr RawTerm kE1[] = {
    {+1, "[2]1[4]3"}, {-1, "[2]3[4]1"}, {+1, "1[2][3]4"}, {-1, "4[2][3]1"},
    {+1, "[2]1[3]4"}, {-1, "[2]4[3]1"}, {+1, "1[2][4]3"}, {-1, "3[2][4]1"},
};
inline constexpr RawTerm kF1[] = {
    {+1, "1[2][4]3"}, {-1, "3[2][4]1"}, {+1, "4[1][3]2"}, {-1, "2[1][3]4"},
    {+1, "[1]24[3]"}, {-1, "[1]42[3]"}, {+1, "[2]31[4]"}, {-1, "[2]13[4]"},
    {+1, "[1][3]24"}, {-1, "[1][3]42"}, {+1, "[2][4]31"}, {-1, "[2][4]13"},
    {+1, "31[2][4]"}, {-1, "13[2][4]"}, {+1, "24[1][3]"}, {-1, "42[1][3]"},
};
inline constexpr RawTerm kG1[] = {
    {+1, "[1][2]43"}, {-1, "[1][2]34"}, {+1, "[3][4]21"}, {-1, "[3][4]12"},
    {+1, "[1][4]32"}, {-1, "[1][4]23"}, {+1, "[2][3]14"}, {-1, "[2][3]41"},
    {+1, "43[1][2]"}, {-1, "34[1][2]"}, {+1, "21[3][4]"}, {-1, "12[3][4]"},
    {+1, "32[1][4]"}, {-1, "23[1][4]"}, {+1, "14[2][3]"}, {-1, "41[2][3]"},
    {+1, "[1]43[2]"}, {-1, "[1]34[2]"}, {+1, "[3]21[4]"}, {-1, "[3]12[4]"},
    {+1, "[1]32[4]"}, {-1, "[1]23[4]"}, {+1, "[2]14[3]"}, {-1, "[2]41[3]"},
    {+1, "3[1][2]4"}, {-1, "4[1][2]3"}, {+1, "1[3][4]2"}, {-1, "2[3][4]1"},
    {+1, "2[1][4]3"}, {-1, "3[1][4]2"}, {+1, "4[2][3]1"}, {-1, "1[2][3]4"},
};
inline constexpr RawTerm kH1[] = {
    {+1, "1[2]3[4]"}, {-1, "3[2]1[4]"}, {+1, "[2]3[4]1"}, {-1, "[2]1[4]3"},
    {+1, "1[2]4[3]"}, {-1, "4[2]1[3]"}, {+1, "[2]4[3]1"}, {-1, "[2]1[3]4"},
};
inline constexpr RawTerm kI1[] = {
    {+1, "2[1]4[3]"}, {-1, "4[1]2[3]"}, {+1, "[1]4[3]2"}, {-1, "[1]2[3]4"},
    {+1, "1[2]4[3]"}, {-1, "4[2]1[3]"}, {+1, "[2]4[3]1"}, {-1, "[2]1[3]4"},
};
inline constexpr RawTerm kJ1[] = {
    {+1, "[2]13[4]"}, {-1, "[2]31[4]"}, {+1, "13[2][4]"}, {-1, "31[2][4]"},
    {+1, "3[2][4]1"}, {-1, "1[2][4]3"}, {+1, "[2][4]13"}, {-1, "[2][4]31"},
    {+1, "4[2][3]1"}, {-1, "1[2][3]4"}, {+1, "14[2][3]"}, {-1, "41[2][3]"},
    {+1, "[2][3]14"}, {-1, "[2][3]41"}, {+1, "[2]14[3]"}, {-1, "[2]41[3]"},
};
inline constexpr RawTerm kK1[] = {
    {+1, "24[1][3]"}, {-1, "42[1][3]"}, {+1, "4[1][3]2"}, {-1, "2[1][3]4"},
    {+1, "[1]24[3]"}, {-1, "[1]42[3]"}, {+1, "[1][3]24"}, {-1, "[1][3]42"},
    {+1, "4[2][3]1"}, {-1, "1[2][3]4"}, {+1, "14[2][3]"}, {-1, "41[2][3]"},
    {+1, "[2][3]14"}, {-1, "[2][3]41"}, {+1, "[2]14[3]"}, {-1, "[2]41[3]"},
};
inline constexpr RawTerm kL1[] = {
    {+1, "4[2]1[3]"}, {-1, "1[2]4[3]"}, {+1, "4[1]2[3]"}, {-1, "2[1]4[3]"},
    {+1, "[2]3[4]1"}, {-1, "[2]1[4]3"}, {+1, "4[2][3]1"}, {-1, "1[2][3]4"},
    {+1, "[1]2[3]4"}, {-1, "[1]4[3]2"}, {+1, "3[2][4]1"}, {-1, "1[2][4]3"},
};
inline constexpr RawTerm kM1[] = {
    {+1, "[2]1[3]4"}, {-1, "[2]4[3]1"}, {+1, "1[2][3]4"}, {-1, "4[2][3]1"},
    {+1, "[1]2[3]4"}, {-1, "[1]4[3]2"}, {+1, "1[2][4]3"}, {-1, "3[2][4]1"},
    {+1, "2[1][3]4"}, {-1, "4[1][3]2"}, {+1, "3[2][4]1"}, {-1, "1[2][4]3"},
};
inline constexpr RawTerm kN1[] = {
    {+1, "[1][2]43"}, {-1, "[1][2]34"}, {+1, "21[3][4]"}, {-1, "12[3][4]"},
    {+1, "[1]32[4]"}, {-1, "[1]23[4]"}, {+1, "[2]14[3]"}, {-1, "[2]41[3]"},
    {+1, "2[1][4]3"}, {-1, "3[1][4]2"}, {+1, "[2][3]14"}, {-1, "[2][3]41"},
    {+1, "32[1][4]"}, {-1, "23[1][4]"}, {+1, "[1]43[2]"}, {-1, "[1]34[2]"},
    {+1, "1[3][4]2"}, {-1, "2[3][4]1"}, {+1, "[3]21[4]"}, {-1, "[3]12[4]"},
    {+1, "3[1][2]4"}, {-1, "4[1][2]3"}, {+1, "[3][4]21"}, {-1, "[3][4]12"},
    {+1, "43[1][2]"}, {-1, "34[1][2]"}, {+1, "[1][4]32"}, {-1, "[1][4]23"},
    {+1, "14[2][3]"}, {-1, "41[2][3]"}, {+1, "4[2][3]1"}, {-1, "1[2][3]4"},
};
inline constexpr RawTerm kO1[] = {
    {+1, "[1]42[3]"}, {-1, "[1]24[3]"}, {+1, "[1][3]42"}, {-1, "[1][3]24"},
    {+1, "13[2][4]"}, {-1, "31[2][4]"}, {+1, "[2][4]13"}, {-1, "[2][4]31"},
    {+1, "42[1][3]"}, {-1, "24[1][3]"}, {+1, "[2]13[4]"}, {-1, "[2]31[4]"},
    {+1, "2[1][3]4"}, {-1, "4[1][3]2"}, {+1, "3[2][4]1"}, {-1, "1[2][4]3"},
};

struct NamedVector {
  const char* name;
  std::span<const RawTerm> terms;
};

inline const std::vector<NamedVector>& named_tau1_vectors() {
  static const std::vector<NamedVector> v = {
      {"A1", kA1}, {"B1", kB1}, {"C1", kC1}, {"D1", kD1}, {"E1", kE1},
      {"F1", kF1}, {"G1", kG1}, {"H1", kH1}, {"I1", kI1}, {"J1", kJ1},
      {"K1", kK1}, {"L1", kL1}, {"M1", kM1}, {"N1", kN1}, {"O1", kO1},
  };
  return v;
}

} // namespace cert_data

/// Builds the tau1 vector with the given printed name ("A1" .. "O1").
inline FlagVector builtin_vector(std::string_view name) {
  for (const auto& nv : cert_data::named_tau1_vectors()) {
    if (name != nv.name) continue;
    FlagVector v(FlagType::tau1);
    for (const auto& t : nv.terms) v.add(parse_rooted(t.flag, FlagType::tau1), Rational(t.sign));
    return v;
  }
  fail(errc::parse_error, "unknown builtin flag vector: '" + std::string(name) + "'");
}

/// Printed term count before any cancellation, as a transcription checksum.
inline int builtin_vector_term_count(std::string_view name) {
  for (const auto& nv : cert_data::named_tau1_vectors())
    if (name == nv.name) return static_cast<int>(nv.terms.size());
  fail(errc::parse_error, "unknown builtin flag vector: '" + std::string(name) + "'");
}

namespace detail {
inline SymmetricForm int_form(const std::vector<std::vector<long long>>& rows) {
  std::vector<std::vector<Rational>> r;
  r.reserve(rows.size());
  for (const auto& row : rows) {
    std::vector<Rational> x;
    x.reserve(row.size());
    for (long long v : row) x.emplace_back(v);
    r.push_back(std::move(x));
  }
  return SymmetricForm::from_rows(r);
}

inline Certificate make_certificate(std::string name, std::string_view set_csv, Rational constant, bool lower_bound,
                                    SymmetricForm M, const std::vector<const char*>& w_names, Rational scale) {
  Certificate c;
  c.name = std::move(name);
  c.S = PermSet::parse(set_csv);
  c.constant = std::move(constant);
  c.lower_bound = lower_bound;
  c.M = std::move(M);
  for (const char* n : w_names) {
    c.w1.push_back(builtin_vector(n));
    c.w2.push_back(mirrored(c.w1.back()));
  }
  c.expected_scale = std::move(scale);
  return c;
}
} // namespace detail

inline const std::vector<Certificate>& builtin_certificates() {
  static const std::vector<Certificate> certs = [] {
    std::vector<Certificate> v;
    v.push_back(detail::make_certificate(
        "set8a", "1234,1243,2134,2143,3412,3421,4312,4321", Rational(1, 3), true,
        detail::int_form({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 2}}),
        {"B1", "C1", "D1", "E1"}, Rational(2, 3)));
    v.push_back(detail::make_certificate(
        "set8b", "1234,1432,2143,2341,3214,3412,4123,4321", Rational(1, 3), true,
        detail::int_form({{5, 0, 3}, {0, 9, 0}, {3, 0, 4}}),
        {"A1", "F1", "G1"}, Rational(2)));
    v.push_back(detail::make_certificate(
        "set8c", "1324,1342,2413,2431,3124,3142,4213,4231", Rational(1, 3), false,
        detail::int_form({{35, 0, 12, 0}, {0, 35, 0, -12}, {12, 0, 37, 0}, {0, -12, 0, 37}}),
        {"H1", "I1", "J1", "K1"}, Rational(16)));
    v.push_back(detail::make_certificate(
        "set12", "1234,1243,1432,2134,2143,2341,3214,3412,3421,4123,4312,4321", Rational(1, 2), true,
        detail::int_form({{1132, -652, -638, 197, 326},
                          {-652, 774, 516, -68, -326},
                          {-638, 516, 774, 68, -326},
                          {197, -68, 68, 172, 0},
                          {326, -326, -326, 0, 516}}),
        {"A1", "L1", "M1", "N1", "O1"}, Rational(172)));
    return v;
  }();
  return certs;
}

inline const Certificate& builtin_certificate(std::string_view name) {
  for (const auto& c : builtin_certificates())
    if (c.name == name) return c;
  fail(errc::parse_error, "unknown certificate: '" + std::string(name) + "'");
}

struct CertificateReport {
  std::string name;
  bool pass = false;
  bool proportional = false;
  bool scale_known = false;
  Rational scale;                 // meaningful when proportional
  bool scale_positive = false;
  bool scale_matches_expected = false;
  DefinitenessReport definiteness;
  int first_diff = -1;            // S6 lex index of the first mismatch
  Rational residual;              // L - scale*R at first_diff
};

/// Checks L = scale * R exactly at order 6, where L is the unlabeled sum of
/// the two quadratic forms and R encodes (sum over S) - constant. For
/// upper-bound certificates R is rewritten over the complement set.
inline CertificateReport verify_certificate(const Certificate& c) {
  CertificateReport rep;
  rep.name = c.name;

  FlagVector q1 = quadratic_form(c.w1, c.M);
  FlagVector q2 = quadratic_form(c.w2, c.M);
  std::vector<Rational> left = lift_to_order6(unlabel(q1), Rational(0));
  const std::vector<Rational> left2 = lift_to_order6(unlabel(q2), Rational(0));
  for (std::size_t i = 0; i < left.size(); ++i) left[i] += left2[i];

  std::map<Permutation, Rational> rhs;
  Rational rconst;
  if (c.lower_bound) {
    for (const auto& p : c.S.members()) rhs[p] += 1;
    rconst = -c.constant;
  } else {
    for (const auto& p : c.S.complement().members()) rhs[p] += 1;
    rconst = -(1 - c.constant);
  }
  const std::vector<Rational> right = lift_to_order6(rhs, rconst);

  int pivot = -1;
  for (std::size_t i = 0; i < right.size(); ++i)
    if (right[i] != 0) {
      pivot = static_cast<int>(i);
      break;
    }
  if (pivot >= 0) {
    rep.scale = left[static_cast<std::size_t>(pivot)] / right[static_cast<std::size_t>(pivot)];
    rep.scale_known = true;
    rep.proportional = true;
    for (std::size_t i = 0; i < right.size(); ++i) {
      const Rational diff = left[i] - rep.scale * right[i];
      if (diff != 0) {
        rep.proportional = false;
        rep.first_diff = static_cast<int>(i);
        rep.residual = diff;
        break;
      }
    }
  } else {
    // right side identically zero would make the certificate vacuous
    rep.proportional = false;
    rep.first_diff = 0;
  }
  rep.scale_positive = rep.scale_known && rep.scale > 0;
  rep.scale_matches_expected = rep.scale_known && rep.scale == c.expected_scale;
  rep.definiteness = check_pd(c.M);
  rep.pass = rep.proportional && rep.scale_positive && rep.definiteness.verdict != Definiteness::indefinite;
  return rep;
}

struct RelationReport {
  std::vector<std::pair<std::string, bool>> checks;
  bool pass = true;

  void record(std::string name, bool ok) {
    pass = pass && ok;
    checks.emplace_back(std::move(name), ok);
  }
};

/// A1 = B1 + C1 - D1 - E1, A1 = H1 - I1, and every tau2 vector is the
/// root-value mirror of its tau1 counterpart (anchored by B2's printed first
/// term 1[4]3[2]).
inline RelationReport check_linear_relations() {
  RelationReport rep;
  const FlagVector a1 = builtin_vector("A1");
  rep.record("A1 = B1+C1-D1-E1",
             a1 == builtin_vector("B1") + builtin_vector("C1") - builtin_vector("D1") - builtin_vector("E1"));
  rep.record("A1 = H1-I1", a1 == builtin_vector("H1") - builtin_vector("I1"));
  const RootedPermutation b2_first = mirrored(parse_rooted("1[2]3[4]"));
  rep.record("mirror(1[2]3[4]) = 1[4]3[2]", b2_first == parse_rooted("1[4]3[2]"));
  for (const auto& nv : cert_data::named_tau1_vectors()) {
    const FlagVector v1 = builtin_vector(nv.name);
    rep.record(std::string(nv.name) + " mirror involution", mirrored(mirrored(v1)) == v1);
  }
  return rep;
}

/// One seeded single-entry mutation of M or of a w coefficient; used by the
/// soundness (mutation) tests and the CLI negative control.
inline Certificate mutate_certificate(const Certificate& c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Certificate m = c;
  const bool touch_matrix = (rng() & 1u) == 0;
  if (touch_matrix) {
    const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(m.M.order()));
    const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(m.M.order()));
    const Rational delta = (rng() & 1u) ? Rational(1) : Rational(-1);
    m.M.at(i, j) += delta;
    if (i != j) m.M.at(j, i) += delta;
    m.name += "+M[" + std::to_string(i) + "][" + std::to_string(j) + "]";
  } else {
    const bool first = (rng() & 1u) == 0;
    auto& w = first ? m.w1 : m.w2;
    const int a = static_cast<int>(rng() % w.size());
    const auto& terms = w[static_cast<std::size_t>(a)].terms();
    const int t = static_cast<int>(rng() % terms.size());
    auto it = terms.begin();
    std::advance(it, t);
    const RootedPermutation target = it->first;
    const Rational delta = (rng() & 1u) ? Rational(1) : Rational(-1);
    w[static_cast<std::size_t>(a)].add(target, delta);
    m.name += std::string("+") + (first ? "w1[" : "w2[") + std::to_string(a) + "]/" + target.str();
  }
  return m;
}

/// Applies a textual mutation like "M[0][0]=-1" or "w1[2][1]=3/2" (vector
/// index, then term index in flag order).
inline Certificate mutate_certificate(const Certificate& c, std::string_view spec) {
  auto eq = spec.find('=');
  if (eq == std::string_view::npos) fail(errc::parse_error, "mutation spec needs '=': '" + std::string(spec) + "'");
  const Rational value = parse_rational(spec.substr(eq + 1));
  std::string_view target = spec.substr(0, eq);
  auto read_index = [&](std::string_view& s) {
    if (s.empty() || s.front() != '[') fail(errc::parse_error, "expected '[' in mutation target");
    auto close = s.find(']');
    if (close == std::string_view::npos) fail(errc::parse_error, "expected ']' in mutation target");
    int v = 0;
    for (char ch : s.substr(1, close - 1)) {
      if (ch < '0' || ch > '9') fail(errc::parse_error, "bad index in mutation target");
      v = v * 10 + (ch - '0');
    }
    s.remove_prefix(close + 1);
    return v;
  };
  Certificate m = c;
  if (target.substr(0, 1) == "M") {
    target.remove_prefix(1);
    const int i = read_index(target);
    const int j = read_index(target);
    if (i >= m.M.order() || j >= m.M.order()) fail(errc::index_out_of_range, "mutation index exceeds M");
    m.M.at(i, j) = value;
    m.M.at(j, i) = value;
  } else if (target.substr(0, 2) == "w1" || target.substr(0, 2) == "w2") {
    const bool first = target[1] == '1';
    target.remove_prefix(2);
    const int a = read_index(target);
    const int t = read_index(target);
    auto& w = first ? m.w1 : m.w2;
    if (a >= static_cast<int>(w.size())) fail(errc::index_out_of_range, "mutation index exceeds w");
    const auto& terms = w[static_cast<std::size_t>(a)].terms();
    if (t >= static_cast<int>(terms.size())) fail(errc::index_out_of_range, "mutation term index out of range");
    auto it = terms.begin();
    std::advance(it, t);
    const RootedPermutation flag = it->first;
    const Rational delta = value - it->second;
    w[static_cast<std::size_t>(a)].add(flag, delta);
  } else {
    fail(errc::parse_error, "mutation target must start with M, w1 or w2");
  }
  m.name += "+" + std::string(spec);
  return m;
}

} // namespace quasiperm

#endif
