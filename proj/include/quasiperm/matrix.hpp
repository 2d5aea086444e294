#ifndef QUASIPERM_MATRIX_HPP
#define QUASIPERM_MATRIX_HPP

#include <string>
#include <utility>
#include <vector>

#include "quasiperm/error.hpp"
#include "quasiperm/permutation.hpp"
#include "quasiperm/rational.hpp"

namespace quasiperm {

/// Doubly stochastic matrix with exact rational entries, encoding the step
/// permuton mu[A]. Entry (i, j) is the mass of the cell
/// [(i-1)/n, i/n) x [(j-1)/n, j/n), with i along the first (horizontal)
/// coordinate.
class RationalMatrix {
public:
  RationalMatrix() = default;

  /// Validates squareness, nonnegativity, and exact row/column sums.
  static RationalMatrix validated(std::vector<std::vector<Rational>> rows) {
    const int n = static_cast<int>(rows.size());
    if (n == 0) fail(errc::empty_input, "matrix has no rows");
    for (const auto& r : rows)
      if (static_cast<int>(r.size()) != n) fail(errc::not_square, "matrix is not square");
    RationalMatrix a;
    a.n_ = n;
    a.e_.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (auto& r : rows)
      for (auto& x : r) {
        if (x < 0) fail(errc::negative_entry, "matrix has a negative entry");
        a.e_.push_back(std::move(x));
      }
    for (int i = 0; i < n; ++i) {
      Rational s = 0;
      for (int j = 0; j < n; ++j) s += a.at(i, j);
      if (s != 1) fail(errc::row_sum_not_one, "row " + std::to_string(i + 1) + " sums to " + to_string(s));
    }
    for (int j = 0; j < n; ++j) {
      Rational s = 0;
      for (int i = 0; i < n; ++i) s += a.at(i, j);
      if (s != 1) fail(errc::col_sum_not_one, "column " + std::to_string(j + 1) + " sums to " + to_string(s));
    }
    return a;
  }

  static RationalMatrix uniform(int n) {
    RationalMatrix a;
    a.n_ = n;
    a.e_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), Rational(1, n));
    return a;
  }

  /// Step approximation of the permuton drawing sigma: block column sigma(j)
  /// sits over block row j, so refining the identity pattern converges to
  /// the monotone increasing permuton.
  static RationalMatrix from_permutation(const Permutation& sigma) {
    const int n = sigma.order();
    if (n == 0) fail(errc::empty_input, "cannot build a matrix from the empty permutation");
    RationalMatrix a;
    a.n_ = n;
    a.e_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), Rational(0));
    for (int j = 1; j <= n; ++j) a.mutable_at(j - 1, sigma(j) - 1) = 1;
    return a;
  }

  int order() const { return n_; }
  const Rational& at(int i, int j) const { return e_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)]; }

  RationalMatrix transpose() const {
    RationalMatrix t;
    t.n_ = n_;
    t.e_.resize(e_.size());
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) t.mutable_at(i, j) = at(j, i);
    return t;
  }

  RationalMatrix reversed_rows() const {
    RationalMatrix t;
    t.n_ = n_;
    t.e_.resize(e_.size());
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) t.mutable_at(i, j) = at(n_ - 1 - i, j);
    return t;
  }

  RationalMatrix reversed_cols() const {
    RationalMatrix t;
    t.n_ = n_;
    t.e_.resize(e_.size());
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) t.mutable_at(i, j) = at(i, n_ - 1 - j);
    return t;
  }

  /// f-fold blowup: each entry becomes an f x f block with value a_ij / f.
  /// Encodes the same measure.
  RationalMatrix blowup(int f) const {
    RationalMatrix t;
    t.n_ = n_ * f;
    t.e_.resize(static_cast<std::size_t>(t.n_) * static_cast<std::size_t>(t.n_));
    for (int i = 0; i < t.n_; ++i)
      for (int j = 0; j < t.n_; ++j) t.mutable_at(i, j) = at(i / f, j / f) / f;
    return t;
  }

  /// mu[A] is the uniform measure exactly when every entry equals 1/n.
  bool is_uniform() const {
    const Rational u(1, n_);
    for (const auto& x : e_)
      if (x != u) return false;
    return true;
  }

  bool operator==(const RationalMatrix&) const = default;

  // for construction by trusted builders (perturbation, blends)
  static RationalMatrix unchecked(int n, std::vector<Rational> entries) {
    RationalMatrix a;
    a.n_ = n;
    a.e_ = std::move(entries);
    return a;
  }
  Rational& mutable_at(int i, int j) { return e_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)]; }

private:
  int n_ = 0;
  std::vector<Rational> e_;
};

} // namespace quasiperm

#endif
