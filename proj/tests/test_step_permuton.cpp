#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "quasiperm/step_permuton.hpp"
#include "test_support.hpp"

using namespace quasiperm;

namespace {

// test-local reimplementation of the density formula, recursion-based, used
// as the oracle for permutation-matrix hosts
Rational oracle_density(const RationalMatrix& A, const Permutation& pi) {
  const int k = pi.order();
  const int n = A.order();
  Rational total = 0;
  std::vector<int> f(static_cast<std::size_t>(k)), g(static_cast<std::size_t>(k));
  auto weight = [&](const std::vector<int>& v) {
    Integer w = 1;
    int run = 1;
    for (int i = 1; i < k; ++i) {
      if (v[static_cast<std::size_t>(i)] == v[static_cast<std::size_t>(i - 1)])
        w *= ++run;
      else
        run = 1;
    }
    return w;
  };
  auto rec_g = [&](auto&& self, int pos, int low) -> void {
    if (pos == k) {
      Rational prod(Integer(1), weight(f) * weight(g));
      for (int i = 1; i <= k; ++i)
        prod *= A.at(f[static_cast<std::size_t>(i - 1)] - 1, g[static_cast<std::size_t>(pi(i) - 1)] - 1);
      total += prod;
      return;
    }
    for (int v = low; v <= n; ++v) {
      g[static_cast<std::size_t>(pos)] = v;
      self(self, pos + 1, v);
    }
  };
  auto rec_f = [&](auto&& self, int pos, int low) -> void {
    if (pos == k) {
      rec_g(rec_g, 0, 1);
      return;
    }
    for (int v = low; v <= n; ++v) {
      f[static_cast<std::size_t>(pos)] = v;
      self(self, pos + 1, v);
    }
  };
  rec_f(rec_f, 0, 1);
  return total * Rational(factorial(static_cast<unsigned>(k)), int_pow(n, static_cast<unsigned>(k)));
}

const char* kSection5Matrix[6] = {"000100", "000010", "100000", "001000", "000001", "010000"};

RationalMatrix section5_matrix() {
  std::vector<std::vector<Rational>> rows;
  for (const char* r : kSection5Matrix) {
    std::vector<Rational> row;
    for (int j = 0; j < 6; ++j) row.emplace_back(r[j] - '0');
    rows.push_back(std::move(row));
  }
  return RationalMatrix::validated(std::move(rows));
}

} // namespace

TEST_CASE("validation accepts and rejects the right matrices") {
  CHECK(RationalMatrix::validated({{Rational(1)}}).order() == 1);
  CHECK(RationalMatrix::from_permutation(Permutation::identity(4)).order() == 4);
  CHECK_THROWS_AS(RationalMatrix::validated({{Rational(1, 2), Rational(1, 2)}, {Rational(1, 2), Rational(1, 4)}}),
                  error);
  CHECK_THROWS_AS(RationalMatrix::validated({{Rational(1), Rational(0)}}), error);          // not square
  CHECK_THROWS_AS(RationalMatrix::validated({{Rational(2)}, }), error);                     // row sum
  CHECK_THROWS_AS(RationalMatrix::validated({{Rational(3, 2), Rational(-1, 2)},
                                             {Rational(-1, 2), Rational(3, 2)}}),
                  error); // negative entry
}

TEST_CASE("constructors produce doubly stochastic matrices") {
  CHECK(RationalMatrix::uniform(1).at(0, 0) == 1);
  const RationalMatrix p12 = RationalMatrix::from_permutation(Permutation::parse("12"));
  CHECK(p12.at(0, 0) == 1);
  CHECK(p12.at(1, 1) == 1);
  CHECK(p12.at(0, 1) == 0);
  for (int n : {1, 2, 5}) {
    const RationalMatrix u = RationalMatrix::uniform(n);
    for (int i = 0; i < n; ++i) {
      Rational rs = 0, cs = 0;
      for (int j = 0; j < n; ++j) {
        rs += u.at(i, j);
        cs += u.at(j, i);
      }
      CHECK(rs == 1);
      CHECK(cs == 1);
    }
  }
}

TEST_CASE("uniform matrices give density 1/k!") {
  for (int n : {1, 2, 3, 6}) {
    const RationalMatrix u = RationalMatrix::uniform(n);
    for (int k = 1; k <= 4; ++k) {
      const Rational expected(Integer(1), factorial(static_cast<unsigned>(k)));
      for (const auto& pi : all_permutations(k)) REQUIRE(step_density(u, pi) == expected);
      if (n == 6 && k == 4) break; // representative patterns suffice at the largest size
    }
  }
}

TEST_CASE("density sums to one over S_k") {
  std::mt19937_64 rng(7001);
  for (int trial = 0; trial < 3; ++trial) {
    const RationalMatrix A = qptest::random_doubly_stochastic(rng, 2 + trial);
    for (int k = 1; k <= 4; ++k) {
      Rational total = 0;
      for (const auto& pi : all_permutations(k)) total += step_density(A, pi);
      REQUIRE(total == 1);
    }
  }
}

TEST_CASE("order-1 patterns have density one; k>6 is rejected") {
  const RationalMatrix A = RationalMatrix::uniform(3);
  CHECK(step_density(A, Permutation::identity(1)) == 1);
  CHECK_THROWS_AS(step_density(A, Permutation::identity(7)), error);
}

TEST_CASE("the printed 6x6 matrix yields 25/72") {
  const RationalMatrix A = section5_matrix();
  const PermSet S = PermSet::parse("1342,1423,2314,2431,3124,3241,4132,4213");
  CHECK(set_density_sum(A, S) == Rational(25, 72));
  CHECK(set_density_sum(A, PermSet::full()) == 1);
  CHECK(set_density_sum(A, PermSet::empty()) == 0);
}

TEST_CASE("refinement invariance: blowups encode the same measure") {
  std::mt19937_64 rng(7002);
  for (int n : {2, 3}) {
    const RationalMatrix A = qptest::random_doubly_stochastic(rng, n);
    const RationalMatrix B = A.blowup(2);
    for (int k = 1; k <= 4; ++k)
      for (const auto& pi : all_permutations(k)) REQUIRE(step_density(A, pi) == step_density(B, pi));
  }
}

TEST_CASE("symmetry equivariance of step densities") {
  std::mt19937_64 rng(7003);
  const RationalMatrix A = qptest::random_doubly_stochastic(rng, 4);
  for (int k = 2; k <= 3; ++k) {
    for (const auto& pi : all_permutations(k)) {
      const Rational d = step_density(A, pi);
      REQUIRE(d == step_density(A.transpose(), pi.inverse()));
      REQUIRE(d == step_density(A.reversed_rows(), apply_symmetry(SymmetryOp::reverse, pi)));
      REQUIRE(d == step_density(A.reversed_cols(), apply_symmetry(SymmetryOp::complement, pi)));
    }
  }
}

TEST_CASE("orientation: a permutation matrix favors its own pattern") {
  // occupancy-count oracle for P(231), cells (1,2),(2,3),(3,1) of mass 1/3:
  // distinct blocks give 231 (12/54); a pair with the single point in the
  // (3,1) block gives 231 half the time (2 x 3/54); a full triple adds 1/54
  // to every pattern. 312 only arises from pairs in the (3,1) block (2 x
  // 3/54) plus the triple term.
  const RationalMatrix P = RationalMatrix::from_permutation(Permutation::parse("231"));
  CHECK(step_density(P, Permutation::parse("231")) == Rational(19, 54));
  CHECK(step_density(P, Permutation::parse("312")) == Rational(7, 54));
  // the identity pattern dominates in refined identity matrices
  Rational prev = 0;
  for (int n : {2, 4, 8}) {
    const RationalMatrix I = RationalMatrix::from_permutation(Permutation::identity(n));
    const Rational d = step_density(I, Permutation::parse("1234"));
    CHECK(d > prev);
    prev = d;
  }
  CHECK(prev > Rational(1, 2));
}

TEST_CASE("permutation-matrix densities agree with the independent formula oracle") {
  std::mt19937_64 rng(7004);
  for (int n : {3, 4, 5}) {
    const RationalMatrix P = RationalMatrix::from_permutation(qptest::random_permutation(rng, n));
    for (int k = 2; k <= 4; ++k)
      for (int trial = 0; trial < 4; ++trial) {
        const Permutation pi = qptest::random_permutation(rng, k);
        REQUIRE(step_density(P, pi) == oracle_density(P, pi));
      }
  }
}

TEST_CASE("direct sum decompositions") {
  CHECK(direct_sum_decompositions(Permutation::parse("1234")).size() == 5);
  const auto d2143 = direct_sum_decompositions(Permutation::parse("2143"));
  REQUIRE(d2143.size() == 3);
  CHECK(d2143[0].first.order() == 0);
  CHECK(d2143[1].first == Permutation::parse("21"));
  CHECK(d2143[1].second == Permutation::parse("21"));
  CHECK(d2143[2].second.order() == 0);
  const auto d3142 = direct_sum_decompositions(Permutation::parse("3142"));
  REQUIRE(d3142.size() == 2); // simple permutation: trivial splits only
}

TEST_CASE("blend endpoints and normalization") {
  std::mt19937_64 rng(7005);
  // a blend of permutons is a permuton: densities over all of S4 sum to 1
  const RationalMatrix U1 = RationalMatrix::uniform(1);
  const BlendPolynomial full = blend_polynomial(PermSet::full(), U1, U1);
  for (const Rational lambda : {Rational(1), Rational(5, 4), Rational(2)})
    CHECK(full.eval(lambda) == 1);

  const RationalMatrix A1 = qptest::random_doubly_stochastic(rng, 3);
  const RationalMatrix A2 = qptest::random_doubly_stochastic(rng, 4);
  const PermSet T = qptest::random_permset(rng);
  const BlendPolynomial g = blend_polynomial(T, A1, A2);
  CHECK(g.eval(Rational(1)) == set_density_sum(A1, T));
  CHECK(g.eval(Rational(2)) == set_density_sum(A2, T));
}

TEST_CASE("blend at lambda=3/2 matches the materialized block matrix") {
  // mu_{3/2} of two order-5 identity blocks is exactly mu of the order-10
  // identity matrix
  const RationalMatrix I5 = RationalMatrix::from_permutation(Permutation::identity(5));
  const PermSet S = PermSet::parse("1234");
  const BlendPolynomial f = blend_polynomial(S, I5, I5);
  const RationalMatrix I10 = RationalMatrix::from_permutation(Permutation::identity(10));
  CHECK(f.eval(Rational(3, 2)) == step_density(I10, Permutation::parse("1234")));

  // general blocks: lambda = 3/2 with equal orders embeds as a block diagonal
  std::mt19937_64 rng(7006);
  const RationalMatrix A1 = qptest::random_doubly_stochastic(rng, 3);
  const RationalMatrix A2 = qptest::random_doubly_stochastic(rng, 3);
  std::vector<std::vector<Rational>> rows(6, std::vector<Rational>(6, Rational(0)));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = A1.at(i, j);
      rows[static_cast<std::size_t>(i + 3)][static_cast<std::size_t>(j + 3)] = A2.at(i, j);
    }
  const RationalMatrix block = RationalMatrix::validated(std::move(rows));
  const PermSet T = qptest::random_permset(rng);
  CHECK(blend_polynomial(T, A1, A2).eval(Rational(3, 2)) == set_density_sum(block, T));
}

TEST_CASE("blend witness certifies a crossing") {
  const PermSet S = PermSet::parse("1342,1423,2314,2431,3124,3241,4132,4213");
  const RationalMatrix low = RationalMatrix::from_permutation(Permutation::identity(6));
  const RationalMatrix high = section5_matrix();
  const Rational target(1, 3);
  REQUIRE(set_density_sum(low, S) < target);
  REQUIRE(set_density_sum(high, S) > target);
  const Rational tol(Integer(1), Integer(1) << 20);
  const BlendInterval w = blend_witness(S, low, high, target, tol);
  CHECK(w.hi - w.lo <= tol);
  CHECK(w.lo >= 1);
  CHECK(w.hi <= 2);
  CHECK(((w.f_lo < target && target < w.f_hi) || (w.f_hi < target && target < w.f_lo)));

  // no straddle: both endpoints on the same side
  CHECK_THROWS_AS(blend_witness(S, low, low, target, tol), error);
}

TEST_CASE("monotone polynomial bisection brackets the crossing point") {
  // f rises from ~0 to 1 as the blend moves from reversal blocks to identity
  const PermSet S = PermSet::parse("1234");
  const RationalMatrix low = RationalMatrix::from_permutation(Permutation::parse("4321"));
  const RationalMatrix high = RationalMatrix::from_permutation(Permutation::identity(8));
  const Rational target(1, 2);
  const BlendInterval w = blend_witness(S, low, high, target, Rational(1, 1024));
  const BlendPolynomial f = blend_polynomial(S, low, high);
  CHECK(f.eval(w.lo) == w.f_lo);
  CHECK(f.eval(w.hi) == w.f_hi);
  CHECK(w.hi - w.lo <= Rational(1, 1024));
}
