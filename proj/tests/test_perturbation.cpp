#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "quasiperm/certificates.hpp"
#include "quasiperm/perturbation.hpp"
#include "test_support.hpp"

using namespace quasiperm;

namespace {

PerturbationVector unit_direction(int n, int var, const Rational& t) {
  std::vector<Rational> x(static_cast<std::size_t>((n - 1) * (n - 1)), Rational(0));
  x[static_cast<std::size_t>(var)] = t;
  return PerturbationVector(n, std::move(x));
}

PerturbationVector two_directions(int n, int v1, int v2, const Rational& t) {
  std::vector<Rational> x(static_cast<std::size_t>((n - 1) * (n - 1)), Rational(0));
  x[static_cast<std::size_t>(v1)] += t;
  x[static_cast<std::size_t>(v2)] += t;
  return PerturbationVector(n, std::move(x));
}

// exact directional derivative oracle: h restricted to a line is a quartic,
// so five samples recover it exactly
std::array<Rational, 5> line_polynomial(const PermSet& S, int n, const std::vector<int>& vars, const Rational& h) {
  std::array<Rational, 5> samples;
  const std::array<Rational, 5> ts{-2 * h, -h, Rational(0), h, 2 * h};
  for (int s = 0; s < 5; ++s) {
    std::vector<Rational> x(static_cast<std::size_t>((n - 1) * (n - 1)), Rational(0));
    for (int v : vars) x[static_cast<std::size_t>(v)] += ts[static_cast<std::size_t>(s)];
    samples[static_cast<std::size_t>(s)] = h_eval(S, PerturbationVector(n, std::move(x)));
  }
  return qptest::fit_quartic(samples, h);
}

} // namespace

TEST_CASE("basis matrices") {
  const auto b = basis_matrix(1, 1, 2);
  CHECK(b[0][0] == 1);
  CHECK(b[0][1] == -1);
  CHECK(b[1][0] == -1);
  CHECK(b[1][1] == 1);
  for (int n : {2, 4, 5})
    for (int i = 1; i < n; ++i)
      for (int j = 1; j < n; ++j) {
        const auto m = basis_matrix(i, j, n);
        for (int r = 0; r < n; ++r) {
          int row = 0, col = 0;
          for (int c = 0; c < n; ++c) {
            row += m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            col += m[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
          }
          CHECK(row == 0);
          CHECK(col == 0);
        }
      }
  CHECK_THROWS_AS(basis_matrix(0, 1, 3), error);
  CHECK_THROWS_AS(basis_matrix(1, 3, 3), error);
}

TEST_CASE("perturbed matrices stay doubly stochastic on the cube") {
  CHECK(perturbed_matrix(PerturbationVector::zero(3)) == RationalMatrix::uniform(3));

  const auto m = perturbed_matrix(unit_direction(2, 0, Rational(1, 8)));
  CHECK(m.at(0, 0) == Rational(5, 8));
  CHECK(m.at(0, 1) == Rational(3, 8));
  CHECK(m.at(1, 0) == Rational(3, 8));
  CHECK(m.at(1, 1) == Rational(5, 8));

  CHECK_THROWS_AS(unit_direction(2, 0, Rational(1, 4)), error); // 1/(2n) exceeds the cube

  std::mt19937_64 rng(8001);
  for (int n : {2, 3, 5}) {
    std::vector<Rational> x;
    for (int v = 0; v < (n - 1) * (n - 1); ++v)
      x.push_back(Rational(static_cast<int>(rng() % 9) - 4, 4 * n * 4));
    const RationalMatrix pm = perturbed_matrix(PerturbationVector(n, std::move(x)));
    std::vector<std::vector<Rational>> rows(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = pm.at(i, j);
    CHECK_NOTHROW(RationalMatrix::validated(rows));
  }
}

TEST_CASE("h at the origin and on explicit points") {
  std::mt19937_64 rng(8002);
  for (int trial = 0; trial < 4; ++trial) {
    const PermSet S = qptest::random_permset(rng);
    CHECK(h_eval(S, PerturbationVector::zero(2 + trial % 3)) == Rational(S.size(), 24));
  }
  CHECK(h_eval(PermSet::full(), unit_direction(3, 1, Rational(1, 13))) == 1);

  // independent route: the explicit 2x2 matrix built by hand
  const RationalMatrix direct = RationalMatrix::validated(
      {{Rational(5, 8), Rational(3, 8)}, {Rational(3, 8), Rational(5, 8)}});
  CHECK(h_eval(PermSet::parse("1234"), unit_direction(2, 0, Rational(1, 8))) ==
        step_density(direct, Permutation::parse("1234")));
}

TEST_CASE("cover matrices") {
  const CoverMatrix full = cover_matrix(PermSet::full());
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) CHECK(full.at(i, j) == 6);

  const CoverMatrix single = cover_matrix(PermSet::parse("1234"));
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) CHECK(single.at(i, j) == (i == j ? 1 : 0));

  const CoverMatrix c8a = cover_matrix(builtin_certificate("set8a").S);
  CHECK(c8a.is_constant());
  CHECK(c8a.at(1, 1) == 2);

  // row/col sums are |S|
  std::mt19937_64 rng(8003);
  const PermSet S = qptest::random_permset(rng);
  const CoverMatrix c = cover_matrix(S);
  for (int i = 1; i <= 4; ++i) {
    int row = 0, col = 0;
    for (int j = 1; j <= 4; ++j) {
      row += c.at(i, j);
      col += c.at(j, i);
    }
    CHECK(row == S.size());
    CHECK(col == S.size());
  }
}

TEST_CASE("gradients vanish exactly on constant-cover sets") {
  for (const char* name : {"set8a", "set8b", "set8c", "set12"}) {
    const PermSet S = builtin_certificate(name).S;
    REQUIRE(cover_matrix(S).is_constant());
    for (int n : {2, 3, 5}) {
      for (const auto& gval : gradient_symbolic(S, n)) REQUIRE(gval == 0);
      for (const auto& gval : gradient_formula(S, n)) REQUIRE(gval == 0);
    }
  }
  for (int n : {2, 4}) {
    for (const auto& gval : gradient_symbolic(PermSet::full(), n)) REQUIRE(gval == 0);
  }
}

TEST_CASE("symbolic gradient matches the finite-difference oracle") {
  const PermSet S = PermSet::parse("1234");
  const int n = 4;
  const auto grad = gradient_symbolic(S, n);
  bool any_nonzero = false;
  for (int v = 0; v < (n - 1) * (n - 1); ++v) {
    const auto poly = line_polynomial(S, n, {v}, Rational(1, 64));
    REQUIRE(poly[1] == grad[static_cast<std::size_t>(v)]);
    if (grad[static_cast<std::size_t>(v)] != 0) any_nonzero = true;
  }
  CHECK(any_nonzero);
}

TEST_CASE("the cover-matrix formula reproduces the symbolic gradient") {
  std::mt19937_64 rng(8004);
  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 6; ++trial) {
      const PermSet S = qptest::random_permset(rng);
      REQUIRE(gradient_formula(S, n) == gradient_symbolic(S, n));
    }
  }
  // one n=5 spot check
  REQUIRE(gradient_formula(PermSet::parse("1234,4321,2413"), 5) ==
          gradient_symbolic(PermSet::parse("1234,4321,2413"), 5));

  // additivity over disjoint sets
  const PermSet a = PermSet::parse("1234,2143");
  const PermSet b = PermSet::parse("3412,4321,1324");
  const auto ga = gradient_formula(a, 3);
  const auto gb = gradient_formula(b, 3);
  const auto gu = gradient_formula(PermSet(a.mask() | b.mask()), 3);
  for (std::size_t v = 0; v < gu.size(); ++v) REQUIRE(gu[v] == ga[v] + gb[v]);
}

TEST_CASE("hessian structure") {
  std::mt19937_64 rng(8005);
  const int n = 3;
  for (int trial = 0; trial < 4; ++trial) {
    const PermSet S = qptest::random_permset(rng);
    const SymmetricForm h = hessian(S, n);
    // complement negation
    const SymmetricForm hc = hessian(S.complement(), n);
    for (int i = 0; i < h.order(); ++i)
      for (int j = 0; j < h.order(); ++j) {
        REQUIRE(h.at(i, j) == h.at(j, i));
        REQUIRE(h.at(i, j) == -hc.at(i, j));
      }
    // additivity over the members
    SymmetricForm acc((n - 1) * (n - 1));
    for (const auto& pi : S.members()) acc += hessian(PermSet::empty().with(pi), n);
    REQUIRE(acc == h);
  }
}

TEST_CASE("hessian entries match exact line-restriction second derivatives") {
  const PermSet S = PermSet::parse("1342,2431,3124,4213,1234");
  const int n = 3;
  const SymmetricForm H = hessian(S, n);
  const Rational step(1, 48);
  for (int a = 0; a < H.order(); ++a) {
    const auto diag = line_polynomial(S, n, {a}, step);
    REQUIRE(2 * diag[2] == H.at(a, a)); // phi''(0) = 2 c2
    for (int b = a + 1; b < H.order(); ++b) {
      const auto mixed = line_polynomial(S, n, {a, b}, step);
      // along e_a + e_b: phi''(0) = H_aa + 2 H_ab + H_bb
      REQUIRE(2 * mixed[2] == H.at(a, a) + 2 * H.at(a, b) + H.at(b, b));
    }
  }
}

TEST_CASE("one n=5 hessian sanity point") {
  const PermSet S = builtin_certificate("set8a").S;
  const SymmetricForm H = hessian(S, 5);
  REQUIRE(H.order() == 16);
  const auto diag = line_polynomial(S, 5, {5}, Rational(1, 128));
  REQUIRE(2 * diag[2] == H.at(5, 5));
  REQUIRE(diag[1] == 0); // constant cover: gradient vanishes on this line
}

TEST_CASE("inertia") {
  SymmetricForm id3(3);
  for (int i = 0; i < 3; ++i) id3.at(i, i) = 1;
  CHECK(inertia(id3) == Inertia{3, 0, 0});

  SymmetricForm d(3);
  d.at(0, 0) = 1;
  d.at(1, 1) = -2;
  CHECK(inertia(d) == Inertia{1, 1, 1});

  const SymmetricForm m8b = SymmetricForm::from_rows(
      {{Rational(5), Rational(0), Rational(3)}, {Rational(0), Rational(9), Rational(0)}, {Rational(3), Rational(0), Rational(4)}});
  CHECK(inertia(m8b) == Inertia{3, 0, 0});

  // zero diagonal forces the off-diagonal congruence path
  SymmetricForm off(2);
  off.at(0, 1) = 1;
  off.at(1, 0) = 1;
  CHECK(inertia(off) == Inertia{1, 1, 0});
}

TEST_CASE("inertia is a congruence invariant") {
  std::mt19937_64 rng(8006);
  for (int trial = 0; trial < 8; ++trial) {
    const int m = 3 + static_cast<int>(rng() % 3);
    SymmetricForm f(m);
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        const Rational v(static_cast<int>(rng() % 11) - 5, 1 + static_cast<int>(rng() % 4));
        f.at(i, j) = v;
        f.at(j, i) = v;
      }
    // random invertible P: unit upper triangular times a diagonal of +-1/k
    std::vector<std::vector<Rational>> p(static_cast<std::size_t>(m), std::vector<Rational>(static_cast<std::size_t>(m), Rational(0)));
    for (int i = 0; i < m; ++i) {
      p[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] =
          Rational((rng() & 1u) ? 1 : -1, 1 + static_cast<int>(rng() % 3));
      for (int j = i + 1; j < m; ++j) p[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Rational(static_cast<int>(rng() % 7) - 3);
    }
    SymmetricForm g(m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Rational s = 0;
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            s += p[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] * f.at(a, b) * p[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)];
        g.at(i, j) = s;
      }
    REQUIRE(inertia(g) == inertia(f));
  }
}

TEST_CASE("gradient kernel is exactly the constants at n in {4,5}") {
  for (int n : {4, 5}) {
    const KernelReport rep = gradient_kernel_check(n);
    CHECK(rep.subspace_dim == 10);
    CHECK(rep.rank == 9);
    CHECK(rep.kernel_dim == 1);
    CHECK(rep.constant_in_kernel);
  }
  CHECK_THROWS_AS(gradient_kernel_check(3), error);
}
