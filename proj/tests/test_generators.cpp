#include <doctest.h>

#include "knn/cells.hpp"
#include "knn/generators.hpp"
#include "knn/positivity.hpp"
#include "oracles.hpp"

using namespace knn;

namespace {

GeneratorParams random_k(Rng& rng, int n) { return GeneratorParams::from_flat(n, Family::K, rng.positives(k_arity(n))); }
GeneratorParams random_t(Rng& rng, int n) { return GeneratorParams::from_flat(n, Family::T, rng.positives(t_arity(n))); }

// Unit-subdiagonal tridiagonal block with diagonal a and superdiagonal b, rows [i, i+r-1].
Rational tridiagonal_det(const std::vector<Rational>& a, const std::vector<Rational>& b, int i, int r) {
  std::vector<std::vector<Rational>> m(r, std::vector<Rational>(r, Rational(0)));
  for (int s = 0; s < r; ++s) {
    m[s][s] = a[i - 1 + s];
    if (s + 1 < r) {
      m[s][s + 1] = b[i - 1 + s];
      m[s + 1][s] = 1;
    }
  }
  return oracle::cofactor_det(m);
}

}  // namespace

TEST_CASE("elementary generators") {
  CHECK(chevalley(2, Chev::E, 1, 1) == Matrix{{1, 1}, {0, 1}});
  CHECK(chevalley(3, Chev::F, 2, Rational(1, 2)) == chevalley(3, Chev::E, 2, Rational(1, 2)).transpose());
  CHECK(jacobi_h(3, 2, 3) == Matrix{{1, 0, 0}, {0, 3, 0}, {0, 0, 1}});
  CHECK_THROWS_AS(chevalley(3, Chev::E, 3, 1), DomainError);
  CHECK_THROWS_AS(chevalley(3, Chev::E, 1, 0), DomainError);
  CHECK_THROWS_AS(jacobi_h(3, 4, 1), DomainError);
  CHECK_THROWS_AS(jacobi_h(3, 1, -1), DomainError);
}

TEST_CASE("K and T at the smallest sizes") {
  const Matrix K = k_generator(GeneratorParams::k(3, {1}, {1, 1}));
  CHECK(K == Matrix{{1, 1, 0}, {1, 1, 1}, {0, 1, 1}});
  CHECK(minor(K, {1, 2}, {1, 2}) == 0);
  CHECK(minor(K, {2, 3}, {2, 3}) == 0);
  const auto p = GeneratorParams::k(3, {Rational(2)}, {Rational(3), Rational(5)});
  CHECK(det(k_generator(p)) == -Rational(2 * 3 * 5));

  const Matrix T = t_generator(GeneratorParams::t(4, {1}, {1, 1}));
  CHECK(T == Matrix{{1, 1, 1, 0}, {0, 1, 1, 1}, {0, 0, 1, 1}, {0, 0, 0, 1}});
  CHECK(minor(T, {1, 2, 3}, {2, 3, 4}) == -1);
  CHECK(is_k_nonnegative(T, 2).holds);
  CHECK_FALSE(is_k_nonnegative(T, 3).holds);

  CHECK_THROWS_AS(GeneratorParams::k(3, {1}, {1}), DomainError);
  CHECK_THROWS_AS(GeneratorParams::k(3, {0}, {1, 1}), DomainError);
  CHECK_THROWS_AS(GeneratorParams::t(3, {}, {1}), DomainError);
}

TEST_CASE("generator semigroup membership") {
  Rng rng(41);
  for (int n = 3; n <= 6; ++n)
    for (int t = 0; t < 15; ++t) {
      const auto p = random_k(rng, n);
      const Matrix K = k_generator(p);
      Rational prod = 1;
      for (const auto& x : p.flat()) prod *= x;
      CHECK(is_k_nonnegative(K, n - 1).holds);
      CHECK(det(K) == -prod);
      if (n >= 4) {
        const Matrix T = t_generator(random_t(rng, n));
        CHECK(is_k_nonnegative(T, n - 2).holds);
        CHECK_FALSE(is_k_nonnegative(T, n - 1).holds);
        CHECK(in_semigroup(T, CellMode::N2U));
        CHECK(minor(T, IndexSet::interval(1, n - 1), IndexSet::interval(2, n)).sign() < 0);
      }
    }
}

TEST_CASE("continuants") {
  const std::vector<Rational> a{2, 2, 2}, b{1, 1};
  CHECK(continuant(a, b, 1, 0) == 1);
  CHECK(continuant(a, b, 1, 2) == 3);
  CHECK(continuant(a, b, 1, 3) == 4);
  CHECK(continuant(a, b, 1, 2) == tridiagonal_det(a, b, 1, 2));
  CHECK(continuant(a, b, 1, 3) == tridiagonal_det(a, b, 1, 3));
  CHECK_THROWS_AS(continuant(a, b, 1, 4), DomainError);

  CHECK(continued_fraction({2}, {}) == 2);
  CHECK(continued_fraction({2, 2}, {1}) == Rational(3, 2));
  CHECK(continued_fraction({2, 2}, {1}) == continuant(a, b, 1, 2) / continuant(a, b, 1, 1));
  CHECK(continued_fraction({2, 2, 2}, {1, 1}) == Rational(4, 3));
  CHECK(leading_fraction(a, b, 1, 3) == Rational(4, 3));
  CHECK(continued_fraction({1, 1}, {1}) == 0);
  CHECK_THROWS_AS(continued_fraction({1, 1, 1}, {1, 1}), DomainError);
}

TEST_CASE("continuant ratio property") {
  Rng rng(42);
  for (int t = 0; t < 100; ++t) {
    const int len = rng.uniform(2, 6);
    std::vector<Rational> a, b;
    for (int k = 0; k < len; ++k) a.push_back(Rational(rng.uniform(-5, 9), rng.uniform(1, 4)));
    for (int k = 0; k + 1 < len; ++k) b.push_back(rng.positive());
    const int i = rng.uniform(1, len - 1);
    const int r = rng.uniform(2, len - i + 1);
    CHECK(continuant(a, b, i, r) == tridiagonal_det(a, b, i, r));
    bool nonzero = true;
    for (int s = 1; s < r; ++s) nonzero = nonzero && !continuant(a, b, i, s).is_zero();
    if (nonzero) CHECK(continuant(a, b, i, r) == continuant(a, b, i, r - 1) * leading_fraction(a, b, i, r));
  }
}

TEST_CASE("tridiagonal irreducibility") {
  Rng rng(43);
  for (int n = 3; n <= 6; ++n) {
    const Matrix K = k_generator(random_k(rng, n));
    CHECK(is_tridiagonal_irreducible(K));
    Matrix bumped = K;
    bumped(1, 1) += 1;
    CHECK_FALSE(is_tridiagonal_irreducible(bumped));
    CHECK(minor(bumped, IndexSet::interval(1, n - 1), IndexSet::interval(1, n - 1)).sign() > 0);
    Matrix negative = K;
    negative(1, 2) = -negative(1, 2);
    CHECK_FALSE(is_tridiagonal_irreducible(negative));
  }
  CHECK_THROWS_AS(is_tridiagonal_irreducible(Matrix::identity(3)), DomainError);
}

TEST_CASE("pentadiagonal irreducibility") {
  Rng rng(44);
  for (int n = 4; n <= 6; ++n) CHECK(is_pentadiagonal_irreducible(t_generator(random_t(rng, n))));
  // e2 e1 e3 e2 with unit parameters: TNN, banded, with positive terminal fractions.
  const Matrix tnn{{1, 1, 1, 0}, {0, 1, 2, 1}, {0, 0, 1, 1}, {0, 0, 0, 1}};
  REQUIRE(is_k_nonnegative(tnn, 4).holds);
  CHECK_FALSE(is_pentadiagonal_irreducible(tnn));
  Matrix gap = t_generator(random_t(rng, 5));
  gap(2, 3) = 0;
  CHECK_THROWS_AS(is_pentadiagonal_irreducible(gap), DomainError);
}

TEST_CASE("closed-form solid minors of K and T") {
  Rng rng(45);
  for (int n = 3; n <= 7; ++n)
    for (int t = 0; t < 6; ++t) {
      const auto p = random_k(rng, n);
      const Matrix K = k_generator(p);
      for (int r = 1; r <= n; ++r)
        for (int i = 1; i + r - 1 <= n; ++i)
          for (int j = 1; j + r - 1 <= n; ++j) {
            const auto I = IndexSet::interval(i, i + r - 1), J = IndexSet::interval(j, j + r - 1);
            REQUIRE(k_minor_closed_form(p, I, J) == minor(K, I, J));
          }
      CHECK(k_minor_closed_form(p, IndexSet::interval(1, n - 1), IndexSet::interval(1, n - 1)) == 0);
      if (n >= 4) {
        CHECK(k_minor_closed_form(p, IndexSet::interval(2, 3), IndexSet::interval(1, 2)) == 1);
        const auto q = random_t(rng, n);
        const Matrix T = t_generator(q);
        for (int r = 1; r <= n - 1; ++r)
          for (int i = 1; i + r - 1 <= n - 1; ++i)
            for (int j = 2; j + r - 1 <= n; ++j) {
              const auto I = IndexSet::interval(i, i + r - 1), J = IndexSet::interval(j, j + r - 1);
              REQUIRE(t_minor_closed_form(q, I, J) == minor(T, I, J));
            }
      }
    }
  const auto p = random_k(rng, 4);
  CHECK_THROWS_AS(k_minor_closed_form(p, {1, 3}, {1, 2}), DomainError);
}

TEST_CASE("K and T admit no Chevalley peel inside their semigroups") {
  Rng rng(46);
  for (int n = 3; n <= 5; ++n) {
    const Matrix K = k_generator(random_k(rng, n));
    for (Side s : {Side::Left, Side::Right})
      for (Chev c : {Chev::E, Chev::F})
        for (int i = 1; i <= n - 1; ++i) CHECK(peel_chevalley(K, s, c, i, n - 1).x == 0);
  }
  for (int n = 4; n <= 6; ++n) {
    const Matrix T = t_generator(random_t(rng, n));
    for (Side s : {Side::Left, Side::Right})
      for (int i = 1; i <= n - 1; ++i) CHECK(peel_chevalley(T, s, Chev::E, i, n - 2).x == 0);
  }
}
