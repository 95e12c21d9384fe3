#include <doctest.h>

#include "knn/perm.hpp"
#include "knn/generators.hpp"
#include "knn/positivity.hpp"
#include "knn/words.hpp"
#include "oracles.hpp"

using namespace knn;

namespace {

// Column k holds the unit vector at row w(k), so products of permutations map to products of matrices.
Matrix permutation_matrix(const Perm& w) {
  Matrix P(w.n(), w.n());
  for (int k = 1; k <= w.n(); ++k) P(w(k), k) = 1;
  return P;
}

}  // namespace

TEST_CASE("permutation basics") {
  const Perm s1 = Perm::simple(3, 1), s2 = Perm::simple(3, 2);
  CHECK((s1 * s2)(1) == s1(s2(1)));
  CHECK(Perm::from_word(3, {1, 2}) == s1 * s2);
  CHECK(Perm::longest(4, 1, 4).length() == 6);
  CHECK(Perm::longest(4, 1, 3) == Perm({3, 2, 1, 4}));
  CHECK_THROWS(Perm({1, 1, 2}));
  for (const auto& w : all_perms(4)) {
    CHECK(w.length() == oracle::inversions(w.one_line()));
    CHECK(Perm::from_word(4, w.reduced_word()) == w);
    CHECK(static_cast<int>(w.reduced_word().size()) == w.length());
    CHECK((w * w.inverse()) == Perm::identity(4));
    CHECK(oracle::word_perm(4, w.reduced_word()) == w.one_line());
  }
  CHECK(all_perms(4).size() == 24);
  CHECK(parabolic_elements(5, 1, 2).size() == 6);
  CHECK(parabolic_elements(5, 2, 4).size() == 24);
  for (const auto& w : parabolic_elements(5, 2, 3)) CHECK(w.in_parabolic(2, 3));
}

TEST_CASE("reduced words are lexicographically least") {
  for (const auto& w : all_perms(4)) {
    const auto mine = w.reduced_word();
    for (const auto& v : oracle::braid_class(oracle::some_reduced_word(w.one_line()))) CHECK(mine <= v);
  }
}

TEST_CASE("Bruhat order") {
  const Perm s1 = Perm::simple(3, 1), s2 = Perm::simple(3, 2);
  CHECK(bruhat_leq(Perm::identity(3), s1 * s2));
  CHECK(bruhat_leq(s1, s1 * s2));
  CHECK_FALSE(bruhat_leq(s1, s2));
  CHECK_THROWS(bruhat_leq(s1, Perm::identity(4)));
  for (const auto& x : all_perms(4))
    for (const auto& y : all_perms(4)) REQUIRE(bruhat_leq(x, y) == oracle::subword_bruhat(x.one_line(), y.one_line()));
}

TEST_CASE("Demazure product matches the 0-Hecke normal form") {
  Rng rng(51);
  for (int t = 0; t < 150; ++t) {
    std::vector<int> w;
    const int len = rng.uniform(0, 6);
    for (int k = 0; k < len; ++k) w.push_back(rng.uniform(1, 3));
    CHECK(demazure(4, w).reduced_word() == oracle::hecke_normal_form(w));
  }
}

TEST_CASE("cells of a matrix") {
  CHECK(ne_bounded_cell(Matrix::identity(3)) == Perm::identity(3));
  CHECK(ne_bounded_cell(chevalley(2, Chev::E, 1, 1)) == Perm::simple(2, 1));
  for (const auto& w : all_perms(4)) {
    for (const auto& v : all_perms(4)) REQUIRE(permutation_matrix(w * v) == permutation_matrix(w) * permutation_matrix(v));
    const Matrix P = permutation_matrix(w);
    CHECK(ne_bounded_cell(P) == w);
    CHECK(is_ne_bounded(P, w));
  }
  Matrix singular(3, 3);
  CHECK_THROWS_AS(ne_bounded_cell(singular), DomainError);
}

TEST_CASE("products of upper letters land in the cell of their Demazure product") {
  Rng rng(52);
  for (int t = 0; t < 80; ++t) {
    const int n = rng.uniform(2, 5);
    std::vector<int> idx;
    const int len = rng.uniform(0, 7);
    for (int k = 0; k < len; ++k) idx.push_back(rng.uniform(1, n - 1));
    const Word w = e_word(n, Mode::S, idx);
    const Matrix M = evaluate(ParamWord(w, rng.positives(param_count(w))));
    const Perm d = demazure(n, idx);
    CHECK(ne_bounded_cell(M) == d);
    CHECK(is_ne_bounded(M, d));
    for (const auto& other : all_perms(n))
      if (other != d) CHECK_FALSE(is_ne_bounded(M, other));
  }
}

TEST_CASE("double Bruhat pair of a TNN product") {
  Rng rng(53);
  for (int t = 0; t < 60; ++t) {
    const int n = rng.uniform(2, 4);
    std::vector<int> fi, ei;
    for (int k = rng.uniform(0, 5); k > 0; --k) fi.push_back(rng.uniform(1, n - 1));
    for (int k = rng.uniform(0, 5); k > 0; --k) ei.push_back(rng.uniform(1, n - 1));
    std::vector<Letter> letters;
    for (int i : fi) letters.push_back(Letter::f(i));
    for (int i = 1; i <= n; ++i) letters.push_back(Letter::h(i));
    for (int i : ei) letters.push_back(Letter::e(i));
    const Word w(Mode::S, n, letters);
    const Matrix M = evaluate(ParamWord(w, rng.positives(param_count(w))));
    const auto pair = bruhat_pair_of(M);
    CHECK(pair.u == demazure(n, fi));
    CHECK(pair.v == demazure(n, ei));
  }
}

TEST_CASE("left multiplication by a reduced extension moves the cell up") {
  Rng rng(54);
  for (int n = 3; n <= 4; ++n)
    for (const auto& a : all_perms(n)) {
      const Word wa = e_word(n, Mode::S, a.reduced_word());
      const Matrix M = evaluate(ParamWord(wa, rng.positives(param_count(wa))));
      for (int s = 1; s <= n - 1; ++s) {
        const Perm w = Perm::simple(n, s) * a;
        if (w.length() != a.length() + 1) continue;
        CHECK(ne_bounded_cell(chevalley(n, Chev::E, s, rng.positive()) * M) == w);
      }
    }
}

TEST_CASE("matrix rank") {
  CHECK(matrix_rank(Matrix::identity(3)) == 3);
  Matrix M{{1, 2}, {2, 4}};
  CHECK(matrix_rank(M) == 1);
  CHECK(matrix_rank(Matrix(2, 2)) == 0);
}
