#include <doctest.h>

#include "knn/exact.hpp"
#include "knn/generators.hpp"
#include "oracles.hpp"

using namespace knn;

TEST_CASE("rationals stay in lowest terms") {
  Rational a(6, -4);
  CHECK(a.str() == "-3/2");
  CHECK(a.den() > 0);
  CHECK(Rational::parse("10/4").str() == "5/2");
  CHECK(Rational::parse("-7").str() == "-7");
  CHECK((Rational(1, 3) + Rational(1, 6)).str() == "1/2");
  CHECK((Rational(2, 3) / Rational(4, 9)).str() == "3/2");
  CHECK_THROWS_AS(Rational(1) / Rational(0), DomainError);
  CHECK_THROWS_AS(Rational::parse("1/0"), ParseError);
  CHECK_THROWS_AS(Rational::parse("abc"), ParseError);
  CHECK_THROWS_AS(Rational::parse("1.5"), ParseError);

  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    Rational x(rng.uniform(-50, 50), rng.uniform(1, 50));
    Rational y(rng.uniform(-50, 50), rng.uniform(1, 50));
    for (const Rational& r : {x + y, x - y, x * y}) {
      CHECK(r.den() > 0);
      CHECK(gcd(r.num(), r.den()) == 1);
    }
  }
}

TEST_CASE("index sets") {
  CHECK(IndexSet::interval(2, 4) == IndexSet({2, 3, 4}));
  CHECK(IndexSet({1, 3}).contains(3));
  CHECK_FALSE(IndexSet({1, 3}).is_interval());
  CHECK_THROWS_AS(IndexSet({2, 2}), DomainError);
  CHECK_THROWS_AS(IndexSet({0, 1}), DomainError);
  CHECK_THROWS_AS(IndexSet(std::vector<int>{}), DomainError);
}

TEST_CASE("minor: small examples") {
  CHECK(minor(Matrix::identity(3), {1, 2}, {1, 2}) == 1);
  const Matrix K = k_generator(GeneratorParams::k(3, {1}, {1, 1}));
  CHECK(minor(K, {1, 2, 3}, {1, 2, 3}) == -1);
  CHECK_THROWS_AS(minor(K, {1, 2}, {1}), DomainError);
  CHECK_THROWS_AS(minor(K, {1, 4}, {1, 2}), DomainError);
}

TEST_CASE("minor agrees with cofactor expansion") {
  Rng rng(2024);
  for (int t = 0; t < 60; ++t) {
    const int n = rng.uniform(2, 6);
    const Matrix M = oracle::random_matrix(rng, n, -6, 6);
    for (int r = 1; r <= std::min(n, 4); ++r)
      for (const auto& I : oracle::subsets(n, r))
        for (const auto& J : oracle::subsets(n, r)) REQUIRE(minor(M, I, J) == oracle::cofactor_minor(M, I, J));
    CHECK(det(M) == det_bareiss(M));
  }
  for (int t = 0; t < 20; ++t) {
    const Matrix M = oracle::random_matrix(rng, 6, -4, 4);
    std::vector<int> all{1, 2, 3, 4, 5, 6};
    CHECK(det(M) == oracle::cofactor_minor(M, all, all));
  }
}

TEST_CASE("products") {
  Rng rng(5);
  const Matrix M = oracle::random_matrix(rng, 3, -3, 3);
  CHECK(Matrix::identity(3) * M == M);
  CHECK(chevalley(2, Chev::E, 1, 1) * chevalley(2, Chev::E, 1, 1) == chevalley(2, Chev::E, 1, 2));
  const Matrix K = k_generator(GeneratorParams::k(3, {1}, {1, 1}));
  CHECK(chevalley(3, Chev::F, 1, 1) * K == Matrix{{1, 1, 0}, {2, 2, 1}, {0, 1, 1}});
  CHECK_THROWS_AS(Matrix(2, 3) * Matrix(2, 3), DomainError);
  for (int t = 0; t < 30; ++t) {
    const Matrix A = oracle::random_matrix(rng, 4, -5, 5), B = oracle::random_matrix(rng, 4, -5, 5);
    CHECK(A * B == oracle::naive_mul(A, B));
  }
}

TEST_CASE("Cauchy-Binet spot check") {
  Rng rng(8);
  for (int t = 0; t < 30; ++t) {
    const Matrix A = oracle::random_matrix(rng, 3, -4, 4), B = oracle::random_matrix(rng, 3, -4, 4);
    const Matrix C = A * B;
    for (const auto& I : oracle::subsets(3, 2))
      for (const auto& J : oracle::subsets(3, 2)) {
        Rational sum = 0;
        for (const auto& S : oracle::subsets(3, 2)) sum += minor(A, I, S) * minor(B, S, J);
        CHECK(minor(C, I, J) == sum);
      }
  }
}

TEST_CASE("matrix documents") {
  const std::string id = R"({"n":2,"entries":[["1","0"],["0","1"]]})";
  CHECK(parse_matrix(id) == Matrix::identity(2));
  CHECK(serialize_matrix(parse_matrix(id)) == id);
  CHECK(parse_matrix(R"({"n":2,"entries":[["1","1/2"],["0","1"]]})") == chevalley(2, Chev::E, 1, Rational(1, 2)));
  CHECK_THROWS_AS(parse_matrix(R"({"n":2,"entries":[["1","0"],["0"]]})"), ParseError);
  CHECK_THROWS_AS(parse_matrix(R"({"n":2,"entries":[["1","x"],["0","1"]]})"), ParseError);
  CHECK_THROWS_AS(parse_matrix("not json"), ParseError);
  CHECK_THROWS_AS(parse_matrix(R"({"entries":[["1"]]})"), ParseError);

  Rng rng(9);
  for (int t = 0; t < 50; ++t) {
    const Matrix M = oracle::random_matrix(rng, rng.uniform(1, 5), -9, 9);
    const std::string text = serialize_matrix(M);
    CHECK(parse_matrix(text) == M);
    CHECK(serialize_matrix(parse_matrix(text)) == text);
  }
}
