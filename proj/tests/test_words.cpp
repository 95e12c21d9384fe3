#include <doctest.h>

#include <set>

#include "knn/cells.hpp"
#include "knn/words.hpp"
#include "oracles.hpp"

using namespace knn;

namespace {

std::vector<Rational> ones(const Word& w) { return std::vector<Rational>(param_count(w), Rational(1)); }

}  // namespace

TEST_CASE("letters and words") {
  CHECK(Letter::parse("e3") == Letter::e(3));
  CHECK(Letter::parse("K") == Letter::k());
  CHECK(Letter::h(2).token() == "h2");
  CHECK_THROWS_AS(Letter::parse("x1"), ParseError);
  CHECK_THROWS_AS(Letter::parse("e"), ParseError);

  const Word w = Word::parse("f2 e1 K", Mode::S, 3);
  CHECK(w.size() == 3);
  CHECK(w.str() == "f2 e1 K");
  CHECK(Word::parse("", Mode::S, 3).empty());
  CHECK_THROWS_AS(Word::parse("e3", Mode::S, 3), DomainError);
  CHECK_THROWS_AS(Word::parse("h4", Mode::S, 3), DomainError);
  CHECK_THROWS_AS(Word::parse("T", Mode::S, 4), DomainError);
  CHECK_THROWS_AS(Word::parse("K", Mode::T, 4), DomainError);
  CHECK_THROWS_AS(Word::parse("f1 T", Mode::T, 4), DomainError);
  CHECK_THROWS_AS(Word::parse("h1", Mode::T, 4), DomainError);
  CHECK_THROWS_AS(Word::parse("T", Mode::T, 3), DomainError);
}

TEST_CASE("length") {
  CHECK(length(Word(Mode::S, 3)) == 0);
  CHECK(length(Word::parse("K", Mode::S, 3)) == 3);
  CHECK(length(Word::parse("e3 e4 T", Mode::T, 5)) == 7);
  CHECK(length(Word::parse("h1 e1 h2", Mode::S, 3)) == 1);
  CHECK(param_count(Word::parse("h1 e1 K", Mode::S, 4)) == 2 + 5);
  CHECK(param_count(Word::parse("e1 T", Mode::T, 5)) == 1 + 5);
}

TEST_CASE("evaluation") {
  CHECK(evaluate(ParamWord(Word(Mode::S, 3), {})) == Matrix::identity(3));
  CHECK(evaluate(ParamWord(Word::parse("e1", Mode::S, 2), {1})) == Matrix{{1, 1}, {0, 1}});
  const Word k = Word::parse("K", Mode::S, 3);
  CHECK(evaluate(ParamWord(k, ones(k))) == k_generator(GeneratorParams::k(3, {1}, {1, 1})));
  CHECK_THROWS_AS(ParamWord(k, {1, 1}), DomainError);
  CHECK_THROWS_AS(ParamWord(k, {1, 1, 0}), DomainError);

  Rng rng(61);
  for (int t = 0; t < 30; ++t) {
    const Word w = Word::parse("f1 h2 e2 K e1", Mode::S, 3);
    const auto p = rng.positives(param_count(w));
    Matrix expect = chevalley(3, Chev::F, 1, p[0]) * jacobi_h(3, 2, p[1]) * chevalley(3, Chev::E, 2, p[2]) *
                    k_generator(GeneratorParams::k(3, {p[3]}, {p[4], p[5]})) * chevalley(3, Chev::E, 1, p[6]);
    CHECK(evaluate(ParamWord(w, p)) == expect);
  }
}

TEST_CASE("parametrized word documents") {
  Rng rng(62);
  const Word w = Word::parse("e1 T e2", Mode::T, 5);
  const ParamWord pw(w, rng.positives(param_count(w)));
  const std::string text = param_word_json(pw);
  const ParamWord back = parse_param_word(text);
  CHECK(back.word == pw.word);
  CHECK(back.params == pw.params);
  CHECK(param_word_json(back) == text);
  CHECK_THROWS_AS(parse_param_word(R"({"n":3,"mode":"S","letters":["e1"],"params":[]})"), DomainError);
  CHECK_THROWS_AS(parse_param_word(R"({"n":3,"mode":"S","letters":["e1"],"params":["0"]})"), DomainError);
  CHECK_THROWS_AS(parse_param_word(R"({"n":3,"mode":"Q","letters":[],"params":[]})"), ParseError);
  CHECK_THROWS_AS(parse_param_word("[1,2"), ParseError);
}

TEST_CASE("canonical forms: examples") {
  CHECK(canonicalize(Word::parse("e1 e1", Mode::S, 3)).str() == "e1");
  CHECK(canonicalize(Word::parse("e2 K", Mode::S, 3)).str() == "e2 K");
  // e1 K has e-part s1 and no corner letter; its upper-left 2x2 minor vanishes.
  const Word e1k = Word::parse("e1 K", Mode::S, 3);
  CHECK(canonicalize(e1k) == e1k);
  const Matrix M = evaluate(ParamWord(e1k, ones(e1k)));
  CHECK(minor(M, {1, 2}, {1, 2}) == 0);
  CHECK(classify(M, CellMode::N1).word == e1k);
  // Letters right of K move across it.
  CHECK(canonicalize(Word::parse("K e1", Mode::S, 3)).str() == "f1 K");
  CHECK(canonicalize(Word::parse("K f1", Mode::S, 3)).str() == "f2 K");
  CHECK(canonicalize(Word::parse("h1 K h3", Mode::S, 3)).str() == "K");
  CHECK(canonicalize(Word::parse("T e3", Mode::T, 5)).str() == "e1 T");
  CHECK(canonicalize(Word::parse("e3 e4 T", Mode::T, 5)).str() == "e3 e4 T");
  CHECK_THROWS_AS(canonicalize(Word::parse("e4 e3 T", Mode::T, 5)), DomainError);
  CHECK(canonicalize(Word::parse("e4 e3 T", Mode::T, 5), Granularity::Coarse).str() == "e4 e3 T");
  CHECK_THROWS_AS(canonicalize(Word::parse("K K", Mode::S, 3)), DomainError);
  CHECK_THROWS_AS(canonicalize(Word::parse("T e1 T", Mode::T, 4)), DomainError);
}

TEST_CASE("canonical forms of Chevalley words match the 0-Hecke normal form") {
  Rng rng(63);
  for (int t = 0; t < 150; ++t) {
    const int n = rng.uniform(2, 4);
    std::vector<int> idx;
    for (int k = rng.uniform(0, 6); k > 0; --k) idx.push_back(rng.uniform(1, n - 1));
    const Word w = e_word(n, Mode::S, idx);
    CHECK(canonicalize(w) == e_word(n, Mode::S, oracle::hecke_normal_form(idx)));
  }
}

TEST_CASE("canonicalize is idempotent") {
  Rng rng(64);
  const std::vector<std::string> s_tokens{"e1", "e2", "e3", "f1", "f2", "f3", "h1", "h4"};
  for (int t = 0; t < 200; ++t) {
    std::vector<Letter> letters;
    for (int k = rng.uniform(0, 7); k > 0; --k) letters.push_back(Letter::parse(s_tokens[rng.uniform(0, 7)]));
    if (t % 2 == 0) letters.insert(letters.begin() + rng.uniform(0, static_cast<int>(letters.size())), Letter::k());
    const Word c = canonicalize(Word(Mode::S, 4, letters));
    CHECK(canonicalize(c) == c);
  }
  for (auto g : {Granularity::Fine, Granularity::Coarse})
    for (int t = 0; t < 200; ++t) {
      std::vector<Letter> letters;
      for (int k = rng.uniform(0, 6); k > 0; --k) letters.push_back(Letter::e(rng.uniform(1, 2)));
      if (t % 2 == 0) {
        letters.push_back(Letter::t());
        for (int k = rng.uniform(0, 2); k > 0; --k) letters.push_back(Letter::e(rng.uniform(3, 4)));
      }
      const Word w(Mode::T, 5, letters);
      Word c(Mode::T, 5);
      try {
        c = canonicalize(w, g);
      } catch (const DomainError&) {
        CHECK(g == Granularity::Fine);
        continue;
      }
      CHECK(canonicalize(c, g) == c);
    }
}

TEST_CASE("canonical words keep their cell under evaluation") {
  Rng rng(65);
  for (int t = 0; t < 60; ++t) {
    std::vector<Letter> letters;
    const std::vector<std::string> tokens{"e1", "e2", "f1", "f2", "h2"};
    for (int k = rng.uniform(0, 5); k > 0; --k) letters.push_back(Letter::parse(tokens[rng.uniform(0, 4)]));
    letters.insert(letters.begin() + rng.uniform(0, static_cast<int>(letters.size())), Letter::k());
    const Word w(Mode::S, 3, letters);
    const Matrix M = evaluate(ParamWord(w, rng.positives(param_count(w))));
    CHECK(classify(M, CellMode::N1).word == canonicalize(w));
  }
}

TEST_CASE("distinct canonical words have distinct signatures") {
  for (auto [n, mode] : {std::pair{3, CellMode::N1}, std::pair{4, CellMode::N2U}}) {
    const auto cells = enumerate_cells(n, mode);
    std::set<std::tuple<std::vector<int>, std::vector<int>, int, bool, bool>> seen;
    for (const auto& c : cells) {
      const auto& s = c.signature;
      CHECK(seen.insert({s.u.one_line(), s.v.one_line(), s.det_sign, s.corner[0], s.corner[1]}).second);
    }
  }
}

TEST_CASE("evaluation is injective on canonical words") {
  Rng rng(66);
  for (auto [n, mode] : {std::pair{3, CellMode::N1}, std::pair{4, CellMode::N1}, std::pair{4, CellMode::N2U}})
    for (const auto& c : enumerate_cells(n, mode)) {
      const Word w = sampling_word(c);
      const auto p = rng.positives(param_count(w));
      auto q = p;
      if (q.empty()) continue;
      q[rng.uniform(0, static_cast<int>(q.size()) - 1)] += 1;
      CHECK_FALSE(evaluate(ParamWord(w, p)) == evaluate(ParamWord(w, q)));
    }
}
