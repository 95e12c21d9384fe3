#include <doctest.h>

#include <json.hpp>
#include <set>

#include "knn/rules.hpp"

using namespace knn;

namespace {

Params ones(int count) { return Params(count, Rational(1)); }

}  // namespace

TEST_CASE("catalog lookup") {
  CHECK(find_rule("f1-through-K").id == "f1-through-K");
  CHECK_THROWS_AS(find_rule("no-such-rule"), DomainError);
  std::set<std::string> ids;
  for (const auto& r : rule_catalog()) CHECK(ids.insert(r.id).second);
}

TEST_CASE("every rule verifies exactly") {
  Rng rng(71);
  for (const auto& r : rule_catalog())
    for (int n = 3; n <= 6; ++n)
      for (Mode m : {Mode::S, Mode::T}) {
        if (!rule_applies(r, m, n) || (m == Mode::T && r.mode == RuleMode::Both)) continue;
        const auto rep = verify_rule(r, n, 25, rng);
        INFO(report_json(rep));
        CHECK(rep.passed);
        CHECK(rep.backward_passed);
        CHECK(rep.checks > 0);
      }
}

TEST_CASE("published transforms that fail are flagged with a correction") {
  Rng rng(72);
  const auto rep = verify_rule(find_rule("f1-through-K"), 3, 10, rng);
  CHECK(rep.passed);
  REQUIRE(rep.printed == PrintedStatus::Failed);
  REQUIRE(rep.printed_failure);
  CHECK(rep.printed_failure->lhs_params == ones(4));  // x = 1, a = (1), b = (1, 1)
  CHECK_FALSE(rep.correction.empty());
  const auto doc = nlohmann::json::parse(report_json(rep));
  CHECK(doc["published"] == "failed");
  CHECK(doc.contains("correction"));

  for (const char* id : {"e-last-through-K", "f-through-K-right-h", "h-through-K", "K-absorbs-hn", "e-last-through-T",
                         "split-negative"}) {
    const auto& r = find_rule(id);
    const auto rep2 = verify_rule(r, 5, 10, rng);
    INFO(id);
    CHECK(rep2.passed);
    CHECK(rep2.printed == PrintedStatus::Failed);
  }
  // The printed f-through-K parameters only survive at n = 4.
  CHECK(verify_rule(find_rule("f-through-K"), 4, 10, rng).printed == PrintedStatus::Passed);
  CHECK(verify_rule(find_rule("f-through-K"), 5, 10, rng).printed == PrintedStatus::Failed);
  CHECK(verify_rule(find_rule("h1-into-K"), 4, 10, rng).printed == PrintedStatus::Same);
}

TEST_CASE("apply_rule examples") {
  const Word lhs = Word::parse("e1 K", Mode::S, 3);
  const ParamWord pw(lhs, ones(4));
  const ParamWord out = apply_rule(pw, find_rule("e-through-K"), 0, Direction::Forward);
  CHECK(out.word.str() == "K e2");
  CHECK(evaluate(out) == evaluate(pw));
  CHECK(out.params[0] == 2);  // A_1 = a_1 + x
  const ParamWord back = apply_rule(out, find_rule("e-through-K"), 0, Direction::Backward);
  CHECK(back.word == lhs);
  CHECK(back.params == pw.params);

  const ParamWord merge(Word::parse("e1 e1", Mode::S, 3), {Rational(1, 2), Rational(1, 3)});
  const ParamWord merged = apply_rule(merge, find_rule("e-merge"), 0, Direction::Forward);
  CHECK(merged.word.str() == "e1");
  CHECK(merged.params[0] == Rational(5, 6));

  const ParamWord braid(Word::parse("e1 e2 e1", Mode::S, 3), ones(3));
  const ParamWord braided = apply_rule(braid, find_rule("e-braid"), 0, Direction::Forward);
  CHECK(braided.word.str() == "e2 e1 e2");
  CHECK(evaluate(braided) == evaluate(braid));

  CHECK_THROWS_AS(apply_rule(braid, find_rule("e-merge"), 0, Direction::Forward), DomainError);
  CHECK_THROWS_AS(apply_rule(pw, find_rule("e-through-K"), 1, Direction::Forward), DomainError);
}

TEST_CASE("apply_rule preserves the matrix on random words") {
  Rng rng(73);
  int applied = 0;
  for (const auto& r : rule_catalog()) {
    for (int n = 3; n <= 5; ++n) {
      const Mode m = r.mode == RuleMode::T ? Mode::T : Mode::S;
      if (!rule_applies(r, m, n)) continue;
      for (const auto& idx : r.instances(n)) {
        const Word w(m, n, r.lhs(n, idx));
        Params p = r.draw ? r.draw(n, idx, rng) : rng.positives(param_count(w));
        const ParamWord pw(w, p);
        ParamWord out = pw;
        try {
          out = apply_rule(pw, r, 0, Direction::Forward);
        } catch (const DomainError&) {
          continue;  // outside the rule's domain for this draw
        }
        CHECK(evaluate(out) == evaluate(pw));
        ++applied;
      }
    }
  }
  CHECK(applied > 100);
}

TEST_CASE("cell split examples") {
  const auto p = GeneratorParams::t(4, {1}, {1, 1});
  auto zero = cell_split(1, 1, p);
  CHECK(zero.branch == SplitBranch::Zero);
  auto neg = cell_split(Rational(1, 2), Rational(1, 2), p);
  REQUIRE(neg.branch == SplitBranch::Negative);
  CHECK(neg.word.params.back() == Rational(3, 4));
  auto pos = cell_split(2, 2, p);
  REQUIRE(pos.branch == SplitBranch::Positive);
  CHECK(pos.word.params.front() == 1);
  for (const auto* r : {&zero, &neg, &pos}) CHECK(branch_name(r->branch).size() > 0);
}

TEST_CASE("cell split trichotomy") {
  Rng rng(74);
  for (int n = 4; n <= 6; ++n)
    for (int t = 0; t < 40; ++t) {
      const auto p = GeneratorParams::from_flat(n, Family::T, rng.positives(t_arity(n)));
      Rational u = rng.positive(), v = rng.positive();
      if (t % 5 == 0) v = p.bi(n - 2) * p.Y() / u;  // force the boundary
      const Rational s = u * v - p.bi(n - 2) * p.Y();
      const auto res = cell_split(u, v, p);
      CHECK(res.branch == (s.sign() < 0 ? SplitBranch::Negative : s.sign() == 0 ? SplitBranch::Zero : SplitBranch::Positive));
      const Matrix M = chevalley(n, Chev::E, n - 1, u) * chevalley(n, Chev::E, n - 2, v) * t_generator(p);
      CHECK(evaluate(res.word) == M);
      CHECK(minor(M, IndexSet::interval(1, n - 1), IndexSet::interval(2, n)).sign() == s.sign());
    }
}
