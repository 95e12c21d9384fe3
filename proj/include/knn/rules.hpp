#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "knn/rng.hpp"
#include "knn/words.hpp"

namespace knn {

using Params = std::vector<Rational>;
// Rule instance, e.g. {i} or {i, j}. Empty for rules with a single instance.
using Index = std::vector<int>;
// Maps the parameters of one side to the other; nullopt outside the domain.
using Transform = std::function<std::optional<Params>(int n, const Index& idx, const Params& in)>;

enum class RuleMode { S, T, Both };

struct RewriteRule {
  std::string id;
  std::string statement;
  RuleMode mode = RuleMode::S;
  int min_n = 3;
  std::function<std::vector<Index>(int n)> instances;
  std::function<std::vector<Letter>(int n, const Index&)> lhs;
  std::function<std::vector<Letter>(int n, const Index&)> rhs;
  Transform forward;
  Transform backward;         // empty when the rule is one-way
  Transform printed_forward;  // the published parameters when they differ from forward
  // Left-hand parameters inside the rule's domain; empty means independent positive draws.
  std::function<Params(int n, const Index&, Rng&)> draw;
  bool subtraction_free = true;
  std::string correction;  // what was changed relative to the published transform
};

const std::vector<RewriteRule>& rule_catalog();
// Throws DomainError for an unknown id.
const RewriteRule& find_rule(const std::string& id);
bool rule_applies(const RewriteRule& r, Mode mode, int n);

struct RuleFailure {
  Index instance;
  Params lhs_params;
  std::string reason;
};

enum class PrintedStatus { Same, Passed, Failed };

struct VerificationReport {
  std::string rule_id;
  int n = 0;
  int samples = 0;
  int checks = 0;
  bool passed = true;
  std::optional<RuleFailure> failure;
  bool has_backward = false;
  bool backward_passed = true;
  std::optional<RuleFailure> backward_failure;
  PrintedStatus printed = PrintedStatus::Same;
  std::optional<RuleFailure> printed_failure;
  std::string correction;
};

// Exact matrix-equality check of every instance on sample_count draws. The
// first draw is all ones when the rule has no custom domain.
VerificationReport verify_rule(const RewriteRule& rule, int n, int sample_count, Rng& rng);
std::string report_json(const VerificationReport& r);

enum class Direction { Forward, Backward };

// Rewrites the letters starting at position (0-based). Throws DomainError on
// a pattern mismatch or a domain violation; the result evaluates to the same matrix.
ParamWord apply_rule(const ParamWord& pw, const RewriteRule& rule, std::size_t position, Direction dir);

enum class SplitBranch { Negative, Zero, Positive };
std::string branch_name(SplitBranch b);

struct SplitResult {
  SplitBranch branch;
  ParamWord word;
};

// Refactors e_{n-1}(u) e_{n-2}(v) T(a,b) according to the sign of its
// upper-right minor of order n-1.
SplitResult cell_split(const Rational& u, const Rational& v, const GeneratorParams& p);

}  // namespace knn
