// Command-line entry point. Exit codes: 0 pass, 1 semantic negative,
// 2 malformed input, 3 domain error.
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "knn/cells.hpp"
#include "knn/poset.hpp"
#include "knn/positivity.hpp"
#include "knn/rules.hpp"

using namespace knn;
using json = nlohmann::ordered_json;

namespace {

constexpr int kPass = 0, kNegative = 1, kParse = 2, kDomain = 3;

std::string slurp(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

CellMode parse_mode(const std::string& s) { return s == "n-1" ? CellMode::N1 : CellMode::N2U; }
Granularity parse_granularity(const std::string& s) { return s == "coarse" ? Granularity::Coarse : Granularity::Fine; }

json witness_json(const PositivityResult& r) {
  if (!r.witness) return nullptr;
  return json{{"rows", r.witness->rows.indices()}, {"cols", r.witness->cols.indices()}, {"value", r.witness->value.str()}};
}

std::vector<Rational> parse_params(const std::string& text) {
  std::vector<Rational> out;
  std::string tok;
  std::istringstream in(text);
  while (std::getline(in, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(' '));
    tok.erase(tok.find_last_not_of(' ') + 1);
    if (!tok.empty()) out.push_back(Rational::parse(tok));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-nonnegative matrices: checks, factorization, cells and closure posets"};
  app.require_subcommand(1);

  std::string file = "-", mode = "n-1", granularity = "fine", format = "json", word, params, rule;
  int k = 0, n = 0, samples = 100;
  std::uint64_t seed = 1;
  bool fast = false, positive = false;

  const std::vector<std::string> modes{"n-1", "n-2u"};
  const std::vector<std::string> grains{"fine", "coarse"};
  auto add_mode = [&](CLI::App* c) { c->add_option("--mode", mode, "n-1 or n-2u")->check(CLI::IsMember(modes)); };
  auto add_grain = [&](CLI::App* c) {
    c->add_option("--granularity", granularity, "fine or coarse")->check(CLI::IsMember(grains));
  };

  auto* check = app.add_subcommand("check", "test k-nonnegativity (or k-positivity) of a matrix document");
  check->add_option("file", file, "matrix document, '-' for stdin");
  check->add_option("--k", k, "minor order bound (default n)");
  check->add_flag("--fast", fast, "column-solid test, invertible inputs only");
  check->add_flag("--positive", positive, "require strictly positive minors");

  auto* fac = app.add_subcommand("factor", "factor a matrix into generators");
  fac->add_option("file", file, "matrix document, '-' for stdin");
  add_mode(fac);

  auto* cls = app.add_subcommand("classify", "name the cell containing a matrix");
  cls->add_option("file", file, "matrix document, '-' for stdin");
  add_mode(cls);
  add_grain(cls);

  auto* smp = app.add_subcommand("sample", "sample a matrix from the cell of a word");
  smp->add_option("--word", word, "cell word, e.g. \"e1 f2 K\"")->required();
  smp->add_option("--n", n, "matrix size")->required();
  smp->add_option("--params", params, "comma-separated positive rationals");
  smp->add_option("--seed", seed, "seed when --params is absent");
  add_mode(smp);

  auto* pos = app.add_subcommand("poset", "export the closure poset");
  pos->add_option("--n", n, "matrix size")->required();
  pos->add_option("--format", format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
  add_mode(pos);
  add_grain(pos);

  auto* ver = app.add_subcommand("verify-relations", "check every rewrite rule by exact matrix equality");
  ver->add_option("--n", n, "matrix size")->required();
  ver->add_option("--samples", samples, "draws per rule");
  ver->add_option("--seed", seed, "random seed");
  ver->add_option("--rule", rule, "restrict to one rule id");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kParse;
  }

  try {
    if (check->parsed()) {
      const Matrix M = parse_matrix(slurp(file));
      const int order = k > 0 ? k : M.rows();
      PositivityResult r;
      if (fast) {
        if (positive) throw DomainError("--fast and --positive cannot be combined");
        try {
          r = is_k_nonnegative_fast(M, order);
        } catch (const DomainError& e) {
          // A singular matrix violates the input contract of the fast test.
          std::cerr << "error: " << e.what() << " (the column-solid test requires an invertible matrix)\n";
          return kParse;
        }
      } else {
        r = positive ? is_k_positive(M, order) : is_k_nonnegative(M, order);
      }
      json doc{{"k", order}, {"test", positive ? "positive" : "nonnegative"}, {"holds", r.holds},
               {"witness", witness_json(r)}};
      std::cout << doc.dump() << "\n";
      return r.holds ? kPass : kNegative;
    }
    if (fac->parsed()) {
      const Matrix M = parse_matrix(slurp(file));
      std::cout << param_word_json(factor(M, parse_mode(mode))) << "\n";
      return kPass;
    }
    if (cls->parsed()) {
      const Matrix M = parse_matrix(slurp(file));
      std::cout << cell_json(classify(M, parse_mode(mode), parse_granularity(granularity))) << "\n";
      return kPass;
    }
    if (smp->parsed()) {
      const CellMode cm = parse_mode(mode);
      const Word w = canonicalize(Word::parse(word, word_mode(cm), n));
      CellId cell{cm, w, {Perm::identity(n), Perm::identity(n), 0, {}}};
      Matrix M;
      if (!params.empty()) {
        M = sample_cell(cell, parse_params(params));
      } else {
        Rng rng(seed);
        M = sample_cell(cell, rng);
        std::cerr << "seed: " << seed << "\n";
      }
      std::cout << serialize_matrix(M) << "\n";
      return kPass;
    }
    if (pos->parsed()) {
      const auto p = closure_poset(n, parse_mode(mode), parse_granularity(granularity));
      std::cout << (format == "dot" ? poset_dot(p) : poset_json(p) + "\n");
      return kPass;
    }
    if (ver->parsed()) {
      Rng rng(seed);
      json doc{{"seed", seed}, {"n", n}, {"samples", samples}, {"reports", json::array()}};
      bool all = true;
      for (const auto& r : rule_catalog()) {
        if (!rule.empty() && r.id != rule) continue;
        if (!rule_applies(r, Mode::S, n) && !rule_applies(r, Mode::T, n)) continue;
        Rng child = rng.split();
        const auto rep = verify_rule(r, n, samples, child);
        all = all && rep.passed && rep.backward_passed;
        doc["reports"].push_back(json::parse(report_json(rep)));
      }
      if (!rule.empty() && doc["reports"].empty()) throw DomainError("no rule '" + rule + "' applies at n=" + std::to_string(n));
      doc["all_passed"] = all;
      std::cout << doc.dump(2) << "\n";
      return all ? kPass : kNegative;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  }
  return kPass;
}
