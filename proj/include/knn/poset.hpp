#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "knn/cells.hpp"
#include "knn/generators.hpp"
#include "knn/words.hpp"

namespace knn {

// The words obtained from T by setting one parameter to zero, deduplicated:
// first family e_{n-3}..e_1 e_{n-1}..^e_i..e_2 (2 <= i <= n-1), second family
// e_{n-2}..^e_i..e_1 e_{n-1}..^e_{i+1}..e_2 (1 <= i <= n-3).
std::vector<Word> t_subwords(int n);

enum class TZero { A, B };

// Factorization of T with a_i = 0 (TZero::A, 1 <= i <= n-3) or b_{i-1} = 0
// (TZero::B, 2 <= i <= n-1). The zeroed entry of p is ignored.
ParamWord t_boundary_factorization(const GeneratorParams& p, TZero which, int i);

// Extended subword order on canonical words: K is atomic, T decomposes into t_subwords.
bool subword_leq(const Word& a, const Word& b, Granularity g = Granularity::Fine);

struct ClosurePoset {
  int n = 0;
  CellMode mode = CellMode::N1;
  Granularity granularity = Granularity::Fine;
  std::vector<Word> elements;  // lexicographic
  std::vector<int> rank;
  std::vector<std::vector<int>> covers;  // covers[a]: elements covering a
  std::vector<std::vector<bool>> leq;    // leq[a][b]: a <= b

  int size() const { return static_cast<int>(elements.size()); }
  // -1 when absent.
  int index_of(const Word& w) const;
  int index_of(const std::string& word) const;
};

struct PosetLimits {
  int max_n = 6;
  int max_elements = 20000;
};

// Throws DomainError beyond the limits.
ClosurePoset closure_poset(int n, CellMode mode, Granularity g = Granularity::Fine, PosetLimits limits = {});

// Sub-poset on the given elements with the inherited order; covers recomputed.
ClosurePoset induced(const ClosurePoset& p, const std::vector<int>& keep);
ClosurePoset interval(const ClosurePoset& p, int a, int b);

bool is_graded(const ClosurePoset& p);
// Throws DomainError when a is not below b.
long mobius(const ClosurePoset& p, int a, int b);

struct ComponentVerdict {
  std::vector<int> members;
  bool eulerian = true;
  int failing_intervals = 0;
};
std::vector<std::vector<int>> components(const ClosurePoset& p);
// One verdict per connected component.
std::vector<ComponentVerdict> eulerian_components(const ClosurePoset& p);
bool is_eulerian(const ClosurePoset& p);

enum class Exchange { ReducedExtension, Absorbed };
std::string exchange_name(Exchange e);
// w: a reduced word in e letters only (or f letters only); t: a letter of the
// same kind prepended on the left. Throws DomainError otherwise.
Exchange exchange_check(const Word& w, const Letter& t);

std::string poset_json(const ClosurePoset& p);
std::string poset_dot(const ClosurePoset& p);

}  // namespace knn
