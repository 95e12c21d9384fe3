#include "knn/poset.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace knn {

namespace {

std::vector<int> down_from(int hi, int lo) {
  std::vector<int> v;
  for (int k = hi; k >= lo; --k) v.push_back(k);
  return v;
}

Word t_word(int n, const std::vector<int>& idx) { return e_word(n, Mode::T, idx); }

}  // namespace

std::vector<Word> t_subwords(int n) {
  if (n < 4) throw DomainError("t_subwords needs n >= 4");
  std::vector<Word> out;
  std::set<std::string> seen;
  auto add = [&](const std::vector<int>& idx) {
    Word w = t_word(n, idx);
    if (seen.insert(w.str()).second) out.push_back(w);
  };
  for (int i = 2; i <= n - 1; ++i) {
    std::vector<int> idx = down_from(n - 3, 1);
    for (int k : down_from(n - 1, 2))
      if (k != i) idx.push_back(k);
    add(idx);
  }
  for (int i = 1; i <= n - 3; ++i) {
    std::vector<int> idx;
    for (int k : down_from(n - 2, 1))
      if (k != i) idx.push_back(k);
    for (int k : down_from(n - 1, 2))
      if (k != i + 1) idx.push_back(k);
    add(idx);
  }
  return out;
}

ParamWord t_boundary_factorization(const GeneratorParams& p, TZero which, int i) {
  if (p.family != Family::T) throw DomainError("boundary factorization needs T parameters");
  const int n = p.n;
  GeneratorParams z = p;
  if (which == TZero::A) {
    if (i < 1 || i > n - 3) throw DomainError("a-index out of range");
    z.a[i - 1] = 0;
  } else {
    if (i < 2 || i > n - 1) throw DomainError("b-index out of range");
    z.b[i - 2] = 0;
  }
  const auto a = [&](int k) { return z.ai(k); };
  const auto b = [&](int k) { return k == 0 ? Rational(0) : z.bi(k); };
  const Rational xhat = z.bi(n - 2) * z.X();
  std::vector<Letter> letters;
  std::vector<Rational> params;
  auto push = [&](int k, const Rational& x) {
    letters.push_back(Letter::e(k));
    params.push_back(x);
  };
  if (which == TZero::B) {
    for (int k = n - 3; k >= 1; --k) push(k, a(k));
    if (i != n - 1) push(n - 1, xhat);
    for (int k = n - 3; k >= 1; --k)
      if (k + 1 != i) push(k + 1, b(k));
  } else if (i == n - 3) {
    push(n - 2, b(n - 3));
    for (int k = n - 4; k >= 1; --k) push(k, a(k));
    push(n - 1, xhat);
    for (int k = n - 3; k >= 2; --k) push(k, b(k - 1));
  } else {
    // Carry b_i into the next diagonal slot and propagate.
    std::map<int, Rational> A, B;
    A[i + 1] = a(i + 1) + b(i);
    for (int k = i + 1; k <= n - 3; ++k) {
      B[k] = a(k) * b(k) / A[k];
      if (k + 1 <= n - 3) A[k + 1] = a(k + 1) + b(k) - B[k];
    }
    push(n - 2, b(n - 3) - B[n - 3]);
    for (int k = n - 3; k >= i + 1; --k) push(k, A[k]);
    for (int k = i - 1; k >= 1; --k) push(k, a(k));
    push(n - 1, xhat);
    for (int k = n - 3; k >= i + 1; --k) push(k + 1, B[k]);
    for (int k = i; k >= 2; --k) push(k, b(k - 1));
  }
  return ParamWord(Word(Mode::T, n, letters), params);
}

namespace {

// Canonical (fine) words one step below w.
std::vector<Word> children(const Word& w) {
  std::vector<Word> out;
  const auto& ls = w.letters();
  for (std::size_t k = 0; k < ls.size(); ++k) {
    if (ls[k].chevalley()) {
      std::vector<Letter> rest(ls.begin(), ls.end());
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
      out.push_back(canonicalize(Word(w.mode(), w.n(), rest), Granularity::Fine));
    } else if (ls[k].kind == LetterKind::T) {
      for (const auto& sub : t_subwords(w.n())) {
        std::vector<Letter> rest(ls.begin(), ls.begin() + static_cast<std::ptrdiff_t>(k));
        rest.insert(rest.end(), sub.letters().begin(), sub.letters().end());
        rest.insert(rest.end(), ls.begin() + static_cast<std::ptrdiff_t>(k) + 1, ls.end());
        out.push_back(canonicalize(Word(w.mode(), w.n(), rest), Granularity::Fine));
      }
    }
  }
  return out;
}

// Fine words making up a coarse cell.
std::vector<Word> fine_pieces(const Word& w) {
  const int n = w.n();
  if (w.mode() != Mode::T || w.count(LetterKind::T) == 0 || w.size() < 3) return {w};
  const Letter& last2 = w[w.size() - 3];
  const Letter& last1 = w[w.size() - 2];
  if (!(last2 == Letter::e(n - 1) && last1 == Letter::e(n - 2))) return {w};
  std::vector<int> prefix;
  for (std::size_t k = 0; k + 3 < w.size(); ++k) prefix.push_back(w[k].index);
  std::vector<Word> out;
  auto fine = prefix;
  fine.push_back(n - 2);
  fine.push_back(n - 1);
  out.push_back(concat(e_word(n, Mode::T, fine), Word(Mode::T, n, {Letter::t()})));
  const Perm wp = Perm::from_word(n, prefix);
  out.push_back(e_word(n, Mode::T, (wp * alpha_unitriangular(n)).reduced_word()));
  if (wp.length() > 0) out.push_back(e_word(n, Mode::T, (wp * beta_unitriangular(n)).reduced_word()));
  return out;
}

void collect_down(const Word& w, std::set<std::string>& seen, std::vector<Word>& out) {
  if (!seen.insert(w.str()).second) return;
  out.push_back(w);
  for (const auto& c : children(w)) collect_down(c, seen, out);
}

using Bits = std::vector<std::uint64_t>;

bool test(const Bits& b, int k) { return (b[k >> 6] >> (k & 63)) & 1; }
void set(Bits& b, int k) { b[k >> 6] |= std::uint64_t(1) << (k & 63); }

// Downward closure bitsets over `words`, which must be closed under children.
std::vector<Bits> down_sets(const std::vector<Word>& words) {
  const int N = static_cast<int>(words.size());
  const std::size_t blocks = (N + 63) / 64;
  std::map<std::string, int> index;
  for (int k = 0; k < N; ++k) index[words[k].str()] = k;
  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> len(N);
  for (int k = 0; k < N; ++k) len[k] = length(words[k]);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return len[x] < len[y]; });
  std::vector<Bits> down(N, Bits(blocks, 0));
  for (int k : order) {
    set(down[k], k);
    for (const auto& c : children(words[k])) {
      auto it = index.find(c.str());
      if (it == index.end()) throw std::logic_error("subword " + c.str() + " is not a cell word");
      const Bits& d = down[it->second];
      for (std::size_t q = 0; q < blocks; ++q) down[k][q] |= d[q];
    }
  }
  return down;
}

std::vector<std::vector<int>> transitive_reduction(const std::vector<std::vector<bool>>& leq) {
  const int N = static_cast<int>(leq.size());
  std::vector<std::vector<int>> covers(N);
  for (int b = 0; b < N; ++b) {
    std::vector<int> below;
    for (int a = 0; a < N; ++a)
      if (a != b && leq[a][b]) below.push_back(a);
    for (int a : below) {
      bool cover = true;
      for (int c : below)
        if (c != a && leq[a][c]) {
          cover = false;
          break;
        }
      if (cover) covers[a].push_back(b);
    }
  }
  return covers;
}

void check_antisymmetric(const ClosurePoset& p) {
  for (int a = 0; a < p.size(); ++a)
    for (int b = a + 1; b < p.size(); ++b)
      if (p.leq[a][b] && p.leq[b][a])
        throw std::logic_error("closure order is not antisymmetric: " + p.elements[a].str() + " / " +
                               p.elements[b].str());
}

}  // namespace

bool subword_leq(const Word& a, const Word& b, Granularity g) {
  if (a.mode() != b.mode() || a.n() != b.n()) throw DomainError("subword_leq: words of different modes or sizes");
  const Word ca = canonicalize(a, g);
  const Word cb = canonicalize(b, g);
  std::set<std::string> seen;
  std::vector<Word> down;
  for (const auto& piece : (g == Granularity::Coarse ? fine_pieces(cb) : std::vector<Word>{cb}))
    collect_down(piece, seen, down);
  for (const auto& w : down)
    if (canonicalize(w, g) == ca) return true;
  return false;
}

int ClosurePoset::index_of(const Word& w) const { return index_of(w.str()); }

int ClosurePoset::index_of(const std::string& word) const {
  auto it = std::lower_bound(elements.begin(), elements.end(), word,
                             [](const Word& e, const std::string& s) { return e.str() < s; });
  if (it == elements.end() || it->str() != word) return -1;
  return static_cast<int>(it - elements.begin());
}

ClosurePoset closure_poset(int n, CellMode mode, Granularity g, PosetLimits limits) {
  if (n > limits.max_n) throw DomainError("closure_poset: n exceeds the configured bound " + std::to_string(limits.max_n));
  const int min_n = mode == CellMode::N1 ? 3 : 4;
  if (n < min_n) throw DomainError("closure_poset: n too small for this mode");
  long estimate = 1;
  for (int k = 2; k <= n; ++k) estimate *= k;
  if (mode == CellMode::N1) estimate *= estimate;
  if (estimate > limits.max_elements) throw DomainError("closure_poset: more than " + std::to_string(limits.max_elements) + " cells");
  if (mode == CellMode::N1 && g == Granularity::Coarse) g = Granularity::Fine;  // one granularity in N1

  std::vector<Word> fine;
  for (const auto& c : enumerate_cells(n, mode, Granularity::Fine)) fine.push_back(c.word);
  const auto fine_down = down_sets(fine);

  ClosurePoset p;
  p.n = n;
  p.mode = mode;
  p.granularity = g;
  if (g == Granularity::Fine) {
    p.elements = fine;
    p.leq.assign(fine.size(), std::vector<bool>(fine.size(), false));
    for (std::size_t b = 0; b < fine.size(); ++b)
      for (std::size_t a = 0; a < fine.size(); ++a) p.leq[a][b] = test(fine_down[b], static_cast<int>(a));
  } else {
    for (const auto& c : enumerate_cells(n, mode, Granularity::Coarse)) p.elements.push_back(c.word);
    const int N = p.size();
    std::vector<int> image(fine.size());
    for (std::size_t f = 0; f < fine.size(); ++f) {
      image[f] = p.index_of(canonicalize(fine[f], Granularity::Coarse));
      if (image[f] < 0) throw std::logic_error("fine cell without a coarse image: " + fine[f].str());
    }
    p.leq.assign(N, std::vector<bool>(N, false));
    for (std::size_t f = 0; f < fine.size(); ++f)
      for (std::size_t h = 0; h < fine.size(); ++h)
        if (test(fine_down[f], static_cast<int>(h))) p.leq[image[h]][image[f]] = true;
  }
  for (const auto& w : p.elements) p.rank.push_back(length(w));
  check_antisymmetric(p);
  p.covers = transitive_reduction(p.leq);
  return p;
}

ClosurePoset induced(const ClosurePoset& p, const std::vector<int>& keep) {
  ClosurePoset q;
  q.n = p.n;
  q.mode = p.mode;
  q.granularity = p.granularity;
  std::vector<int> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  for (int k : sorted) {
    q.elements.push_back(p.elements[k]);
    q.rank.push_back(p.rank[k]);
  }
  q.leq.assign(sorted.size(), std::vector<bool>(sorted.size(), false));
  for (std::size_t a = 0; a < sorted.size(); ++a)
    for (std::size_t b = 0; b < sorted.size(); ++b) q.leq[a][b] = p.leq[sorted[a]][sorted[b]];
  q.covers = transitive_reduction(q.leq);
  return q;
}

ClosurePoset interval(const ClosurePoset& p, int a, int b) {
  if (!p.leq[a][b]) throw DomainError("interval: elements are not comparable");
  std::vector<int> keep;
  for (int c = 0; c < p.size(); ++c)
    if (p.leq[a][c] && p.leq[c][b]) keep.push_back(c);
  return induced(p, keep);
}

namespace {

std::vector<int> by_rank(const ClosurePoset& p) {
  std::vector<int> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return p.rank[x] < p.rank[y]; });
  return order;
}

// mu(a, c) for every c >= a.
std::map<int, long> mobius_row(const ClosurePoset& p, int a, const std::vector<int>& order) {
  std::vector<int> up;
  for (int c : order)
    if (p.leq[a][c]) up.push_back(c);
  std::map<int, long> mu;
  for (int c : up) {
    if (c == a) {
      mu[c] = 1;
      continue;
    }
    long s = 0;
    for (int d : up) {
      if (d == c) break;
      if (p.leq[d][c]) s += mu[d];
    }
    mu[c] = -s;
  }
  return mu;
}

}  // namespace

bool is_graded(const ClosurePoset& p) {
  const auto order = by_rank(p);
  for (int a = 0; a < p.size(); ++a) {
    std::vector<int> shortest(p.size(), -1), longest(p.size(), -1);
    shortest[a] = longest[a] = 0;
    for (int c : order) {
      if (shortest[c] < 0) continue;
      for (int d : p.covers[c]) {
        if (shortest[d] < 0 || shortest[c] + 1 < shortest[d]) shortest[d] = shortest[c] + 1;
        longest[d] = std::max(longest[d], longest[c] + 1);
      }
    }
    for (int b = 0; b < p.size(); ++b) {
      if (shortest[b] < 0) continue;
      const int gap = p.rank[b] - p.rank[a];
      if (shortest[b] != gap || longest[b] != gap) return false;
    }
  }
  return true;
}

long mobius(const ClosurePoset& p, int a, int b) {
  if (!p.leq[a][b]) throw DomainError("mobius: elements are not comparable");
  return mobius_row(p, a, by_rank(p)).at(b);
}

std::vector<std::vector<int>> components(const ClosurePoset& p) {
  std::vector<int> parent(p.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (int a = 0; a < p.size(); ++a)
    for (int b : p.covers[a]) parent[find(a)] = find(b);
  std::map<int, std::vector<int>> groups;
  for (int a = 0; a < p.size(); ++a) groups[find(a)].push_back(a);
  std::vector<std::vector<int>> out;
  for (auto& [root, members] : groups) out.push_back(members);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ComponentVerdict> eulerian_components(const ClosurePoset& p) {
  const auto order = by_rank(p);
  std::vector<int> bad(p.size(), 0);
  for (int a = 0; a < p.size(); ++a)
    for (const auto& [c, mu] : mobius_row(p, a, order))
      if (mu != ((p.rank[c] - p.rank[a]) % 2 == 0 ? 1 : -1)) ++bad[a];
  std::vector<ComponentVerdict> out;
  for (auto& members : components(p)) {
    ComponentVerdict v;
    v.members = members;
    for (int a : members) v.failing_intervals += bad[a];
    v.eulerian = v.failing_intervals == 0;
    out.push_back(std::move(v));
  }
  return out;
}

bool is_eulerian(const ClosurePoset& p) {
  for (const auto& v : eulerian_components(p))
    if (!v.eulerian) return false;
  return true;
}

std::string exchange_name(Exchange e) { return e == Exchange::ReducedExtension ? "REDUCED_EXTENSION" : "ABSORBED"; }

Exchange exchange_check(const Word& w, const Letter& t) {
  if (!t.chevalley()) throw DomainError("exchange_check: t must be a Chevalley letter");
  std::vector<int> idx;
  for (const auto& l : w.letters()) {
    if (l.kind != t.kind) throw DomainError("exchange_check: w must use only letters of t's kind");
    idx.push_back(l.index);
  }
  const int n = w.n();
  const Perm pi = Perm::from_word(n, idx);
  if (pi.length() != static_cast<int>(idx.size())) throw DomainError("exchange_check: '" + w.str() + "' is not reduced");
  return (Perm::simple(n, t.index) * pi).length() > pi.length() ? Exchange::ReducedExtension : Exchange::Absorbed;
}

std::string poset_json(const ClosurePoset& p) {
  nlohmann::ordered_json doc;
  doc["elements"] = nlohmann::ordered_json::array();
  for (const auto& w : p.elements) doc["elements"].push_back(w.str());
  doc["covers"] = nlohmann::ordered_json::array();
  for (int a = 0; a < p.size(); ++a)
    for (int b : p.covers[a]) doc["covers"].push_back({p.elements[a].str(), p.elements[b].str()});
  doc["ranks"] = p.rank;
  return doc.dump(2);
}

std::string poset_dot(const ClosurePoset& p) {
  std::ostringstream os;
  os << "digraph closure {\n  rankdir=BT;\n";
  for (int a = 0; a < p.size(); ++a) {
    const std::string label = p.elements[a].empty() ? "id" : p.elements[a].str();
    os << "  n" << a << " [label=\"" << label << "\", rank=" << p.rank[a] << "];\n";
  }
  for (int a = 0; a < p.size(); ++a)
    for (int b : p.covers[a]) os << "  n" << a << " -> n" << b << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace knn
