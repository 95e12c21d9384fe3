#include "knn/words.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <sstream>

#include <json.hpp>

namespace knn {

using json = nlohmann::ordered_json;

std::string Letter::token() const {
  switch (kind) {
    case LetterKind::E: return "e" + std::to_string(index);
    case LetterKind::F: return "f" + std::to_string(index);
    case LetterKind::H: return "h" + std::to_string(index);
    case LetterKind::K: return "K";
    case LetterKind::T: return "T";
  }
  return "?";
}

Letter Letter::parse(std::string_view tok) {
  if (tok == "K") return k();
  if (tok == "T") return t();
  if (tok.size() < 2) throw ParseError("bad word token '" + std::string(tok) + "'");
  LetterKind kind;
  switch (tok[0]) {
    case 'e': kind = LetterKind::E; break;
    case 'f': kind = LetterKind::F; break;
    case 'h': kind = LetterKind::H; break;
    default: throw ParseError("bad word token '" + std::string(tok) + "'");
  }
  int idx = 0;
  auto [ptr, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), idx);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("bad word token '" + std::string(tok) + "'");
  return {kind, idx};
}

Word::Word(Mode mode, int n, std::vector<Letter> letters) : mode_(mode), n_(n), letters_(std::move(letters)) {
  if (n < 2 || (mode == Mode::T && n < 4)) throw DomainError("word size n out of range");
  for (const auto& l : letters_) {
    switch (l.kind) {
      case LetterKind::E:
        if (l.index < 1 || l.index > n - 1) throw DomainError("letter " + l.token() + " out of range");
        break;
      case LetterKind::F:
        if (mode == Mode::T) throw DomainError("lower letters are not allowed in T mode");
        if (l.index < 1 || l.index > n - 1) throw DomainError("letter " + l.token() + " out of range");
        break;
      case LetterKind::H:
        if (mode == Mode::T) throw DomainError("Jacobi letters are not allowed in T mode");
        if (l.index < 1 || l.index > n) throw DomainError("letter " + l.token() + " out of range");
        break;
      case LetterKind::K:
        if (mode != Mode::S) throw DomainError("K is only allowed in S mode");
        if (n < 3) throw DomainError("K needs n >= 3");
        break;
      case LetterKind::T:
        if (mode != Mode::T) throw DomainError("T is only allowed in T mode");
        break;
    }
  }
}

Word Word::parse(std::string_view text, Mode mode, int n) {
  std::istringstream is{std::string(text)};
  std::vector<Letter> letters;
  std::string tok;
  while (is >> tok) letters.push_back(Letter::parse(tok));
  return Word(mode, n, std::move(letters));
}

int Word::count(LetterKind kind) const {
  return static_cast<int>(std::count_if(letters_.begin(), letters_.end(),
                                        [&](const Letter& l) { return l.kind == kind; }));
}

std::vector<std::string> Word::tokens() const {
  std::vector<std::string> out;
  for (const auto& l : letters_) out.push_back(l.token());
  return out;
}

std::string Word::str() const {
  std::string s;
  for (const auto& l : letters_) {
    if (!s.empty()) s += ' ';
    s += l.token();
  }
  return s;
}

Word concat(const Word& a, const Word& b) {
  if (a.mode() != b.mode() || a.n() != b.n()) throw DomainError("concatenating words of different shape");
  auto letters = a.letters();
  letters.insert(letters.end(), b.letters().begin(), b.letters().end());
  return Word(a.mode(), a.n(), std::move(letters));
}

Word e_word(int n, Mode mode, const std::vector<int>& indices) {
  std::vector<Letter> letters;
  for (int i : indices) letters.push_back(Letter::e(i));
  return Word(mode, n, std::move(letters));
}

Word f_word(int n, const std::vector<int>& indices) {
  std::vector<Letter> letters;
  for (int i : indices) letters.push_back(Letter::f(i));
  return Word(Mode::S, n, std::move(letters));
}

int letter_length(const Letter& l, int n) {
  switch (l.kind) {
    case LetterKind::E:
    case LetterKind::F: return 1;
    case LetterKind::H: return 0;
    case LetterKind::K: return k_arity(n);
    case LetterKind::T: return t_arity(n);
  }
  return 0;
}

int length(const Word& w) {
  int total = 0;
  for (const auto& l : w.letters()) total += letter_length(l, w.n());
  return total;
}

int slot_count(const Letter& l, int n) { return l.kind == LetterKind::H ? 1 : letter_length(l, n); }

int param_count(const Word& w) {
  int total = 0;
  for (const auto& l : w.letters()) total += slot_count(l, w.n());
  return total;
}

ParamWord::ParamWord(Word w, std::vector<Rational> p) : word(std::move(w)), params(std::move(p)) {
  if (static_cast<int>(params.size()) != param_count(word))
    throw DomainError("word '" + word.str() + "' needs " + std::to_string(param_count(word)) +
                      " parameters, got " + std::to_string(params.size()));
  for (const auto& x : params)
    if (x.sign() <= 0) throw DomainError("word parameters must be positive, got " + x.str());
}

int ParamWord::offset(std::size_t k) const {
  int off = 0;
  for (std::size_t j = 0; j < k; ++j) off += slot_count(word[j], word.n());
  return off;
}

std::vector<Rational> ParamWord::letter_params(std::size_t k) const {
  const int off = offset(k);
  return {params.begin() + off, params.begin() + off + slot_count(word[k], word.n())};
}

Matrix letter_matrix(const Letter& l, int n, const std::vector<Rational>& p) {
  switch (l.kind) {
    case LetterKind::E: return chevalley(n, Chev::E, l.index, p.at(0));
    case LetterKind::F: return chevalley(n, Chev::F, l.index, p.at(0));
    case LetterKind::H: return jacobi_h(n, l.index, p.at(0));
    case LetterKind::K: return k_generator(GeneratorParams::from_flat(n, Family::K, p));
    case LetterKind::T: return t_generator(GeneratorParams::from_flat(n, Family::T, p));
  }
  throw DomainError("unknown letter");
}

Matrix evaluate(const ParamWord& pw) {
  const int n = pw.word.n();
  Matrix M = Matrix::identity(n);
  for (std::size_t k = 0; k < pw.word.size(); ++k) M = M * letter_matrix(pw.word[k], n, pw.letter_params(k));
  return M;
}

ParamWord parse_param_word(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("word document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("letters") || !doc.contains("params"))
    throw ParseError("word document needs keys n, letters, params");
  if (!doc["n"].is_number_integer()) throw ParseError("'n' must be an integer");
  if (!doc["letters"].is_array() || !doc["params"].is_array())
    throw ParseError("'letters' and 'params' must be arrays");
  Mode mode = Mode::S;
  if (doc.contains("mode")) {
    if (doc["mode"] == "S") mode = Mode::S;
    else if (doc["mode"] == "T") mode = Mode::T;
    else throw ParseError("'mode' must be \"S\" or \"T\"");
  }
  std::vector<Letter> letters;
  for (const auto& t : doc["letters"]) {
    if (!t.is_string()) throw ParseError("letters must be strings");
    letters.push_back(Letter::parse(t.get<std::string>()));
  }
  std::vector<Rational> params;
  for (const auto& p : doc["params"]) {
    if (p.is_string()) params.push_back(Rational::parse(p.get<std::string>()));
    else if (p.is_number_integer()) params.emplace_back(p.get<long>());
    else throw ParseError("params must be rational strings or integers");
  }
  return ParamWord(Word(mode, doc["n"].get<int>(), std::move(letters)), std::move(params));
}

std::string param_word_json(const ParamWord& pw) {
  json doc;
  doc["n"] = pw.word.n();
  doc["mode"] = pw.word.mode() == Mode::S ? "S" : "T";
  doc["letters"] = pw.word.tokens();
  json ps = json::array();
  for (const auto& x : pw.params) ps.push_back(x.str());
  doc["params"] = ps;
  return doc.dump();
}

namespace {

std::vector<int> descending(int hi, int lo) {
  std::vector<int> v;
  for (int i = hi; i >= lo; --i) v.push_back(i);
  return v;
}

std::vector<int> concat_ints(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Word canonical_s(const Word& w) {
  const int n = w.n();
  auto kpos = std::find(w.letters().begin(), w.letters().end(), Letter::k());
  std::vector<Letter> left(w.letters().begin(), kpos);
  const bool has_k = kpos != w.letters().end();
  if (has_k) {
    // Carry each letter right of K across it.
    for (auto it = kpos + 1; it != w.letters().end(); ++it) {
      const Letter& l = *it;
      if (l.kind == LetterKind::E) left.push_back(l.index >= 2 ? Letter::e(l.index - 1) : Letter::f(1));
      else if (l.kind == LetterKind::F) left.push_back(l.index <= n - 2 ? Letter::f(l.index + 1) : Letter::e(n - 1));
    }
  }
  bool flag_f1 = false, flag_e = false;
  std::vector<int> es, fs;
  for (const auto& l : left) {
    if (l.kind == LetterKind::E) {
      if (has_k && l.index == n - 1) flag_e = true;
      else es.push_back(l.index);
    } else if (l.kind == LetterKind::F) {
      if (has_k && l.index == 1) flag_f1 = true;
      else fs.push_back(l.index);
    }
  }
  Word out = concat(f_word(n, demazure(n, fs).reduced_word()), e_word(n, Mode::S, demazure(n, es).reduced_word()));
  if (!has_k) return out;
  std::vector<Letter> tail;
  if (flag_f1) tail.push_back(Letter::f(1));
  if (flag_e) tail.push_back(Letter::e(n - 1));
  tail.push_back(Letter::k());
  return concat(out, Word(Mode::S, n, tail));
}

// w = prefix * suffix with lengths adding and prefix in <s_1..s_{n-3}>.
std::optional<Perm> left_factor(const Perm& w, const Perm& suffix, int n) {
  Perm p = w * suffix.inverse();
  if (p.length() + suffix.length() != w.length() || !p.in_parabolic(1, n - 3)) return std::nullopt;
  return p;
}

Word canonical_t(const Word& w, Granularity g) {
  const int n = w.n();
  auto tpos = std::find(w.letters().begin(), w.letters().end(), Letter::t());
  std::vector<int> idx;
  for (auto it = w.letters().begin(); it != tpos; ++it) idx.push_back(it->index);
  if (tpos == w.letters().end()) {
    Perm v = demazure(n, idx);
    if (g == Granularity::Coarse && v != beta_unitriangular(n) && bruhat_leq(beta_unitriangular(n), v)) {
      auto p = left_factor(v, alpha_unitriangular(n), n);
      if (!p) {
        p = left_factor(v, beta_unitriangular(n), n);
        if (p && p->length() == 0) p.reset();
      }
      if (!p) throw DomainError("coarse relabel failed for " + v.str());
      return concat(e_word(n, Mode::T, p->reduced_word()),
                    Word(Mode::T, n, {Letter::e(n - 1), Letter::e(n - 2), Letter::t()}));
    }
    return e_word(n, Mode::T, v.reduced_word());
  }
  for (auto it = tpos + 1; it != w.letters().end(); ++it) {
    const int j = it->index;
    idx.push_back(j >= 3 ? j - 2 : (j == 1 ? n - 2 : n - 1));
  }
  std::vector<int> lam, rest;
  for (int i : idx) (i >= n - 2 ? lam : rest).push_back(i);
  Perm lp = demazure(n, lam);
  std::vector<Letter> tail;
  const auto red = lp.reduced_word();
  if (red.size() <= 1) {
    for (int i : red) tail.push_back(Letter::e(i));
  } else if (red == std::vector<int>{n - 2, n - 1} && g == Granularity::Fine) {
    tail = {Letter::e(n - 2), Letter::e(n - 1)};
  } else if (g == Granularity::Coarse) {
    tail = {Letter::e(n - 1), Letter::e(n - 2)};
  } else {
    throw DomainError("word '" + w.str() + "' spans several fine cells; apply cell_split to a parametrized word");
  }
  tail.push_back(Letter::t());
  return concat(e_word(n, Mode::T, demazure(n, rest).reduced_word()), Word(Mode::T, n, tail));
}

}  // namespace

Word canonicalize(const Word& w, Granularity g) {
  if (w.count(LetterKind::K) + w.count(LetterKind::T) > 1)
    throw DomainError("word has two K/T letters; factor the evaluated matrix instead");
  return w.mode() == Mode::S ? canonical_s(w) : canonical_t(w, g);
}

Perm alpha_unitriangular(int n) {
  return Perm::from_word(n, concat_ints(descending(n - 2, 1), descending(n - 1, 1)));
}

Perm beta_unitriangular(int n) {
  return Perm::from_word(n, concat_ints(descending(n - 2, 1), descending(n - 1, 2)));
}

Perm alpha_upper(int n) { return Perm::from_word(n, descending(n - 1, 1)); }

Perm alpha_lower(int n) {
  std::vector<int> v;
  for (int i = 1; i <= n - 1; ++i) v.push_back(i);
  return Perm::from_word(n, v);
}

}  // namespace knn
