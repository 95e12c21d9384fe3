#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "knn/exact.hpp"
#include "knn/generators.hpp"
#include "knn/perm.hpp"

namespace knn {

// S: Chevalley, Jacobi and K letters. T: upper Chevalley letters and T.
enum class Mode { S, T };

enum class LetterKind { E, F, H, K, T };

struct Letter {
  LetterKind kind = LetterKind::E;
  int index = 0;  // unused for K and T

  static Letter e(int i) { return {LetterKind::E, i}; }
  static Letter f(int i) { return {LetterKind::F, i}; }
  static Letter h(int i) { return {LetterKind::H, i}; }
  static Letter k() { return {LetterKind::K, 0}; }
  static Letter t() { return {LetterKind::T, 0}; }

  bool chevalley() const { return kind == LetterKind::E || kind == LetterKind::F; }
  bool big() const { return kind == LetterKind::K || kind == LetterKind::T; }
  std::string token() const;
  static Letter parse(std::string_view token);

  friend bool operator==(const Letter&, const Letter&) = default;
};

class Word {
 public:
  Word(Mode mode, int n, std::vector<Letter> letters = {});
  static Word parse(std::string_view text, Mode mode, int n);

  Mode mode() const { return mode_; }
  int n() const { return n_; }
  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const Letter& operator[](std::size_t k) const { return letters_[k]; }
  int count(LetterKind kind) const;

  std::vector<std::string> tokens() const;
  // Space-separated tokens; "" for the empty word.
  std::string str() const;

  friend bool operator==(const Word&, const Word&) = default;
  // Lexicographic on the token text.
  friend bool operator<(const Word& a, const Word& b) { return a.str() < b.str(); }

 private:
  Mode mode_;
  int n_;
  std::vector<Letter> letters_;
};

Word concat(const Word& a, const Word& b);
Word e_word(int n, Mode mode, const std::vector<int>& indices);
Word f_word(int n, const std::vector<int>& indices);

int letter_length(const Letter& l, int n);
int length(const Word& w);
// Parameter slots: 1 for E/F/H, 2n-3 for K, 2n-5 for T.
int slot_count(const Letter& l, int n);
int param_count(const Word& w);

struct ParamWord {
  Word word;
  std::vector<Rational> params;

  // Checks the slot count and positivity.
  ParamWord(Word w, std::vector<Rational> p);
  // Offset of the first parameter of letter k.
  int offset(std::size_t k) const;
  std::vector<Rational> letter_params(std::size_t k) const;
};

Matrix letter_matrix(const Letter& l, int n, const std::vector<Rational>& params);
Matrix evaluate(const ParamWord& pw);

ParamWord parse_param_word(std::string_view json_text);
std::string param_word_json(const ParamWord& pw);

enum class Granularity { Fine, Coarse };

// Normal form of a word with at most one K or T letter. Canonical words are
// free of Jacobi letters.
Word canonicalize(const Word& w, Granularity g = Granularity::Fine);

// Special permutations for the unitriangular mode.
Perm alpha_unitriangular(int n);  // (n-2)...(1)(n-1)...(1)
Perm beta_unitriangular(int n);   // (n-2)...(1)(n-1)...(2)
// (n-1)...(1)(1bar)...(n-1bar): upper part and lower part.
Perm alpha_upper(int n);
Perm alpha_lower(int n);

}  // namespace knn
