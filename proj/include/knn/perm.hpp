#pragma once

#include <string>
#include <vector>

#include "knn/exact.hpp"

namespace knn {

// One-line notation: w(k) for k in [1,n]. Products compose right to left,
// so (u*v)(k) = u(v(k)) and the word s_{i1}...s_{ir} maps to s_{i1}*...*s_{ir}.
class Perm {
 public:
  explicit Perm(std::vector<int> one_line);
  static Perm identity(int n);
  static Perm simple(int n, int i);
  static Perm from_word(int n, const std::vector<int>& letters);
  // Longest element of the subgroup generated by s_lo..s_{hi-1} (reverses [lo,hi]).
  static Perm longest(int n, int lo, int hi);

  int n() const { return static_cast<int>(w_.size()); }
  int operator()(int k) const { return w_[k - 1]; }
  const std::vector<int>& one_line() const { return w_; }
  Perm inverse() const;
  int length() const;
  bool right_descent(int i) const { return w_[i - 1] > w_[i]; }
  bool left_descent(int i) const;
  // Lexicographically least reduced word.
  std::vector<int> reduced_word() const;
  // |{a in [i] : w(a) >= j}|
  int corner_count(int i, int j) const;
  // True when every letter of the reduced word lies in [lo, hi].
  bool in_parabolic(int lo, int hi) const;
  std::string str() const;

  friend Perm operator*(const Perm& u, const Perm& v);
  friend bool operator==(const Perm&, const Perm&) = default;
  friend auto operator<=>(const Perm& a, const Perm& b) { return a.w_ <=> b.w_; }

 private:
  std::vector<int> w_;
};

bool bruhat_leq(const Perm& x, const Perm& y);
// 0-Hecke product of the simple reflections in order.
Perm demazure(int n, const std::vector<int>& letters);
std::vector<Perm> all_perms(int n);
// Every element of the subgroup generated by s_lo..s_hi.
std::vector<Perm> parabolic_elements(int n, int lo, int hi);

int matrix_rank(const Matrix& M);

// B^- cell of an invertible matrix from north-east corner ranks.
Perm ne_bounded_cell(const Matrix& M);
// B^+ cell, the transpose analog.
Perm sw_bounded_cell(const Matrix& M);

struct BruhatPair {
  Perm u;  // B^+ side (lower letters f_i)
  Perm v;  // B^- side (upper letters e_i)
  friend bool operator==(const BruhatPair&, const BruhatPair&) = default;
};
BruhatPair bruhat_pair_of(const Matrix& M);

// Direct check of the ideal description: nonzero minors on every w-NE-ideal
// and zero minors on every shifted one.
bool is_ne_bounded(const Matrix& M, const Perm& w);

}  // namespace knn
