#pragma once

#include <optional>
#include <string>
#include <vector>

#include "knn/perm.hpp"
#include "knn/rng.hpp"
#include "knn/words.hpp"

namespace knn {

// N1: invertible (n-1)-nonnegative. N2U: unitriangular (n-2)-nonnegative.
enum class CellMode { N1, N2U };

std::string mode_name(CellMode m);
Mode word_mode(CellMode m);
// n-1 for N1, n-2 for N2U.
int ambient_k(CellMode m, int n);

struct CellSignature {
  Perm u;
  Perm v;
  int det_sign = 0;
  bool corner[2] = {false, false};
  friend bool operator==(const CellSignature& a, const CellSignature& b) {
    return a.u == b.u && a.v == b.v && a.det_sign == b.det_sign && a.corner[0] == b.corner[0] &&
           a.corner[1] == b.corner[1];
  }
};

struct CellId {
  CellMode mode;
  Word word;
  CellSignature signature;
  friend bool operator==(const CellId& a, const CellId& b) { return a.mode == b.mode && a.word == b.word; }
};

std::string cell_json(const CellId& c);

// Membership tests for the two semigroups.
bool in_semigroup(const Matrix& M, CellMode mode);

// Throws DomainError when M is outside the semigroup of the mode.
CellId classify(const Matrix& M, CellMode mode, Granularity g = Granularity::Fine);

enum class Side { Left, Right };

struct Peel {
  Rational x;
  Matrix rest;
};

// Largest x >= 0 such that removing the Chevalley generator keeps every
// solid-indexed minor of order <= k nonnegative.
Peel peel_chevalley(const Matrix& M, Side side, Chev kind, int i, int k);

// Exact factorization; the result evaluates to M (checked before returning).
ParamWord factor(const Matrix& M, CellMode mode);

// The canonical word with Jacobi letters inserted so that its image is the
// whole cell: f-word, h letters, e-word, corner letters, K. Unchanged in N2U.
Word sampling_word(const CellId& cell);
Matrix sample_cell(const CellId& cell, const std::vector<Rational>& params);
Matrix sample_cell(const CellId& cell, Rng& rng);

// Canonical cells in lexicographic word order.
std::vector<CellId> enumerate_cells(int n, CellMode mode, Granularity g = Granularity::Fine);

// The (n-1)-positive word with negative determinant: w0 e-word, e_{n-1}, K, e_1,
// w0 f-word, h_1..h_{n-1}, where w0 reverses [1, n-1].
Word negative_det_positive_word(int n);

}  // namespace knn
