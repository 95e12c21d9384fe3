#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "knn/exact.hpp"

namespace knn {

struct MinorWitness {
  IndexSet rows;
  IndexSet cols;
  Rational value;
};

struct PositivityResult {
  bool holds = true;
  std::optional<MinorWitness> witness;  // first violation in enumeration order
  explicit operator bool() const { return holds; }
};

// Visit every minor of order <= k: increasing order, then (I, J) lexicographic.
// The visitor returns false to stop early.
void for_each_minor(const Matrix& M, int k,
                    const std::function<bool(const IndexSet&, const IndexSet&, const Rational&)>& visit);

PositivityResult is_k_nonnegative(const Matrix& M, int k);
PositivityResult is_k_positive(const Matrix& M, int k);
// Column-solid minors only; requires an invertible matrix.
PositivityResult is_k_nonnegative_fast(const Matrix& M, int k);

struct ZeroPatternViolation {
  int row;
  int col;
  std::string rule;
};

// Zero-entry propagation for k-nonnegative invertible matrices. With
// assume_irreducible, also checks the diagonal propagation m_{i,j} = 0 => m_{i-1,j-1} = 0
// (and the mirrored form) that holds for k-irreducible matrices, k > 2.
std::vector<ZeroPatternViolation> zero_pattern_violations(const Matrix& M, int k,
                                                          bool assume_irreducible = false);

}  // namespace knn
