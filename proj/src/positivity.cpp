#include "knn/positivity.hpp"

namespace knn {

namespace {

// All r-subsets of [1,n] in lexicographic order.
std::vector<IndexSet> subsets(int n, int r) {
  std::vector<IndexSet> out;
  std::vector<int> c(r);
  for (int i = 0; i < r; ++i) c[i] = i + 1;
  while (true) {
    out.emplace_back(c);
    int i = r - 1;
    while (i >= 0 && c[i] == n - r + i + 1) --i;
    if (i < 0) break;
    ++c[i];
    for (int j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

void check_k(const Matrix& M, int k) {
  if (!M.square()) throw DomainError("positivity tests need a square matrix");
  if (k < 1 || k > M.rows()) throw DomainError("k out of range [1, n]");
}

PositivityResult scan(const Matrix& M, int k, bool strict, bool column_solid) {
  PositivityResult res;
  const int n = M.rows();
  for (int r = 1; r <= k && res.holds; ++r) {
    auto all = subsets(n, r);
    std::vector<IndexSet> cols;
    if (column_solid) {
      for (int lo = 1; lo + r - 1 <= n; ++lo) cols.push_back(IndexSet::interval(lo, lo + r - 1));
    } else {
      cols = all;
    }
    for (const auto& I : all) {
      for (const auto& J : cols) {
        Rational v = minor(M, I, J);
        if (v.sign() < 0 || (strict && v.is_zero())) {
          res.holds = false;
          res.witness = MinorWitness{I, J, v};
          return res;
        }
      }
    }
  }
  return res;
}

}  // namespace

void for_each_minor(const Matrix& M, int k,
                    const std::function<bool(const IndexSet&, const IndexSet&, const Rational&)>& visit) {
  check_k(M, k);
  for (int r = 1; r <= k; ++r) {
    auto all = subsets(M.rows(), r);
    for (const auto& I : all)
      for (const auto& J : all)
        if (!visit(I, J, minor(M, I, J))) return;
  }
}

PositivityResult is_k_nonnegative(const Matrix& M, int k) {
  check_k(M, k);
  return scan(M, k, false, false);
}

PositivityResult is_k_positive(const Matrix& M, int k) {
  check_k(M, k);
  return scan(M, k, true, false);
}

PositivityResult is_k_nonnegative_fast(const Matrix& M, int k) {
  check_k(M, k);
  if (det(M).is_zero())
    throw DomainError("column-solid test requires an invertible matrix");
  return scan(M, k, false, true);
}

std::vector<ZeroPatternViolation> zero_pattern_violations(const Matrix& M, int k,
                                                          bool assume_irreducible) {
  std::vector<ZeroPatternViolation> out;
  if (!M.square()) throw DomainError("zero pattern check needs a square matrix");
  const int n = M.rows();
  auto zero = [&](int i, int j) { return M(i, j).is_zero(); };
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (!zero(i, j)) continue;
      if (i == j) {
        out.push_back({i, j, "zero on the diagonal"});
        continue;
      }
      bool spread = true;
      if (i < j) {
        for (int a = 1; a <= i && spread; ++a)
          for (int b = j; b <= n && spread; ++b) spread = zero(a, b);
        if (!spread) out.push_back({i, j, "north-east shadow not zero"});
      } else {
        for (int a = i; a <= n && spread; ++a)
          for (int b = 1; b <= j && spread; ++b) spread = zero(a, b);
        if (!spread) out.push_back({i, j, "south-west shadow not zero"});
      }
      if (!assume_irreducible || k <= 2) continue;
      if ((i <= k || j <= k) && i > 1 && j > 1 && !zero(i - 1, j - 1))
        out.push_back({i, j, "diagonal predecessor not zero"});
      if ((i > n - k || j > n - k) && i < n && j < n && !zero(i + 1, j + 1))
        out.push_back({i, j, "diagonal successor not zero"});
    }
  }
  return out;
}

}  // namespace knn
