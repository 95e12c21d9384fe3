#include "knn/generators.hpp"

#include <string>

namespace knn {

int k_arity(int n) { return 2 * n - 3; }
int t_arity(int n) { return 2 * n - 5; }

GeneratorParams GeneratorParams::raw(int n, Family f, std::vector<Rational> a, std::vector<Rational> b) {
  const int m = f == Family::K ? n : n - 1;
  if (m < 3) throw DomainError(f == Family::K ? "K needs n >= 3" : "T needs n >= 4");
  if (static_cast<int>(a.size()) != m - 2 || static_cast<int>(b.size()) != m - 1)
    throw DomainError("generator parameter arity mismatch for n=" + std::to_string(n));
  GeneratorParams p;
  p.n = n;
  p.family = f;
  p.a = std::move(a);
  p.b = std::move(b);
  return p;
}

GeneratorParams GeneratorParams::k(int n, std::vector<Rational> a, std::vector<Rational> b) {
  auto p = raw(n, Family::K, std::move(a), std::move(b));
  if (!p.all_positive()) throw DomainError("generator parameters must be positive");
  return p;
}

GeneratorParams GeneratorParams::t(int n, std::vector<Rational> a, std::vector<Rational> b) {
  auto p = raw(n, Family::T, std::move(a), std::move(b));
  if (!p.all_positive()) throw DomainError("generator parameters must be positive");
  return p;
}

bool GeneratorParams::all_positive() const {
  for (const auto& x : a)
    if (x.sign() <= 0) return false;
  for (const auto& x : b)
    if (x.sign() <= 0) return false;
  return true;
}

Rational GeneratorParams::X() const {
  const int m = block();
  Rational total = 0;
  for (int k = 1; k <= m - 2; ++k) {
    Rational t = 1;
    for (int l = 2; l <= k; ++l) t *= bi(l - 1);
    for (int l = k + 1; l <= m - 2; ++l) t *= ai(l);
    total += t;
  }
  return total;
}

Rational GeneratorParams::Y() const {
  Rational y = 1;
  for (int k = 1; k <= block() - 2; ++k) y *= bi(k);
  return y;
}

std::vector<Rational> GeneratorParams::flat() const {
  std::vector<Rational> v(a);
  v.insert(v.end(), b.begin(), b.end());
  return v;
}

GeneratorParams GeneratorParams::from_flat(int n, Family f, const std::vector<Rational>& v) {
  const int m = f == Family::K ? n : n - 1;
  if (m < 3 || static_cast<int>(v.size()) != 2 * m - 3)
    throw DomainError("generator parameter arity mismatch for n=" + std::to_string(n));
  return raw(n, f, std::vector<Rational>(v.begin(), v.begin() + (m - 2)),
             std::vector<Rational>(v.begin() + (m - 2), v.end()));
}

Matrix chevalley(int n, Chev kind, int i, const Rational& x) {
  if (i < 1 || i > n - 1) throw DomainError("Chevalley index out of range");
  if (x.sign() <= 0) throw DomainError("Chevalley parameter must be positive");
  Matrix M = Matrix::identity(n);
  if (kind == Chev::E) M(i, i + 1) = x;
  else M(i + 1, i) = x;
  return M;
}

Matrix jacobi_h(int n, int i, const Rational& x) {
  if (i < 1 || i > n) throw DomainError("Jacobi index out of range");
  if (x.sign() <= 0) throw DomainError("Jacobi parameter must be positive");
  Matrix M = Matrix::identity(n);
  M(i, i) = x;
  return M;
}

namespace {

// The displayed K matrix for block size m, without positivity checks.
Matrix k_block(const GeneratorParams& p) {
  const int m = p.block();
  Matrix M(m, m);
  for (int i = 2; i <= m; ++i) M(i, i - 1) = 1;
  for (int i = 1; i <= m - 2; ++i) {
    M(i, i) = p.ai(i) + (i >= 2 ? p.bi(i - 1) : Rational(0));
    M(i, i + 1) = p.ai(i) * p.bi(i);
  }
  M(m - 1, m - 1) = p.bi(m - 2);
  M(m - 1, m) = p.bi(m - 1) * p.Y();
  M(m, m) = p.bi(m - 1) * p.X();
  return M;
}

}  // namespace

Matrix k_generator(const GeneratorParams& p) {
  if (p.family != Family::K) throw DomainError("k_generator needs K parameters");
  return k_block(p);
}

Matrix t_generator(const GeneratorParams& p) {
  if (p.family != Family::T) throw DomainError("t_generator needs T parameters");
  Matrix K = k_block(p);
  Matrix M = Matrix::identity(p.n);
  for (int i = 1; i <= p.n - 1; ++i)
    for (int j = 1; j <= p.n - 1; ++j)
      if (!K(i, j).is_zero()) M(i, j + 1) = K(i, j);
  return M;
}

Matrix generator(const GeneratorParams& p) {
  return p.family == Family::K ? k_generator(p) : t_generator(p);
}

Rational continuant(const std::vector<Rational>& a, const std::vector<Rational>& b, int i, int r) {
  if (r < 0 || i < 1) throw DomainError("continuant index out of range");
  if (r == 0) return 1;
  if (i + r - 1 > static_cast<int>(a.size()) || (r >= 2 && i + r - 2 > static_cast<int>(b.size())))
    throw DomainError("continuant: insufficient coefficients");
  Rational prev = 1, cur = a[i - 1];
  for (int s = 2; s <= r; ++s) {
    Rational next = a[i + s - 2] * cur - b[i + s - 3] * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

Rational continued_fraction(const std::vector<Rational>& head, const std::vector<Rational>& tail) {
  if (head.empty() || tail.size() + 1 != head.size())
    throw DomainError("continued fraction needs m+1 heads and m tails");
  Rational v = head.back();
  for (int k = static_cast<int>(tail.size()) - 1; k >= 0; --k) {
    if (v.is_zero()) throw DomainError("continued fraction hits a zero denominator");
    v = head[k] - tail[k] / v;
  }
  return v;
}

Rational leading_fraction(const std::vector<Rational>& a, const std::vector<Rational>& b, int i, int r) {
  if (r < 1 || i + r - 1 > static_cast<int>(a.size()) || (r >= 2 && i + r - 2 > static_cast<int>(b.size())))
    throw DomainError("continued fraction: insufficient coefficients");
  std::vector<Rational> head, tail;
  for (int k = i + r - 1; k >= i; --k) head.push_back(a[k - 1]);
  for (int k = i + r - 2; k >= i; --k) tail.push_back(b[k - 1]);
  return continued_fraction(head, tail);
}

namespace {

// Diagonal a, superdiagonal b of a unit-subdiagonal tridiagonal matrix.
bool tridiagonal_conditions(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  const int n = static_cast<int>(a.size());
  for (const auto& x : b)
    if (x.sign() <= 0) return false;
  try {
    for (int x = 1; x < n - 1; ++x)
      if (leading_fraction(a, b, 1, x).sign() <= 0) return false;
    if (!leading_fraction(a, b, 1, n - 1).is_zero()) return false;
    if (!leading_fraction(a, b, 2, n - 1).is_zero()) return false;
  } catch (const DomainError&) {
    return false;  // an intermediate continuant vanished
  }
  return true;
}

}  // namespace

bool is_tridiagonal_irreducible(const Matrix& M) {
  if (!M.square() || M.rows() < 3) throw DomainError("tridiagonal test needs a square matrix, n >= 3");
  const int n = M.rows();
  std::vector<Rational> a, b;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const Rational& x = M(i, j);
      if (j == i - 1) {
        if (x != 1) throw DomainError("tridiagonal test needs a unit subdiagonal");
      } else if (j == i || j == i + 1) {
        if (x.is_zero()) throw DomainError("tridiagonal test needs a nonzero diagonal and superdiagonal");
      } else if (!x.is_zero()) {
        throw DomainError("matrix is not tridiagonal");
      }
    }
  for (int i = 1; i <= n; ++i) a.push_back(M(i, i));
  for (int i = 1; i < n; ++i) b.push_back(M(i, i + 1));
  return tridiagonal_conditions(a, b);
}

bool is_pentadiagonal_irreducible(const Matrix& M) {
  if (!M.square() || M.rows() < 4) throw DomainError("pentadiagonal test needs a square matrix, n >= 4");
  const int n = M.rows();
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const Rational& x = M(i, j);
      if (i == j) {
        if (x != 1) throw DomainError("pentadiagonal test needs a unit diagonal");
      } else if (j == i + 1 || j == i + 2) {
        if (x.is_zero()) throw DomainError("pentadiagonal test needs a nonzero band");
      } else if (!x.is_zero()) {
        throw DomainError("matrix is not upper pentadiagonal unitriangular");
      }
    }
  std::vector<Rational> a, b;
  for (int i = 1; i < n; ++i) a.push_back(M(i, i + 1));
  for (int i = 1; i < n - 1; ++i) b.push_back(M(i, i + 2));
  for (const auto& x : a)
    if (x.sign() <= 0) return false;
  return tridiagonal_conditions(a, b);
}

namespace {

// Principal |K_[i,j]| for j < n, and empty blocks (j < i) as 1.
Rational k_principal_below(const GeneratorParams& p, int i, int j) {
  const int n = p.block();
  if (j < i) return 1;
  auto a = [&](int l) { return l >= 1 && l <= n - 2 ? p.ai(l) : Rational(0); };
  auto b = [&](int l) { return l >= 1 && l <= n - 1 ? p.bi(l) : Rational(0); };
  Rational total = 0;
  for (int k = i - 1; k <= j; ++k) {
    Rational t = 1;
    for (int l = i; l <= k; ++l) t *= b(l - 1);
    for (int l = k + 1; l <= j; ++l) t *= a(l);
    total += t;
  }
  return total;
}

}  // namespace

Rational k_minor_closed_form(const GeneratorParams& p, const IndexSet& I, const IndexSet& J) {
  const int n = p.block();
  if (I.size() != J.size()) throw DomainError("minor: |I| != |J|");
  if (!I.is_interval() || !J.is_interval())
    throw DomainError("not covered by closed forms: index sets must be solid");
  const int i = I[0], j = I[I.size() - 1];
  const int s = J[0] - i;
  if (j > n || J[J.size() - 1] > n) throw DomainError("minor: index out of range");
  if (s >= 2 || s <= -2) return 0;
  if (s == -1) return 1;
  if (s == 1) {
    Rational t = 1;
    for (int k = i; k <= std::min(j, n - 2); ++k) t *= p.ai(k) * p.bi(k);
    if (j == n - 1)
      for (int k = 1; k <= n - 1; ++k) t *= p.bi(k);
    return t;
  }
  if (j < n) return k_principal_below(p, i, j);
  if (i == 1) {
    Rational t = -1;
    for (const auto& x : p.a) t *= x;
    for (const auto& x : p.b) t *= x;
    return t;
  }
  if (i == 2) return 0;
  Rational t = k_principal_below(p, 2, i - 2);
  for (int k = i; k <= n; ++k) t *= p.bi(k - 1);
  for (int k = i - 1; k <= n - 2; ++k) t *= p.ai(k);
  return t;
}

Rational t_minor_closed_form(const GeneratorParams& p, const IndexSet& I, const IndexSet& J) {
  if (p.family != Family::T) throw DomainError("t_minor_closed_form needs T parameters");
  if (I.indices().back() > p.n - 1 || J[0] < 2)
    throw DomainError("not covered by closed forms: T minors need rows in [1,n-1], columns in [2,n]");
  std::vector<int> shifted;
  for (int c : J) shifted.push_back(c - 1);
  return k_minor_closed_form(p, I, IndexSet(shifted));
}

}  // namespace knn
