#include "knn/perm.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace knn {

Perm::Perm(std::vector<int> one_line) : w_(std::move(one_line)) {
  std::vector<bool> seen(w_.size() + 1, false);
  for (int x : w_) {
    if (x < 1 || x > static_cast<int>(w_.size()) || seen[x]) throw DomainError("not a permutation");
    seen[x] = true;
  }
}

Perm Perm::identity(int n) {
  std::vector<int> w(n);
  std::iota(w.begin(), w.end(), 1);
  return Perm(std::move(w));
}

Perm Perm::simple(int n, int i) {
  if (i < 1 || i >= n) throw DomainError("simple reflection index out of range");
  auto w = identity(n).w_;
  std::swap(w[i - 1], w[i]);
  return Perm(std::move(w));
}

Perm Perm::from_word(int n, const std::vector<int>& letters) {
  Perm p = identity(n);
  for (int i : letters) p = p * simple(n, i);
  return p;
}

Perm Perm::longest(int n, int lo, int hi) {
  auto w = identity(n).w_;
  if (lo < hi) std::reverse(w.begin() + (lo - 1), w.begin() + hi);
  return Perm(std::move(w));
}

Perm Perm::inverse() const {
  std::vector<int> v(w_.size());
  for (std::size_t k = 0; k < w_.size(); ++k) v[w_[k] - 1] = static_cast<int>(k) + 1;
  return Perm(std::move(v));
}

int Perm::length() const {
  int inv = 0;
  for (std::size_t a = 0; a < w_.size(); ++a)
    for (std::size_t b = a + 1; b < w_.size(); ++b)
      if (w_[a] > w_[b]) ++inv;
  return inv;
}

bool Perm::left_descent(int i) const {
  auto inv = inverse();
  return inv(i) > inv(i + 1);
}

std::vector<int> Perm::reduced_word() const {
  std::vector<int> word;
  Perm cur = *this;
  while (cur.length() > 0) {
    for (int i = 1; i < n(); ++i) {
      if (cur.left_descent(i)) {
        word.push_back(i);
        cur = simple(n(), i) * cur;
        break;
      }
    }
  }
  return word;
}

int Perm::corner_count(int i, int j) const {
  int c = 0;
  for (int a = 1; a <= i; ++a)
    if ((*this)(a) >= j) ++c;
  return c;
}

bool Perm::in_parabolic(int lo, int hi) const {
  for (int i : reduced_word())
    if (i < lo || i > hi) return false;
  return true;
}

std::string Perm::str() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < w_.size(); ++k) os << (k ? "," : "") << w_[k];
  os << ']';
  return os.str();
}

Perm operator*(const Perm& u, const Perm& v) {
  if (u.n() != v.n()) throw DomainError("permutation size mismatch");
  std::vector<int> w(u.n());
  for (int k = 1; k <= u.n(); ++k) w[k - 1] = u(v(k));
  return Perm(std::move(w));
}

bool bruhat_leq(const Perm& x, const Perm& y) {
  if (x.n() != y.n()) throw DomainError("permutation size mismatch");
  for (int i = 1; i <= x.n(); ++i)
    for (int j = 1; j <= x.n(); ++j)
      if (x.corner_count(i, j) > y.corner_count(i, j)) return false;
  return true;
}

Perm demazure(int n, const std::vector<int>& letters) {
  Perm w = Perm::identity(n);
  for (int i : letters) {
    Perm ws = w * Perm::simple(n, i);
    if (ws.length() > w.length()) w = ws;
  }
  return w;
}

std::vector<Perm> all_perms(int n) {
  std::vector<Perm> out;
  auto w = Perm::identity(n).one_line();
  do {
    out.emplace_back(w);
  } while (std::next_permutation(w.begin(), w.end()));
  return out;
}

std::vector<Perm> parabolic_elements(int n, int lo, int hi) {
  auto w = Perm::identity(n).one_line();
  if (hi < lo) return {Perm(w)};
  std::vector<Perm> out;
  do {
    out.emplace_back(w);
  } while (std::next_permutation(w.begin() + (lo - 1), w.begin() + hi + 1));
  return out;
}

int matrix_rank(const Matrix& M) {
  Matrix A = M;
  int rank = 0;
  for (int c = 1; c <= A.cols() && rank < A.rows(); ++c) {
    int piv = 0;
    for (int r = rank + 1; r <= A.rows(); ++r)
      if (!A(r, c).is_zero()) {
        piv = r;
        break;
      }
    if (!piv) continue;
    ++rank;
    for (int j = 1; j <= A.cols(); ++j) std::swap(A(rank, j), A(piv, j));
    for (int r = rank + 1; r <= A.rows(); ++r) {
      if (A(r, c).is_zero()) continue;
      Rational f = A(r, c) / A(rank, c);
      for (int j = c; j <= A.cols(); ++j) A(r, j) -= f * A(rank, j);
    }
  }
  return rank;
}

Perm ne_bounded_cell(const Matrix& M) {
  if (!M.square()) throw DomainError("cell lookup needs a square matrix");
  const int n = M.rows();
  if (det(M).is_zero()) throw DomainError("cell lookup needs an invertible matrix");
  // r[i][j] = rank of rows [1,i], columns [j,n]; r[.][n+1] = 0.
  std::vector<std::vector<int>> r(n + 1, std::vector<int>(n + 2, 0));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      r[i][j] = matrix_rank(M.submatrix(IndexSet::interval(1, i), IndexSet::interval(j, n)));
  std::vector<int> w(n);
  for (int c = 1; c <= n; ++c) {
    int i = 1;
    while (r[i][c] - r[i][c + 1] != 1) ++i;
    w[c - 1] = i;
  }
  return Perm(std::move(w));
}

Perm sw_bounded_cell(const Matrix& M) { return ne_bounded_cell(M.transpose()).inverse(); }

BruhatPair bruhat_pair_of(const Matrix& M) { return {sw_bounded_cell(M), ne_bounded_cell(M)}; }

namespace {

std::vector<std::vector<int>> combos(int n, int r) {
  std::vector<std::vector<int>> out;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + r, true);
  do {
    std::vector<int> c;
    for (int k = 0; k < n; ++k)
      if (pick[k]) c.push_back(k + 1);
    out.push_back(c);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

bool termwise_leq(const std::vector<int>& x, const std::vector<int>& y) {
  for (std::size_t k = 0; k < x.size(); ++k)
    if (x[k] > y[k]) return false;
  return true;
}

}  // namespace

bool is_ne_bounded(const Matrix& M, const Perm& w) {
  const int n = w.n();
  if (!M.square() || M.rows() != n) throw DomainError("size mismatch");
  // Ideals: column sets closed under moving to later columns with smaller values.
  std::vector<std::pair<std::vector<int>, std::vector<int>>> ideals;
  for (int r = 1; r <= n; ++r) {
    for (const auto& J : combos(n, r)) {
      bool closed = true;
      for (int c : J)
        for (int j = c + 1; j <= n && closed; ++j)
          if (w(j) < w(c) && !std::binary_search(J.begin(), J.end(), j)) closed = false;
      if (!closed) continue;
      std::vector<int> I;
      for (int c : J) I.push_back(w(c));
      std::sort(I.begin(), I.end());
      ideals.emplace_back(I, J);
    }
  }
  auto is_ideal = [&](const std::vector<int>& I, const std::vector<int>& J) {
    return std::find(ideals.begin(), ideals.end(), std::make_pair(I, J)) != ideals.end();
  };
  for (const auto& [I, J] : ideals) {
    if (minor(M, IndexSet(I), IndexSet(J)).is_zero()) return false;
    const int r = static_cast<int>(I.size());
    for (const auto& I2 : combos(n, r)) {
      if (!termwise_leq(I2, I)) continue;
      for (const auto& J2 : combos(n, r)) {
        if (!termwise_leq(J, J2) || is_ideal(I2, J2)) continue;
        if (!minor(M, IndexSet(I2), IndexSet(J2)).is_zero()) return false;
      }
    }
  }
  return true;
}

}  // namespace knn
