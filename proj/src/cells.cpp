#include "knn/cells.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "knn/positivity.hpp"

namespace knn {

std::string mode_name(CellMode m) { return m == CellMode::N1 ? "N1" : "N2U"; }
Mode word_mode(CellMode m) { return m == CellMode::N1 ? Mode::S : Mode::T; }
int ambient_k(CellMode m, int n) { return m == CellMode::N1 ? n - 1 : n - 2; }

std::string cell_json(const CellId& c) {
  nlohmann::ordered_json doc;
  doc["mode"] = mode_name(c.mode);
  doc["word"] = c.word.tokens();
  doc["signature"] = {{"u", c.signature.u.one_line()},
                      {"v", c.signature.v.one_line()},
                      {"det_sign", c.signature.det_sign},
                      {"corner_flags", {c.signature.corner[0], c.signature.corner[1]}}};
  return doc.dump();
}

namespace {

bool unitriangular(const Matrix& M) {
  for (int i = 1; i <= M.rows(); ++i)
    for (int j = 1; j <= i; ++j)
      if (M(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

Rational solid(const Matrix& M, int r0, int r1, int c0, int c1) {
  return minor(M, IndexSet::interval(r0, r1), IndexSet::interval(c0, c1));
}

// w = prefix * suffix with lengths adding.
Perm divide_right(const Perm& w, const Perm& suffix, const char* what) {
  Perm p = w * suffix.inverse();
  if (p.length() + suffix.length() != w.length())
    throw std::logic_error(std::string("weak-order quotient failed for ") + what + " " + w.str());
  return p;
}

Word tnn_s_word(int n, const Perm& u, const Perm& v) {
  return concat(f_word(n, u.reduced_word()), e_word(n, Mode::S, v.reduced_word()));
}

}  // namespace

bool in_semigroup(const Matrix& M, CellMode mode) {
  if (!M.square() || M.rows() < (mode == CellMode::N1 ? 3 : 4)) return false;
  const int n = M.rows();
  if (mode == CellMode::N1) return !det(M).is_zero() && is_k_nonnegative(M, n - 1).holds;
  return unitriangular(M) && is_k_nonnegative(M, n - 2).holds;
}

CellId classify(const Matrix& M, CellMode mode, Granularity g) {
  if (!in_semigroup(M, mode))
    throw DomainError(mode == CellMode::N1 ? "matrix is not invertible (n-1)-nonnegative"
                                           : "matrix is not unitriangular (n-2)-nonnegative");
  const int n = M.rows();
  if (mode == CellMode::N1) {
    const auto pair = bruhat_pair_of(M);
    CellSignature sig{pair.u, pair.v, det(M).sign(), {}};
    sig.corner[0] = !solid(M, 1, n - 1, 1, n - 1).is_zero();
    sig.corner[1] = !solid(M, 2, n, 2, n).is_zero();
    if (sig.det_sign > 0) return {mode, tnn_s_word(n, pair.u, pair.v), sig};
    const Perm v = divide_right(pair.v, alpha_upper(n), "upper part");
    const Perm u = divide_right(pair.u, alpha_lower(n), "lower part");
    if (!v.in_parabolic(1, n - 2) || !u.in_parabolic(2, n - 1))
      throw std::logic_error("K-cell parts outside their parabolic subgroups");
    std::vector<Letter> tail;
    if (sig.corner[1]) tail.push_back(Letter::f(1));
    if (sig.corner[0]) tail.push_back(Letter::e(n - 1));
    tail.push_back(Letter::k());
    return {mode, concat(tnn_s_word(n, u, v), Word(Mode::S, n, tail)), sig};
  }
  const Perm w = ne_bounded_cell(M);
  CellSignature sig{Perm::identity(n), w, solid(M, 1, n - 1, 2, n).sign(), {}};
  sig.corner[0] = !solid(M, 1, n - 2, 2, n - 1).is_zero();
  sig.corner[1] = !solid(M, 2, n - 1, 3, n).is_zero();
  if (is_k_nonnegative(M, n).holds) return {mode, canonicalize(e_word(n, Mode::T, w.reduced_word()), g), sig};
  const Perm wp = divide_right(w, alpha_unitriangular(n), "unitriangular cell");
  if (!wp.in_parabolic(1, n - 3)) throw std::logic_error("T-cell prefix outside <s_1..s_{n-3}>");
  std::vector<Letter> tail;
  if (sig.corner[0]) tail.push_back(Letter::e(n - 2));
  if (sig.corner[1]) tail.push_back(Letter::e(n - 1));
  tail.push_back(Letter::t());
  Word word = concat(e_word(n, Mode::T, wp.reduced_word()), Word(Mode::T, n, tail));
  return {mode, canonicalize(word, g), sig};
}

Peel peel_chevalley(const Matrix& M, Side side, Chev kind, int i, int k) {
  if (!M.square()) throw DomainError("peeling needs a square matrix");
  const int n = M.rows();
  if (i < 1 || i > n - 1 || k < 1 || k > n) throw DomainError("peel index out of range");
  // Row operations for left peels, column operations for right peels.
  const bool rows = side == Side::Left;
  // The line that changes and the line subtracted from it.
  int moving, source;
  if (rows) {
    moving = kind == Chev::E ? i : i + 1;
    source = kind == Chev::E ? i + 1 : i;
  } else {
    moving = kind == Chev::E ? i + 1 : i;
    source = kind == Chev::E ? i : i + 1;
  }
  std::optional<Rational> best;
  for (int r = 1; r <= k; ++r) {
    // Solid intervals of size r containing `moving` but not `source`.
    int lo = source < moving ? moving : moving - r + 1;
    if (lo < 1 || lo + r - 1 > n) continue;
    const IndexSet line = IndexSet::interval(lo, lo + r - 1);
    std::vector<int> swapped = line.indices();
    std::replace(swapped.begin(), swapped.end(), moving, source);
    std::sort(swapped.begin(), swapped.end());
    const IndexSet line_b(swapped);
    // Enumerate every r-subset on the other axis.
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + r, true);
    do {
      std::vector<int> other;
      for (int c = 0; c < n; ++c)
        if (pick[c]) other.push_back(c + 1);
      const IndexSet J(other);
      const Rational a = rows ? minor(M, line, J) : minor(M, J, line);
      const Rational b = rows ? minor(M, line_b, J) : minor(M, J, line_b);
      if (b.sign() > 0) {
        const Rational q = a / b;
        if (!best || q < *best) best = q;
      }
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  Rational x = best && best->sign() > 0 ? *best : Rational(0);
  Matrix rest = M;
  if (x.sign() > 0) {
    for (int t = 1; t <= n; ++t) {
      if (rows) rest(moving, t) -= x * M(source, t);
      else rest(t, moving) -= x * M(t, source);
    }
  }
  return {x, rest};
}

namespace {

struct Factorization {
  int n;
  Mode mode;
  std::vector<Letter> left;
  std::vector<Rational> left_p;
  std::vector<Letter> right;  // stored outermost first
  std::vector<Rational> right_p;
  std::vector<Letter> mid;
  std::vector<Rational> mid_p;

  void push_left(Letter l, const Rational& x) {
    left.push_back(l);
    left_p.push_back(x);
  }
  void push_right(Letter l, const Rational& x) {
    right.push_back(l);
    right_p.push_back(x);
  }
  ParamWord result() const {
    std::vector<Letter> letters = left;
    std::vector<Rational> params = left_p;
    letters.insert(letters.end(), mid.begin(), mid.end());
    params.insert(params.end(), mid_p.begin(), mid_p.end());
    letters.insert(letters.end(), right.rbegin(), right.rend());
    params.insert(params.end(), right_p.rbegin(), right_p.rend());
    return ParamWord(Word(mode, n, letters), params);
  }
};

Letter chev_letter(Chev kind, int i) { return kind == Chev::E ? Letter::e(i) : Letter::f(i); }

// Peel one generator at its maximum; true when something was removed.
bool try_peel(Matrix& M, Factorization& F, Side side, Chev kind, int i, int k) {
  Peel p = peel_chevalley(M, side, kind, i, k);
  if (p.x.sign() <= 0) return false;
  M = p.rest;
  if (side == Side::Left) F.push_left(chev_letter(kind, i), p.x);
  else F.push_right(chev_letter(kind, i), p.x);
  return true;
}

// Zero out entries more than `width` off the diagonal.
void band(Matrix& M, Factorization& F, int width, bool lower_half) {
  const int n = M.rows();
  for (int j = n; j >= 1; --j) {
    for (int i = 1; j - i > width; ++i) {
      if (M(i, j).is_zero()) continue;
      if (M(i + 1, j).sign() <= 0) throw DomainError("corner elimination hit a zero pivot");
      const Rational x = M(i, j) / M(i + 1, j);
      for (int t = 1; t <= n; ++t) M(i, t) -= x * M(i + 1, t);
      F.push_left(Letter::e(i), x);
    }
  }
  if (!lower_half) return;
  for (int j = n; j >= 1; --j) {
    for (int i = 1; j - i > width; ++i) {
      if (M(j, i).is_zero()) continue;
      if (M(j, i + 1).sign() <= 0) throw DomainError("corner elimination hit a zero pivot");
      const Rational x = M(j, i) / M(j, i + 1);
      for (int t = 1; t <= n; ++t) M(t, i) -= x * M(t, i + 1);
      F.push_right(Letter::f(i), x);
    }
  }
}

// Greedy max peeling of a totally nonnegative invertible matrix.
void factor_tnn(Matrix M, Factorization& F, bool unitriangular_input) {
  const int n = M.rows();
  if (!unitriangular_input) {
    for (bool again = true; again;) {
      again = false;
      for (int i = 1; i <= n - 1 && !again; ++i) again = try_peel(M, F, Side::Left, Chev::F, i, n);
    }
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j < i; ++j)
        if (!M(i, j).is_zero()) throw DomainError("lower part did not clear");
    Matrix U = M;
    for (int i = 1; i <= n; ++i) {
      if (M(i, i).sign() <= 0) throw DomainError("nonpositive pivot");
      if (M(i, i) != 1) {
        F.mid.push_back(Letter::h(i));
        F.mid_p.push_back(M(i, i));
      }
      for (int j = 1; j <= n; ++j) U(i, j) = M(i, j) / M(i, i);
    }
    M = U;
  }
  // Remaining e letters go to the right of the Jacobi part, in order.
  Factorization tail{n, F.mode, {}, {}, {}, {}, {}, {}};
  for (bool again = true; again;) {
    again = false;
    for (int i = 1; i <= n - 1 && !again; ++i) again = try_peel(M, tail, Side::Left, Chev::E, i, n);
  }
  if (!(M == Matrix::identity(n))) throw DomainError("upper part did not clear");
  F.mid.insert(F.mid.end(), tail.left.begin(), tail.left.end());
  F.mid_p.insert(F.mid_p.end(), tail.left_p.begin(), tail.left_p.end());
}

std::optional<GeneratorParams> read_block(const Matrix& B, int n, Family fam) {
  // B is the K block of size m with unit subdiagonal.
  const int m = B.rows();
  std::vector<Rational> a(m - 2), b(m - 1);
  for (int i = 1; i <= m - 2; ++i) {
    a[i - 1] = B(i, i) - (i >= 2 ? b[i - 2] : Rational(0));
    if (a[i - 1].sign() <= 0) return std::nullopt;
    b[i - 1] = B(i, i + 1) / a[i - 1];
    if (b[i - 1].sign() <= 0) return std::nullopt;
  }
  Rational y = 1;
  for (int i = 0; i < m - 2; ++i) y *= b[i];
  b[m - 2] = B(m - 1, m) / y;
  if (b[m - 2].sign() <= 0) return std::nullopt;
  auto p = GeneratorParams::raw(n, fam, a, b);
  return p;
}

void recognize_k(const Matrix& N, Factorization& F) {
  const int n = N.rows();
  Matrix K = N;
  std::vector<Rational> d(n + 1, Rational(1));
  for (int i = 2; i <= n; ++i) {
    d[i] = N(i, i - 1);
    if (d[i].sign() <= 0) throw DomainError("residue is not a scaled K generator");
    for (int j = 1; j <= n; ++j) K(i, j) = N(i, j) / d[i];
  }
  auto p = read_block(K, n, Family::K);
  if (!p || !(k_generator(*p) == K)) throw DomainError("residue is not a scaled K generator");
  for (int i = 2; i <= n; ++i) {
    if (d[i] == 1) continue;
    F.mid.push_back(Letter::h(i));
    F.mid_p.push_back(d[i]);
  }
  F.mid.push_back(Letter::k());
  auto flat = p->flat();
  F.mid_p.insert(F.mid_p.end(), flat.begin(), flat.end());
}

void recognize_t(const Matrix& N, Factorization& F) {
  const int n = N.rows();
  Matrix B(n - 1, n - 1);
  for (int i = 1; i <= n - 1; ++i)
    for (int j = 1; j <= n - 1; ++j) B(i, j) = (j == i - 1) ? Rational(1) : N(i, j + 1);
  auto p = read_block(B, n, Family::T);
  if (!p || !(t_generator(*p) == N)) throw DomainError("residue is not a T generator");
  F.mid.push_back(Letter::t());
  auto flat = p->flat();
  F.mid_p.insert(F.mid_p.end(), flat.begin(), flat.end());
}

}  // namespace

ParamWord factor(const Matrix& M, CellMode mode) {
  if (!in_semigroup(M, mode)) throw DomainError("matrix is not in the semigroup of mode " + mode_name(mode));
  const int n = M.rows();
  const int k = ambient_k(mode, n);
  Factorization F{n, word_mode(mode), {}, {}, {}, {}, {}, {}};
  Matrix R = M;
  band(R, F, n - k, mode == CellMode::N1);
  if (is_k_nonnegative(R, n).holds) {
    factor_tnn(R, F, mode == CellMode::N2U);
  } else {
    // Peel the corner generators the residue may still carry.
    std::vector<std::pair<Side, std::pair<Chev, int>>> peels;
    if (mode == CellMode::N1)
      peels = {{Side::Left, {Chev::F, 1}},
               {Side::Left, {Chev::E, n - 1}},
               {Side::Right, {Chev::E, 1}},
               {Side::Right, {Chev::F, n - 1}}};
    else
      peels = {{Side::Left, {Chev::E, n - 2}},
               {Side::Left, {Chev::E, n - 1}},
               {Side::Right, {Chev::E, 1}},
               {Side::Right, {Chev::E, 2}}};
    for (bool again = true; again;) {
      again = false;
      for (const auto& [side, g] : peels) again = try_peel(R, F, side, g.first, g.second, k) || again;
    }
    if (mode == CellMode::N1) recognize_k(R, F);
    else recognize_t(R, F);
  }
  ParamWord out = F.result();
  if (!(evaluate(out) == M)) throw std::logic_error("factorization does not reproduce the matrix");
  return out;
}

Word sampling_word(const CellId& cell) {
  const Word& w = cell.word;
  if (cell.mode == CellMode::N2U) return w;
  const int n = w.n();
  std::vector<Letter> out;
  std::size_t k = 0;
  while (k < w.size() && w[k].kind == LetterKind::F && !(w[k].index == 1 && w.count(LetterKind::K))) out.push_back(w[k++]);
  for (int i = w.count(LetterKind::K) ? 2 : 1; i <= n; ++i) out.push_back(Letter::h(i));
  for (; k < w.size(); ++k) out.push_back(w[k]);
  return Word(Mode::S, n, out);
}

Matrix sample_cell(const CellId& cell, const std::vector<Rational>& params) {
  return evaluate(ParamWord(sampling_word(cell), params));
}

Matrix sample_cell(const CellId& cell, Rng& rng) {
  return sample_cell(cell, rng.positives(param_count(sampling_word(cell))));
}

std::vector<CellId> enumerate_cells(int n, CellMode mode, Granularity g) {
  if (n < (mode == CellMode::N1 ? 3 : 4)) throw DomainError("enumerate_cells: n too small for this mode");
  std::vector<Word> words;
  if (mode == CellMode::N1) {
    for (const auto& u : all_perms(n))
      for (const auto& v : all_perms(n)) words.push_back(tnn_s_word(n, u, v));
    for (const auto& u : parabolic_elements(n, 2, n - 1))
      for (const auto& v : parabolic_elements(n, 1, n - 2))
        for (int gamma = 0; gamma < 4; ++gamma) {
          std::vector<Letter> tail;
          if (gamma & 1) tail.push_back(Letter::f(1));
          if (gamma & 2) tail.push_back(Letter::e(n - 1));
          tail.push_back(Letter::k());
          words.push_back(concat(tnn_s_word(n, u, v), Word(Mode::S, n, tail)));
        }
  } else {
    const Perm beta = beta_unitriangular(n);
    for (const auto& w : all_perms(n))
      if (g == Granularity::Fine || w == beta || !bruhat_leq(beta, w))
        words.push_back(e_word(n, Mode::T, w.reduced_word()));
    const std::vector<std::vector<int>> lambdas =
        g == Granularity::Fine ? std::vector<std::vector<int>>{{}, {n - 1}, {n - 2}, {n - 2, n - 1}}
                               : std::vector<std::vector<int>>{{}, {n - 1}, {n - 2}, {n - 1, n - 2}};
    for (const auto& wp : parabolic_elements(n, 1, n - 3))
      for (const auto& lam : lambdas) {
        auto idx = wp.reduced_word();
        idx.insert(idx.end(), lam.begin(), lam.end());
        words.push_back(concat(e_word(n, Mode::T, idx), Word(Mode::T, n, {Letter::t()})));
      }
  }
  std::sort(words.begin(), words.end());
  Rng rng(0x5eed);
  std::vector<CellId> out;
  for (const auto& w : words) {
    CellId probe{mode, w, {Perm::identity(n), Perm::identity(n), 0, {}}};
    CellId c = classify(sample_cell(probe, rng), mode, g);
    if (!(c.word == w)) throw std::logic_error("sample of " + w.str() + " classifies as " + c.word.str());
    out.push_back(c);
  }
  return out;
}

Word negative_det_positive_word(int n) {
  std::vector<Letter> out;
  const auto w0 = Perm::longest(n, 1, n - 1).reduced_word();
  for (int i : w0) out.push_back(Letter::e(i));
  out.push_back(Letter::e(n - 1));
  out.push_back(Letter::k());
  out.push_back(Letter::e(1));
  for (int i : w0) out.push_back(Letter::f(i));
  for (int i = 1; i <= n - 1; ++i) out.push_back(Letter::h(i));
  return Word(Mode::S, n, out);
}

}  // namespace knn
