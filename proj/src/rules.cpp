#include "knn/rules.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include <json.hpp>

namespace knn {

namespace {

// Parameters of a K block of size m: a_1..a_{m-2}, b_1..b_{m-1}.
struct Block {
  int m = 0;
  std::vector<Rational> a, b;
  Rational& A(int i) { return a.at(i - 1); }
  Rational& B(int i) { return b.at(i - 1); }
  const Rational& A(int i) const { return a.at(i - 1); }
  const Rational& B(int i) const { return b.at(i - 1); }

  Rational X() const {
    Rational total = 0;
    for (int k = 1; k <= m - 2; ++k) {
      Rational t = 1;
      for (int l = 2; l <= k; ++l) t *= B(l - 1);
      for (int l = k + 1; l <= m - 2; ++l) t *= A(l);
      total += t;
    }
    return total;
  }
  Rational prod_b(int lo, int hi) const {
    Rational t = 1;
    for (int l = lo; l <= hi; ++l) t *= B(l);
    return t;
  }
  Rational prod_a(int lo, int hi) const {
    Rational t = 1;
    for (int l = lo; l <= hi; ++l) t *= A(l);
    return t;
  }
  Rational Y() const { return prod_b(1, m - 2); }
};

Block take(const Params& p, std::size_t off, int m) {
  Block k;
  k.m = m;
  k.a.assign(p.begin() + off, p.begin() + off + (m - 2));
  k.b.assign(p.begin() + off + (m - 2), p.begin() + off + (2 * m - 3));
  return k;
}

void put(Params& out, const Block& k) {
  out.insert(out.end(), k.a.begin(), k.a.end());
  out.insert(out.end(), k.b.begin(), k.b.end());
}

using L = Letter;

std::vector<Index> range1(int lo, int hi) {
  std::vector<Index> out;
  for (int i = lo; i <= hi; ++i) out.push_back({i});
  return out;
}

std::vector<Index> single(int) { return {Index{}}; }

// e_i(x) K = K(A,B) e_{i+1}(x') on a block of size m, 1 <= i <= m-2.
std::pair<Block, Rational> e_through_block(Block k, int i, const Rational& x) {
  const int m = k.m;
  if (i < m - 2) {
    const Rational ai = k.A(i), ai1 = k.A(i + 1), bi = k.B(i), bi1 = k.B(i + 1);
    const Rational den = bi * (ai + x) + x * ai1;
    k.A(i) = ai + x;
    k.A(i + 1) = ai * ai1 / (ai + x);
    k.B(i) = bi + x * ai1 / (ai + x);
    k.B(i + 1) = bi * bi1 * (ai + x) / den;
    return {k, bi1 * ai1 * x / den};
  }
  const Rational am = k.A(m - 2), xp = k.prod_b(1, m - 1) * x / (k.B(m - 2) * (am + x));
  k.A(m - 2) = am + x;
  k.B(m - 1) = k.B(m - 1) * am / (am + x);
  return {k, xp};
}

std::pair<Block, Rational> e_through_block_back(Block k, int i, const Rational& xp) {
  const int m = k.m;
  if (i < m - 2) {
    const Rational Ai = k.A(i), Ai1 = k.A(i + 1), Bi = k.B(i), Bi1 = k.B(i + 1);
    const Rational d = Ai1 * Bi1 + Ai1 * xp + Bi * xp;
    k.A(i) = Ai * Ai1 * (Bi1 + xp) / d;
    k.A(i + 1) = Ai1 + Bi * xp / (Bi1 + xp);
    k.B(i) = Bi * Bi1 / (Bi1 + xp);
    k.B(i + 1) = Bi1 + xp;
    return {k, xp * Ai * Bi / d};
  }
  const Rational pb = k.prod_b(1, m - 1), Bm = k.B(m - 2), Am = k.A(m - 2);
  k.A(m - 2) = Am * pb / (pb + xp * Bm);
  k.B(m - 1) = k.B(m - 1) + xp / k.prod_b(1, m - 3);
  return {k, Am * Bm * xp / (pb + xp * Bm)};
}

// h_i(x) K(a,b) = K(A,B) h_{i-1}(x), 2 <= i <= n.
Block h_through_k(Block k, int i, const Rational& x) {
  const int n = k.m;
  if (i - 1 >= 1 && i - 1 <= n - 2) k.A(i - 1) /= x;
  if (i <= n - 2) k.A(i) *= x;
  k.B(i - 1) *= x;
  if (i >= 3) k.B(i - 2) /= x;
  if (i == 2) k.B(n - 1) /= x;
  if (i == n - 1) k.B(n - 1) *= x;
  return k;
}

Block h_through_k_printed(Block k, int i, const Rational& x) {
  const int n = k.m;
  if (i <= n - 2) k.A(i) *= x;
  if (i + 1 <= n - 2) k.A(i + 1) /= x;
  k.B(i - 1) *= x;
  if (i <= n - 1) k.B(i) /= x;
  return k;
}

// f_{i+1}(x) K(a,b) = h_{i+2}(1/w) K(A,B) f_i(x) h_i(w); returns (A,B,w).
std::pair<Block, Rational> f_through_k(Block k, int i, const Rational& x, bool printed) {
  const int n = k.m;
  if (i < n - 2) {
    const Rational D = 1 + x * k.A(i + 1) + x * k.B(i), P = 1 + x * k.A(i + 1);
    const Rational D2 = 1 + x * k.A(i + 1) + (i + 1 <= n - 1 ? x * k.B(i + 1) : Rational(0));
    k.A(i) *= P;
    k.A(i + 1) = k.A(i + 1) * D / P;
    if (printed) {
      if (i + 2 <= n - 2) k.A(i + 2) /= D2;
      if (i >= 2) k.B(i - 1) *= D;
    } else {
      if (i + 2 <= n - 2) k.A(i + 2) /= D;
      else k.B(n - 1) /= D;
      if (i >= 2) k.B(i - 1) *= D;
      else k.B(n - 1) *= D;
    }
    k.B(i) /= P;
    k.B(i + 1) = k.B(i + 1) * P / D;
    return {k, 1 / D};
  }
  const Rational Q = 1 + x * k.B(n - 2);
  if (n - 3 >= 1) k.B(n - 3) *= Q;
  else if (!printed) k.B(n - 1) *= Q;
  k.B(n - 1) /= Q;
  return {k, 1 / Q};
}

std::optional<Block> f_through_k_back(Block k, int i, const Rational& x, const Rational& w) {
  const int n = k.m;
  if (i < n - 2) {
    const Rational D = 1 + x * k.A(i + 1) + x * k.B(i);
    if (w != 1 / D) return std::nullopt;
    const Rational P = D / (1 + x * k.B(i));
    k.A(i) /= P;
    k.A(i + 1) = k.A(i + 1) * P / D;
    if (i + 2 <= n - 2) k.A(i + 2) *= D;
    else k.B(n - 1) *= D;
    if (i >= 2) k.B(i - 1) /= D;
    else k.B(n - 1) /= D;
    k.B(i) *= P;
    k.B(i + 1) = k.B(i + 1) * D / P;
    return k;
  }
  const Rational Q = 1 + x * k.B(n - 2);
  if (w != 1 / Q) return std::nullopt;
  if (n - 3 >= 1) k.B(n - 3) /= Q;
  else k.B(n - 1) /= Q;
  k.B(n - 1) *= Q;
  return k;
}

Params cat(std::initializer_list<Rational> head, const Block& k, std::initializer_list<Rational> tail) {
  Params out(head);
  put(out, k);
  out.insert(out.end(), tail);
  return out;
}

Params draw_positive(int count, Rng& rng) { return rng.positives(count); }

// ---- S-mode rules involving K ----

RewriteRule rule_e_through_k() {
  RewriteRule r;
  r.id = "e-through-K";
  r.statement = "e_i(x) K(a,b) = K(A,B) e_{i+1}(x'), 1 <= i <= n-2";
  r.instances = [](int n) { return range1(1, n - 2); };
  r.lhs = [](int, const Index& ix) { return std::vector<L>{L::e(ix[0]), L::k()}; };
  r.rhs = [](int, const Index& ix) { return std::vector<L>{L::k(), L::e(ix[0] + 1)}; };
  r.forward = [](int n, const Index& ix, const Params& p) -> std::optional<Params> {
    auto [k, xp] = e_through_block(take(p, 1, n), ix[0], p[0]);
    return cat({}, k, {xp});
  };
  r.backward = [](int n, const Index& ix, const Params& p) -> std::optional<Params> {
    auto [k, x] = e_through_block_back(take(p, 0, n), ix[0], p.back());
    return cat({x}, k, {});
  };
  return r;
}

RewriteRule rule_e_last_through_k() {
  RewriteRule r;
  r.id = "e-last-through-K";
  r.statement = "e_{n-1}(x) K(a,b) = K(A,B) f_{n-1}(x') h_{n-1}(c)";
  r.instances = single;
  r.lhs = [](int n, const Index&) { return std::vector<L>{L::e(n - 1), L::k()}; };
  r.rhs = [](int n, const Index&) { return std::vector<L>{L::k(), L::f(n - 1), L::h(n - 1)}; };
  auto fwd = [](bool printed) {
    return [printed](int n, const Index&, const Params& p) -> std::optional<Params> {
      Block k = take(p, 1, n);
      const Rational x = p[0], X = k.X(), Y = k.Y(), bl = k.B(n - 1);
      const Rational c = Y / (Y + x * X);
      k.B(n - 2) /= c;
      const Rational xp = printed ? x / Y : x / (bl * Y);
      return cat({}, k, {xp, c});
    };
  };
  r.forward = fwd(false);
  r.printed_forward = fwd(true);
  r.backward = [](int n, const Index&, const Params& p) -> std::optional<Params> {
    Block k = take(p, 0, n);
    const Rational xp = p[p.size() - 2], c = p.back();
    if (c != 1 / (1 + xp * k.B(n - 1) * k.X())) return std::nullopt;
    k.B(n - 2) *= c;
    return cat({xp * k.B(n - 1) * k.Y()}, k, {});
  };
  r.correction = "x' = x/(b_{n-1} Y) instead of x/Y; the relation c = 1/(1 + x' b_{n-1} X) carries the same factor";
  return r;
}

RewriteRule rule_f_through_k() {
  RewriteRule r;
  r.id = "f-through-K";
  r.statement = "f_{i+1}(x) K(a,b) = h_{i+2}(1/w) K(A,B) f_i(x) h_i(w), 1 <= i <= n-2";
  r.instances = [](int n) { return range1(1, n - 2); };
  r.lhs = [](int, const Index& ix) { return std::vector<L>{L::f(ix[0] + 1), L::k()}; };
  r.rhs = [](int, const Index& ix) {
    return std::vector<L>{L::h(ix[0] + 2), L::k(), L::f(ix[0]), L::h(ix[0])};
  };
  auto fwd = [](bool printed) {
    return [printed](int n, const Index& ix, const Params& p) -> std::optional<Params> {
      auto [k, w] = f_through_k(take(p, 1, n), ix[0], p[0], printed);
      return cat({1 / w}, k, {p[0], w});
    };
  };
  r.forward = fwd(false);
  r.printed_forward = fwd(true);
  r.backward = [](int n, const Index& ix, const Params& p) -> std::optional<Params> {
    const Rational winv = p.front(), x = p[p.size() - 2], w = p.back();
    if (winv * w != 1) return std::nullopt;
    auto k = f_through_k_back(take(p, 1, n), ix[0], x, w);
    if (!k) return std::nullopt;
    return cat({x}, *k, {});
  };
  r.correction =
      "A_{i+2} is divided by 1 + x a_{i+1} + x b_i (not x b_{i+1}); when i = 1 the factor on b_{i-1} "
      "moves to b_{n-1}, and when i = n-3 the factor on a_{i+2} moves to b_{n-1} as a divisor";
  return r;
}

RewriteRule rule_f_through_k_right_h() {
  RewriteRule r;
  r.id = "f-through-K-right-h";
  r.statement = "f_{i+1}(x) K(a,b) = K(A,B) h_{i+1}(1/w) f_i(x) h_i(w), 1 <= i <= n-2";
  r.instances = [](int n) { return range1(1, n - 2); };
  r.lhs = [](int, const Index& ix) { return std::vector<L>{L::f(ix[0] + 1), L::k()}; };
  r.rhs = [](int, const Index& ix) {
    return std::vector<L>{L::k(), L::h(ix[0] + 1), L::f(ix[0]), L::h(ix[0])};
  };
  auto fwd = [](bool printed) {
    return [printed](int n, const Index& ix, const Params& p) -> std::optional<Params> {
      auto [k, w] = f_through_k(take(p, 1, n), ix[0], p[0], printed);
      if (!printed) k = h_through_k(k, ix[0] + 2, 1 / w);
      return cat({}, k, {1 / w, p[0], w});
    };
  };
  r.forward = fwd(false);
  r.printed_forward = fwd(true);
  r.backward = [](int n, const Index& ix, const Params& p) -> std::optional<Params> {
    const Rational winv = p[p.size() - 3], x = p[p.size() - 2], w = p.back();
    if (winv * w != 1) return std::nullopt;
    Block k = h_through_k(take(p, 0, n), ix[0] + 2, w);
    auto orig = f_through_k_back(k, ix[0], x, w);
    if (!orig) return std::nullopt;
    return cat({x}, *orig, {});
  };
  r.correction =
      "with h_{i+1}(1/w) right of K, the block parameters are those of the left-h form after moving "
      "h_{i+2}(1/w) through K";
  return r;
}

RewriteRule rule_f1_through_k() {
  RewriteRule r;
  r.id = "f1-through-K";
  r.statement = "f_1(x) K(a,b) = K(A,B) e_1(x') h_1(c)";
  r.instances = single;
  r.lhs = [](int, const Index&) { return std::vector<L>{L::f(1), L::k()}; };
  r.rhs = [](int, const Index&) { return std::vector<L>{L::k(), L::e(1), L::h(1)}; };
  auto fwd = [](bool printed) {
    return [printed](int n, const Index&, const Params& p) -> std::optional<Params> {
      Block k = take(p, 1, n);
      const Rational x = p[0], a1 = k.A(1), b1 = k.B(1);
      k.A(1) = a1 / (1 + x * a1);
      const Rational c = printed ? 1 / (1 + x * a1) : 1 + x * a1;
      return cat({}, k, {x * a1 * b1, c});
    };
  };
  r.forward = fwd(false);
  r.printed_forward = fwd(true);
  r.backward = [](int n, const Index&, const Params& p) -> std::optional<Params> {
    Block k = take(p, 0, n);
    const Rational xp = p[p.size() - 2], c = p.back();
    if (c != 1 + xp / k.B(1)) return std::nullopt;
    k.A(1) *= c;
    return cat({xp / (k.A(1) * k.B(1))}, k, {});
  };
  r.correction = "c = 1 + x a_1 (the published 1/(1 + x a_1) is its reciprocal); backward c = 1 + x'/B_1";
  return r;
}

RewriteRule rule_h_through_k() {
  RewriteRule r;
  r.id = "h-through-K";
  r.statement = "h_i(x) K(a,b) = K(A,B) h_{i-1}(x), 2 <= i <= n";
  r.instances = [](int n) { return range1(2, n); };
  r.lhs = [](int, const Index& ix) { return std::vector<L>{L::h(ix[0]), L::k()}; };
  r.rhs = [](int, const Index& ix) { return std::vector<L>{L::k(), L::h(ix[0] - 1)}; };
  auto fwd = [](bool printed) {
    return [printed](int n, const Index& ix, const Params& p) -> std::optional<Params> {
      Block k = take(p, 1, n);
      k = printed ? h_through_k_printed(k, ix[0], p[0]) : h_through_k(k, ix[0], p[0]);
      return cat({}, k, {p[0]});
    };
  };
  r.forward = fwd(false);
  r.printed_forward = fwd(true);
  r.backward = [](int n, const Index& ix, const Params& p) -> std::optional<Params> {
    Block k = h_through_k(take(p, 0, n), ix[0], 1 / p.back());
    return cat({p.back()}, k, {});
  };
  r.correction =
      "A_{i-1} /= x, A_i *= x, B_{i-1} *= x, B_{i-2} /= x, with b_{n-1} divided by x when i = 2 and "
      "multiplied by x when i = n-1";
  return r;
}

RewriteRule rule_h1_into_k() {
  RewriteRule r;
  r.id = "h1-into-K";
  r.statement = "h_1(x) K(a,b) = K(A,B), A_1 = x a_1";
  r.instances = single;
  r.lhs = [](int, const Index&) { return std::vector<L>{L::h(1), L::k()}; };
  r.rhs = [](int, const Index&) { return std::vector<L>{L::k()}; };
  r.forward = [](int n, const Index&, const Params& p) -> std::optional<Params> {
    Block k = take(p, 1, n);
    k.A(1) *= p[0];
    return cat({}, k, {});
  };
  return r;
}

RewriteRule rule_k_absorbs_hn() {
  RewriteRule r;
  r.id = "K-absorbs-hn";
  r.statement = "K(a,b) h_n(x) = K(A,B), B_{n-1} = x b_{n-1}";
  r.instances = single;
  r.lhs = [](int n, const Index&) { return std::vector<L>{L::k(), L::h(n)}; };
  r.rhs = [](int, const Index&) { return std::vector<L>{L::k()}; };
  auto fwd = [](bool printed) {
    return [printed](int n, const Index&, const Params& p) -> std::optional<Params> {
      Block k = take(p, 0, n);
      k.B(printed ? n - 2 : n - 1) *= p.back();
      return cat({}, k, {});
    };
  };
  r.forward = fwd(false);
  r.printed_forward = fwd(true);
  r.correction = "the scaled parameter is b_{n-1}, not b_{n-2}";
  return r;
}

// ---- T-mode rules ----

RewriteRule rule_e_through_t() {
  RewriteRule r;
  r.id = "e-through-T";
  r.statement = "e_i(x) T(a,b) = T(A,B) e_{i+2}(x'), 1 <= i <= n-3";
  r.mode = RuleMode::T;
  r.min_n = 4;
  r.instances = [](int n) { return range1(1, n - 3); };
  r.lhs = [](int, const Index& ix) { return std::vector<L>{L::e(ix[0]), L::t()}; };
  r.rhs = [](int, const Index& ix) { return std::vector<L>{L::t(), L::e(ix[0] + 2)}; };
  r.forward = [](int n, const Index& ix, const Params& p) -> std::optional<Params> {
    auto [k, xp] = e_through_block(take(p, 1, n - 1), ix[0], p[0]);
    return cat({}, k, {xp});
  };
  r.printed_forward = [](int n, const Index& ix, const Params& p) -> std::optional<Params> {
    if (ix[0] == n - 3) return std::nullopt;  // the published formula needs a_{n-2}
    auto [k, xp] = e_through_block(take(p, 1, n - 1), ix[0], p[0]);
    return cat({}, k, {xp});
  };
  r.backward = [](int n, const Index& ix, const Params& p) -> std::optional<Params> {
    auto [k, x] = e_through_block_back(take(p, 0, n - 1), ix[0], p.back());
    return cat({x}, k, {});
  };
  r.correction = "i = n-3 uses the boundary form of e-through-K on the block of size n-1";
  return r;
}

RewriteRule rule_e_second_last_through_t() {
  RewriteRule r;
  r.id = "e-second-last-through-T";
  r.statement = "e_{n-2}(x) T(a,b) = T(A,B) e_1(x')";
  r.mode = RuleMode::T;
  r.min_n = 4;
  r.subtraction_free = false;
  r.instances = single;
  r.lhs = [](int n, const Index&) { return std::vector<L>{L::e(n - 2), L::t()}; };
  r.rhs = [](int, const Index&) { return std::vector<L>{L::t(), L::e(1)}; };
  r.forward = [](int n, const Index&, const Params& p) -> std::optional<Params> {
    const Block k = take(p, 1, n - 1);
    Block K = k;
    K.B(n - 3) = k.B(n - 3) + p[0];
    for (int i = n - 3; i >= 1; --i) {
      K.A(i) = k.A(i) * k.B(i) / K.B(i);
      if (i - 1 >= 1) K.B(i - 1) = k.A(i) + k.B(i - 1) - K.A(i);
    }
    return cat({}, K, {k.A(1) - K.A(1)});
  };
  r.backward = [](int n, const Index&, const Params& p) -> std::optional<Params> {
    const Block K = take(p, 0, n - 1);
    Block k = K;
    k.A(1) = p.back() + K.A(1);
    for (int i = 1; i <= n - 3; ++i) {
      k.B(i) = K.A(i) * K.B(i) / k.A(i);
      if (i + 1 <= n - 3) k.A(i + 1) = K.B(i) + K.A(i + 1) - k.B(i);
    }
    return cat({K.B(n - 3) - k.B(n - 3)}, k, {});
  };
  return r;
}

RewriteRule rule_e_last_through_t() {
  RewriteRule r;
  r.id = "e-last-through-T";
  r.statement = "e_{n-1}(x) T(a,b) = T(A,B) e_2(x')";
  r.mode = RuleMode::T;
  r.min_n = 4;
  r.instances = single;
  r.lhs = [](int n, const Index&) { return std::vector<L>{L::e(n - 1), L::t()}; };
  r.rhs = [](int, const Index&) { return std::vector<L>{L::t(), L::e(2)}; };
  r.forward = [](int n, const Index&, const Params& p) -> std::optional<Params> {
    Block k = take(p, 1, n - 1);
    const Rational x = p[0], P = k.prod_a(2, n - 3), Z = P * k.B(n - 2), b1 = k.B(1);
    k.B(1) = b1 * Z / (Z + x);
    k.B(n - 2) += x / P;
    return cat({}, k, {b1 * x / (Z + x)});
  };
  r.printed_forward = [](int n, const Index&, const Params& p) -> std::optional<Params> {
    Block k = take(p, 1, n - 1);
    const Rational x = p[0];
    Rational m = 1;
    if (n - 3 >= 3) {
      Matrix T = t_generator(GeneratorParams::raw(n, Family::T, k.a, k.b));
      m = minor(T, IndexSet::interval(3, n - 3), IndexSet::interval(4, n - 2));
    }
    k.B(n - 2) += k.B(n - 2) / (k.B(1) * x);
    return cat({}, k, {x / m});
  };
  r.backward = [](int n, const Index&, const Params& p) -> std::optional<Params> {
    Block k = take(p, 0, n - 1);
    const Rational xp = p.back(), P = k.prod_a(2, n - 3), B1 = k.B(1);
    k.B(1) = B1 + xp;
    k.B(n - 2) = k.B(n - 2) * B1 / (B1 + xp);
    return cat({xp * P * k.B(n - 2) / B1}, k, {});
  };
  r.correction =
      "with P = a_2...a_{n-3} and Z = P b_{n-2}: B_1 = b_1 Z/(Z + x), B_{n-2} = b_{n-2} + x/P, "
      "x' = b_1 x/(Z + x)";
  return r;
}

// e_{n-1}(u) e_{n-2}(v) T(a,b): params (u, v, a, b).
Params draw_split(int n, Rng& rng, int branch) {
  Params p = rng.positives(2 + t_arity(n));
  const Block k = take(p, 2, n - 1);
  const Rational target = k.B(n - 2) * k.Y() / p[0];
  if (branch < 0) p[1] = target / (1 + rng.positive());
  else if (branch == 0) p[1] = target;
  else p[1] = target * (1 + rng.positive());
  return p;
}

std::vector<L> split_lhs(int n, const Index&) { return {L::e(n - 1), L::e(n - 2), L::t()}; }

int split_sign(int n, const Params& p) {
  const Block k = take(p, 2, n - 1);
  const Rational lhs = p[0] * p[1], rhs = k.B(n - 2) * k.Y();
  return lhs < rhs ? -1 : (lhs == rhs ? 0 : 1);
}

RewriteRule rule_split_negative() {
  RewriteRule r;
  r.id = "split-negative";
  r.statement = "e_{n-1}(u) e_{n-2}(v) T(a,b) = e_{n-2}(v) e_{n-1}(u') T(a,B) when uv < b_{n-2} Y";
  r.mode = RuleMode::T;
  r.min_n = 4;
  r.subtraction_free = false;
  r.instances = single;
  r.lhs = split_lhs;
  r.rhs = [](int n, const Index&) { return std::vector<L>{L::e(n - 2), L::e(n - 1), L::t()}; };
  auto fwd = [](bool printed) {
    return [printed](int n, const Index&, const Params& p) -> std::optional<Params> {
      if (split_sign(n, p) >= 0) return std::nullopt;
      Block k = take(p, 2, n - 1);
      const Rational u = p[0], v = p[1], Y = k.Y(), X = k.X();
      k.B(n - 2) -= u * v / Y;
      return cat({v, printed ? u : u * (Y + v * X) / Y}, k, {});
    };
  };
  r.forward = fwd(false);
  r.printed_forward = fwd(true);
  r.backward = [](int n, const Index&, const Params& p) -> std::optional<Params> {
    Block k = take(p, 2, n - 1);
    const Rational v = p[0], U = p[1], Y = k.Y(), X = k.X();
    const Rational u = U * Y / (Y + v * X);
    k.B(n - 2) += u * v / Y;
    return cat({u, v}, k, {});
  };
  r.draw = [](int n, const Index&, Rng& rng) { return draw_split(n, rng, -1); };
  r.correction = "the new e_{n-1} parameter is u (Y + v X)/Y, where X is the K-block sum, not u";
  return r;
}

// e_{n-2}(v) e_{n-3}(a_{n-3}) ... e_1(a_1) e_{n-1}(top) e_{n-2}(c_{n-3}) ... e_{lo+1}(c_lo).
std::vector<L> split_tnn_word(int n, int lo) {
  std::vector<L> w{L::e(n - 2)};
  for (int i = n - 3; i >= 1; --i) w.push_back(L::e(i));
  w.push_back(L::e(n - 1));
  for (int i = n - 3; i >= lo; --i) w.push_back(L::e(i + 1));
  return w;
}

RewriteRule rule_split_zero() {
  RewriteRule r;
  r.id = "split-zero";
  r.statement =
      "e_{n-1}(u) e_{n-2}(v) T(a,b) = e_{n-2}(v) e_{n-3}(a_{n-3})...e_1(a_1) e_{n-1}(X'+u) "
      "e_{n-2}(b_{n-3})...e_2(b_1) when uv = b_{n-2} Y, X' = b_{n-2} X";
  r.mode = RuleMode::T;
  r.min_n = 4;
  r.instances = single;
  r.lhs = split_lhs;
  r.rhs = [](int n, const Index&) { return split_tnn_word(n, 1); };
  r.forward = [](int n, const Index&, const Params& p) -> std::optional<Params> {
    if (split_sign(n, p) != 0) return std::nullopt;
    const Block k = take(p, 2, n - 1);
    Params out{p[1]};
    for (int i = n - 3; i >= 1; --i) out.push_back(k.A(i));
    out.push_back(k.B(n - 2) * k.X() + p[0]);
    for (int i = n - 3; i >= 1; --i) out.push_back(k.B(i));
    return out;
  };
  r.draw = [](int n, const Index&, Rng& rng) { return draw_split(n, rng, 0); };
  r.correction = "the e_{n-1} parameter uses X' = b_{n-2} X, the T entry at (n-1, n)";
  return r;
}

RewriteRule rule_split_positive() {
  RewriteRule r;
  r.id = "split-positive";
  r.statement =
      "e_{n-1}(u) e_{n-2}(v) T(a,b) = e_{n-2}(v') e_{n-3}(A_{n-3})...e_1(A_1) e_{n-1}(X'+u) "
      "e_{n-2}(B_{n-3})...e_1(B_0) when uv > b_{n-2} Y, X' = b_{n-2} X";
  r.mode = RuleMode::T;
  r.min_n = 4;
  r.subtraction_free = false;
  r.instances = single;
  r.lhs = split_lhs;
  r.rhs = [](int n, const Index&) { return split_tnn_word(n, 0); };
  r.forward = [](int n, const Index&, const Params& p) -> std::optional<Params> {
    if (split_sign(n, p) <= 0) return std::nullopt;
    const Block k = take(p, 2, n - 1);
    const Rational u = p[0], v = p[1], Xh = k.B(n - 2) * k.X();
    const Rational vp = (k.B(n - 2) * k.Y() + v * Xh) / (Xh + u);
    // B[i] holds B_i for i = 0..n-3; A[i] holds A_i for i = 1..n-3.
    std::vector<Rational> A(n - 2), B(n - 2);
    auto b = [&](int i) { return i >= 1 ? k.B(i) : Rational(0); };
    B[n - 3] = k.B(n - 3) + v - vp;
    for (int i = n - 3; i >= 1; --i) {
      A[i] = k.A(i) * k.B(i) / B[i];
      B[i - 1] = k.A(i) + b(i - 1) - A[i];
    }
    Params out{vp};
    for (int i = n - 3; i >= 1; --i) out.push_back(A[i]);
    out.push_back(Xh + u);
    for (int i = n - 3; i >= 0; --i) out.push_back(B[i]);
    return out;
  };
  r.draw = [](int n, const Index&, Rng& rng) { return draw_split(n, rng, 1); };
  r.correction = "X in v' and in the e_{n-1} parameter is X' = b_{n-2} X, the T entry at (n-1, n)";
  return r;
}

// ---- Chevalley and Jacobi relations ----

RewriteRule merge_rule(const std::string& id, LetterKind kind) {
  RewriteRule r;
  r.id = id;
  const bool is_h = kind == LetterKind::H;
  r.mode = kind == LetterKind::E ? RuleMode::Both : RuleMode::S;
  r.min_n = 2;
  r.statement = is_h ? "h_i(x) h_i(y) = h_i(xy)" : id.substr(0, 1) + "_i(s) " + id.substr(0, 1) + "_i(t) = " +
                                                       id.substr(0, 1) + "_i(s+t)";
  r.instances = [is_h](int n) { return range1(1, is_h ? n : n - 1); };
  r.lhs = [kind](int, const Index& ix) { return std::vector<L>{{kind, ix[0]}, {kind, ix[0]}}; };
  r.rhs = [kind](int, const Index& ix) { return std::vector<L>{{kind, ix[0]}}; };
  r.forward = [is_h](int, const Index&, const Params& p) -> std::optional<Params> {
    return Params{is_h ? p[0] * p[1] : p[0] + p[1]};
  };
  return r;
}

RewriteRule braid_rule(const std::string& id, LetterKind kind) {
  RewriteRule r;
  r.id = id;
  r.mode = kind == LetterKind::E ? RuleMode::Both : RuleMode::S;
  const std::string c = kind == LetterKind::E ? "e" : "f";
  r.statement = c + "_i(a) " + c + "_{i+1}(b) " + c + "_i(c) = " + c + "_{i+1}(bc/(a+c)) " + c + "_i(a+c) " + c +
                "_{i+1}(ab/(a+c))";
  r.instances = [](int n) { return range1(1, n - 2); };
  r.lhs = [kind](int, const Index& ix) {
    return std::vector<L>{{kind, ix[0]}, {kind, ix[0] + 1}, {kind, ix[0]}};
  };
  r.rhs = [kind](int, const Index& ix) {
    return std::vector<L>{{kind, ix[0] + 1}, {kind, ix[0]}, {kind, ix[0] + 1}};
  };
  r.forward = [](int, const Index&, const Params& p) -> std::optional<Params> {
    const Rational s = p[0] + p[2];
    return Params{p[1] * p[2] / s, s, p[0] * p[1] / s};
  };
  r.backward = [](int, const Index&, const Params& p) -> std::optional<Params> {
    const Rational b = p[0] + p[2];
    return Params{p[2] * p[1] / b, b, p[0] * p[1] / b};
  };
  return r;
}

RewriteRule commute_rule(const std::string& id, LetterKind k1, LetterKind k2, int min_gap, RuleMode mode) {
  RewriteRule r;
  r.id = id;
  r.mode = mode;
  r.min_n = min_gap == 2 ? 4 : 2;
  r.statement = L{k1, 0}.token().substr(0, 1) + "_i " + L{k2, 0}.token().substr(0, 1) + "_j = " +
                L{k2, 0}.token().substr(0, 1) + "_j " + L{k1, 0}.token().substr(0, 1) + "_i, " +
                (min_gap == 2 ? "|i-j| >= 2" : "i != j");
  const bool h1 = k1 == LetterKind::H, h2 = k2 == LetterKind::H;
  r.instances = [=](int n) {
    std::vector<Index> out;
    for (int i = 1; i <= (h1 ? n : n - 1); ++i)
      for (int j = 1; j <= (h2 ? n : n - 1); ++j)
        if (std::abs(i - j) >= min_gap) out.push_back({i, j});
    return out;
  };
  r.lhs = [=](int, const Index& ix) { return std::vector<L>{{k1, ix[0]}, {k2, ix[1]}}; };
  r.rhs = [=](int, const Index& ix) { return std::vector<L>{{k2, ix[1]}, {k1, ix[0]}}; };
  r.forward = [](int, const Index&, const Params& p) -> std::optional<Params> { return Params{p[1], p[0]}; };
  r.backward = r.forward;
  return r;
}

RewriteRule rule_ef_swap() {
  RewriteRule r;
  r.id = "ef-swap";
  r.min_n = 2;
  r.statement = "e_i(a) f_i(b) = f_i(b/q) h_i(q) h_{i+1}(1/q) e_i(a/q), q = 1 + ab";
  r.instances = [](int n) { return range1(1, n - 1); };
  r.lhs = [](int, const Index& ix) { return std::vector<L>{L::e(ix[0]), L::f(ix[0])}; };
  r.rhs = [](int, const Index& ix) {
    return std::vector<L>{L::f(ix[0]), L::h(ix[0]), L::h(ix[0] + 1), L::e(ix[0])};
  };
  r.forward = [](int, const Index&, const Params& p) -> std::optional<Params> {
    const Rational q = 1 + p[0] * p[1];
    return Params{p[1] / q, q, 1 / q, p[0] / q};
  };
  r.backward = [](int, const Index&, const Params& p) -> std::optional<Params> {
    const Rational q = p[1], a = p[3] * q, b = p[0] * q;
    if (p[2] * q != 1 || q != 1 + a * b) return std::nullopt;
    return Params{a, b};
  };
  return r;
}

RewriteRule h_past_rule(const std::string& id, LetterKind kind) {
  RewriteRule r;
  r.id = id;
  r.min_n = 2;
  const bool up = kind == LetterKind::E;
  const std::string c = up ? "e" : "f";
  r.statement = "h_j(x) " + c + "_i(t) = " + c + "_i(t') h_j(x), t' = " + (up ? "xt" : "t/x") + " if j = i, " +
                (up ? "t/x" : "xt") + " if j = i+1, else t";
  r.instances = [](int n) {
    std::vector<Index> out;
    for (int j = 1; j <= n; ++j)
      for (int i = 1; i <= n - 1; ++i) out.push_back({j, i});
    return out;
  };
  r.lhs = [kind](int, const Index& ix) { return std::vector<L>{L::h(ix[0]), {kind, ix[1]}}; };
  r.rhs = [kind](int, const Index& ix) { return std::vector<L>{{kind, ix[1]}, L::h(ix[0])}; };
  auto scale = [up](const Index& ix, const Rational& x) -> Rational {
    if (ix[0] == ix[1]) return up ? x : 1 / x;
    if (ix[0] == ix[1] + 1) return up ? 1 / x : x;
    return 1;
  };
  r.forward = [scale](int, const Index& ix, const Params& p) -> std::optional<Params> {
    return Params{p[1] * scale(ix, p[0]), p[0]};
  };
  r.backward = [scale](int, const Index& ix, const Params& p) -> std::optional<Params> {
    return Params{p[1], p[0] / scale(ix, p[1])};
  };
  return r;
}

std::vector<RewriteRule> build_catalog() {
  std::vector<RewriteRule> c{
      rule_e_through_k(),
      rule_e_last_through_k(),
      rule_f_through_k(),
      rule_f_through_k_right_h(),
      rule_f1_through_k(),
      rule_h_through_k(),
      rule_h1_into_k(),
      rule_k_absorbs_hn(),
      rule_e_through_t(),
      rule_e_second_last_through_t(),
      rule_e_last_through_t(),
      rule_split_negative(),
      rule_split_zero(),
      rule_split_positive(),
      merge_rule("e-merge", LetterKind::E),
      merge_rule("f-merge", LetterKind::F),
      merge_rule("h-merge", LetterKind::H),
      braid_rule("e-braid", LetterKind::E),
      braid_rule("f-braid", LetterKind::F),
      commute_rule("e-commute", LetterKind::E, LetterKind::E, 2, RuleMode::Both),
      commute_rule("f-commute", LetterKind::F, LetterKind::F, 2, RuleMode::S),
      commute_rule("ef-commute", LetterKind::E, LetterKind::F, 1, RuleMode::S),
      commute_rule("h-commute", LetterKind::H, LetterKind::H, 1, RuleMode::S),
      rule_ef_swap(),
      h_past_rule("h-past-e", LetterKind::E),
      h_past_rule("h-past-f", LetterKind::F),
  };
  for (auto& r : c)
    if (r.id.find("braid") != std::string::npos) r.min_n = 3;
  return c;
}

int slots(const std::vector<L>& letters, int n) {
  int s = 0;
  for (const auto& l : letters) s += slot_count(l, n);
  return s;
}

std::optional<Matrix> try_evaluate(const std::vector<L>& letters, int n, const Params& p) {
  if (slots(letters, n) != static_cast<int>(p.size())) return std::nullopt;
  Matrix M = Matrix::identity(n);
  std::size_t off = 0;
  try {
    for (const auto& l : letters) {
      const int s = slot_count(l, n);
      M = M * letter_matrix(l, n, Params(p.begin() + off, p.begin() + off + s));
      off += s;
    }
  } catch (const DomainError&) {
    return std::nullopt;  // a nonpositive parameter
  }
  return M;
}

// nullopt on success, else the reason.
std::optional<std::string> check_side(const RewriteRule& r, const Transform& t, int n, const Index& ix,
                                      const Params& in, const Matrix& target) {
  std::optional<Params> out;
  try {
    out = t(n, ix, in);
  } catch (const DomainError& e) {
    return std::string("transform undefined: ") + e.what();
  }
  if (!out) return std::string("outside the transform domain");
  auto M = try_evaluate(r.rhs(n, ix), n, *out);
  if (!M) return std::string("nonpositive or missing right-hand parameter");
  if (!(*M == target)) return std::string("matrix mismatch");
  return std::nullopt;
}

std::string index_text(const Index& ix) {
  std::string s;
  for (int i : ix) s += (s.empty() ? "" : ",") + std::to_string(i);
  return s;
}

}  // namespace

const std::vector<RewriteRule>& rule_catalog() {
  static const std::vector<RewriteRule> catalog = build_catalog();
  return catalog;
}

const RewriteRule& find_rule(const std::string& id) {
  for (const auto& r : rule_catalog())
    if (r.id == id) return r;
  throw DomainError("unknown rule '" + id + "'");
}

bool rule_applies(const RewriteRule& r, Mode mode, int n) {
  if (n < r.min_n) return false;
  if (r.mode == RuleMode::Both) return true;
  return (r.mode == RuleMode::S) == (mode == Mode::S);
}

VerificationReport verify_rule(const RewriteRule& rule, int n, int sample_count, Rng& rng) {
  VerificationReport rep;
  rep.rule_id = rule.id;
  rep.n = n;
  rep.samples = sample_count;
  rep.correction = rule.correction;
  rep.has_backward = static_cast<bool>(rule.backward);
  if (rule.printed_forward) rep.printed = PrintedStatus::Passed;
  if (n < rule.min_n) throw DomainError("rule " + rule.id + " needs n >= " + std::to_string(rule.min_n));
  for (int s = 0; s < sample_count; ++s) {
    for (const auto& ix : rule.instances(n)) {
      const auto lhs = rule.lhs(n, ix);
      Params in;
      if (rule.draw) in = rule.draw(n, ix, rng);
      else if (s == 0) in.assign(slots(lhs, n), Rational(1));
      else in = draw_positive(slots(lhs, n), rng);
      const Matrix target = *try_evaluate(lhs, n, in);
      ++rep.checks;
      if (auto why = check_side(rule, rule.forward, n, ix, in, target); why && rep.passed) {
        rep.passed = false;
        rep.failure = RuleFailure{ix, in, *why};
      }
      if (rule.backward && rep.backward_passed) {
        std::optional<std::string> why;
        try {
          auto out = rule.forward(n, ix, in);
          auto back = out ? rule.backward(n, ix, *out) : std::nullopt;
          if (!back) why = "backward transform outside its domain";
          else if (*back != in) why = "backward transform does not invert forward";
        } catch (const DomainError& e) {
          why = std::string("backward transform undefined: ") + e.what();
        }
        if (why) {
          rep.backward_passed = false;
          rep.backward_failure = RuleFailure{ix, in, *why};
        }
      }
      if (rule.printed_forward && rep.printed == PrintedStatus::Passed) {
        if (auto why = check_side(rule, rule.printed_forward, n, ix, in, target)) {
          rep.printed = PrintedStatus::Failed;
          rep.printed_failure = RuleFailure{ix, in, *why};
        }
      }
    }
  }
  return rep;
}

std::string report_json(const VerificationReport& r) {
  using json = nlohmann::ordered_json;
  auto fail = [](const std::optional<RuleFailure>& f) -> json {
    if (!f) return nullptr;
    json params = json::array();
    for (const auto& x : f->lhs_params) params.push_back(x.str());
    return json{{"instance", f->instance}, {"params", params}, {"reason", f->reason}};
  };
  json doc;
  doc["rule"] = r.rule_id;
  doc["n"] = r.n;
  doc["samples"] = r.samples;
  doc["checks"] = r.checks;
  doc["passed"] = r.passed;
  doc["failure"] = fail(r.failure);
  if (r.has_backward) {
    doc["backward_passed"] = r.backward_passed;
    doc["backward_failure"] = fail(r.backward_failure);
  }
  doc["published"] = r.printed == PrintedStatus::Same     ? "same"
                     : r.printed == PrintedStatus::Passed ? "passed"
                                                          : "failed";
  if (r.printed != PrintedStatus::Same) {
    doc["published_failure"] = fail(r.printed_failure);
    doc["correction"] = r.correction;
  }
  return doc.dump();
}

ParamWord apply_rule(const ParamWord& pw, const RewriteRule& rule, std::size_t position, Direction dir) {
  const Word& w = pw.word;
  const int n = w.n();
  if (!rule_applies(rule, w.mode(), n)) throw DomainError("rule " + rule.id + " does not apply to this word");
  const Transform& t = dir == Direction::Forward ? rule.forward : rule.backward;
  if (!t) throw DomainError("rule " + rule.id + " has no backward transform");
  for (const auto& ix : rule.instances(n)) {
    const auto pat = dir == Direction::Forward ? rule.lhs(n, ix) : rule.rhs(n, ix);
    if (position + pat.size() > w.size()) continue;
    if (!std::equal(pat.begin(), pat.end(), w.letters().begin() + position)) continue;
    const auto repl = dir == Direction::Forward ? rule.rhs(n, ix) : rule.lhs(n, ix);
    const int off = pw.offset(position), len = slots(pat, n);
    std::optional<Params> out = t(n, ix, Params(pw.params.begin() + off, pw.params.begin() + off + len));
    if (!out) throw DomainError("rule " + rule.id + ": parameters outside the transform domain");
    std::vector<L> letters(w.letters().begin(), w.letters().begin() + position);
    letters.insert(letters.end(), repl.begin(), repl.end());
    letters.insert(letters.end(), w.letters().begin() + position + pat.size(), w.letters().end());
    Params params(pw.params.begin(), pw.params.begin() + off);
    params.insert(params.end(), out->begin(), out->end());
    params.insert(params.end(), pw.params.begin() + off + len, pw.params.end());
    ParamWord res(Word(w.mode(), n, std::move(letters)), std::move(params));
    if (!(evaluate(res) == evaluate(pw)))
      throw std::logic_error("rule " + rule.id + " changed the matrix at instance " + index_text(ix));
    return res;
  }
  throw DomainError("rule " + rule.id + " does not match at position " + std::to_string(position));
}

std::string branch_name(SplitBranch b) {
  switch (b) {
    case SplitBranch::Negative: return "NEG";
    case SplitBranch::Zero: return "ZERO";
    case SplitBranch::Positive: return "POS";
  }
  return "?";
}

SplitResult cell_split(const Rational& u, const Rational& v, const GeneratorParams& p) {
  if (p.family != Family::T) throw DomainError("cell_split needs T parameters");
  const int n = p.n;
  Params in{u, v};
  auto flat = p.flat();
  in.insert(in.end(), flat.begin(), flat.end());
  ParamWord lhs(Word(Mode::T, n, split_lhs(n, {})), in);
  const int s = split_sign(n, in);
  const SplitBranch b = s < 0 ? SplitBranch::Negative : (s == 0 ? SplitBranch::Zero : SplitBranch::Positive);
  const char* id = s < 0 ? "split-negative" : (s == 0 ? "split-zero" : "split-positive");
  return {b, apply_rule(lhs, find_rule(id), 0, Direction::Forward)};
}

}  // namespace knn
