#pragma once

#include <vector>

#include "knn/exact.hpp"

namespace knn {

enum class Family { K, T };

// Parameters (a, b) of a K generator (lengths n-2, n-1) or a T generator
// (lengths n-3, n-2). n is the matrix size. Entries are 1-based through a(i), b(i).
struct GeneratorParams {
  int n = 0;
  Family family = Family::K;
  std::vector<Rational> a;
  std::vector<Rational> b;

  static GeneratorParams k(int n, std::vector<Rational> a, std::vector<Rational> b);
  static GeneratorParams t(int n, std::vector<Rational> a, std::vector<Rational> b);
  // Same vectors without positivity checks (transform intermediates, limits).
  static GeneratorParams raw(int n, Family f, std::vector<Rational> a, std::vector<Rational> b);

  // Size of the K block: n for K, n-1 for T.
  int block() const { return family == Family::K ? n : n - 1; }
  int arity() const { return static_cast<int>(a.size() + b.size()); }
  const Rational& ai(int i) const { return a.at(i - 1); }
  const Rational& bi(int i) const { return b.at(i - 1); }
  // Derived quantities of the K block.
  Rational X() const;
  Rational Y() const;
  // Flattened a_1..a_m, b_1..b_m.
  std::vector<Rational> flat() const;
  static GeneratorParams from_flat(int n, Family f, const std::vector<Rational>& v);
  bool all_positive() const;
};

int k_arity(int n);
int t_arity(int n);

enum class Chev { E, F };

Matrix chevalley(int n, Chev kind, int i, const Rational& x);
Matrix jacobi_h(int n, int i, const Rational& x);
Matrix k_generator(const GeneratorParams& p);
Matrix t_generator(const GeneratorParams& p);
// K for K params, T for T params.
Matrix generator(const GeneratorParams& p);

// C_i(r) for the unit-subdiagonal tridiagonal matrix with diagonal a, superdiagonal b.
Rational continuant(const std::vector<Rational>& a, const std::vector<Rational>& b, int i, int r);
// [head[0]; head[1],...,head[m]; tail[0],...,tail[m-1]] = head0 - tail0/(head1 - tail1/(...)).
Rational continued_fraction(const std::vector<Rational>& head, const std::vector<Rational>& tail);
// [a_{i+r-1}; a_{i+r-2},...,a_i; b_{i+r-2},...,b_i], the ratio C_i(r)/C_i(r-1).
Rational leading_fraction(const std::vector<Rational>& a, const std::vector<Rational>& b, int i, int r);

bool is_tridiagonal_irreducible(const Matrix& M);
bool is_pentadiagonal_irreducible(const Matrix& M);

// Solid minors of K in closed form. I and J must be intervals.
Rational k_minor_closed_form(const GeneratorParams& p, const IndexSet& I, const IndexSet& J);
// Solid minors of T with I inside [1,n-1] and J inside [2,n], through the K block.
Rational t_minor_closed_form(const GeneratorParams& p, const IndexSet& I, const IndexSet& J);

}  // namespace knn
