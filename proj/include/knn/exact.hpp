#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "knn/error.hpp"

namespace knn {

// Exact rational, always in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : q_(v) {}  // NOLINT: integers convert implicitly
  Rational(long num, long den);
  explicit Rational(const mpq_class& q);

  // Accepts "p" or "p/q" with an optional leading '-'. Reduces to lowest terms.
  static Rational parse(std::string_view text);
  std::string str() const;

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  const mpq_class& value() const { return q_; }
  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

 private:
  mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// Strictly increasing, nonempty, 1-based row or column selection.
class IndexSet {
 public:
  IndexSet(std::vector<int> idx);
  IndexSet(std::initializer_list<int> idx) : IndexSet(std::vector<int>(idx)) {}
  static IndexSet interval(int lo, int hi);

  int size() const { return static_cast<int>(idx_.size()); }
  int operator[](int k) const { return idx_[k]; }
  const std::vector<int>& indices() const { return idx_; }
  bool contains(int i) const;
  bool is_interval() const { return idx_.back() - idx_.front() + 1 == size(); }
  std::string str() const;

  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }
  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<int> idx_;
};

// Dense matrix, 1-based access.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);
  Matrix(std::initializer_list<std::initializer_list<Rational>> rows);
  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  const Rational& operator()(int i, int j) const { return a_[idx(i, j)]; }
  Rational& operator()(int i, int j) { return a_[idx(i, j)]; }

  Matrix transpose() const;
  Matrix submatrix(const IndexSet& I, const IndexSet& J) const;
  std::string str() const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i - 1) * cols_ + (j - 1);
  }
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> a_;
};

Matrix mat_mul(const Matrix& A, const Matrix& B);
inline Matrix operator*(const Matrix& A, const Matrix& B) { return mat_mul(A, B); }

// Cofactor expansion for order < 5, Bareiss elimination otherwise.
Rational minor(const Matrix& M, const IndexSet& I, const IndexSet& J);
Rational det(const Matrix& M);
Rational det_bareiss(const Matrix& M);

Matrix parse_matrix(std::string_view text);
std::string serialize_matrix(const Matrix& M);

}  // namespace knn
