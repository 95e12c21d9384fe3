#include "knn/exact.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <json.hpp>

namespace knn {

Rational::Rational(long num, long den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational::Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  std::string_view body = text;
  if (!body.empty() && body.front() == '-') body.remove_prefix(1);
  auto slash = body.find('/');
  std::string_view p = body.substr(0, slash);
  std::string_view q = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(p) || !all_digits(q))
    throw ParseError("malformed rational '" + std::string(text) + "'");
  mpz_class den(std::string(q), 10);
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  mpz_class num(std::string(p), 10);
  if (text.front() == '-') num = -num;
  return Rational(mpq_class(num, den));
}

std::string Rational::str() const { return q_.get_str(); }

Rational& Rational::operator+=(const Rational& o) {
  q_ += o.q_;
  return *this;
}
Rational& Rational::operator-=(const Rational& o) {
  q_ -= o.q_;
  return *this;
}
Rational& Rational::operator*=(const Rational& o) {
  q_ *= o.q_;
  return *this;
}
Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DomainError("division by zero");
  q_ /= o.q_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

IndexSet::IndexSet(std::vector<int> idx) : idx_(std::move(idx)) {
  if (idx_.empty()) throw DomainError("empty index set");
  for (std::size_t k = 0; k < idx_.size(); ++k) {
    if (idx_[k] < 1) throw DomainError("index set entries are 1-based");
    if (k > 0 && idx_[k] <= idx_[k - 1]) throw DomainError("index set not strictly increasing");
  }
}

IndexSet IndexSet::interval(int lo, int hi) {
  if (hi < lo) throw DomainError("empty interval");
  std::vector<int> v;
  for (int i = lo; i <= hi; ++i) v.push_back(i);
  return IndexSet(std::move(v));
}

bool IndexSet::contains(int i) const { return std::binary_search(idx_.begin(), idx_.end(), i); }

std::string IndexSet::str() const {
  std::string s = "{";
  for (std::size_t k = 0; k < idx_.size(); ++k) s += (k ? "," : "") + std::to_string(idx_[k]);
  return s + "}";
}

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) throw DomainError("matrix dimensions must be positive");
  a_.assign(static_cast<std::size_t>(rows) * cols, Rational(0));
}

Matrix::Matrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
  if (rows_ == 0 || cols_ == 0) throw DomainError("matrix dimensions must be positive");
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) throw DomainError("ragged matrix rows");
    a_.insert(a_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(int n) {
  Matrix M(n, n);
  for (int i = 1; i <= n; ++i) M(i, i) = 1;
  return M;
}

Matrix Matrix::transpose() const {
  Matrix T(cols_, rows_);
  for (int i = 1; i <= rows_; ++i)
    for (int j = 1; j <= cols_; ++j) T(j, i) = (*this)(i, j);
  return T;
}

Matrix Matrix::submatrix(const IndexSet& I, const IndexSet& J) const {
  if (I.indices().back() > rows_ || J.indices().back() > cols_)
    throw DomainError("index out of range");
  Matrix S(I.size(), J.size());
  for (int r = 0; r < I.size(); ++r)
    for (int c = 0; c < J.size(); ++c) S(r + 1, c + 1) = (*this)(I[r], J[c]);
  return S;
}

std::string Matrix::str() const {
  std::ostringstream os;
  for (int i = 1; i <= rows_; ++i) {
    os << "[";
    for (int j = 1; j <= cols_; ++j) os << (j > 1 ? ", " : "") << (*this)(i, j);
    os << "]\n";
  }
  return os.str();
}

Matrix mat_mul(const Matrix& A, const Matrix& B) {
  if (A.cols() != B.rows()) throw DomainError("mat_mul: inner dimensions differ");
  Matrix C(A.rows(), B.cols());
  for (int i = 1; i <= A.rows(); ++i)
    for (int k = 1; k <= A.cols(); ++k) {
      const Rational& a = A(i, k);
      if (a.is_zero()) continue;
      for (int j = 1; j <= B.cols(); ++j)
        if (!B(k, j).is_zero()) C(i, j) += a * B(k, j);
    }
  return C;
}

namespace {

// Expansion along the first row of the submatrix rows[], cols[].
Rational cofactor_det(const Matrix& M, const std::vector<int>& rows, std::vector<int> cols) {
  const std::size_t m = rows.size();
  if (m == 1) return M(rows[0], cols[0]);
  if (m == 2)
    return M(rows[0], cols[0]) * M(rows[1], cols[1]) - M(rows[0], cols[1]) * M(rows[1], cols[0]);
  std::vector<int> sub_rows(rows.begin() + 1, rows.end());
  Rational total = 0;
  for (std::size_t c = 0; c < m; ++c) {
    const Rational& x = M(rows[0], cols[c]);
    if (x.is_zero()) continue;
    std::vector<int> sub_cols;
    for (std::size_t d = 0; d < m; ++d)
      if (d != c) sub_cols.push_back(cols[d]);
    Rational t = x * cofactor_det(M, sub_rows, sub_cols);
    if (c % 2) total -= t;
    else total += t;
  }
  return total;
}

}  // namespace

Rational det_bareiss(const Matrix& S) {
  if (!S.square()) throw DomainError("determinant of non-square matrix");
  const int m = S.rows();
  Matrix A = S;
  Rational prev = 1;
  int sign = 1;
  for (int k = 1; k < m; ++k) {
    if (A(k, k).is_zero()) {
      int p = k + 1;
      while (p <= m && A(p, k).is_zero()) ++p;
      if (p > m) return 0;
      for (int j = 1; j <= m; ++j) std::swap(A(k, j), A(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i <= m; ++i)
      for (int j = k + 1; j <= m; ++j)
        A(i, j) = (A(i, j) * A(k, k) - A(i, k) * A(k, j)) / prev;
    prev = A(k, k);
  }
  return sign > 0 ? A(m, m) : -A(m, m);
}

Rational minor(const Matrix& M, const IndexSet& I, const IndexSet& J) {
  if (I.size() != J.size()) throw DomainError("minor: |I| != |J|");
  if (I.indices().back() > M.rows() || J.indices().back() > M.cols())
    throw DomainError("minor: index out of range");
  if (I.size() < 5) return cofactor_det(M, I.indices(), J.indices());
  return det_bareiss(M.submatrix(I, J));
}

Rational det(const Matrix& M) {
  if (!M.square()) throw DomainError("determinant of non-square matrix");
  return minor(M, IndexSet::interval(1, M.rows()), IndexSet::interval(1, M.cols()));
}

Matrix parse_matrix(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("matrix document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("entries"))
    throw ParseError("matrix document needs \"n\" and \"entries\"");
  if (!doc["n"].is_number_integer() || doc["n"].get<long>() < 1)
    throw ParseError("\"n\" must be a positive integer");
  const int n = doc["n"].get<int>();
  const auto& rows = doc["entries"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    throw ParseError("\"entries\" must hold n rows");
  Matrix M(n, n);
  for (int i = 0; i < n; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n)
      throw ParseError("ragged row " + std::to_string(i + 1));
    for (int j = 0; j < n; ++j) {
      if (!rows[i][j].is_string()) throw ParseError("entries must be rational strings");
      M(i + 1, j + 1) = Rational::parse(rows[i][j].get<std::string>());
    }
  }
  return M;
}

std::string serialize_matrix(const Matrix& M) {
  if (!M.square()) throw DomainError("matrix documents hold square matrices");
  nlohmann::ordered_json doc;
  doc["n"] = M.rows();
  auto rows = nlohmann::ordered_json::array();
  for (int i = 1; i <= M.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (int j = 1; j <= M.cols(); ++j) row.push_back(M(i, j).str());
    rows.push_back(std::move(row));
  }
  doc["entries"] = std::move(rows);
  return doc.dump();
}

}  // namespace knn
