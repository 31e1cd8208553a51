#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace qblocks {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  Rational r(Integer(static_cast<long>(num)), Integer(static_cast<long>(den)));
  r.canonicalize();
  return r;
}

inline Integer make_integer(std::int64_t v) {
  return Integer(static_cast<long>(v));
}

/// Narrowing conversion; throws std::overflow_error when out of range.
std::int64_t to_int64(const Integer& z);

/// "p/q", or just "p" for integers.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);
Rational parse_rational(const std::string& s);

Integer floor(const Rational& q);
bool is_integer(const Rational& q);

std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t lcm64(std::int64_t a, std::int64_t b);
/// Nonnegative residue.
std::int64_t mod64(std::int64_t a, std::int64_t m);

/// Dense rational matrix; exact linear algebra for the small Gram data.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static QMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  QMatrix transposed() const;
  QMatrix operator*(const QMatrix& o) const;
  QMatrix operator*(const Rational& s) const;
  bool operator==(const QMatrix& o) const;

  Rational determinant() const;
  /// Throws std::domain_error when singular.
  QMatrix inverse() const;
  std::size_t rank() const;
  bool is_symmetric() const;
  /// Sylvester's criterion on leading minors.
  bool is_positive_definite() const;

  /// x^T M y for rational vectors.
  Rational bilinear(const std::vector<Rational>& x,
                    const std::vector<Rational>& y) const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

/// Solves A x = b exactly; empty result when A is singular.
std::vector<Rational> solve(const QMatrix& a, const std::vector<Rational>& b);

}  // namespace qblocks
