#include "qblocks/rational.hpp"

#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qblocks {

std::int64_t to_int64(const Integer& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("integer exceeds int64: " + z.get_str());
  return static_cast<std::int64_t>(z.get_si());
}

std::string to_string(const Integer& z) { return z.get_str(); }

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      if (s.find_first_of(".eE") != std::string::npos) {
        // Decimal literal: exact value of the written decimal.
        auto e = s.find_first_of("eE");
        std::string mant = s.substr(0, e);
        long ex = e == std::string::npos ? 0 : std::stol(s.substr(e + 1));
        auto dot = mant.find('.');
        if (dot != std::string::npos) {
          ex -= static_cast<long>(mant.size() - dot - 1);
          mant.erase(dot, 1);
        }
        Rational r{Integer(mant, 10)};
        Integer ten = 10;
        Integer scale;
        mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(ex < 0 ? -ex : ex));
        if (ex < 0) r /= scale; else r *= scale;
        r.canonicalize();
        return r;
      }
      return Rational(Integer(s, 10));
    }
    Rational r(Integer(s.substr(0, slash), 10), Integer(s.substr(slash + 1), 10));
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator");
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("not a rational number: '" + s + "'");
  }
}

Integer floor(const Rational& q) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t lcm64(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  std::int64_t g = std::gcd(a, b);
  std::int64_t out;
  if (__builtin_mul_overflow(std::abs(a / g), std::abs(b), &out))
    throw std::overflow_error("lcm overflows int64");
  return out;
}

std::int64_t mod64(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::transposed() const {
  QMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix shape mismatch");
  QMatrix out(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) out(i, j) += a * o(k, j);
    }
  return out;
}

QMatrix QMatrix::operator*(const Rational& s) const {
  QMatrix out = *this;
  for (auto& x : out.data_) x *= s;
  return out;
}

bool QMatrix::operator==(const QMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

Rational QMatrix::determinant() const {
  if (rows_ != cols_) throw std::invalid_argument("determinant of non-square matrix");
  QMatrix a = *this;
  Rational det = 1;
  const std::size_t n = rows_;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a(r, c) == 0) continue;
      Rational f = a(r, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

QMatrix QMatrix::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("inverse of non-square matrix");
  const std::size_t n = rows_;
  QMatrix a = *this;
  QMatrix inv = identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) throw std::domain_error("singular matrix");
    if (p != c)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(p, j), a(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
    Rational piv = a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a(r, c) == 0) continue;
      Rational f = a(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

std::size_t QMatrix::rank() const {
  QMatrix a = *this;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
    std::size_t p = r;
    while (p < rows_ && a(p, c) == 0) ++p;
    if (p == rows_) continue;
    for (std::size_t j = 0; j < cols_; ++j) std::swap(a(p, j), a(r, j));
    for (std::size_t i = r + 1; i < rows_; ++i) {
      if (a(i, c) == 0) continue;
      Rational f = a(i, c) / a(r, c);
      for (std::size_t j = c; j < cols_; ++j) a(i, j) -= f * a(r, j);
    }
    ++r;
  }
  return r;
}

bool QMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

bool QMatrix::is_positive_definite() const {
  if (!is_symmetric()) return false;
  for (std::size_t k = 1; k <= rows_; ++k) {
    QMatrix minor(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) minor(i, j) = (*this)(i, j);
    if (minor.determinant() <= 0) return false;
  }
  return true;
}

Rational QMatrix::bilinear(const std::vector<Rational>& x,
                           const std::vector<Rational>& y) const {
  Rational s = 0;
  for (std::size_t i = 0; i < rows_; ++i) {
    if (x[i] == 0) continue;
    Rational row = 0;
    for (std::size_t j = 0; j < cols_; ++j) row += (*this)(i, j) * y[j];
    s += x[i] * row;
  }
  return s;
}

std::vector<Rational> solve(const QMatrix& a, const std::vector<Rational>& b) {
  const std::size_t n = a.rows();
  QMatrix m(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = a(i, j);
    m(i, n) = b[i];
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return {};
    if (p != c)
      for (std::size_t j = 0; j <= n; ++j) std::swap(m(p, j), m(c, j));
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m(r, c) == 0) continue;
      Rational f = m(r, c) / m(c, c);
      for (std::size_t j = c; j <= n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = m(i, n) / m(i, i);
  return x;
}

}  // namespace qblocks
