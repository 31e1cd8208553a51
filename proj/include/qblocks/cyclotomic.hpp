#pragma once

// Exact arithmetic in Q(zeta_N): elements are rational vectors in the power
// basis 1, zeta, ..., zeta^{phi(N)-1}, always reduced modulo Phi_N.

#include <cstdint>
#include <vector>

#include "qblocks/mpreal.hpp"
#include "qblocks/rational.hpp"

namespace qblocks {

/// Integer coefficients of the N-th cyclotomic polynomial, constant term first.
const std::vector<Integer>& cyclotomic_polynomial(std::int64_t N);
std::int64_t euler_phi(std::int64_t N);

class CyclotomicNumber {
 public:
  /// Zero in Q(zeta_N).
  explicit CyclotomicNumber(std::int64_t order = 1);

  static CyclotomicNumber rational(const Rational& q, std::int64_t order = 1);
  /// zeta_N^j for any integer j.
  static CyclotomicNumber root_power(std::int64_t j, std::int64_t order);
  /// sum_j c_j zeta_N^j for a length-N coefficient vector.
  static CyclotomicNumber from_group_ring(const std::vector<Rational>& c, std::int64_t order);

  std::int64_t order() const { return order_; }
  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const;

  /// The same number inside Q(zeta_M), N | M.
  CyclotomicNumber lift(std::int64_t multiple_order) const;
  CyclotomicNumber conj() const;
  /// Throws std::domain_error for zero.
  CyclotomicNumber inverse() const;
  CyclotomicNumber pow(long e) const;
  /// Image under zeta_N -> exp(2 pi i/N).
  Complex embed(Precision prec) const;

  friend CyclotomicNumber operator+(const CyclotomicNumber& a, const CyclotomicNumber& b);
  friend CyclotomicNumber operator-(const CyclotomicNumber& a, const CyclotomicNumber& b);
  friend CyclotomicNumber operator*(const CyclotomicNumber& a, const CyclotomicNumber& b);
  friend CyclotomicNumber operator*(const Rational& s, const CyclotomicNumber& a);
  friend CyclotomicNumber operator/(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    return a * b.inverse();
  }
  /// Equality as elements of a common field.
  friend bool operator==(const CyclotomicNumber& a, const CyclotomicNumber& b);

 private:
  std::int64_t order_;
  std::vector<Rational> c_;
};

/// Accumulator for sum c_j zeta_N^j indexed by residues j mod N; reduction
/// to the power basis happens once at the end.
class RootSum {
 public:
  explicit RootSum(std::int64_t order) : order_(order), c_(static_cast<std::size_t>(order)) {}

  std::int64_t order() const { return order_; }
  void add(std::int64_t j, const Rational& c);
  /// Adds zeta_N^shift * x, where x lives in a subfield (order of x divides N).
  void add_shifted(const CyclotomicNumber& x, std::int64_t shift);
  void merge(const RootSum& o);
  CyclotomicNumber reduce() const;
  const std::vector<Rational>& raw() const { return c_; }

 private:
  std::int64_t order_;
  std::vector<Rational> c_;
};

/// sqrt(n) for a positive integer, as s * sqrt(f) with f squarefree and
/// sqrt(f) = zeta_8 * sum_{j mod 2f} e(-j^2/4f) / (zeta_8 + zeta_8^{-1}).
CyclotomicNumber sqrt_integer(std::int64_t n);

}  // namespace qblocks
