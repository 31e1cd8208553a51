#pragma once

// Thin RAII layer over MPFR. Every value carries its own precision; binary
// operations produce a result at the larger operand precision, so a
// computation started at 192 bits stays at 192 bits.

#include <mpfr.h>

#include <string>
#include <utility>

#include "qblocks/rational.hpp"

namespace qblocks {

using Precision = mpfr_prec_t;

inline constexpr Precision kDefaultPrecision = 128;

class Real {
 public:
  explicit Real(Precision prec = kDefaultPrecision) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Real(double x, Precision prec) {
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  Real(int x, Precision prec) : Real(static_cast<long>(x), prec) {}
  Real(long x, Precision prec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, x, MPFR_RNDN);
  }
  Real(const Rational& q, Precision prec) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
  }
  Real(const Integer& z, Precision prec) {
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN);
  }
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  Precision precision() const { return mpfr_get_prec(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  /// Shortest decimal string that reads back to the identical binary value.
  std::string to_decimal() const;
  /// Decimal with a fixed number of significant digits (for text output).
  std::string to_decimal(int digits) const;
  static Real from_decimal(const std::string& s, Precision prec);

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  friend Real operator-(const Real& a);

  friend bool operator<(const Real& a, const Real& b) {
    return mpfr_less_p(a.v_, b.v_) != 0;
  }
  friend bool operator>(const Real& a, const Real& b) { return b < a; }
  friend bool operator<=(const Real& a, const Real& b) {
    return mpfr_lessequal_p(a.v_, b.v_) != 0;
  }
  friend bool operator>=(const Real& a, const Real& b) { return b <= a; }
  friend bool operator==(const Real& a, const Real& b) {
    return mpfr_equal_p(a.v_, b.v_) != 0;
  }

 private:
  mpfr_t v_;
};

Real pi(Precision prec);
Real exp(const Real& x);
Real log(const Real& x);
Real sqrt(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real sinh(const Real& x);
Real cosh(const Real& x);
Real abs(const Real& x);
Real atan2(const Real& y, const Real& x);
Real pow(const Real& x, long n);
Real max(const Real& a, const Real& b);
/// 2^e at the given precision.
Real exp2i(long e, Precision prec);

// Complex numbers as a pair of Reals at a common precision.
class Complex {
 public:
  explicit Complex(Precision prec = kDefaultPrecision) : re_(prec), im_(prec) {}
  Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
  Complex(double re, double im, Precision prec) : re_(re, prec), im_(im, prec) {}

  const Real& re() const { return re_; }
  const Real& im() const { return im_; }
  Real& re() { return re_; }
  Real& im() { return im_; }
  Precision precision() const { return re_.precision(); }

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator*=(const Real& s);

  friend Complex operator+(const Complex& a, const Complex& b);
  friend Complex operator-(const Complex& a, const Complex& b);
  friend Complex operator*(const Complex& a, const Complex& b);
  friend Complex operator*(const Complex& a, const Real& s);
  friend Complex operator*(const Real& s, const Complex& a) { return a * s; }
  friend Complex operator/(const Complex& a, const Complex& b);
  friend Complex operator/(const Complex& a, const Real& s);
  friend Complex operator-(const Complex& a);
  friend bool operator==(const Complex& a, const Complex& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

 private:
  Real re_, im_;
};

Complex conj(const Complex& z);
Real abs(const Complex& z);
Complex exp(const Complex& z);
Complex sinh(const Complex& z);
Complex pow(const Complex& z, long n);
/// e(x) = exp(2 pi i x) for exact rational x; reduces x mod 1 first.
Complex unit_root(const Rational& x, Precision prec);
/// exp(i theta)
Complex polar_unit(const Real& theta);

}  // namespace qblocks
