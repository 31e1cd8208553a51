#include "qblocks/mpreal.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace qblocks {

namespace {

Precision widest(const Real& a, const Real& b) {
  return std::max(a.precision(), b.precision());
}

std::string format_digits(mpfr_srcptr v, std::size_t n) {
  if (mpfr_nan_p(v)) return "nan";
  if (mpfr_inf_p(v)) return mpfr_sgn(v) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(v)) return mpfr_signbit(v) ? "-0" : "0";
  mpfr_exp_t e = 0;
  char* raw = mpfr_get_str(nullptr, &e, 10, n, v, MPFR_RNDN);
  std::string digits(raw);
  mpfr_free_str(raw);
  std::string sign;
  if (digits[0] == '-') {
    sign = "-";
    digits.erase(0, 1);
  }
  // Trailing zeros carry no information once the digit count is fixed.
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  std::string out = sign + digits.substr(0, 1);
  if (digits.size() > 1) out += "." + digits.substr(1);
  long exponent = static_cast<long>(e) - 1;
  if (exponent != 0) out += "e" + std::to_string(exponent);
  return out;
}

}  // namespace

std::string Real::to_decimal() const { return format_digits(v_, 0); }

std::string Real::to_decimal(int digits) const {
  return format_digits(v_, static_cast<std::size_t>(std::max(digits, 2)));
}

Real Real::from_decimal(const std::string& s, Precision prec) {
  Real r(prec);
  if (s == "inf") {
    mpfr_set_inf(r.v_, 1);
  } else if (s == "-inf") {
    mpfr_set_inf(r.v_, -1);
  } else if (s == "nan") {
    mpfr_set_nan(r.v_);
  } else if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0) {
    throw std::invalid_argument("not a decimal number: '" + s + "'");
  }
  return r;
}

Real& Real::operator+=(const Real& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(const Real& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const Real& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(const Real& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real operator+(const Real& a, const Real& b) {
  Real r(widest(a, b));
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator-(const Real& a, const Real& b) {
  Real r(widest(a, b));
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, const Real& b) {
  Real r(widest(a, b));
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, const Real& b) {
  Real r(widest(a, b));
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator-(const Real& a) {
  Real r(a.precision());
  mpfr_neg(r.v_, a.v_, MPFR_RNDN);
  return r;
}

#define QBLOCKS_UNARY(name, fn)                 \
  Real name(const Real& x) {                    \
    Real r(x.precision());                      \
    fn(r.get(), x.get(), MPFR_RNDN);            \
    return r;                                   \
  }

QBLOCKS_UNARY(exp, mpfr_exp)
QBLOCKS_UNARY(log, mpfr_log)
QBLOCKS_UNARY(sqrt, mpfr_sqrt)
QBLOCKS_UNARY(sin, mpfr_sin)
QBLOCKS_UNARY(cos, mpfr_cos)
QBLOCKS_UNARY(sinh, mpfr_sinh)
QBLOCKS_UNARY(cosh, mpfr_cosh)
QBLOCKS_UNARY(abs, mpfr_abs)

#undef QBLOCKS_UNARY

Real pi(Precision prec) {
  Real r(prec);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

Real atan2(const Real& y, const Real& x) {
  Real r(widest(y, x));
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, long n) {
  Real r(x.precision());
  mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
  return r;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }

Real exp2i(long e, Precision prec) {
  Real r(prec);
  mpfr_set_ui_2exp(r.get(), 1, e, MPFR_RNDN);
  return r;
}

Complex& Complex::operator+=(const Complex& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}
Complex& Complex::operator-=(const Complex& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}
Complex& Complex::operator*=(const Complex& o) {
  *this = *this * o;
  return *this;
}
Complex& Complex::operator*=(const Real& s) {
  re_ *= s;
  im_ *= s;
  return *this;
}

Complex operator+(const Complex& a, const Complex& b) {
  return {a.re_ + b.re_, a.im_ + b.im_};
}
Complex operator-(const Complex& a, const Complex& b) {
  return {a.re_ - b.re_, a.im_ - b.im_};
}
Complex operator*(const Complex& a, const Complex& b) {
  Precision p = std::max(a.precision(), b.precision());
  Real re(p), im(p), t(p);
  mpfr_mul(re.get(), a.re_.get(), b.re_.get(), MPFR_RNDN);
  mpfr_mul(t.get(), a.im_.get(), b.im_.get(), MPFR_RNDN);
  mpfr_sub(re.get(), re.get(), t.get(), MPFR_RNDN);
  mpfr_mul(im.get(), a.re_.get(), b.im_.get(), MPFR_RNDN);
  mpfr_mul(t.get(), a.im_.get(), b.re_.get(), MPFR_RNDN);
  mpfr_add(im.get(), im.get(), t.get(), MPFR_RNDN);
  return {std::move(re), std::move(im)};
}
Complex operator*(const Complex& a, const Real& s) {
  return {a.re_ * s, a.im_ * s};
}
Complex operator/(const Complex& a, const Complex& b) {
  Real den = b.re_ * b.re_ + b.im_ * b.im_;
  if (den.is_zero()) throw std::domain_error("complex division by zero");
  return {(a.re_ * b.re_ + a.im_ * b.im_) / den,
          (a.im_ * b.re_ - a.re_ * b.im_) / den};
}
Complex operator/(const Complex& a, const Real& s) {
  return {a.re_ / s, a.im_ / s};
}
Complex operator-(const Complex& a) { return {-a.re_, -a.im_}; }

Complex conj(const Complex& z) { return {z.re(), -z.im()}; }

Real abs(const Complex& z) {
  Real r(z.precision());
  mpfr_hypot(r.get(), z.re().get(), z.im().get(), MPFR_RNDN);
  return r;
}

Complex polar_unit(const Real& theta) {
  Real s(theta.precision()), c(theta.precision());
  mpfr_sin_cos(s.get(), c.get(), theta.get(), MPFR_RNDN);
  return {std::move(c), std::move(s)};
}

Complex exp(const Complex& z) {
  Real m = exp(z.re());
  Complex u = polar_unit(z.im());
  return u * m;
}

Complex sinh(const Complex& z) {
  // sinh(a+ib) = sinh a cos b + i cosh a sin b
  Precision p = z.precision();
  Real sh(p), ch(p), s(p), c(p);
  mpfr_sinh_cosh(sh.get(), ch.get(), z.re().get(), MPFR_RNDN);
  mpfr_sin_cos(s.get(), c.get(), z.im().get(), MPFR_RNDN);
  return {sh * c, ch * s};
}

Complex pow(const Complex& z, long n) {
  if (n < 0) {
    Complex one(1.0, 0.0, z.precision());
    return one / pow(z, -n);
  }
  Complex result(1.0, 0.0, z.precision());
  Complex base = z;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n) base *= base;
  }
  return result;
}

Complex unit_root(const Rational& x, Precision prec) {
  Rational frac = x - Rational(floor(x));
  // Exact quadrant values avoid spurious 1e-40 residues in exact comparisons.
  if (frac == 0) return Complex(1.0, 0.0, prec);
  if (frac == Rational(1, 2)) return Complex(-1.0, 0.0, prec);
  if (frac == Rational(1, 4)) return Complex(0.0, 1.0, prec);
  if (frac == Rational(3, 4)) return Complex(0.0, -1.0, prec);
  Real theta = pi(prec) * Real(Rational(2 * frac), prec);
  return polar_unit(theta);
}

}  // namespace qblocks
