#include "qblocks/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace qblocks {

namespace {

using Poly = std::vector<Rational>;

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Quotient and remainder of a by a nonzero b.
std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
  trim(a);
  Poly q;
  if (a.size() < b.size()) return {q, a};
  q.assign(a.size() - b.size() + 1, Rational(0));
  const Rational& lead = b.back();
  for (std::size_t i = a.size(); i-- >= b.size();) {
    if (a[i] == 0) {
      if (i == 0) break;
      continue;
    }
    Rational f = a[i] / lead;
    const std::size_t shift = i - (b.size() - 1);
    q[shift] = f;
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= f * b[j];
    if (i == 0) break;
  }
  trim(a);
  trim(q);
  return {q, a};
}

Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (b[j] != 0) out[i + j] += a[i] * b[j];
  }
  return out;
}

Poly sub(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  trim(out);
  return out;
}

struct Modulus {
  std::vector<Integer> phi;
  std::vector<std::pair<std::size_t, Integer>> nonzero;  // monic part below the top
};

const Modulus& modulus(std::int64_t N) {
  static std::mutex mu;
  static std::map<std::int64_t, Modulus> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
  }
  const auto& phi = cyclotomic_polynomial(N);
  Modulus m;
  m.phi = phi;
  for (std::size_t i = 0; i + 1 < phi.size(); ++i)
    if (phi[i] != 0) m.nonzero.emplace_back(i, phi[i]);
  std::lock_guard lock(mu);
  return cache.emplace(N, std::move(m)).first->second;
}

// Reduces a coefficient vector of any length modulo the monic Phi_N in place.
void reduce_in_place(std::vector<Rational>& v, std::int64_t N) {
  const Modulus& m = modulus(N);
  const std::size_t deg = m.phi.size() - 1;
  for (std::size_t i = v.size(); i-- > deg;) {
    if (v[i] == 0) continue;
    Rational c = v[i];
    v[i] = 0;
    const std::size_t base = i - deg;
    for (const auto& [j, a] : m.nonzero) v[base + j] -= c * a;
  }
  v.resize(deg, Rational(0));
}

}  // namespace

std::int64_t euler_phi(std::int64_t N) {
  std::int64_t result = N, n = N;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

const std::vector<Integer>& cyclotomic_polynomial(std::int64_t N) {
  if (N < 1) throw std::invalid_argument("cyclotomic order must be positive");
  static std::recursive_mutex mu;
  static std::map<std::int64_t, std::vector<Integer>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  // Phi_N = (x^N - 1) / prod_{d | N, d < N} Phi_d
  Poly num(static_cast<std::size_t>(N) + 1, Rational(0));
  num[0] = -1;
  num[static_cast<std::size_t>(N)] = 1;
  for (std::int64_t d = 1; d < N; ++d) {
    if (N % d) continue;
    const auto& pd = cyclotomic_polynomial(d);
    Poly div(pd.begin(), pd.end());
    num = divmod(num, div).first;
  }
  std::vector<Integer> out;
  for (const auto& c : num) out.push_back(c.get_num());
  return cache.emplace(N, std::move(out)).first->second;
}

CyclotomicNumber::CyclotomicNumber(std::int64_t order) : order_(order) {
  if (order < 1) throw std::invalid_argument("cyclotomic order must be positive");
  c_.assign(static_cast<std::size_t>(euler_phi(order)), Rational(0));
}

CyclotomicNumber CyclotomicNumber::rational(const Rational& q, std::int64_t order) {
  CyclotomicNumber x(order);
  x.c_[0] = q;
  return x;
}

CyclotomicNumber CyclotomicNumber::root_power(std::int64_t j, std::int64_t order) {
  std::vector<Rational> v(static_cast<std::size_t>(mod64(j, order)) + 1, Rational(0));
  v.back() = 1;
  CyclotomicNumber x(order);
  reduce_in_place(v, order);
  x.c_ = std::move(v);
  return x;
}

CyclotomicNumber CyclotomicNumber::from_group_ring(const std::vector<Rational>& c, std::int64_t order) {
  if (static_cast<std::int64_t>(c.size()) != order)
    throw std::invalid_argument("group-ring vector length must equal the order");
  CyclotomicNumber x(order);
  std::vector<Rational> v = c;
  reduce_in_place(v, order);
  x.c_ = std::move(v);
  return x;
}

bool CyclotomicNumber::is_zero() const {
  for (const auto& c : c_)
    if (c != 0) return false;
  return true;
}

CyclotomicNumber CyclotomicNumber::lift(std::int64_t M) const {
  if (M % order_ != 0) throw std::invalid_argument("lift target order must be a multiple");
  if (M == order_) return *this;
  const std::int64_t f = M / order_;
  std::vector<Rational> v(static_cast<std::size_t>(f) * c_.size() + 1, Rational(0));
  for (std::size_t j = 0; j < c_.size(); ++j) v[j * static_cast<std::size_t>(f)] = c_[j];
  reduce_in_place(v, M);
  CyclotomicNumber out(M);
  out.c_ = std::move(v);
  return out;
}

CyclotomicNumber CyclotomicNumber::conj() const {
  std::vector<Rational> v(static_cast<std::size_t>(order_), Rational(0));
  for (std::size_t j = 0; j < c_.size(); ++j)
    v[static_cast<std::size_t>(mod64(-static_cast<std::int64_t>(j), order_))] += c_[j];
  return from_group_ring(v, order_);
}

CyclotomicNumber CyclotomicNumber::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero cyclotomic number");
  // Extended Euclid: s * a + t * Phi = 1.
  const auto& phi = cyclotomic_polynomial(order_);
  Poly r0(phi.begin(), phi.end()), r1 = c_;
  trim(r1);
  Poly s0, s1{Rational(1)};
  while (!(r1.size() == 1)) {
    auto [q, r] = divmod(r0, r1);
    Poly s = sub(s0, mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
    if (r1.empty()) throw std::domain_error("element is not invertible");
  }
  Rational inv = 1 / r1[0];
  for (auto& c : s1) c *= inv;
  reduce_in_place(s1, order_);
  CyclotomicNumber out(order_);
  out.c_ = std::move(s1);
  return out;
}

CyclotomicNumber CyclotomicNumber::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  CyclotomicNumber result = rational(1, order_), base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

Complex CyclotomicNumber::embed(Precision prec) const {
  Real re(prec), im(prec);
  for (std::size_t j = 0; j < c_.size(); ++j) {
    if (c_[j] == 0) continue;
    Complex u = unit_root(make_rational(static_cast<std::int64_t>(j), order_), prec);
    Real c(c_[j], prec);
    re += c * u.re();
    im += c * u.im();
  }
  return {re, im};
}

CyclotomicNumber operator+(const CyclotomicNumber& a, const CyclotomicNumber& b) {
  const std::int64_t N = lcm64(a.order_, b.order_);
  CyclotomicNumber x = a.lift(N), y = b.lift(N);
  for (std::size_t i = 0; i < x.c_.size(); ++i) x.c_[i] += y.c_[i];
  return x;
}

CyclotomicNumber operator-(const CyclotomicNumber& a, const CyclotomicNumber& b) {
  return a + Rational(-1) * b;
}

CyclotomicNumber operator*(const Rational& s, const CyclotomicNumber& a) {
  CyclotomicNumber x = a;
  for (auto& c : x.c_) c *= s;
  return x;
}

CyclotomicNumber operator*(const CyclotomicNumber& a, const CyclotomicNumber& b) {
  const std::int64_t N = lcm64(a.order_, b.order_);
  CyclotomicNumber x = a.lift(N), y = b.lift(N);
  std::vector<Rational> v = mul(x.c_, y.c_);
  reduce_in_place(v, N);
  x.c_ = std::move(v);
  return x;
}

bool operator==(const CyclotomicNumber& a, const CyclotomicNumber& b) {
  const std::int64_t N = lcm64(a.order_, b.order_);
  return a.lift(N).c_ == b.lift(N).c_;
}

void RootSum::add(std::int64_t j, const Rational& c) {
  if (c != 0) c_[static_cast<std::size_t>(mod64(j, order_))] += c;
}

void RootSum::add_shifted(const CyclotomicNumber& x, std::int64_t shift) {
  if (order_ % x.order() != 0) throw std::invalid_argument("summand order must divide accumulator order");
  const std::int64_t f = order_ / x.order();
  const auto& c = x.coeffs();
  for (std::size_t j = 0; j < c.size(); ++j)
    if (c[j] != 0) add(shift + static_cast<std::int64_t>(j) * f, c[j]);
}

void RootSum::merge(const RootSum& o) {
  if (o.order_ != order_) throw std::invalid_argument("order mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
}

CyclotomicNumber RootSum::reduce() const { return CyclotomicNumber::from_group_ring(c_, order_); }

CyclotomicNumber sqrt_integer(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("sqrt_integer needs a positive integer");
  std::int64_t s = 1, f = 1, m = n;
  for (std::int64_t p = 2; p * p <= m; ++p) {
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) s *= p;
    if (e % 2) f *= p;
  }
  f *= m;
  if (f == 1) return CyclotomicNumber::rational(make_rational(s));
  const std::int64_t N = lcm64(4 * f, 8);
  RootSum g(N);
  const std::int64_t scale = N / (4 * f);
  for (std::int64_t j = 0; j < 2 * f; ++j) g.add(-mod64(j * j, 4 * f) * scale, 1);
  CyclotomicNumber z8 = CyclotomicNumber::root_power(1, 8);
  CyclotomicNumber sqrt2 = z8 + z8.conj();
  return make_rational(s) * (g.reduce() * z8 / sqrt2);
}

}  // namespace qblocks
