#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "qblocks/asymptotics.hpp"
#include "qblocks/error.hpp"

using namespace qblocks;
using cld = std::complex<long double>;

namespace {

const long double kPi = 3.14159265358979323846264338327950288L;

cld to_cld(const Complex& z) { return {z.re().to_double(), z.im().to_double()}; }
SeifertData sd(std::vector<SeifertPair> p) { return validate_seifert(p, ValidationMode::relaxed); }
RootSystem alg(const char* s) { return build_root_system(CartanLabel::parse(s)); }
const SeifertData& poincare() {
  static SeifertData d = sd({{2, 1}, {3, 1}, {5, 1}});
  return d;
}

// q^{m0/2P} prod (1 - q^{1/p}) (1 - q)^{2-n} with q^r = exp(r w)
cld g_product(cld w, const SeifertData& d) {
  cld v = std::exp(w * static_cast<long double>(m0_support(d)) / (2.0L * d.P));
  for (const auto& pr : d.pairs) v *= 1.0L - std::exp(w / static_cast<long double>(pr.p));
  for (std::size_t i = 2; i < d.n(); ++i) v /= 1.0L - std::exp(w);
  return v;
}

std::vector<Complex> offsets(std::size_t n, double t) { return std::vector<Complex>(n, Complex(t, 0.0, 128)); }

}  // namespace

TEST_CASE("G on the logarithmic branch") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  for (const auto& d : {poincare(), sd({{2, 1}, {3, 1}, {5, 3}, {7, 4}})}) {
    for (int i = 0; i < 20; ++i) {
      cld w(-std::fabs(u(rng)) - 0.01L, u(rng));
      Complex z = g_at_log(Complex(static_cast<double>(w.real()), static_cast<double>(w.imag()), 128), d);
      cld o = g_product(w, d);
      CHECK(std::abs(to_cld(z) - o) < 1e-12L * (1 + std::abs(o)));
    }
    // on the unit circle it reduces to the sine form
    for (int x = 1; x < 5; ++x) {
      Complex w(Real(0L, 128), pi(128) * Real(make_rational(2 * x, 5), 128));
      CHECK(std::abs(to_cld(g_at_log(w, d)) - to_cld(g_at_root(Rational(x), 5, d, 128))) < 1e-25L);
    }
  }
  CHECK_THROWS_AS(g_at_log(Complex(128), poincare()), ValidationError);
}

TEST_CASE("G(e^{-t}) vanishes to second order at t = 0") {
  for (const auto& d : {poincare(), sd({{2, 1}, {3, 1}, {7, 1}}), sd({{2, 1}, {3, 1}, {5, 3}, {7, 4}})}) {
    std::vector<double> ts, mags;
    for (int i = 0; i < 10; ++i) {
      const double t = 1e-2 * std::pow(2.0, -i);
      ts.push_back(t);
      mags.push_back(std::abs(static_cast<double>(to_cld(g_at_log(Complex(-t, 0.0, 128), d)).real())));
    }
    CHECK(loglog_slope(ts, mags) == doctest::Approx(2.0).epsilon(0.01));
  }
}

TEST_CASE("phi_k approaches the restricted finite sum") {
  const RootSystem a1 = alg("A1");
  auto finite = radial_limit_finite_sum(a1, poincare(), 5);
  PhiFamilyPoint pt;
  pt.k = 5;
  double prev = 1e300;
  for (double t : {1e-3, 5e-4, 2.5e-4, 1.25e-4}) {
    pt.t = offsets(1, t);
    cld v = to_cld(phi_family_eval(a1, poincare(), pt).value);
    pt.t = offsets(1, t / 2);
    cld h = to_cld(phi_family_eval(a1, poincare(), pt).value);
    CHECK(std::abs(v - h) < prev);
    prev = std::abs(v - h);
  }
  pt.t = offsets(1, 1e-12);
  CHECK(std::abs(to_cld(phi_family_eval(a1, poincare(), pt).value) - to_cld(finite.raw_sum)) < 1e-8L);
  pt.t = offsets(1, 0.0);
  CHECK_THROWS_AS(phi_family_eval(a1, poincare(), pt), ValidationError);
}

TEST_CASE("inclusion-exclusion over subsets of positive roots") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lmag(std::log(1e-3), std::log(1e-1)), arg(-0.7, 0.7);
  auto run = [&](const RootSystem& rs, std::int64_t k, int samples) {
    for (int i = 0; i < samples; ++i) {
      std::vector<Complex> t;
      for (std::size_t a = 0; a < rs.num_positive(); ++a) {
        const double r = std::exp(lmag(rng)), th = arg(rng);
        t.emplace_back(r * std::cos(th), r * std::sin(th), 128);
      }
      cld lhs = to_cld(phi_inclusion_exclusion(rs, poincare(), k, t, 128));
      cld rhs = to_cld(phi_restricted(rs, poincare(), k, t, 128).value);
      CHECK(std::abs(lhs - rhs) <= 1e-10L * std::max<long double>(1, std::abs(rhs)));
    }
  };
  run(alg("A1"), 5, 10);
  run(alg("A2"), 2, 2);
}

TEST_CASE("zero order of phi_{k,{alpha}}") {
  std::vector<double> ts;
  for (int i = 0; i < 6; ++i) ts.push_back(1e-2 * std::pow(2.0, -i));
  auto z5 = phi_zero_order(alg("A1"), poincare(), 5, {0}, ts, 128);
  CHECK(z5.identically_zero);
  CHECK(z5.order >= 0.95);
  auto z7 = phi_zero_order(alg("A1"), poincare(), 7, {0}, ts, 128);
  CHECK(!z7.identically_zero);
  CHECK(z7.order == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("Gaussian moments") {
  for (long a : {1L, 3L, 30L}) {
    QMatrix S(1, 1);
    S(0, 0) = Rational(2 * a);
    for (int m = 0; m <= 10; ++m) {
      // d^m/dx^m e^{-a x^2} = (-1)^m a^{m/2} H_m(sqrt(a) x) e^{-a x^2}
      const long double oracle = (m % 2 ? -1.0L : 1.0L) * std::pow(static_cast<long double>(a), m / 2.0L) *
                                 std::hermite(static_cast<unsigned>(m), 0.0L);
      auto r = gaussian_moment(S, {m});
      CHECK(std::fabs(r.value.to_double() - static_cast<double>(oracle)) <= 1e-15 * std::max(1.0L, std::fabs(oracle)));
    }
    // -int_0^oo e^{-a x^2} by composite Simpson
    const int n = 200000;
    const long double hi = 12.0L / std::sqrt(static_cast<long double>(a)), h = hi / n;
    long double simpson = 0;
    for (int i = 0; i <= n; ++i) {
      const long double x = i * h, w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
      simpson += w * std::exp(-a * x * x);
    }
    simpson *= h / 3;
    CHECK(gaussian_moment(S, {-1}).value.to_double() == doctest::Approx(static_cast<double>(-simpson)).epsilon(1e-12));
    CHECK(gaussian_moment(S, {-1}).value.to_double() ==
          doctest::Approx(-0.5 * std::sqrt(M_PI / static_cast<double>(a))).epsilon(1e-15));
    // second derivative by central differences
    const long double e = 1e-4L;
    auto g = [&](long double x) { return std::exp(-a * x * x); };
    const long double fd = (g(e) - 2 * g(0) + g(-e)) / (e * e);
    CHECK(gaussian_moment(S, {2}).value.to_double() == doctest::Approx(static_cast<double>(fd)).epsilon(1e-6));
    CHECK(gaussian_moment(S, {2}).value.to_double() == static_cast<double>(-2 * a));
    CHECK(gaussian_moment(S, {1}).value.is_zero());
  }
  QMatrix D(2, 2);
  D(0, 0) = 2;
  D(1, 1) = 6;
  for (int m1 = -2; m1 <= 3; ++m1)
    for (int m2 = -2; m2 <= 3; ++m2) {
      QMatrix s1(1, 1), s2(1, 1);
      s1(0, 0) = 2;
      s2(0, 0) = 6;
      const double prod = gaussian_moment(s1, {m1}).value.to_double() * gaussian_moment(s2, {m2}).value.to_double();
      CHECK(gaussian_moment(D, {m1, m2}).value.to_double() == doctest::Approx(prod).epsilon(1e-12));
    }
  QMatrix A(2, 2);
  A(0, 0) = 2;
  A(1, 1) = 2;
  A(0, 1) = A(1, 0) = 1;
  // quadrant integral of e^{-(x^2 + xy + y^2)}: arccos(1/2) / (2 sqrt(3/4))
  auto q = gaussian_moment(A, {-1, -1});
  CHECK(q.quadrature);
  CHECK(q.value.to_double() == doctest::Approx(M_PI / (3 * std::sqrt(3.0))).epsilon(1e-12));
  CHECK(gaussian_moment(A, {1, -1}).value.to_double() == doctest::Approx(0.5).epsilon(1e-15));
  QMatrix I3(3, 3);
  for (int i = 0; i < 3; ++i) I3(i, i) = 2;
  CHECK_THROWS_AS(gaussian_moment(I3, {-1, -1, -1}), ValidationError);
}

TEST_CASE("Neville extrapolation and schedules") {
  std::vector<Real> ts;
  std::vector<Complex> vs;
  for (int j = 0; j <= 6; ++j) {
    Real t(Rational(make_rational(1, 10) / (1 << j)), 160);
    ts.push_back(t);
    Real p = Real(3L, 160) + Real(2L, 160) * t - t * t + Real(0.5, 160) * t * t * t;
    vs.emplace_back(p, Real(1L, 160) * t);
  }
  auto R = richardson(ts, vs);
  CHECK(std::fabs(R.best().re().to_double() - 3) < 1e-25);
  CHECK(std::fabs(R.best().im().to_double()) < 1e-25);

  auto s = parse_schedule("geometric:0.1,2,12");
  REQUIRE(s.size() == 13);
  CHECK(s.back() == make_rational(1, 40960));
  CHECK(parse_schedule("list:0.1,0.05,0.02").size() == 3);
  CHECK_THROWS_AS(parse_schedule("geometric:0.1,0.5,3"), ValidationError);
  CHECK_THROWS_AS(parse_schedule("spiral:1"), ValidationError);
}

TEST_CASE("extrapolated radial limits match the finite sums in rank one") {
  const RootSystem a1 = alg("A1");
  auto v5 = verify_limit(a1, poincare(), 5);
  CHECK(v5.converged);
  CHECK(v5.abs_error <= 1e-6);
  CHECK(v5.pass);
  CHECK(v5.rows.size() == 13);
  VerifyOptions o;
  o.tolerance = 1e-8L;
  auto v1 = verify_limit(a1, poincare(), 1, o);
  CHECK(v1.finite.value_float.re().is_zero());
  CHECK(abs(v1.extrapolant).to_double() <= 1e-8);
  CHECK(v1.pass);
}

TEST_CASE("rank one asymptotic expansion") {
  auto e = expansion_rank1(poincare(), 5, 2);
  CHECK(e.verified_order == 2);
  REQUIRE(e.residual_exponents.size() == 3);
  for (int N = 0; N <= 2; ++N) CHECK(e.residual_exponents[static_cast<std::size_t>(N)] >= N + 0.9);
  CHECK(e.max_negative <= 1e-10);
  auto finite = radial_limit_finite_sum(alg("A1"), poincare(), 5);
  const auto& c0 = e.coefficients[4];
  REQUIRE(c0.order == 0);
  CHECK(abs(c0.value - finite.raw_sum).to_double() < 1e-20);
  CHECK(abs(e.coefficients[5].value).to_double() < 1e-20);  // odd moments vanish
}
