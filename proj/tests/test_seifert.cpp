#include "doctest.h"

#include <cmath>
#include <numeric>

#include "qblocks/error.hpp"
#include "qblocks/seifert.hpp"

using namespace qblocks;

namespace {

// Standard Dedekind sum straight from the sawtooth definition with doubles
// replaced by exact rationals and no shared helpers.
Rational oracle_standard(std::int64_t h, std::int64_t k) {
  auto saw = [](std::int64_t num, std::int64_t den) -> Rational {
    std::int64_t r = ((num % den) + den) % den;
    if (r == 0) return Rational(0);
    return make_rational(r, den) - make_rational(1, 2);
  };
  Rational s = 0;
  for (std::int64_t j = 1; j < k; ++j) s += saw(j, k) * saw(h * j, k);
  return s;
}

SeifertData relaxed(std::vector<SeifertPair> p) {
  return validate_seifert(p, ValidationMode::relaxed);
}

}  // namespace

TEST_CASE("strict normalization is rejected for the Poincare sphere data") {
  try {
    validate_seifert({{2, 1}, {3, 1}, {5, 1}}, ValidationMode::strict);
    FAIL("expected rejection");
  } catch (const ValidationError& e) {
    REQUIRE(e.violations().size() == 1);
    CHECK(e.violations()[0].find("31") != std::string::npos);
  }
}

TEST_CASE("relaxed normalization accepts 31 = 1 mod 30") {
  auto d = relaxed({{2, 1}, {3, 1}, {5, 1}});
  CHECK(d.P == 30);
  CHECK(d.normalization_value == 31);
  CHECK(d.normalization_sign == 1);
  auto d2 = relaxed({{2, 1}, {3, 2}, {5, 4}});
  CHECK(d2.normalization_sign == -1);
}

TEST_CASE("every violated condition is listed") {
  try {
    validate_seifert({{2, 1}, {4, 1}, {5, 5}}, ValidationMode::relaxed);
    FAIL("expected rejection");
  } catch (const ValidationError& e) {
    // gcd(5,5), q out of range, 2 and 4 not coprime
    CHECK(e.violations().size() >= 3);
    CHECK(e.exit_code() == 1);
  }
  for (auto mode : {ValidationMode::strict, ValidationMode::relaxed})
    CHECK_THROWS_AS(validate_seifert({{2, 1}, {4, 1}, {5, 1}}, mode), ValidationError);
  CHECK_THROWS_AS(relaxed({{2, 1}, {3, 1}}), ValidationError);
}

TEST_CASE("pair parsing") {
  auto p = parse_seifert_pairs("2/1, 3/1,5/1");
  REQUIRE(p.size() == 3);
  CHECK(p[2] == SeifertPair{5, 1});
  CHECK(parse_seifert_pairs("2,3,7")[2] == SeifertPair{7, 1});
  CHECK_THROWS_AS(parse_seifert_pairs("2/x,3"), ValidationError);
  CHECK_THROWS_AS(parse_seifert_pairs(""), ValidationError);
  CHECK_THROWS_AS(parse_seifert_pairs("2/1,,3/1"), ValidationError);
}

TEST_CASE("Dedekind sum spot values") {
  for (std::int64_t p = 1; p < 20; ++p) CHECK(dedekind_sum(1, p) == 0);
  CHECK(dedekind_sum(3, 5) == make_rational(-1, 18));
  CHECK(dedekind_sum(2, 3) == 0);
  CHECK_THROWS_AS(dedekind_sum(4, 6), ValidationError);
}

TEST_CASE("Dedekind reciprocity and convention for coprime h, k <= 50") {
  for (std::int64_t h = 1; h <= 50; ++h)
    for (std::int64_t k = 1; k <= 50; ++k) {
      if (std::gcd(h, k) != 1) continue;
      Rational lhs = oracle_standard(h, k) + oracle_standard(k, h);
      Rational rhs = make_rational(-1, 4) +
                     (make_rational(h, k) + make_rational(k, h) + make_rational(1, h * k)) / 12;
      CHECK(lhs == rhs);
      CHECK(dedekind_sum(h, k) == oracle_standard(k, h));
      CHECK(dedekind_sawtooth(h, k) == oracle_standard(h, k));
      long double f = dedekind_sum_cot(h, k);
      CHECK(std::fabs(static_cast<double>(f - dedekind_sum(h, k).get_d())) < 1e-10);
    }
}

TEST_CASE("phi invariant") {
  CHECK(phi_invariant(relaxed({{2, 1}, {3, 1}, {5, 1}})) == make_rational(89, 30));
  CHECK(phi_invariant(relaxed({{2, 1}, {3, 1}, {7, 1}})) == make_rational(125, 42));
  auto d = relaxed({{3, 1}, {4, 1}, {5, 2}});
  // s(2,5) = standard s(5,2) = s(1,2) = 0
  CHECK(phi_invariant(d) == 3 - make_rational(1, 60));
  auto e = relaxed({{2, 1}, {3, 1}, {5, 3}, {7, 4}});
  Rational expected = 3 - make_rational(1, 210) +
                      12 * (oracle_standard(5, 3) + oracle_standard(7, 4));
  CHECK(phi_invariant(e) == expected);
}

TEST_CASE("permuting pairs leaves P, phi, m0 unchanged") {
  std::vector<SeifertPair> base{{2, 1}, {3, 1}, {5, 3}, {7, 4}};
  auto d0 = relaxed(base);
  std::vector<SeifertPair> perm = base;
  std::sort(perm.begin(), perm.end(), [](auto a, auto b) { return a.p < b.p; });
  do {
    auto d = relaxed(perm);
    CHECK(d.P == d0.P);
    CHECK(phi_invariant(d) == phi_invariant(d0));
    CHECK(m0_support(d) == m0_support(d0));
  } while (std::next_permutation(perm.begin(), perm.end(),
                                 [](auto a, auto b) { return a.p < b.p; }));
}

TEST_CASE("m0 values") {
  CHECK(m0_support(relaxed({{2, 1}, {3, 1}, {5, 1}})) == -1);
  CHECK(m0_support(relaxed({{2, 1}, {3, 1}, {7, 1}})) == 1);
  CHECK(m0_support(relaxed({{2, 1}, {3, 1}, {5, 3}, {7, 4}})) == 173);
}
