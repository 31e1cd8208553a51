#include "qblocks/seifert.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "qblocks/error.hpp"

namespace qblocks {

namespace {

std::string pair_str(const SeifertPair& pr) {
  return "(" + std::to_string(pr.p) + "," + std::to_string(pr.q) + ")";
}

Rational sawtooth(const Rational& x) {
  if (is_integer(x)) return 0;
  return x - Rational(floor(x)) - make_rational(1, 2);
}

}  // namespace

ValidationMode parse_validation_mode(std::string_view s) {
  if (s == "strict") return ValidationMode::strict;
  if (s == "relaxed") return ValidationMode::relaxed;
  throw ValidationError("unknown validation mode '" + std::string(s) +
                        "' (expected strict or relaxed)");
}

std::string to_string(ValidationMode m) {
  return m == ValidationMode::strict ? "strict" : "relaxed";
}

std::vector<std::int64_t> SeifertData::ps() const {
  std::vector<std::int64_t> out;
  for (const auto& pr : pairs) out.push_back(pr.p);
  return out;
}

std::string SeifertData::str() const {
  std::string out;
  for (const auto& pr : pairs) {
    if (!out.empty()) out += ",";
    out += std::to_string(pr.p) + "/" + std::to_string(pr.q);
  }
  return out;
}

SeifertData validate_seifert(const std::vector<SeifertPair>& pairs, ValidationMode mode) {
  std::vector<std::string> bad;
  if (pairs.size() < 3)
    bad.push_back("need at least 3 exceptional fibers, got " + std::to_string(pairs.size()));
  bool positive = true;
  for (const auto& pr : pairs) {
    if (pr.p <= 0 || pr.q <= 0) {
      bad.push_back("p and q must be positive in " + pair_str(pr));
      positive = false;
      continue;
    }
    if (gcd64(pr.p, pr.q) != 1) bad.push_back("gcd(p,q) > 1 in " + pair_str(pr));
    if (pr.q >= pr.p) bad.push_back("need 0 < q < p in " + pair_str(pr));
  }
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j)
      if (pairs[i].p > 0 && pairs[j].p > 0 && gcd64(pairs[i].p, pairs[j].p) != 1)
        bad.push_back("p values " + std::to_string(pairs[i].p) + " and " +
                      std::to_string(pairs[j].p) + " are not coprime");

  SeifertData data;
  data.pairs = pairs;
  data.mode = mode;
  if (positive && !pairs.empty()) {
    Integer big_p = 1;
    for (const auto& pr : pairs) big_p *= make_integer(pr.p);
    if (!big_p.fits_slong_p()) {
      bad.push_back("P = " + big_p.get_str() + " exceeds the integer range");
    } else {
      data.P = to_int64(big_p);
      Integer value = 0;
      for (const auto& pr : pairs) value += make_integer(pr.q) * (big_p / make_integer(pr.p));
      data.normalization_value = to_int64(value);
      const std::string shown = "P*sum(q_i/p_i) = " + value.get_str();
      if (mode == ValidationMode::strict) {
        if (value != 1) bad.push_back(shown + " != 1 (strict mode)");
      } else {
        Integer r;
        mpz_fdiv_r(r.get_mpz_t(), value.get_mpz_t(), big_p.get_mpz_t());
        if (r == 1)
          data.normalization_sign = 1;
        else if (r == big_p - 1)
          data.normalization_sign = -1;
        else
          bad.push_back(shown + " is not congruent to +-1 mod P = " + big_p.get_str());
      }
    }
  }
  if (!bad.empty()) throw ValidationError(bad);
  return data;
}

std::vector<SeifertPair> parse_seifert_pairs(std::string_view text) {
  std::vector<SeifertPair> out;
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw ValidationError("empty Seifert data");
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    std::string item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    auto parse_int = [&](const std::string& tok) -> std::int64_t {
      if (tok.empty()) throw ValidationError("malformed Seifert pair '" + item + "'");
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(tok, &used);
      } catch (const std::exception&) {
        throw ValidationError("malformed Seifert pair '" + item + "'");
      }
      if (used != tok.size()) throw ValidationError("malformed Seifert pair '" + item + "'");
      return v;
    };
    auto slash = item.find('/');
    SeifertPair pr;
    if (slash == std::string::npos) {
      pr.p = parse_int(item);
      pr.q = 1;
    } else {
      pr.p = parse_int(item.substr(0, slash));
      pr.q = parse_int(item.substr(slash + 1));
    }
    out.push_back(pr);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

Rational dedekind_sawtooth(std::int64_t h, std::int64_t k) {
  if (k <= 0) throw ValidationError("Dedekind sum needs a positive modulus");
  if (gcd64(h, k) != 1)
    throw ValidationError("Dedekind sum arguments " + std::to_string(h) + ", " +
                          std::to_string(k) + " are not coprime");
  Rational s = 0;
  for (std::int64_t j = 1; j < k; ++j)
    s += sawtooth(make_rational(j, k)) * sawtooth(make_rational(mod64(h * j, k), k));
  return s;
}

Rational dedekind_sum(std::int64_t q, std::int64_t p) {
  if (q <= 0 || p <= 0) throw ValidationError("Dedekind sum arguments must be positive");
  return dedekind_sawtooth(p, q);
}

long double dedekind_sum_cot(std::int64_t q, std::int64_t p) {
  if (q <= 0 || p <= 0 || gcd64(p, q) != 1)
    throw ValidationError("Dedekind sum arguments must be positive and coprime");
  const long double pi = std::numbers::pi_v<long double>;
  long double s = 0;
  for (std::int64_t j = 1; j < q; ++j) {
    long double a = pi * static_cast<long double>(j) / static_cast<long double>(q);
    long double b = pi * static_cast<long double>(mod64(j * p, q)) / static_cast<long double>(q);
    s += (std::cos(a) / std::sin(a)) * (std::cos(b) / std::sin(b));
  }
  return s / (4.0L * static_cast<long double>(q));
}

Rational phi_invariant(const SeifertData& data) {
  Rational phi = 3 - make_rational(1, data.P);
  for (const auto& pr : data.pairs) phi += 12 * dedekind_sum(pr.q, pr.p);
  return phi;
}

std::int64_t m0_support(const SeifertData& data) {
  std::int64_t m0 = data.P * static_cast<std::int64_t>(data.n() - 2);
  for (const auto& pr : data.pairs) m0 -= data.P / pr.p;
  return m0;
}

}  // namespace qblocks
