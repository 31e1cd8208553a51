#pragma once

// Surgery data (p_i, q_i) of a Seifert fibered homology sphere and the exact
// invariants P, phi and m0 built from it.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qblocks/rational.hpp"

namespace qblocks {

enum class ValidationMode { strict, relaxed };

ValidationMode parse_validation_mode(std::string_view s);
std::string to_string(ValidationMode m);

struct SeifertPair {
  std::int64_t p = 0;
  std::int64_t q = 0;
  bool operator==(const SeifertPair&) const = default;
};

struct SeifertData {
  std::vector<SeifertPair> pairs;
  std::int64_t P = 1;
  ValidationMode mode = ValidationMode::relaxed;
  /// +1 or -1 when P * sum q_i/p_i is congruent to that sign mod P; 0 in
  /// strict mode.
  int normalization_sign = 0;
  /// The integer P * sum q_i/p_i, kept for reports.
  std::int64_t normalization_value = 0;

  std::size_t n() const { return pairs.size(); }
  std::vector<std::int64_t> ps() const;
  /// "2/1,3/1,5/1"
  std::string str() const;
};

/// Checks all conditions and throws a ValidationError listing every failure.
SeifertData validate_seifert(const std::vector<SeifertPair>& pairs,
                             ValidationMode mode = ValidationMode::relaxed);

/// Parses "p1/q1,p2/q2,...". A bare "p" means q = 1. Syntax errors throw
/// ValidationError; the result is not validated.
std::vector<SeifertPair> parse_seifert_pairs(std::string_view text);

/// Standard sawtooth Dedekind sum sum_{j=1}^{k-1} ((j/k)) ((h j/k)).
Rational dedekind_sawtooth(std::int64_t h, std::int64_t k);

/// s(q, p) = (1/4q) sum_{j=1}^{q-1} cot(pi j/q) cot(pi j p/q), computed
/// exactly through the sawtooth identity s(q, p) = dedekind_sawtooth(p, q).
Rational dedekind_sum(std::int64_t q, std::int64_t p);

/// Same sum evaluated with floating-point cotangents.
long double dedekind_sum_cot(std::int64_t q, std::int64_t p);

/// phi = 3 - 1/P + 12 sum_i s(q_i, p_i)
Rational phi_invariant(const SeifertData& data);

/// m0 = P (n - 2 - sum 1/p_i); the lowest m with chi_m != 0.
std::int64_t m0_support(const SeifertData& data);

}  // namespace qblocks
