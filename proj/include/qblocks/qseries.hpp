#pragma once

// Sparse Puiseux series in q with exact rational coefficients, the series
// G_{p_1..p_n}(q), and the homological block together with its numerical
// evaluation along the radial path q = exp(2 pi i/k - t).

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qblocks/error.hpp"
#include "qblocks/liealg.hpp"
#include "qblocks/mpreal.hpp"
#include "qblocks/rational.hpp"
#include "qblocks/seifert.hpp"

namespace qblocks {

/// Data for a rigorous bound on the terms a block series leaves out. The
/// dropped multi-indices m satisfy m^T S m / 8P > inner_cutoff.
struct TailModel {
  int dims = 0;                 // number of positive roots summed over
  int fibers = 0;               // n
  std::int64_t P = 1;
  long double cone_c = 0;       // |sum x_a alpha| >= c |x|_1 for x >= 0
  long double offset = 0;       // |m0| * |sum alpha|
  long double max_root = 0;     // longest root length
  Rational inner_cutoff;
  Rational shift;               // prefactor exponent added to every term

  /// Upper bound for sum |c| e^{-t Re(exponent)} over all omitted terms.
  long double bound(long double t) const { return bound_at(t, inner_cutoff); }
  long double bound_at(long double t, const Rational& cutoff) const;
  /// Smallest integer inner cutoff whose bound at t is below tol.
  Rational required_cutoff(long double t, long double tol) const;
};

class PuiseuxSeries {
 public:
  using Terms = std::map<std::int64_t, Rational>;

  explicit PuiseuxSeries(std::int64_t denom = 1);

  static PuiseuxSeries monomial(const Rational& exponent, const Rational& coeff);

  std::int64_t denom() const { return denom_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Exponents up to and including the cutoff are exact; nullopt means the
  /// series is a finite sum known completely.
  const std::optional<Rational>& cutoff() const { return cutoff_; }
  void set_cutoff(std::optional<Rational> c);

  Rational exponent_of(std::int64_t num) const { return make_rational(num, denom_); }
  Rational coefficient(const Rational& exponent) const;
  std::optional<Rational> leading_exponent() const;

  /// Adds coeff * q^exponent, widening the denominator when needed.
  void add_term(const Rational& exponent, const Rational& coeff);
  void add_numerator(std::int64_t num, const Rational& coeff);

  PuiseuxSeries with_denom(std::int64_t denom) const;
  PuiseuxSeries shifted(const Rational& s) const;
  /// Drops terms above c and lowers the cutoff to c.
  PuiseuxSeries truncated(const Rational& c) const;

  friend PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b);
  friend PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b);
  friend PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b);
  friend PuiseuxSeries operator*(const Rational& s, const PuiseuxSeries& a);
  /// Same exponents, coefficients and cutoff.
  friend bool operator==(const PuiseuxSeries& a, const PuiseuxSeries& b);

  std::optional<TailModel> tail;
  Rational prefactor_exponent = 0;

 private:
  std::int64_t denom_;
  Terms terms_;
  std::optional<Rational> cutoff_;
};

/// G(q) = (q^{1/2} - q^{-1/2})^{2-n} prod_i (q^{1/2p_i} - q^{-1/2p_i}),
/// expanded by series arithmetic, exact through exponent `cutoff`. Exponents
/// carry denominator 2P, so the coefficient at m/2P is chi_m.
PuiseuxSeries expand_G(const SeifertData& data, const Rational& cutoff);

/// chi_m from the sign-vector closed form.
Rational chi_closed(std::int64_t m, const SeifertData& data);
/// Same, in checked 64-bit arithmetic.
std::int64_t chi_int(std::int64_t m, const SeifertData& data);

/// Nonzero (m, chi_m) for m0 <= m <= m_max, ascending.
std::vector<std::pair<std::int64_t, std::int64_t>> chi_support(const SeifertData& data,
                                                               std::int64_t m_max);

/// min { x^T S x : x >= 0, sum x = 1 } by solving the KKT system on every face.
Rational cone_constant(const QMatrix& S);
Rational cone_constant(const RootSystem& rs);

struct BlockOptions {
  Rational cutoff = 10;          // bound on the inner exponent m^T S m / 8P
  bool include_prefactor = true;
  std::size_t max_roots = 6;
  int workers = 1;
  /// Refuse enumerations whose simplex volume estimate exceeds this.
  long double max_visits = 5e10L;
};

/// Phi(q) = q^{-dim(g) phi |rho|^2 / 2} sum_{m >= m0} q^{m^T S m/8P} prod chi_{m_a}.
PuiseuxSeries homological_block(const RootSystem& rs, const SeifertData& data,
                                const BlockOptions& opt);
/// The same sum with the positive roots replaced by `roots` (simple-root
/// coordinates), e.g. the image of the positive system under a Weyl element.
PuiseuxSeries homological_block_with_roots(const RootSystem& rs,
                                           const std::vector<IntVector>& roots,
                                           const SeifertData& data, const BlockOptions& opt);

/// Inner exponent of m = m0 * (1,...,1); blocks below this cutoff are empty.
Rational block_base_exponent(const RootSystem& rs, const SeifertData& data);

struct RadialPoint {
  std::int64_t k = 1;
  Real t;
  Precision precision_bits = kDefaultPrecision;

  RadialPoint(std::int64_t k_, Real t_, Precision prec) : k(k_), t(std::move(t_)), precision_bits(prec) {}
};

struct RadialValue {
  Complex value;
  long double tail_bound = 0;
  /// Bound for accumulated rounding in the summation.
  long double rounding_bound = 0;
  std::size_t terms = 0;
};

class InsufficientCutoff : public Error {
 public:
  InsufficientCutoff(const std::string& what, Rational suggested)
      : Error(ErrorKind::non_convergence, what), suggested_(std::move(suggested)) {}
  const Rational& suggested_cutoff() const { return suggested_; }

 private:
  Rational suggested_;
};

/// Sum of coeff * exp(exponent * (2 pi i/k - t)). When `tolerance` is given
/// and the tail bound exceeds it, throws InsufficientCutoff carrying the
/// inner cutoff that would suffice.
RadialValue evaluate_radial(const PuiseuxSeries& series, const RadialPoint& pt,
                            std::optional<long double> tolerance = std::nullopt,
                            int workers = 1);

}  // namespace qblocks
