#pragma once

// Numerical checks of the t -> 0 behaviour: the meromorphic family phi_{k,A},
// Gaussian moments, the rank-one asymptotic expansion and the extrapolated
// radial limit of a block compared with its finite sum.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qblocks/finite.hpp"
#include "qblocks/liealg.hpp"
#include "qblocks/mpreal.hpp"
#include "qblocks/qseries.hpp"
#include "qblocks/seifert.hpp"

namespace qblocks {

/// G at q = exp(w) on the branch q^r = exp(r w), through the sinh form
/// prod 2 sinh(w/2p_i) / (2 sinh(w/2))^{n-2}. Throws at a pole.
Complex g_at_log(const Complex& w, const SeifertData& data);

struct PhiFamilyPoint {
  std::int64_t k = 1;
  /// Indices into the positive roots.
  std::vector<std::size_t> subset_A;
  /// One offset t_alpha per positive root.
  std::vector<Complex> t;
  Precision precision_bits = kDefaultPrecision;
};

struct PhiValue {
  Complex value;
  /// sum of |summand|, the scale for rounding noise
  Real abs_sum;
  std::int64_t terms = 0;
};

/// phi_{k,A}(t) = sum over lambda in X/kPY with <lambda,alpha> in kZ for all
/// alpha in A of e(-|lambda|^2/2Pk) prod_alpha G(zeta_k^{<lambda,alpha>} e^{-t_alpha}).
PhiValue phi_family_eval(const RootSystem& rs, const SeifertData& data, const PhiFamilyPoint& pt,
                         std::int64_t coset_cap = CosetEnumerator::kDefaultCap);
/// The same summand over lambda outside M only.
PhiValue phi_restricted(const RootSystem& rs, const SeifertData& data, std::int64_t k,
                        const std::vector<Complex>& t, Precision prec,
                        std::int64_t coset_cap = CosetEnumerator::kDefaultCap);
/// sum over subsets A of Delta_+ of (-1)^{|A|} phi_{k,A}(t).
Complex phi_inclusion_exclusion(const RootSystem& rs, const SeifertData& data, std::int64_t k,
                                const std::vector<Complex>& t, Precision prec,
                                std::int64_t coset_cap = CosetEnumerator::kDefaultCap);

struct ZeroOrderFit {
  /// log-log slope; +infinity when every sample is rounding noise
  double order = 0;
  bool identically_zero = false;
  std::vector<double> ts;
  std::vector<double> magnitudes;
  /// per sample: the working-precision value is not reproduced at doubled precision
  std::vector<bool> noise;
};

/// Fits |f(t)| ~ C t^order on the given real t. Each sample is evaluated at
/// prec and 2 prec; it counts as noise when the two differ by more than 1e-3
/// relative to the doubled-precision value.
ZeroOrderFit fit_zero_order(const std::function<PhiValue(double t, Precision prec)>& f,
                            const std::vector<double>& ts, Precision prec);

/// Zero order of phi_{k,A} at t_alpha = 0 (alpha in A); the other offsets stay at `other_t`.
ZeroOrderFit phi_zero_order(const RootSystem& rs, const SeifertData& data, std::int64_t k,
                            const std::vector<std::size_t>& A, const std::vector<double>& ts,
                            Precision prec, double other_t = 0.05);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct MomentResult {
  Real value;
  long double error = 0;
  bool quadrature = false;
};

/// (prod_a d^{m_a}/dx_a^{m_a}) e^{-x^T S x / 2} at x = 0, where a negative
/// order means repeated d^{-1} g(x) = -int_x^oo g. At most two coordinates
/// may carry negative orders; two of them use nested exp-sinh quadrature.
MomentResult gaussian_moment(const QMatrix& S, const std::vector<int>& m,
                             Precision prec = kDefaultPrecision);

struct ExpansionOptions {
  Precision precision = kDefaultPrecision;
  int circle_points = 128;
  /// Defaults to pi/k, half the distance to the nearest pole.
  std::optional<double> radius;
  /// Negative Laurent orders probed.
  int negative_orders = 4;
  /// Where the residual decay is fitted; defaults to 8 geometric points in [1e-3, 10^-1.5].
  std::vector<double> residual_ts;
  long double tail_tolerance = 1e-30L;
  int workers = 1;
};

struct ExpansionCoefficient {
  int order = 0;
  Complex value;
};

struct ExpansionResult {
  /// c_M for M = -negative_orders .. N (only through verified_order is trusted)
  std::vector<ExpansionCoefficient> coefficients;
  /// a_m of phi_k(t) = sum a_m t^m for the same range
  std::vector<ExpansionCoefficient> laurent;
  int verified_order = -1;
  /// fitted decay exponent of the order-N residual, N = 0..order
  std::vector<double> residual_exponents;
  std::vector<double> residual_ts;
  /// residuals[N][i] at residual_ts[i]
  std::vector<std::vector<double>> residuals;
  /// largest |a_m| over m < 0
  double max_negative = 0;
  /// difference between the fits on the full and half circle grids
  double fit_error = 0;
  Complex gauss;
};

/// G_k(L) Phi(zeta_k e^{-t^2}) ~ sum_M c_M t^M for A1, with L = Z alpha,
/// |alpha|^2 = 2P, and c_M = a_M d^M/dx^M e^{-P x^2} at 0.
ExpansionResult expansion_rank1(const SeifertData& data, std::int64_t k, int order,
                                const ExpansionOptions& opt = {});

struct RichardsonTable {
  /// table[j][m] extrapolates from samples j-m..j
  std::vector<std::vector<Complex>> table;
  std::size_t best_row = 0, best_col = 0;
  double best_error = 0;
  /// per row: the entry with the smallest error estimate and that estimate
  std::vector<std::size_t> row_col;
  std::vector<double> row_error;
  const Complex& best() const { return table[best_row][best_col]; }
};

/// Neville extrapolation to t = 0 in integer powers of t. The error estimate
/// of entry (j, m), m >= 1, is the larger of its distances to (j, m-1) and (j-1, m).
RichardsonTable richardson(const std::vector<Real>& t, const std::vector<Complex>& values);

/// "geometric:t0,ratio,count" gives t0 * ratio^{-j} for j = 0..count;
/// "list:t1,t2,..." gives the values as written.
std::vector<Rational> parse_schedule(const std::string& text);

struct VerifyOptions {
  Precision precision = kDefaultPrecision;
  long double tolerance = 1e-6L;
  std::vector<Rational> schedule;  // empty: geometric:0.1,2,12
  /// Allowed tail per point; defaults to tolerance * 1e-3.
  std::optional<long double> tail_tolerance;
  /// Inner cutoff; by default derived from the tail model at the smallest t.
  std::optional<Rational> cutoff;
  int workers = 1;
  std::int64_t coset_cap = CosetEnumerator::kDefaultCap;
  std::size_t max_roots = 6;
  long double max_visits = 5e10L;
};

struct VerifyRow {
  Rational t;
  Complex series;
  long double tail_bound = 0;
  Complex extrapolant;
  double extrapolation_error = 0;
};

struct LimitVerification {
  FiniteSumResult finite;
  std::vector<VerifyRow> rows;
  Complex extrapolant;
  double extrapolation_error = 0;
  Rational cutoff;
  std::size_t series_terms = 0;
  double abs_error = 0;
  bool converged = false;
  bool pass = false;
};

/// Evaluates the block along the schedule, extrapolates to t = 0 and compares
/// with radial_limit_finite_sum. converged is false when the extrapolation
/// error estimate exceeds the tolerance.
LimitVerification verify_limit(const RootSystem& rs, const SeifertData& data, std::int64_t k,
                               const VerifyOptions& opt = {});

}  // namespace qblocks
