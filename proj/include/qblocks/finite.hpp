#pragma once

// The finite-sum side: lattice Gauss sums, G at roots of unity, the coset sum
// over X/kPY minus M, and WRT invariants from Marino's formula.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qblocks/cyclotomic.hpp"
#include "qblocks/liealg.hpp"
#include "qblocks/mpreal.hpp"
#include "qblocks/seifert.hpp"

namespace qblocks {

/// A lattice L with Gram matrix in a chosen basis; Q(x) = x^T G x / 2.
struct QuadraticLattice {
  QMatrix gram;
  std::string name;
};

QuadraticLattice root_lattice(const RootSystem& rs);

enum class GaussMode { direct, closed };

struct GaussSumResult {
  Complex value;
  std::optional<CyclotomicNumber> exact;
  std::int64_t terms = 0;
};

/// G_k(L) = sum_{lambda in L*/kL} e(-Q(lambda)/k), or its closed form
/// (sqrt(k) zeta_8^{-1})^{rk L} sqrt([L*:L]). Direct mode rejects odd
/// lattices with a ValidationError naming a witness vector.
GaussSumResult gauss_sum(const QuadraticLattice& L, std::int64_t k, GaussMode mode,
                         Precision prec = kDefaultPrecision, bool exact = false,
                         std::int64_t cap = CosetEnumerator::kDefaultCap);

/// G(zeta_k^x) = prod_i 2i sin(pi x/(p_i k)) / (2i sin(pi x/k))^{n-2}.
/// Throws ValidationError("pole at excluded point") when x = 0 mod k.
Complex g_at_root(const Rational& x, std::int64_t k, const SeifertData& data, Precision prec);
/// The same value in Q(zeta_{2Pk * den(x)}).
CyclotomicNumber g_at_root_exact(const Rational& x, std::int64_t k, const SeifertData& data);

/// lambda (weight coordinates) lies in M when <lambda, alpha> is in kZ for
/// some positive root alpha.
bool in_M(const IntVector& lambda, std::int64_t k, const RootSystem& rs);

struct FiniteSumOptions {
  Precision precision = kDefaultPrecision;
  bool exact = false;
  std::int64_t exact_order_cap = 2000;
  /// Rough budget in rational multiplications for the exact path.
  long double exact_work_cap = 2e8L;
  std::int64_t coset_cap = CosetEnumerator::kDefaultCap;
  int workers = 1;
};

struct FiniteSumResult {
  std::string algebra;
  std::string seifert;
  std::int64_t k = 0;
  /// prefactor * raw_sum
  Complex value_float;
  /// sum_{lambda not in M} e(-|lambda|^2/2Pk) prod G(zeta_k^{<lambda,alpha>})
  Complex raw_sum;
  std::optional<CyclotomicNumber> value_exact;
  std::optional<CyclotomicNumber> raw_exact;
  /// Why the exact path was skipped, when it was requested.
  std::string exact_note;
  std::int64_t excluded_count = 0;
  std::int64_t total_count = 0;
};

/// Prefactor e(-dim(g) phi |rho|^2/2k) (zeta_8/sqrt k)^r (P^r [X:Y])^{-1/2}.
Complex limit_prefactor(const RootSystem& rs, const SeifertData& data, std::int64_t k,
                        Precision prec);
std::optional<CyclotomicNumber> limit_prefactor_exact(const RootSystem& rs, const SeifertData& data,
                                                      std::int64_t k, std::int64_t order_cap);

FiniteSumResult radial_limit_finite_sum(const RootSystem& rs, const SeifertData& data,
                                        std::int64_t k, const FiniteSumOptions& opt = {});
/// The same sum over an explicit list of representatives of X/kPY.
FiniteSumResult finite_sum_over(const RootSystem& rs, const SeifertData& data, std::int64_t k,
                                const std::vector<IntVector>& reps, const FiniteSumOptions& opt = {});

/// One summand e(-|lambda|^2/2Pk) prod G(zeta_k^{<lambda,alpha>}) for lambda outside M.
Complex finite_summand(const RootSystem& rs, const SeifertData& data, std::int64_t k,
                       const IntVector& lambda, Precision prec);

enum class WrtSource { marino, from_limit };

/// Marino: ((-1)^{|D+|} [X:Y] zeta_8^{dim g} / |W|) e(-dim(g) phi |rho|^2/2k) * raw_sum.
Complex wrt_marino(const RootSystem& rs, const SeifertData& data, std::int64_t k,
                   const FiniteSumResult& sum, Precision prec);
/// The factor turning lim Phi into tau_k so that it agrees with wrt_marino.
Complex wrt_from_limit_prefactor(const RootSystem& rs, const SeifertData& data, std::int64_t k,
                                 Precision prec);
/// ((-1)^{|D+|} sqrt([X:Y]) zeta_8^{dim g} / |W|) (sqrt(k) zeta_8^{-1})^r, as printed
/// alongside the formula; it differs from the consistent factor by [X:Y] P^{r/2}.
Complex wrt_printed_prefactor(const RootSystem& rs, std::int64_t k, Precision prec);

Complex wrt_from_limit(const RootSystem& rs, const SeifertData& data, std::int64_t k,
                       const Complex& limit, Precision prec);

/// Rejects non-simply-laced algebras.
void require_simply_laced(const RootSystem& rs);

}  // namespace qblocks
