#pragma once

// Root systems of complex simple Lie algebras with the inner product scaled
// so that long roots have squared length 2, plus the weight/root lattice
// quotients the finite sums run over. Everything here is exact.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qblocks/rational.hpp"

namespace qblocks {

using IntVector = std::vector<std::int64_t>;
using IntMatrix = std::vector<IntVector>;

struct CartanLabel {
  char family = 'A';
  int rank = 1;

  /// Parses "A2", "E8", ... Throws ValidationError naming the label.
  static CartanLabel parse(std::string_view text);
  /// Throws ValidationError when the family/rank pair is not a simple type.
  void validate() const;
  std::string str() const;
  bool operator==(const CartanLabel&) const = default;
};

struct RootSystem {
  CartanLabel label;
  /// a_ij = 2<alpha_i, alpha_j> / <alpha_j, alpha_j>
  IntMatrix cartan;
  /// Simple roots in fundamental-weight coordinates (rows of the Cartan matrix).
  std::vector<std::vector<Rational>> simple_roots;
  /// Positive roots as simple-root coefficient vectors, ordered by height and
  /// then descending lexicographically (alpha_1 before alpha_2).
  std::vector<IntVector> positive_roots;
  QMatrix gram_simple;
  QMatrix gram_positive;
  /// <omega_i, omega_j>
  QMatrix gram_weights;
  /// |alpha_i|^2 / 2, the factor relating weight coordinates to pairings.
  std::vector<Rational> half_norms;
  std::vector<Rational> rho_coords;
  Rational rho_norm_sq;
  std::int64_t dim_g = 0;
  std::int64_t rank_h = 0;
  std::int64_t weyl_order = 0;
  std::int64_t index_XY = 0;
  bool simply_laced = false;

  std::size_t num_positive() const { return positive_roots.size(); }
};

RootSystem build_root_system(const CartanLabel& label);

struct WeylData {
  Rational rho_norm_sq;
  std::int64_t dim_g;
  std::int64_t weyl_order;
  std::int64_t index_XY;
};

WeylData weyl_data(const RootSystem& rs);

/// Orbit size of rho under the simple reflections; feasible for small ranks.
std::int64_t weyl_order_by_orbit(const RootSystem& rs);
/// Product of the degrees of the basic invariants.
std::int64_t weyl_order_from_degrees(const CartanLabel& label);

/// Root lattice Y inside the weight lattice X.
struct LatticePair {
  QMatrix gram_Y;          // Gram matrix in the simple-root basis
  IntMatrix basis_change_X;  // simple roots in fundamental-weight coordinates
  std::int64_t index_XY = 0;
};

LatticePair lattice_pair(const RootSystem& rs);

/// Coset representatives of Z^r / L for a full-rank sublattice L given by
/// integer generator rows. Representatives form the box prod [0, d_i) of the
/// Hermite normal form diagonal and are listed in lexicographic order, so an
/// index range [begin, end) is a well-defined disjoint slice.
class CosetEnumerator {
 public:
  static constexpr std::int64_t kDefaultCap = 100'000'000;

  CosetEnumerator(const IntMatrix& generators, std::int64_t cap = kDefaultCap);

  std::int64_t size() const { return size_; }
  std::size_t dimension() const { return diag_.size(); }
  /// Representative number `index` (0 <= index < size()).
  IntVector at(std::int64_t index) const;
  /// Reduces any integer vector to its canonical representative.
  IntVector reduce(IntVector v) const;
  /// Row-style Hermite normal form: upper triangular, positive diagonal.
  const IntMatrix& hnf() const { return hnf_; }

  template <class F>
  void for_each(std::int64_t begin, std::int64_t end, F&& f) const {
    IntVector v = at(begin);
    for (std::int64_t i = begin; i < end; ++i) {
      f(i, static_cast<const IntVector&>(v));
      for (std::size_t d = v.size(); d-- > 0;) {
        if (++v[d] < diag_[d]) break;
        v[d] = 0;
      }
    }
  }

 private:
  IntMatrix hnf_;
  IntVector diag_;
  std::int64_t size_ = 0;
};

/// Cosets of X / mY in fundamental-weight coordinates. Throws ResourceError
/// ("quotient too large") above `cap`.
CosetEnumerator enumerate_cosets(const LatticePair& pair, std::int64_t m,
                                 std::int64_t cap = CosetEnumerator::kDefaultCap);

/// <lambda, alpha> for lambda in weight coordinates and the indexed positive root.
Rational pairing(const RootSystem& rs, const IntVector& lambda, std::size_t root);
/// Same, for a root given by simple-root coefficients.
Rational pairing_with(const RootSystem& rs, const IntVector& lambda,
                      const IntVector& root_coeffs);
/// |lambda|^2 for lambda in weight coordinates.
Rational norm_sq(const RootSystem& rs, const IntVector& lambda);

/// Simple reflection s_i applied to a root in simple-root coordinates.
IntVector reflect_root(const RootSystem& rs, std::size_t i, const IntVector& root);
/// Gram matrix of an arbitrary list of roots (simple-root coordinates).
QMatrix gram_of(const RootSystem& rs, const std::vector<IntVector>& roots);

}  // namespace qblocks
