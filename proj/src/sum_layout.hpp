#pragma once

#include <cstdint>
#include <vector>

#include "qblocks/liealg.hpp"
#include "qblocks/seifert.hpp"

namespace qblocks::detail {

inline std::int64_t den_lcm(const QMatrix& m) {
  std::int64_t d = 1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) d = lcm64(d, to_int64(m(i, j).get_den()));
  return d;
}

// Integer data shared by the float and exact coset sums.
struct SumLayout {
  std::int64_t P, k;
  std::int64_t dx;                     // denominator of pairings
  std::int64_t dw;                     // denominator of |lambda|^2
  std::int64_t grid;                   // 2Pk dx: period of G in x*dx
  std::int64_t n_e;                    // 2Pk dw: order of e(-|lambda|^2/2Pk)
  std::vector<IntVector> root_weights; // x_alpha * dx = sum_j root_weights[a][j] lambda_j
  std::vector<IntVector> norm_form;    // |lambda|^2 * dw = lambda^T norm_form lambda

  SumLayout(const RootSystem& rs, const SeifertData& data, std::int64_t k_) : P(data.P), k(k_) {
    const std::size_t r = rs.cartan.size();
    dx = 1;
    for (const auto& h : rs.half_norms) dx = lcm64(dx, to_int64(h.get_den()));
    dw = den_lcm(rs.gram_weights);
    grid = 2 * P * k * dx;
    n_e = 2 * P * k * dw;
    for (const auto& root : rs.positive_roots) {
      IntVector w(r);
      for (std::size_t j = 0; j < r; ++j) w[j] = to_int64(Rational(rs.half_norms[j] * dx * root[j]).get_num());
      root_weights.push_back(w);
    }
    norm_form.assign(r, IntVector(r));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j)
        norm_form[i][j] = to_int64(Rational(rs.gram_weights(i, j) * dw).get_num());
  }

  std::int64_t pairing_num(std::size_t a, const IntVector& lam) const {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < lam.size(); ++j) s += root_weights[a][j] * lam[j];
    return s;
  }
  bool excluded(const IntVector& lam) const {
    for (std::size_t a = 0; a < root_weights.size(); ++a)
      if (mod64(pairing_num(a, lam), k * dx) == 0) return true;
    return false;
  }
  std::int64_t norm_num(const IntVector& lam) const {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < lam.size(); ++i)
      for (std::size_t j = 0; j < lam.size(); ++j) s += norm_form[i][j] * lam[i] * lam[j];
    return s;
  }
};

}  // namespace qblocks::detail
