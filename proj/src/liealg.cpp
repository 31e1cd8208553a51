#include "qblocks/liealg.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>

#include "qblocks/error.hpp"

namespace qblocks {

namespace {

constexpr int kMaxRank = 12;

// Simple-root Gram matrix, Bourbaki numbering, long roots of norm 2.
QMatrix simple_gram(const CartanLabel& label) {
  const std::size_t n = static_cast<std::size_t>(label.rank);
  QMatrix b(n, n);
  auto link = [&](std::size_t i, std::size_t j, Rational v) {
    b(i, j) = v;
    b(j, i) = v;
  };
  switch (label.family) {
    case 'A':
      for (std::size_t i = 0; i < n; ++i) b(i, i) = 2;
      for (std::size_t i = 0; i + 1 < n; ++i) link(i, i + 1, -1);
      break;
    case 'B':
      for (std::size_t i = 0; i < n; ++i) b(i, i) = 2;
      b(n - 1, n - 1) = 1;
      for (std::size_t i = 0; i + 1 < n; ++i) link(i, i + 1, -1);
      break;
    case 'C':
      for (std::size_t i = 0; i < n; ++i) b(i, i) = 1;
      b(n - 1, n - 1) = 2;
      for (std::size_t i = 0; i + 2 < n; ++i) link(i, i + 1, make_rational(-1, 2));
      link(n - 2, n - 1, -1);
      break;
    case 'D':
      for (std::size_t i = 0; i < n; ++i) b(i, i) = 2;
      for (std::size_t i = 0; i + 2 < n; ++i) link(i, i + 1, -1);
      link(n - 3, n - 1, -1);
      break;
    case 'E':
      for (std::size_t i = 0; i < n; ++i) b(i, i) = 2;
      link(0, 2, -1);
      link(1, 3, -1);
      for (std::size_t i = 2; i + 1 < n; ++i) link(i, i + 1, -1);
      break;
    case 'F':
      b(0, 0) = 2;
      b(1, 1) = 2;
      b(2, 2) = 1;
      b(3, 3) = 1;
      link(0, 1, -1);
      link(1, 2, -1);
      link(2, 3, make_rational(-1, 2));
      break;
    case 'G':
      b(0, 0) = make_rational(2, 3);
      b(1, 1) = 2;
      link(0, 1, -1);
      break;
    default:
      break;
  }
  return b;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out))
    throw std::overflow_error("integer overflow in lattice data");
  return out;
}

std::int64_t factorial(int n) {
  std::int64_t f = 1;
  for (int i = 2; i <= n; ++i) f = checked_mul(f, i);
  return f;
}

// Row-style Hermite normal form over Z with big-integer intermediates.
std::vector<std::vector<Integer>> hermite(std::vector<std::vector<Integer>> a,
                                          std::size_t cols) {
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < a.size(); ++c) {
    while (true) {
      std::size_t pivot = a.size();
      for (std::size_t i = row; i < a.size(); ++i) {
        if (a[i][c] != 0 && (pivot == a.size() || abs(a[i][c]) < abs(a[pivot][c])))
          pivot = i;
      }
      if (pivot == a.size()) break;
      std::swap(a[row], a[pivot]);
      bool clean = true;
      for (std::size_t i = row + 1; i < a.size(); ++i) {
        if (a[i][c] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a[i][c].get_mpz_t(), a[row][c].get_mpz_t());
        for (std::size_t j = c; j < cols; ++j) a[i][j] -= q * a[row][j];
        if (a[i][c] != 0) clean = false;
      }
      if (clean) break;
    }
    if (row >= a.size() || a[row][c] == 0) continue;
    if (a[row][c] < 0)
      for (auto& x : a[row]) x = -x;
    for (std::size_t i = 0; i < row; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), a[i][c].get_mpz_t(), a[row][c].get_mpz_t());
      if (q != 0)
        for (std::size_t j = c; j < cols; ++j) a[i][j] -= q * a[row][j];
    }
    ++row;
  }
  a.resize(row);
  return a;
}

}  // namespace

CartanLabel CartanLabel::parse(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  auto bad = [&] { return ValidationError("invalid Cartan label '" + std::string(text) + "'"); };
  if (s.size() < 2 || !std::isalpha(static_cast<unsigned char>(s[0]))) throw bad();
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw bad();
  if (s.size() > 4) throw bad();
  CartanLabel label;
  label.family = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  label.rank = std::stoi(s.substr(1));
  try {
    label.validate();
  } catch (const ValidationError&) {
    throw bad();
  }
  return label;
}

void CartanLabel::validate() const {
  bool ok = false;
  switch (family) {
    case 'A': ok = rank >= 1; break;
    case 'B': ok = rank >= 2; break;
    case 'C': ok = rank >= 3; break;
    case 'D': ok = rank >= 4; break;
    case 'E': ok = rank >= 6 && rank <= 8; break;
    case 'F': ok = rank == 4; break;
    case 'G': ok = rank == 2; break;
    default: break;
  }
  if (!ok) throw ValidationError("invalid Cartan label '" + str() + "'");
  if (rank > kMaxRank)
    throw ValidationError("Cartan label '" + str() + "' exceeds the supported rank " +
                          std::to_string(kMaxRank));
}

std::string CartanLabel::str() const { return std::string(1, family) + std::to_string(rank); }

RootSystem build_root_system(const CartanLabel& label) {
  label.validate();
  RootSystem rs;
  rs.label = label;
  const std::size_t n = static_cast<std::size_t>(label.rank);
  rs.gram_simple = simple_gram(label);

  rs.cartan.assign(n, IntVector(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational a = 2 * rs.gram_simple(i, j) / rs.gram_simple(j, j);
      rs.cartan[i][j] = to_int64(a.get_num());
    }
  rs.simple_roots.assign(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rs.simple_roots[i][j] = rs.cartan[i][j];

  rs.half_norms.resize(n);
  QMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    rs.half_norms[i] = rs.gram_simple(i, i) / 2;
    d(i, i) = rs.half_norms[i];
  }
  rs.gram_weights = d * rs.gram_simple.inverse() * d;

  // Closure under simple reflections; s_i permutes the positive roots other
  // than alpha_i, so every positive root is reached from a simple one.
  std::set<IntVector> seen;
  std::deque<IntVector> queue;
  for (std::size_t i = 0; i < n; ++i) {
    IntVector e(n, 0);
    e[i] = 1;
    seen.insert(e);
    queue.push_back(e);
  }
  while (!queue.empty()) {
    IntVector beta = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < n; ++i) {
      IntVector img = reflect_root(rs, i, beta);
      bool positive = std::all_of(img.begin(), img.end(), [](std::int64_t c) { return c >= 0; });
      if (positive && seen.insert(img).second) queue.push_back(img);
    }
  }
  rs.positive_roots.assign(seen.begin(), seen.end());
  std::sort(rs.positive_roots.begin(), rs.positive_roots.end(),
            [](const IntVector& a, const IntVector& b) {
              std::int64_t ha = 0, hb = 0;
              for (auto c : a) ha += c;
              for (auto c : b) hb += c;
              if (ha != hb) return ha < hb;
              return a > b;
            });

  rs.gram_positive = gram_of(rs, rs.positive_roots);

  rs.rho_coords.assign(n, Rational(0));
  for (const auto& root : rs.positive_roots)
    for (std::size_t j = 0; j < n; ++j) rs.rho_coords[j] += make_rational(root[j], 2);
  rs.rho_norm_sq = rs.gram_simple.bilinear(rs.rho_coords, rs.rho_coords);

  rs.rank_h = static_cast<std::int64_t>(n);
  rs.dim_g = rs.rank_h + 2 * static_cast<std::int64_t>(rs.positive_roots.size());
  rs.simply_laced = label.family == 'A' || label.family == 'D' || label.family == 'E';

  QMatrix cm(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cm(i, j) = rs.cartan[i][j];
  rs.index_XY = to_int64(cm.determinant().get_num());
  rs.weyl_order = n <= 4 ? weyl_order_by_orbit(rs) : weyl_order_from_degrees(label);
  return rs;
}

WeylData weyl_data(const RootSystem& rs) {
  return {rs.rho_norm_sq, rs.dim_g, rs.weyl_order, rs.index_XY};
}

std::int64_t weyl_order_by_orbit(const RootSystem& rs) {
  // rho is regular, so its orbit is in bijection with W.
  const std::size_t n = rs.cartan.size();
  IntVector rho(n, 1);
  std::set<IntVector> orbit{rho};
  std::deque<IntVector> queue{rho};
  while (!queue.empty()) {
    IntVector lam = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < n; ++i) {
      IntVector img = lam;
      for (std::size_t j = 0; j < n; ++j) img[j] -= lam[i] * rs.cartan[i][j];
      if (orbit.insert(img).second) queue.push_back(img);
    }
  }
  return static_cast<std::int64_t>(orbit.size());
}

std::int64_t weyl_order_from_degrees(const CartanLabel& label) {
  const int n = label.rank;
  switch (label.family) {
    case 'A': return factorial(n + 1);
    case 'B':
    case 'C': return checked_mul(std::int64_t{1} << n, factorial(n));
    case 'D': return checked_mul(std::int64_t{1} << (n - 1), factorial(n));
    case 'E': return n == 6 ? 51840 : n == 7 ? 2903040 : 696729600;
    case 'F': return 1152;
    case 'G': return 12;
    default: throw ValidationError("invalid Cartan label '" + label.str() + "'");
  }
}

LatticePair lattice_pair(const RootSystem& rs) {
  return {rs.gram_simple, rs.cartan, rs.index_XY};
}

CosetEnumerator::CosetEnumerator(const IntMatrix& generators, std::int64_t cap) {
  if (generators.empty()) throw std::invalid_argument("no lattice generators");
  const std::size_t cols = generators.front().size();
  std::vector<std::vector<Integer>> a;
  for (const auto& row : generators) {
    if (row.size() != cols) throw std::invalid_argument("ragged generator matrix");
    std::vector<Integer> r;
    for (auto x : row) r.push_back(make_integer(x));
    a.push_back(std::move(r));
  }
  auto h = hermite(std::move(a), cols);
  if (h.size() != cols) throw std::invalid_argument("sublattice is not of full rank");
  Integer count = 1;
  for (std::size_t i = 0; i < cols; ++i) {
    if (h[i][i] == 0) throw std::invalid_argument("sublattice is not of full rank");
    count *= h[i][i];
  }
  if (count > make_integer(cap))
    throw ResourceError("quotient too large: " + count.get_str() + " cosets exceed the cap " +
                        std::to_string(cap));
  size_ = to_int64(count);
  hnf_.assign(cols, IntVector(cols));
  diag_.resize(cols);
  for (std::size_t i = 0; i < cols; ++i) {
    for (std::size_t j = 0; j < cols; ++j) hnf_[i][j] = to_int64(h[i][j]);
    diag_[i] = hnf_[i][i];
  }
}

IntVector CosetEnumerator::at(std::int64_t index) const {
  if (index < 0 || index > size_) throw std::out_of_range("coset index out of range");
  IntVector v(diag_.size());
  for (std::size_t d = diag_.size(); d-- > 0;) {
    v[d] = index % diag_[d];
    index /= diag_[d];
  }
  return v;
}

IntVector CosetEnumerator::reduce(IntVector v) const {
  if (v.size() != diag_.size()) throw std::invalid_argument("dimension mismatch");
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::int64_t q = v[i] >= 0 ? v[i] / diag_[i] : -((-v[i] + diag_[i] - 1) / diag_[i]);
    if (q == 0) continue;
    for (std::size_t j = i; j < v.size(); ++j) v[j] -= q * hnf_[i][j];
  }
  return v;
}

CosetEnumerator enumerate_cosets(const LatticePair& pair, std::int64_t m, std::int64_t cap) {
  if (m < 1) throw ValidationError("coset modulus must be positive, got " + std::to_string(m));
  const std::size_t r = pair.basis_change_X.size();
  Integer expected = make_integer(pair.index_XY);
  for (std::size_t i = 0; i < r; ++i) expected *= m;
  if (expected > make_integer(cap))
    throw ResourceError("quotient too large: " + expected.get_str() +
                        " cosets exceed the cap " + std::to_string(cap));
  IntMatrix gens = pair.basis_change_X;
  for (auto& row : gens)
    for (auto& x : row) x = checked_mul(x, m);
  return CosetEnumerator(gens, cap);
}

Rational pairing(const RootSystem& rs, const IntVector& lambda, std::size_t root) {
  return pairing_with(rs, lambda, rs.positive_roots.at(root));
}

Rational pairing_with(const RootSystem& rs, const IntVector& lambda,
                      const IntVector& root_coeffs) {
  Rational out = 0;
  for (std::size_t j = 0; j < lambda.size(); ++j)
    if (root_coeffs[j] != 0 && lambda[j] != 0)
      out += rs.half_norms[j] * (root_coeffs[j] * lambda[j]);
  return out;
}

Rational norm_sq(const RootSystem& rs, const IntVector& lambda) {
  std::vector<Rational> v(lambda.begin(), lambda.end());
  return rs.gram_weights.bilinear(v, v);
}

IntVector reflect_root(const RootSystem& rs, std::size_t i, const IntVector& root) {
  std::int64_t c = 0;
  for (std::size_t j = 0; j < root.size(); ++j) c += root[j] * rs.cartan[j][i];
  IntVector out = root;
  out[i] -= c;
  return out;
}

QMatrix gram_of(const RootSystem& rs, const std::vector<IntVector>& roots) {
  QMatrix s(roots.size(), roots.size());
  for (std::size_t a = 0; a < roots.size(); ++a)
    for (std::size_t b = a; b < roots.size(); ++b) {
      Rational v = 0;
      for (std::size_t i = 0; i < roots[a].size(); ++i) {
        if (roots[a][i] == 0) continue;
        for (std::size_t j = 0; j < roots[b].size(); ++j)
          if (roots[b][j] != 0) v += rs.gram_simple(i, j) * (roots[a][i] * roots[b][j]);
      }
      s(a, b) = v;
      s(b, a) = v;
    }
  return s;
}

}  // namespace qblocks
