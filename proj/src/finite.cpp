#include "qblocks/finite.hpp"

#include <cmath>
#include <map>

#include "qblocks/error.hpp"
#include "qblocks/parallel.hpp"
#include "sum_layout.hpp"

namespace qblocks {

using detail::SumLayout;

namespace {

Integer ipow(std::int64_t base, std::int64_t e) {
  Integer out = 1;
  for (std::int64_t i = 0; i < e; ++i) out *= make_integer(base);
  return out;
}

Real real_sqrt_int(const Integer& n, Precision prec) { return sqrt(Real(n, prec)); }

struct FloatTables {
  std::vector<Real> g;        // indexed by x*dx mod grid; unused at poles
  std::vector<Complex> e;     // e(-j/n_e)

  FloatTables(const SumLayout& L, const SeifertData& data, Precision prec) {
    g.reserve(static_cast<std::size_t>(L.grid));
    for (std::int64_t j = 0; j < L.grid; ++j) {
      if (j % (L.k * L.dx) == 0) {
        g.emplace_back(prec);
        continue;
      }
      g.push_back(g_at_root(make_rational(j, L.dx), L.k, data, prec).re());
    }
    e.reserve(static_cast<std::size_t>(L.n_e));
    for (std::int64_t j = 0; j < L.n_e; ++j) e.push_back(unit_root(make_rational(-j, L.n_e), prec));
  }
};

struct Partial {
  Complex sum;
  std::int64_t excluded = 0;
};

Complex weyl_factor(const RootSystem& rs, Precision prec, bool sqrt_index) {
  // (-1)^{|D+|} [X:Y] zeta_8^{dim g} / |W|, or with sqrt([X:Y])
  Real mag = sqrt_index ? sqrt(Real(static_cast<long>(rs.index_XY), prec))
                        : Real(static_cast<long>(rs.index_XY), prec);
  mag /= Real(static_cast<long>(rs.weyl_order), prec);
  if (rs.num_positive() % 2) mag = -mag;
  return unit_root(make_rational(rs.dim_g, 8), prec) * mag;
}

Complex phase_prefactor(const RootSystem& rs, const SeifertData& data, std::int64_t k, Precision prec) {
  Rational expo = -Rational(rs.dim_g) * phi_invariant(data) * rs.rho_norm_sq / (2 * k);
  return unit_root(expo, prec);
}

}  // namespace

QuadraticLattice root_lattice(const RootSystem& rs) {
  return {rs.gram_simple, rs.label.str() + " root lattice"};
}

GaussSumResult gauss_sum(const QuadraticLattice& L, std::int64_t k, GaussMode mode, Precision prec,
                         bool exact, std::int64_t cap) {
  if (k < 1) throw ValidationError("level k must be positive");
  const QMatrix& G = L.gram;
  const std::size_t r = G.rows();
  if (!G.is_symmetric() || !G.is_positive_definite())
    throw ValidationError("Gauss sum needs a positive definite symmetric Gram matrix");
  GaussSumResult out;
  if (mode == GaussMode::closed) {
    Rational detq = G.determinant();
    Real root_det = sqrt(Real(detq, prec));
    Complex unit = unit_root(make_rational(-static_cast<std::int64_t>(r), 8), prec);
    Real mag = root_det * pow(sqrt(Real(static_cast<long>(k), prec)), static_cast<long>(r));
    out.value = unit * mag;
    if (exact) {
      if (!is_integer(detq)) throw ValidationError("exact closed form needs an integral discriminant");
      CyclotomicNumber v = (sqrt_integer(k) * CyclotomicNumber::root_power(-1, 8)).pow(static_cast<long>(r)) *
                           sqrt_integer(to_int64(detq.get_num()));
      out.exact = v;
    }
    return out;
  }

  // Evenness: Q integral on e_i and e_i + e_j.
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j) {
      std::vector<Rational> v(r, Rational(0));
      v[i] += 1;
      if (j != i) v[j] += 1;
      Rational q = G.bilinear(v, v) / 2;
      if (!is_integer(q)) {
        std::string w;
        for (std::size_t t = 0; t < r; ++t) w += (t ? "," : "") + to_string(v[t]);
        throw ValidationError("evenness violated for " + L.name + ": Q(" + w + ") = " + to_string(q));
      }
    }
  IntMatrix gi(r, IntVector(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) gi[i][j] = to_int64(G(i, j).get_num());
  const std::int64_t det = to_int64(G.determinant().get_num());
  QMatrix adjq = G.inverse() * Rational(det);
  IntMatrix adj(r, IntVector(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) adj[i][j] = to_int64(adjq(i, j).get_num());
  IntMatrix gens = gi;
  for (auto& row : gens)
    for (auto& x : row) x *= k;
  CosetEnumerator en(gens, cap);
  const std::int64_t N = 2 * k * det;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(N), 0);
  en.for_each(0, en.size(), [&](std::int64_t, const IntVector& y) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) s += adj[i][j] * y[i] * y[j];
    ++counts[static_cast<std::size_t>(mod64(-s, N))];
  });
  out.terms = en.size();
  Real re(prec), im(prec);
  for (std::int64_t j = 0; j < N; ++j) {
    if (!counts[static_cast<std::size_t>(j)]) continue;
    Complex u = unit_root(make_rational(j, N), prec);
    Real c(static_cast<long>(counts[static_cast<std::size_t>(j)]), prec);
    re += c * u.re();
    im += c * u.im();
  }
  out.value = Complex(re, im);
  if (exact) {
    RootSum acc(N);
    for (std::int64_t j = 0; j < N; ++j)
      if (counts[static_cast<std::size_t>(j)]) acc.add(j, Rational(make_integer(counts[static_cast<std::size_t>(j)])));
    out.exact = acc.reduce();
  }
  return out;
}

Complex g_at_root(const Rational& x, std::int64_t k, const SeifertData& data, Precision prec) {
  Rational xk = x / k;
  if (is_integer(xk)) throw ValidationError("pole at excluded point: x = " + to_string(x) + " is 0 mod k");
  // (2i)^n / (2i)^{n-2} = -4, so G is real here.
  const Real pi_x = pi(prec) * Real(xk, prec);
  Real num(-4.0, prec);
  for (const auto& pr : data.pairs) num *= sin(pi_x / Real(static_cast<long>(pr.p), prec));
  Real den = pow(sin(pi_x), static_cast<long>(data.n()) - 2);
  return Complex(num / den, Real(prec));
}

CyclotomicNumber g_at_root_exact(const Rational& x, std::int64_t k, const SeifertData& data) {
  if (is_integer(Rational(x / k)))
    throw ValidationError("pole at excluded point: x = " + to_string(x) + " is 0 mod k");
  const std::int64_t dx = to_int64(x.get_den());
  const std::int64_t N = 2 * data.P * k * dx;
  const std::int64_t j = to_int64(x.get_num());
  auto diff = [&](std::int64_t a) {
    return CyclotomicNumber::root_power(a, N) - CyclotomicNumber::root_power(-a, N);
  };
  CyclotomicNumber num = CyclotomicNumber::rational(1, N);
  for (const auto& pr : data.pairs) num = num * diff(j * (data.P / pr.p));
  CyclotomicNumber den = diff(j * data.P).pow(static_cast<long>(data.n()) - 2);
  return num / den;
}

bool in_M(const IntVector& lambda, std::int64_t k, const RootSystem& rs) {
  for (std::size_t a = 0; a < rs.num_positive(); ++a) {
    Rational x = pairing(rs, lambda, a) / k;
    if (is_integer(x)) return true;
  }
  return false;
}

Complex limit_prefactor(const RootSystem& rs, const SeifertData& data, std::int64_t k, Precision prec) {
  const long r = static_cast<long>(rs.rank_h);
  Complex z = phase_prefactor(rs, data, k, prec) * unit_root(make_rational(r, 8), prec);
  Integer denom_sq = ipow(k, r) * ipow(data.P, r) * make_integer(rs.index_XY);
  return z / real_sqrt_int(denom_sq, prec);
}

std::optional<CyclotomicNumber> limit_prefactor_exact(const RootSystem& rs, const SeifertData& data,
                                                      std::int64_t k, std::int64_t order_cap) {
  const long r = static_cast<long>(rs.rank_h);
  Rational expo = -Rational(rs.dim_g) * phi_invariant(data) * rs.rho_norm_sq / (2 * k);
  Integer sq = ipow(k, r) * ipow(data.P, r) * make_integer(rs.index_XY);
  if (!sq.fits_slong_p()) return std::nullopt;
  const std::int64_t den = to_int64(expo.get_den());
  Rational frac = expo - Rational(floor(expo));
  CyclotomicNumber phase = CyclotomicNumber::root_power(to_int64(Rational(frac * den).get_num()), den);
  CyclotomicNumber root = sqrt_integer(to_int64(sq));
  const std::int64_t order = lcm64(lcm64(den, 8), root.order());
  if (order > order_cap) return std::nullopt;
  return phase * CyclotomicNumber::root_power(r, 8) * root.inverse();
}

Complex finite_summand(const RootSystem& rs, const SeifertData& data, std::int64_t k,
                       const IntVector& lambda, Precision prec) {
  if (in_M(lambda, k, rs)) throw ValidationError("summand requested at a weight in M");
  Complex v = unit_root(-norm_sq(rs, lambda) / (2 * data.P * k), prec);
  for (std::size_t a = 0; a < rs.num_positive(); ++a) v = v * g_at_root(pairing(rs, lambda, a), k, data, prec);
  return v;
}

namespace {

FiniteSumResult run_sum(const RootSystem& rs, const SeifertData& data, std::int64_t k,
                        const CosetEnumerator* en, const std::vector<IntVector>* reps,
                        const FiniteSumOptions& opt) {
  if (k < 1) throw ValidationError("level k must be positive");
  const Precision prec = opt.precision;
  SumLayout L(rs, data, k);
  FloatTables tab(L, data, prec);
  const std::int64_t total = en ? en->size() : static_cast<std::int64_t>(reps->size());
  const std::size_t d = rs.num_positive();

  constexpr std::int64_t kChunk = 1024;
  const std::int64_t chunks = (total + kChunk - 1) / kChunk;
  std::vector<Partial> parts(static_cast<std::size_t>(chunks), Partial{Complex(prec), 0});
  parallel_for(chunks, opt.workers, [&](std::int64_t c) {
    const std::int64_t begin = c * kChunk, end = std::min(total, begin + kChunk);
    Real re(prec), im(prec), g(prec);
    std::int64_t excl = 0;
    auto visit = [&](std::int64_t, const IntVector& lam) {
      if (L.excluded(lam)) {
        ++excl;
        return;
      }
      mpfr_set_ui(g.get(), 1, MPFR_RNDN);
      for (std::size_t a = 0; a < d; ++a) {
        const std::int64_t x = mod64(L.pairing_num(a, lam), L.grid);
        if (x % (k * L.dx) == 0) throw std::logic_error("pole outside M");
        mpfr_mul(g.get(), g.get(), tab.g[static_cast<std::size_t>(x)].get(), MPFR_RNDN);
      }
      const Complex& u = tab.e[static_cast<std::size_t>(mod64(L.norm_num(lam), L.n_e))];
      mpfr_fma(re.get(), g.get(), u.re().get(), re.get(), MPFR_RNDN);
      mpfr_fma(im.get(), g.get(), u.im().get(), im.get(), MPFR_RNDN);
    };
    if (en) {
      en->for_each(begin, end, visit);
    } else {
      for (std::int64_t i = begin; i < end; ++i) visit(i, (*reps)[static_cast<std::size_t>(i)]);
    }
    parts[static_cast<std::size_t>(c)] = Partial{Complex(std::move(re), std::move(im)), excl};
  });
  Partial sum = tree_reduce(std::move(parts), Partial{Complex(prec), 0}, [](const Partial& a, const Partial& b) {
    return Partial{a.sum + b.sum, a.excluded + b.excluded};
  });

  FiniteSumResult out;
  out.algebra = rs.label.str();
  out.seifert = data.str();
  out.k = k;
  out.total_count = total;
  out.excluded_count = sum.excluded;
  out.raw_sum = sum.sum;
  out.value_float = limit_prefactor(rs, data, k, prec) * out.raw_sum;

  if (opt.exact) {
    const std::int64_t order = lcm64(L.grid, L.n_e);
    const long double phi = static_cast<long double>(euler_phi(order));
    const long double work = static_cast<long double>(total - out.excluded_count) *
                             (static_cast<long double>(d > 1 ? d - 1 : 0) * phi * phi + phi);
    if (order > opt.exact_order_cap) {
      out.exact_note = "exact path skipped: field order " + std::to_string(order) + " exceeds " +
                       std::to_string(opt.exact_order_cap);
    } else if (work > opt.exact_work_cap) {
      out.exact_note = "exact path skipped: estimated work " + std::to_string(static_cast<double>(work)) +
                       " exceeds the budget";
    } else {
      std::map<std::int64_t, CyclotomicNumber> gcache;
      RootSum acc(order);
      const std::int64_t e_scale = order / L.n_e;
      auto visit = [&](std::int64_t, const IntVector& lam) {
        if (L.excluded(lam)) return;
        CyclotomicNumber prod = CyclotomicNumber::rational(1, order);
        for (std::size_t a = 0; a < d; ++a) {
          const std::int64_t x = mod64(L.pairing_num(a, lam), L.grid);
          auto it = gcache.find(x);
          if (it == gcache.end())
            it = gcache.emplace(x, g_at_root_exact(make_rational(x, L.dx), k, data).lift(order)).first;
          prod = a == 0 ? it->second : prod * it->second;
        }
        acc.add_shifted(prod, -mod64(L.norm_num(lam), L.n_e) * e_scale);
      };
      if (en) {
        en->for_each(0, total, visit);
      } else {
        for (std::int64_t i = 0; i < total; ++i) visit(i, (*reps)[static_cast<std::size_t>(i)]);
      }
      out.raw_exact = acc.reduce();
      auto pre = limit_prefactor_exact(rs, data, k, opt.exact_order_cap);
      if (pre && lcm64(pre->order(), order) <= opt.exact_order_cap) {
        out.value_exact = *pre * *out.raw_exact;
      } else {
        out.exact_note = "exact prefactor skipped: field order exceeds " + std::to_string(opt.exact_order_cap);
      }
    }
  }
  return out;
}

}  // namespace

FiniteSumResult radial_limit_finite_sum(const RootSystem& rs, const SeifertData& data, std::int64_t k,
                                        const FiniteSumOptions& opt) {
  if (k < 1) throw ValidationError("level k must be positive");
  CosetEnumerator en = enumerate_cosets(lattice_pair(rs), k * data.P, opt.coset_cap);
  return run_sum(rs, data, k, &en, nullptr, opt);
}

FiniteSumResult finite_sum_over(const RootSystem& rs, const SeifertData& data, std::int64_t k,
                                const std::vector<IntVector>& reps, const FiniteSumOptions& opt) {
  return run_sum(rs, data, k, nullptr, &reps, opt);
}

void require_simply_laced(const RootSystem& rs) {
  if (!rs.simply_laced)
    throw ValidationError("simply-laced required: " + rs.label.str() +
                          " has roots of two lengths, and the WRT identification covers A, D, E only");
}

Complex wrt_marino(const RootSystem& rs, const SeifertData& data, std::int64_t k, const FiniteSumResult& sum,
                   Precision prec) {
  require_simply_laced(rs);
  return weyl_factor(rs, prec, false) * phase_prefactor(rs, data, k, prec) * sum.raw_sum;
}

Complex wrt_from_limit_prefactor(const RootSystem& rs, const SeifertData& data, std::int64_t k, Precision prec) {
  require_simply_laced(rs);
  const long r = static_cast<long>(rs.rank_h);
  Complex z = weyl_factor(rs, prec, false) * unit_root(make_rational(-r, 8), prec);
  Integer sq = ipow(k, r) * ipow(data.P, r) * make_integer(rs.index_XY);
  return z * real_sqrt_int(sq, prec);
}

Complex wrt_printed_prefactor(const RootSystem& rs, std::int64_t k, Precision prec) {
  const long r = static_cast<long>(rs.rank_h);
  Complex z = weyl_factor(rs, prec, true) * unit_root(make_rational(-r, 8), prec);
  return z * pow(sqrt(Real(static_cast<long>(k), prec)), r);
}

Complex wrt_from_limit(const RootSystem& rs, const SeifertData& data, std::int64_t k, const Complex& limit,
                       Precision prec) {
  return wrt_from_limit_prefactor(rs, data, k, prec) * limit;
}

}  // namespace qblocks
