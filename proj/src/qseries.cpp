#include "qblocks/qseries.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <unordered_map>

#include "qblocks/parallel.hpp"

namespace qblocks {

namespace {

Rational min_opt(const std::optional<Rational>& a, const std::optional<Rational>& b,
                 bool& any) {
  any = a || b;
  if (a && b) return std::min(*a, *b);
  return a ? *a : (b ? *b : Rational(0));
}

std::int64_t add_checked(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("coefficient overflow in block");
  return out;
}

std::int64_t mul_checked(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("coefficient overflow in block");
  return out;
}

Integer binomial(std::int64_t n, std::int64_t k) {
  Integer out;
  if (n < 0 || k < 0 || k > n) return 0;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

long double log_binomial(long double n, long double k) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// PuiseuxSeries

PuiseuxSeries::PuiseuxSeries(std::int64_t denom) : denom_(denom) {
  if (denom <= 0) throw std::invalid_argument("series denominator must be positive");
}

PuiseuxSeries PuiseuxSeries::monomial(const Rational& exponent, const Rational& coeff) {
  PuiseuxSeries s(to_int64(exponent.get_den()));
  s.add_term(exponent, coeff);
  return s;
}

void PuiseuxSeries::set_cutoff(std::optional<Rational> c) { cutoff_ = std::move(c); }

Rational PuiseuxSeries::coefficient(const Rational& exponent) const {
  Rational scaled = exponent * denom_;
  if (!is_integer(scaled)) return 0;
  auto it = terms_.find(to_int64(scaled.get_num()));
  return it == terms_.end() ? Rational(0) : it->second;
}

std::optional<Rational> PuiseuxSeries::leading_exponent() const {
  if (terms_.empty()) return std::nullopt;
  return exponent_of(terms_.begin()->first);
}

void PuiseuxSeries::add_term(const Rational& exponent, const Rational& coeff) {
  if (coeff == 0) return;
  std::int64_t need = lcm64(denom_, to_int64(exponent.get_den()));
  if (need != denom_) *this = with_denom(need);
  Rational scaled = exponent * denom_;
  add_numerator(to_int64(scaled.get_num()), coeff);
}

void PuiseuxSeries::add_numerator(std::int64_t num, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, fresh] = terms_.emplace(num, coeff);
  if (!fresh) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

PuiseuxSeries PuiseuxSeries::with_denom(std::int64_t denom) const {
  if (denom % denom_ != 0) throw std::invalid_argument("new denominator must be a multiple");
  const std::int64_t f = denom / denom_;
  PuiseuxSeries out(denom);
  for (const auto& [num, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), mul_checked(num, f), c);
  out.cutoff_ = cutoff_;
  out.tail = tail;
  out.prefactor_exponent = prefactor_exponent;
  return out;
}

PuiseuxSeries PuiseuxSeries::shifted(const Rational& s) const {
  std::int64_t d = lcm64(denom_, to_int64(s.get_den()));
  PuiseuxSeries out = with_denom(d);
  const std::int64_t delta = to_int64(Rational(s * d).get_num());
  Terms moved;
  for (const auto& [num, c] : out.terms_) moved.emplace_hint(moved.end(), add_checked(num, delta), c);
  out.terms_ = std::move(moved);
  if (out.cutoff_) *out.cutoff_ += s;
  return out;
}

PuiseuxSeries PuiseuxSeries::truncated(const Rational& c) const {
  PuiseuxSeries out(denom_);
  for (const auto& [num, coeff] : terms_) {
    if (exponent_of(num) > c) break;
    out.terms_.emplace_hint(out.terms_.end(), num, coeff);
  }
  out.cutoff_ = cutoff_ ? std::min(*cutoff_, c) : c;
  return out;
}

PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  std::int64_t d = lcm64(a.denom_, b.denom_);
  PuiseuxSeries out = a.with_denom(d);
  out.tail.reset();
  PuiseuxSeries bb = b.with_denom(d);
  for (const auto& [num, c] : bb.terms_) out.add_numerator(num, c);
  bool any = false;
  Rational c = min_opt(a.cutoff_, b.cutoff_, any);
  if (any) return out.truncated(c);
  out.cutoff_.reset();
  return out;
}

PuiseuxSeries operator*(const Rational& s, const PuiseuxSeries& a) {
  PuiseuxSeries out(a.denom_);
  out.cutoff_ = a.cutoff_;
  if (s == 0) return out;
  for (const auto& [num, c] : a.terms_) out.terms_.emplace_hint(out.terms_.end(), num, s * c);
  return out;
}

PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  return a + Rational(-1) * b;
}

PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  std::int64_t d = lcm64(a.denom_, b.denom_);
  PuiseuxSeries aa = a.with_denom(d), bb = b.with_denom(d);
  PuiseuxSeries out(d);
  // a = (known terms) + O(q^{>ca}), so a*b is exact up to ca + lead(b).
  std::optional<Rational> ca = a.cutoff_, cb = b.cutoff_;
  auto lead = [](const PuiseuxSeries& s) -> std::optional<Rational> {
    if (auto l = s.leading_exponent()) return l;
    return s.cutoff_;
  };
  std::optional<Rational> la = lead(a), lb = lead(b);
  if ((a.empty() && !ca) || (b.empty() && !cb)) return out;
  std::optional<Rational> bound;
  if (ca) bound = *ca + *lb;
  if (cb) bound = bound ? std::min(*bound, Rational(*cb + *la)) : Rational(*cb + *la);
  std::optional<std::int64_t> limit;
  if (bound) limit = to_int64(floor(*bound * d));
  for (const auto& [na, xa] : aa.terms_)
    for (const auto& [nb, xb] : bb.terms_) {
      std::int64_t n = add_checked(na, nb);
      if (limit && n > *limit) break;
      out.add_numerator(n, xa * xb);
    }
  out.cutoff_ = bound;
  return out;
}

bool operator==(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  std::int64_t d = lcm64(a.denom_, b.denom_);
  return a.with_denom(d).terms_ == b.with_denom(d).terms_ && a.cutoff_ == b.cutoff_;
}

// ---------------------------------------------------------------------------
// G and chi

PuiseuxSeries expand_G(const SeifertData& data, const Rational& cutoff) {
  const std::int64_t P = data.P;
  const std::int64_t m0 = m0_support(data);
  const Rational lead = make_rational(m0, 2 * P);
  if (cutoff < lead)
    throw ValidationError("cutoff " + to_string(cutoff) + " is below the leading exponent " +
                          to_string(lead));
  const std::int64_t D = 2 * P;
  const int n = static_cast<int>(data.n());

  // G = q^{m0/2P} prod (1 - q^{1/p_i}) (1 - q)^{-(n-2)}
  PuiseuxSeries poly(D);
  poly.add_numerator(0, 1);
  for (const auto& pr : data.pairs) {
    PuiseuxSeries factor(D);
    factor.add_numerator(0, 1);
    factor.add_numerator(D / pr.p, -1);
    poly = poly * factor;
  }
  const Rational room = cutoff - lead;
  const std::int64_t jmax = to_int64(floor(room));
  PuiseuxSeries geo(D);
  for (std::int64_t j = 0; j <= jmax; ++j) geo.add_numerator(j * D, Rational(binomial(j + n - 3, n - 3)));
  geo.set_cutoff(room);
  PuiseuxSeries g = (poly * geo).shifted(lead);
  return g.truncated(cutoff);
}

Rational chi_closed(std::int64_t m, const SeifertData& data) {
  const int n = static_cast<int>(data.n());
  const std::int64_t P = data.P;
  Integer total = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::int64_t num = m - P * (n - 2);
    int sign = (n % 2 == 0) ? 1 : -1;
    for (int i = 0; i < n; ++i) {
      bool plus = (mask >> i) & 1u;
      num -= (plus ? 1 : -1) * (P / data.pairs[static_cast<std::size_t>(i)].p);
      if (!plus) sign = -sign;
    }
    if (num < 0 || num % (2 * P) != 0) continue;
    total += sign * binomial(num / (2 * P) + n - 3, n - 3);
  }
  return Rational(total);
}

std::int64_t chi_int(std::int64_t m, const SeifertData& data) {
  return to_int64(chi_closed(m, data).get_num());
}

std::vector<std::pair<std::int64_t, std::int64_t>> chi_support(const SeifertData& data,
                                                               std::int64_t m_max) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  const std::int64_t m0 = m0_support(data);
  if (m_max < m0) return out;
  PuiseuxSeries g = expand_G(data, make_rational(m_max, 2 * data.P));
  if (g.denom() != 2 * data.P) g = g.with_denom(2 * data.P);
  for (const auto& [num, c] : g.terms()) out.emplace_back(num, to_int64(c.get_num()));
  return out;
}

// ---------------------------------------------------------------------------
// cone constant

Rational cone_constant(const QMatrix& S) {
  const std::size_t d = S.rows();
  if (d == 0 || d > 16) throw std::invalid_argument("cone constant needs 1..16 roots");
  std::optional<Rational> best;
  for (std::uint32_t mask = 1; mask < (1u << d); ++mask) {
    std::vector<std::size_t> face;
    for (std::size_t i = 0; i < d; ++i)
      if ((mask >> i) & 1u) face.push_back(i);
    const std::size_t f = face.size();
    QMatrix kkt(f + 1, f + 1);
    std::vector<Rational> rhs(f + 1, Rational(0));
    for (std::size_t i = 0; i < f; ++i) {
      for (std::size_t j = 0; j < f; ++j) kkt(i, j) = S(face[i], face[j]);
      kkt(i, f) = -1;
      kkt(f, i) = 1;
    }
    rhs[f] = 1;
    auto sol = solve(kkt, rhs);
    if (sol.empty()) continue;
    bool feasible = true;
    for (std::size_t i = 0; i < f; ++i)
      if (sol[i] < 0) feasible = false;
    if (!feasible) continue;
    const Rational& value = sol[f];
    if (!best || value < *best) best = value;
  }
  if (!best || *best <= 0) throw std::logic_error("cone constant is not positive; root data is broken");
  return *best;
}

Rational cone_constant(const RootSystem& rs) { return cone_constant(rs.gram_positive); }

// ---------------------------------------------------------------------------
// tail bound

long double TailModel::bound_at(long double t, const Rational& cutoff) const {
  const long double E = cutoff.get_d();
  const long double R = std::sqrt(8.0L * static_cast<long double>(P) * E);
  const long double d = dims;
  const long double twoP = 2.0L * static_cast<long double>(P);
  const long double log_eps = static_cast<long double>(fibers) * std::log(2.0L);
  const long double decay_from = (R + offset) / cone_c;
  long double s = std::max(0.0L, std::floor((R - offset) / max_root));
  long double log_sum = -std::numeric_limits<long double>::infinity();
  const long double shift_term = -t * static_cast<long double>(shift.get_d());
  long double prev = std::numeric_limits<long double>::infinity();
  for (std::int64_t iter = 0; iter < 200'000'000; ++iter, s += 1) {
    long double count = log_binomial(s + d - 1, d - 1);
    long double base = std::floor(s / twoP);
    long double chi = log_eps + log_binomial(base + fibers - 3, fibers - 3);
    long double reach = std::max(0.0L, cone_c * s - offset);
    long double expo = std::max(E, reach * reach / (8.0L * static_cast<long double>(P)));
    long double term = count + d * chi - t * expo + shift_term;
    if (term > log_sum) {
      log_sum = term + std::log1p(std::exp(log_sum - term));
    } else {
      log_sum = log_sum + std::log1p(std::exp(term - log_sum));
    }
    if (s > decay_from && term < prev && term < log_sum - 90.0L) return std::exp(log_sum);
    prev = term;
  }
  return std::numeric_limits<long double>::infinity();
}

Rational TailModel::required_cutoff(long double t, long double tol) const {
  Rational hi = std::max(inner_cutoff, Rational(1));
  while (bound_at(t, hi) > tol) {
    hi *= 2;
    if (hi > Rational(Integer(1) << 50)) throw ResourceError("no feasible cutoff for the requested tolerance");
  }
  Rational lo = hi / 2;
  if (bound_at(t, lo) <= tol) return Rational(floor(lo) + 1);
  for (int it = 0; it < 40 && hi - lo > std::max(Rational(1), Rational(hi / 1000)); ++it) {
    Rational mid = floor((lo + hi) / 2);
    if (bound_at(t, mid) <= tol) hi = mid; else lo = mid;
  }
  return Rational(-floor(-hi));
}

// ---------------------------------------------------------------------------
// homological block

Rational block_base_exponent(const RootSystem& rs, const SeifertData& data) {
  const std::int64_t m0 = m0_support(data);
  return make_rational(m0 * m0, 1) * 4 * rs.rho_norm_sq / (8 * data.P);
}

PuiseuxSeries homological_block(const RootSystem& rs, const SeifertData& data,
                                const BlockOptions& opt) {
  return homological_block_with_roots(rs, rs.positive_roots, data, opt);
}

PuiseuxSeries homological_block_with_roots(const RootSystem& rs,
                                           const std::vector<IntVector>& roots,
                                           const SeifertData& data, const BlockOptions& opt) {
  const std::size_t d = roots.size();
  if (d == 0) throw ValidationError("no roots to sum over");
  if (d > opt.max_roots)
    throw ResourceError("multi-index cap: " + std::to_string(d) + " positive roots exceed the cap " +
                        std::to_string(opt.max_roots));
  const QMatrix S = gram_of(rs, roots);
  const std::int64_t P = data.P;
  const std::int64_t m0 = m0_support(data);

  std::int64_t ls = 1;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) ls = lcm64(ls, to_int64(S(i, j).get_den()));
  std::vector<std::vector<std::int64_t>> si(d, std::vector<std::int64_t>(d));
  Rational total_norm = 0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      si[i][j] = to_int64(Rational(S(i, j) * ls).get_num());
      total_norm += S(i, j);
    }

  const Rational& E = opt.cutoff;
  const Rational base = make_rational(m0 * m0) * total_norm / (8 * P);
  if (E < base)
    throw ValidationError("cutoff " + to_string(E) + " is below the leading exponent " +
                          to_string(base));
  const std::int64_t D0 = mul_checked(8 * P, ls);
  const std::int64_t qmax = to_int64(floor(E * D0));

  const Rational c2 = cone_constant(S);
  Rational max_norm = 0;
  for (std::size_t i = 0; i < d; ++i) max_norm = std::max(max_norm, S(i, i));
  const long double c = std::sqrt(static_cast<long double>(c2.get_d()));
  const long double offset = std::fabs(static_cast<long double>(m0)) *
                             std::sqrt(static_cast<long double>(total_norm.get_d()));
  const long double R = std::sqrt(8.0L * P * static_cast<long double>(E.get_d()));
  const std::int64_t budget = static_cast<std::int64_t>(std::floor((R + offset) / c * (1 + 1e-12L))) + 2;

  const auto support = chi_support(data, m0 + budget);
  {
    long double density = support.empty() ? 0 : static_cast<long double>(support.size()) / budget;
    long double visits = 1;
    for (std::size_t i = 0; i < d; ++i) visits *= budget * density / static_cast<long double>(i + 1);
    if (visits > opt.max_visits)
      throw ResourceError("block enumeration too large: about " + std::to_string(static_cast<double>(visits)) +
                          " multi-indices");
  }
  std::vector<std::int64_t> ms, chis;
  for (const auto& [m, x] : support) {
    ms.push_back(m);
    chis.push_back(x);
  }
  const std::size_t ns = ms.size();

  const int workers = std::max(1, opt.workers);
  std::vector<std::unordered_map<std::int64_t, std::int64_t>> acc(static_cast<std::size_t>(workers));
  std::vector<std::int64_t> lead_tasks;
  for (std::size_t j = 0; j < ns && ms[j] - m0 <= budget; ++j) lead_tasks.push_back(static_cast<std::int64_t>(j));

  // Each worker pulls leading-coordinate values; integer sums make the merge
  // independent of which worker handled which value.
  std::atomic<std::int64_t> next{0};
  auto work = [&](std::size_t wid) {
    auto& map = acc[wid];
    std::vector<std::int64_t> lin(d * (d + 1), 0);
    std::function<void(std::size_t, std::int64_t, std::int64_t, std::int64_t)> rec =
        [&](std::size_t a, std::int64_t qpart, std::int64_t left, std::int64_t coef) {
          const std::int64_t* cur = &lin[a * d];
          const std::int64_t saa = si[a][a];
          if (a + 1 == d) {
            for (std::size_t j = 0; j < ns; ++j) {
              const std::int64_t v = ms[j];
              if (v - m0 > left) break;
              const std::int64_t q = qpart + v * v * saa + 2 * v * cur[a];
              if (q <= qmax) {
                auto& slot = map[q];
                slot = add_checked(slot, mul_checked(coef, chis[j]));
              } else if (v * saa + cur[a] > 0) {
                break;  // convex in v and already increasing
              }
            }
            return;
          }
          for (std::size_t j = 0; j < ns; ++j) {
            const std::int64_t v = ms[j];
            const std::int64_t u = v - m0;
            if (u > left) break;
            std::int64_t* nxt = &lin[(a + 1) * d];
            for (std::size_t b = 0; b < d; ++b) nxt[b] = cur[b] + si[a][b] * v;
            rec(a + 1, qpart + v * v * saa + 2 * v * cur[a], left - u, mul_checked(coef, chis[j]));
          }
        };
    while (true) {
      std::int64_t task = next.fetch_add(1);
      if (task >= static_cast<std::int64_t>(lead_tasks.size())) return;
      const std::size_t j = static_cast<std::size_t>(lead_tasks[static_cast<std::size_t>(task)]);
      const std::int64_t v = ms[j];
      std::fill(lin.begin(), lin.end(), 0);
      if (d == 1) {
        const std::int64_t q = v * v * si[0][0];
        if (q <= qmax) {
          auto& slot = map[q];
          slot = add_checked(slot, chis[j]);
        }
        continue;
      }
      for (std::size_t b = 0; b < d; ++b) lin[d + b] = si[0][b] * v;
      rec(1, v * v * si[0][0], budget - (v - m0), chis[j]);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    parallel_for(workers, workers, [&](std::int64_t w) { work(static_cast<std::size_t>(w)); });
  }

  std::map<std::int64_t, std::int64_t> merged;
  for (const auto& map : acc)
    for (const auto& [q, x] : map) {
      auto& slot = merged[q];
      slot = add_checked(slot, x);
    }

  Rational shift = 0;
  if (opt.include_prefactor)
    shift = -Rational(rs.dim_g) * phi_invariant(data) * rs.rho_norm_sq / 2;
  const std::int64_t D = lcm64(D0, to_int64(shift.get_den()));
  const std::int64_t scale = D / D0;
  const std::int64_t offset_num = to_int64(Rational(shift * D).get_num());
  PuiseuxSeries out(D);
  for (const auto& [q, x] : merged)
    if (x != 0) out.add_numerator(add_checked(mul_checked(q, scale), offset_num), Rational(make_integer(x)));
  out.set_cutoff(E + shift);
  out.prefactor_exponent = shift;

  TailModel tail;
  tail.dims = static_cast<int>(d);
  tail.fibers = static_cast<int>(data.n());
  tail.P = P;
  tail.cone_c = c;
  tail.offset = offset;
  tail.max_root = std::sqrt(static_cast<long double>(max_norm.get_d()));
  tail.inner_cutoff = E;
  tail.shift = shift;
  out.tail = tail;
  return out;
}

// ---------------------------------------------------------------------------
// radial evaluation

RadialValue evaluate_radial(const PuiseuxSeries& series, const RadialPoint& pt,
                            std::optional<long double> tolerance, int workers) {
  if (pt.k < 1) throw ValidationError("level k must be positive");
  if (pt.t.sign() <= 0) throw ValidationError("radial parameter t must be positive");
  const Precision prec = pt.precision_bits;
  Real tt = pt.t;
  mpfr_prec_round(tt.get(), prec, MPFR_RNDN);

  RadialValue out;
  const long double tl = static_cast<long double>(tt.to_double());
  if (series.tail) {
    out.tail_bound = series.tail->bound(tl);
  } else if (series.cutoff()) {
    out.tail_bound = std::numeric_limits<long double>::infinity();
  }
  if (tolerance && out.tail_bound > *tolerance) {
    Rational suggested = series.tail ? series.tail->required_cutoff(tl, *tolerance) : Rational(0);
    throw InsufficientCutoff("insufficient cutoff: tail bound " + std::to_string(static_cast<double>(out.tail_bound)) +
                                 " exceeds tolerance; suggested inner cutoff " + to_string(suggested),
                             suggested);
  }

  std::vector<std::int64_t> nums;
  std::vector<Real> coeffs;
  nums.reserve(series.size());
  for (const auto& [num, c] : series.terms()) {
    nums.push_back(num);
    coeffs.emplace_back(c, prec);
  }
  out.terms = nums.size();
  const std::int64_t D = series.denom();
  const std::int64_t period = mul_checked(D, pt.k);

  std::vector<Complex> table;
  const bool use_table = period <= (1 << 20);
  if (use_table) {
    table.reserve(static_cast<std::size_t>(period));
    for (std::int64_t j = 0; j < period; ++j) table.push_back(unit_root(make_rational(j, period), prec));
  }
  const Real Dr(static_cast<long>(D), prec);

  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (nums.size() + kChunk - 1) / kChunk;
  struct Partial {
    Complex sum;
    long double abs_sum;
  };
  std::vector<Partial> partials(chunks, Partial{Complex(prec), 0});
  parallel_for(static_cast<std::int64_t>(chunks), workers, [&](std::int64_t ci) {
    const std::size_t begin = static_cast<std::size_t>(ci) * kChunk;
    const std::size_t end = std::min(nums.size(), begin + kChunk);
    Real re(prec), im(prec), tmp(prec);
    long double abs_sum = 0;
    std::unordered_map<std::int64_t, Real> gap_factor;
    Real r = exp(-(tt * Real(static_cast<long>(nums[begin]), prec) / Dr));
    for (std::size_t i = begin; i < end; ++i) {
      if (i > begin) {
        const std::int64_t gap = nums[i] - nums[i - 1];
        auto it = gap_factor.find(gap);
        if (it == gap_factor.end())
          it = gap_factor.emplace(gap, exp(-(tt * Real(static_cast<long>(gap), prec) / Dr))).first;
        r *= it->second;
      }
      Complex u = use_table ? table[static_cast<std::size_t>(mod64(nums[i], period))]
                            : unit_root(make_rational(nums[i], period), prec);
      mpfr_mul(tmp.get(), r.get(), coeffs[i].get(), MPFR_RNDN);
      abs_sum += std::fabs(static_cast<long double>(tmp.to_double()));
      mpfr_fma(re.get(), tmp.get(), u.re().get(), re.get(), MPFR_RNDN);
      mpfr_fma(im.get(), tmp.get(), u.im().get(), im.get(), MPFR_RNDN);
    }
    partials[static_cast<std::size_t>(ci)] = Partial{Complex(std::move(re), std::move(im)), abs_sum};
  });
  Partial total = tree_reduce(std::move(partials), Partial{Complex(prec), 0},
                              [](const Partial& a, const Partial& b) {
                                return Partial{a.sum + b.sum, a.abs_sum + b.abs_sum};
                              });
  out.value = std::move(total.sum);
  out.rounding_bound = total.abs_sum * static_cast<long double>(kChunk + 64 + 4 * 64) *
                       std::ldexp(1.0L, -static_cast<int>(prec) + 2);
  return out;
}

}  // namespace qblocks
