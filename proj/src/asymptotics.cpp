#include "qblocks/asymptotics.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "qblocks/error.hpp"
#include "qblocks/parallel.hpp"
#include "sum_layout.hpp"

namespace qblocks {

using detail::SumLayout;

namespace {

bool is_zero(const Complex& z) { return z.re().is_zero() && z.im().is_zero(); }

long double magnitude(const Complex& z) {
  return std::hypot(static_cast<long double>(z.re().to_double()), static_cast<long double>(z.im().to_double()));
}

struct FamilyPartial {
  Complex sum;
  long double abs_sum = 0;
  std::int64_t terms = 0;
};

// Sum of e(-|lambda|^2/2Pk) prod_alpha G(zeta_k^{<lambda,alpha>} e^{-t_alpha})
// over the lambda accepted by `keep`.
template <class Keep>
PhiValue family_sum(const RootSystem& rs, const SeifertData& data, std::int64_t k, const std::vector<Complex>& t,
                    Precision prec, std::int64_t cap, Keep keep) {
  if (k < 1) throw ValidationError("level k must be positive");
  const std::size_t d = rs.num_positive();
  if (t.size() != d)
    throw ValidationError("expected " + std::to_string(d) + " offsets t_alpha, got " + std::to_string(t.size()));
  SumLayout L(rs, data, k);
  const Real two_pi = pi(prec) * Real(2L, prec);

  // gtab[a][x] = G(exp(2 pi i x/(dx k) - t_a)); poles only where t_a = 0 and k dx | x.
  std::vector<std::vector<Complex>> gtab(d);
  std::vector<std::vector<bool>> pole(d);
  for (std::size_t a = 0; a < d; ++a) {
    const bool at_zero = is_zero(t[a]);
    gtab[a].reserve(static_cast<std::size_t>(L.grid));
    pole[a].assign(static_cast<std::size_t>(L.grid), false);
    for (std::int64_t x = 0; x < L.grid; ++x) {
      if (at_zero && x % (k * L.dx) == 0) {
        pole[a][static_cast<std::size_t>(x)] = true;
        gtab[a].emplace_back(prec);
        continue;
      }
      Real ang = two_pi * Real(make_rational(x, L.dx * k), prec);
      Complex w(-t[a].re(), ang - t[a].im());
      gtab[a].push_back(g_at_log(w, data));
    }
  }
  std::vector<Complex> etab;
  etab.reserve(static_cast<std::size_t>(L.n_e));
  for (std::int64_t j = 0; j < L.n_e; ++j) etab.push_back(unit_root(make_rational(-j, L.n_e), prec));

  CosetEnumerator en = enumerate_cosets(lattice_pair(rs), k * data.P, cap);
  constexpr std::int64_t kChunk = 1024;
  const std::int64_t total = en.size();
  const std::int64_t chunks = (total + kChunk - 1) / kChunk;
  std::vector<FamilyPartial> parts(static_cast<std::size_t>(chunks), FamilyPartial{Complex(prec), 0, 0});
  for (std::int64_t c = 0; c < chunks; ++c) {
    FamilyPartial part{Complex(prec), 0, 0};
    en.for_each(c * kChunk, std::min(total, (c + 1) * kChunk), [&](std::int64_t, const IntVector& lam) {
      if (!keep(L, lam)) return;
      Complex v = etab[static_cast<std::size_t>(mod64(L.norm_num(lam), L.n_e))];
      for (std::size_t a = 0; a < d; ++a) {
        const auto x = static_cast<std::size_t>(mod64(L.pairing_num(a, lam), L.grid));
        if (pole[a][x]) throw ValidationError("evaluation exactly at a pole: t_alpha = 0 with <lambda,alpha> in kZ");
        v *= gtab[a][x];
      }
      part.abs_sum += magnitude(v);
      part.sum += v;
      ++part.terms;
    });
    parts[static_cast<std::size_t>(c)] = std::move(part);
  }
  FamilyPartial s = tree_reduce(std::move(parts), FamilyPartial{Complex(prec), 0, 0},
                                [](const FamilyPartial& a, const FamilyPartial& b) {
                                  return FamilyPartial{a.sum + b.sum, a.abs_sum + b.abs_sum, a.terms + b.terms};
                                });
  return {s.sum, Real(static_cast<double>(s.abs_sum), prec), s.terms};
}

// Polynomials in a few variables with rational coefficients.
using Mono = std::vector<int>;
using Poly = std::map<Mono, Rational>;

Poly poly_mul(const Poly& a, const Poly& b, const Mono& limit) {
  Poly out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Mono m(ma.size());
      bool ok = true;
      for (std::size_t i = 0; i < m.size(); ++i) {
        m[i] = ma[i] + mb[i];
        if (limit[i] >= 0 && m[i] > limit[i]) ok = false;
      }
      if (!ok) continue;
      Rational c = ca * cb;
      auto [it, fresh] = out.emplace(m, c);
      if (!fresh) it->second += c;
    }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

Rational factorial(int n) {
  Rational f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// int_0^oo y^s e^{-b y^2} dy = Gamma((s+1)/2) / (2 b^{(s+1)/2})
Real half_gaussian_moment(int s, const Rational& b, Precision prec) {
  Real h(make_rational(s + 1, 2), prec);
  Real g(prec);
  mpfr_gamma(g.get(), h.get(), MPFR_RNDN);
  Real lb = log(Real(b, prec));
  return g / (Real(2L, prec) * exp(h * lb));
}

}  // namespace

Complex g_at_log(const Complex& w, const SeifertData& data) {
  const Precision prec = w.precision();
  const Complex half = w * Real(0.5, prec);
  Complex den = sinh(half) * Real(2L, prec);
  if (is_zero(den)) throw ValidationError("evaluation exactly at a pole of G");
  Complex num(Real(1L, prec), Real(prec));
  for (const auto& pr : data.pairs) num *= sinh(half / Real(static_cast<long>(pr.p), prec)) * Real(2L, prec);
  return num / pow(den, static_cast<long>(data.n()) - 2);
}

PhiValue phi_family_eval(const RootSystem& rs, const SeifertData& data, const PhiFamilyPoint& pt,
                         std::int64_t cap) {
  for (auto a : pt.subset_A)
    if (a >= rs.num_positive()) throw ValidationError("subset index " + std::to_string(a) + " is not a positive root");
  const auto& A = pt.subset_A;
  return family_sum(rs, data, pt.k, pt.t, pt.precision_bits, cap, [&](const SumLayout& L, const IntVector& lam) {
    for (auto a : A)
      if (mod64(L.pairing_num(a, lam), L.k * L.dx) != 0) return false;
    return true;
  });
}

PhiValue phi_restricted(const RootSystem& rs, const SeifertData& data, std::int64_t k,
                        const std::vector<Complex>& t, Precision prec, std::int64_t cap) {
  return family_sum(rs, data, k, t, prec, cap,
                    [](const SumLayout& L, const IntVector& lam) { return !L.excluded(lam); });
}

Complex phi_inclusion_exclusion(const RootSystem& rs, const SeifertData& data, std::int64_t k,
                                const std::vector<Complex>& t, Precision prec, std::int64_t cap) {
  const std::size_t d = rs.num_positive();
  if (d > 12) throw ResourceError("too many subsets of positive roots for inclusion-exclusion");
  Complex total(prec);
  for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
    PhiFamilyPoint pt;
    pt.k = k;
    pt.t = t;
    pt.precision_bits = prec;
    for (std::size_t a = 0; a < d; ++a)
      if (mask & (1u << a)) pt.subset_A.push_back(a);
    Complex v = phi_family_eval(rs, data, pt, cap).value;
    if (pt.subset_A.size() % 2) total -= v;
    else total += v;
  }
  return total;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("slope fit needs at least two samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ZeroOrderFit fit_zero_order(const std::function<PhiValue(double, Precision)>& f, const std::vector<double>& ts,
                            Precision prec) {
  ZeroOrderFit fit;
  fit.ts = ts;
  std::vector<double> xs, ys;
  for (double t : ts) {
    PhiValue v = f(t, prec);
    PhiValue v2 = f(t, 2 * prec);
    const long double mag = magnitude(v.value), mag2 = magnitude(v2.value);
    const bool noise = magnitude(v.value - v2.value) > 1e-3L * mag2;
    fit.magnitudes.push_back(static_cast<double>(mag2));
    fit.noise.push_back(noise);
    if (!noise) {
      xs.push_back(t);
      ys.push_back(static_cast<double>(mag));
    }
  }
  if (xs.empty()) {
    fit.identically_zero = true;
    fit.order = std::numeric_limits<double>::infinity();
  } else if (xs.size() == 1) {
    fit.order = std::numeric_limits<double>::quiet_NaN();
  } else {
    fit.order = loglog_slope(xs, ys);
  }
  return fit;
}

ZeroOrderFit phi_zero_order(const RootSystem& rs, const SeifertData& data, std::int64_t k,
                            const std::vector<std::size_t>& A, const std::vector<double>& ts, Precision prec,
                            double other_t) {
  return fit_zero_order(
      [&](double t, Precision p) {
        PhiFamilyPoint pt;
        pt.k = k;
        pt.subset_A = A;
        pt.precision_bits = p;
        for (std::size_t a = 0; a < rs.num_positive(); ++a) {
          const bool in_A = std::find(A.begin(), A.end(), a) != A.end();
          pt.t.emplace_back(in_A ? t : other_t, 0.0, p);
        }
        return phi_family_eval(rs, data, pt);
      },
      ts, prec);
}

MomentResult gaussian_moment(const QMatrix& S, const std::vector<int>& m, Precision prec) {
  const std::size_t d = m.size();
  if (S.rows() != d || S.cols() != d) throw ValidationError("moment order vector does not match the Gram matrix");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < d; ++i) (m[i] >= 0 ? pos : neg).push_back(i);
  if (neg.size() > 2) throw ValidationError("at most two coordinates may carry antiderivatives");

  // H(y) = prod m_p! [x_p^{m_p}] exp(-R), R = Q restricted to terms with an x_p.
  Mono limit(d, -1);
  int total_pos = 0;
  for (auto p : pos) {
    limit[p] = m[p];
    total_pos += m[p];
  }
  Poly R;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      if (m[i] < 0 && m[j] < 0) continue;
      Rational c = i == j ? Rational(S(i, i) / 2) : Rational(S(i, j));
      if (c == 0) continue;
      Mono mono(d, 0);
      ++mono[i];
      ++mono[j];
      R[mono] += c;
    }
  Poly acc, power{{Mono(d, 0), Rational(1)}};
  for (int j = 0; j <= total_pos; ++j) {
    Rational w = factorial(j);
    w = (j % 2 ? Rational(-1) : Rational(1)) / w;
    for (const auto& [mono, c] : power) {
      bool match = true;
      for (auto p : pos)
        if (mono[p] != m[p]) match = false;
      if (!match) continue;
      Mono ymono(d, 0);
      for (auto n : neg) ymono[n] = mono[n];
      acc[ymono] += w * c;
    }
    power = poly_mul(power, R, limit);
  }
  Rational mfact = 1;
  for (auto p : pos) mfact *= factorial(m[p]);

  MomentResult out{Real(prec), 0, false};
  if (neg.empty()) {
    auto it = acc.find(Mono(d, 0));
    out.value = Real(it == acc.end() ? Rational(0) : Rational(mfact * it->second), prec);
    return out;
  }
  // prod_n (-1)^{j_n}/(j_n - 1)! times int over y >= 0 of prod y^{j_n - 1} H(y) e^{-Q(y)}.
  Rational sign_fact = mfact;
  for (auto n : neg) {
    const int j = -m[n];
    sign_fact /= factorial(j - 1);
    if (j % 2) sign_fact = -sign_fact;
  }
  if (neg.size() == 1) {
    const std::size_t n = neg[0];
    const Rational b = S(n, n) / 2;
    Real sum(prec);
    for (const auto& [mono, c] : acc) {
      if (c == 0) continue;
      sum += Real(c, prec) * half_gaussian_moment(mono[n] + (-m[n] - 1), b, prec);
    }
    out.value = Real(sign_fact, prec) * sum;
    return out;
  }
  const std::size_t n1 = neg[0], n2 = neg[1];
  const long double a11 = S(n1, n1).get_d() / 2, a12 = S(n1, n2).get_d(), a22 = S(n2, n2).get_d() / 2;
  std::vector<std::pair<std::pair<int, int>, long double>> terms;
  for (const auto& [mono, c] : acc)
    if (c != 0) terms.push_back({{mono[n1] - m[n1] - 1, mono[n2] - m[n2] - 1}, static_cast<long double>(c.get_d())});
  boost::math::quadrature::exp_sinh<long double> integrator;
  long double inner_err_max = 0;
  auto outer = [&](long double y1) {
    auto inner = [&](long double y2) {
      long double poly = 0;
      for (const auto& [e, c] : terms) poly += c * std::pow(y1, e.first) * std::pow(y2, e.second);
      return poly * std::exp(-(a11 * y1 * y1 + a12 * y1 * y2 + a22 * y2 * y2));
    };
    long double err = 0;
    long double v = integrator.integrate(inner, 1e-15L, &err);
    inner_err_max = std::max(inner_err_max, err);
    return v;
  };
  long double err = 0, l1 = 0;
  long double v = integrator.integrate(outer, 1e-14L, &err, &l1);
  out.error = std::fabs(sign_fact.get_d()) * (err + inner_err_max * (1 + l1));
  out.quadrature = true;
  if (!std::isfinite(v) || out.error > 1e-12L * std::max<long double>(1, std::fabs(v)))
    throw ConvergenceError("moment quadrature did not converge (error estimate " +
                           std::to_string(static_cast<double>(out.error)) + ")");
  out.value = Real(sign_fact, prec) * Real(static_cast<double>(v), prec);
  return out;
}

ExpansionResult expansion_rank1(const SeifertData& data, std::int64_t k, int order, const ExpansionOptions& opt) {
  if (order < 0) throw ValidationError("expansion order must be nonnegative");
  if (k < 1) throw ValidationError("level k must be positive");
  const Precision prec = opt.precision;
  const RootSystem rs = build_root_system(CartanLabel::parse("A1"));
  const int Nc = opt.circle_points;
  if (Nc < 8 || Nc % 2) throw ValidationError("circle_points must be even and at least 8");
  const double r = opt.radius.value_or(M_PI / static_cast<double>(k));
  const int L = opt.negative_orders;

  // phi_k on the circle |t| = r
  std::vector<Complex> samples(static_cast<std::size_t>(Nc), Complex(prec));
  const Real rr(r, prec);
  parallel_for(Nc, opt.workers, [&](std::int64_t j) {
    Complex t = polar_unit(pi(prec) * Real(make_rational(2 * j, Nc), prec)) * rr;
    PhiFamilyPoint pt;
    pt.k = k;
    pt.t = {t};
    pt.precision_bits = prec;
    samples[static_cast<std::size_t>(j)] = phi_family_eval(rs, data, pt).value;
  });
  auto fit = [&](int m, int stride) {
    Complex acc(prec);
    int count = 0;
    for (int j = 0; j < Nc; j += stride, ++count)
      acc += samples[static_cast<std::size_t>(j)] * unit_root(make_rational(-static_cast<std::int64_t>(j) * m, Nc), prec);
    Real scale = Real(static_cast<long>(count), prec);
    if (m >= 0) scale *= pow(rr, m);
    else scale /= pow(rr, -m);
    return acc / scale;
  };

  ExpansionResult out;
  QMatrix S(1, 1);
  S(0, 0) = Rational(2 * data.P);
  out.gauss = gauss_sum(QuadraticLattice{S, "Z alpha, |alpha|^2 = 2P"}, k, GaussMode::closed, prec).value;
  double scale = 0;
  for (int m = -L; m <= order; ++m) {
    Complex a = fit(m, 1);
    Complex half = fit(m, 2);
    scale = std::max(scale, static_cast<double>(magnitude(a)));
    out.fit_error = std::max(out.fit_error, static_cast<double>(magnitude(a - half)));
    if (m < 0) out.max_negative = std::max(out.max_negative, static_cast<double>(magnitude(a)));
    MomentResult mom = gaussian_moment(S, {m}, prec);
    out.laurent.push_back({m, a});
    out.coefficients.push_back({m, a * mom.value});
  }
  if (out.fit_error > 1e-12 * (1 + scale)) {
    std::ostringstream msg;
    msg << "ill-conditioned Laurent fit: full and half grids differ by " << out.fit_error
        << " (condition estimate r^-" << order << " = " << std::pow(r, -order) << ")";
    throw ConvergenceError(msg.str());
  }

  // Left side on the residual grid.
  out.residual_ts = opt.residual_ts;
  if (out.residual_ts.empty())
    for (int i = 0; i < 8; ++i) out.residual_ts.push_back(std::pow(10.0, -3.0 + 1.5 * i / 7.0));
  double tmin = out.residual_ts.front();
  for (double t : out.residual_ts) tmin = std::min(tmin, t);
  BlockOptions bo;
  bo.include_prefactor = false;
  bo.cutoff = block_base_exponent(rs, data) + 1;
  bo.workers = opt.workers;
  PuiseuxSeries probe = homological_block(rs, data, bo);
  bo.cutoff = probe.tail->required_cutoff(static_cast<long double>(tmin) * tmin, opt.tail_tolerance);
  PuiseuxSeries series = homological_block(rs, data, bo);

  const std::size_t nt = out.residual_ts.size();
  std::vector<Complex> lhs(nt, Complex(prec));
  parallel_for(static_cast<std::int64_t>(nt), opt.workers, [&](std::int64_t i) {
    Real t(out.residual_ts[static_cast<std::size_t>(i)], prec);
    RadialPoint pt(k, t * t, prec);
    lhs[static_cast<std::size_t>(i)] = out.gauss * evaluate_radial(series, pt, opt.tail_tolerance).value;
  });
  out.residuals.assign(static_cast<std::size_t>(order) + 1, std::vector<double>(nt));
  for (std::size_t i = 0; i < nt; ++i) {
    Real t(out.residual_ts[i], prec);
    Complex partial(prec);
    std::size_t c = 0;
    for (int M = -L; M <= order; ++M, ++c) {
      Real tm = M >= 0 ? pow(t, M) : Real(1L, prec) / pow(t, -M);
      partial += out.coefficients[c].value * tm;
      if (M >= 0) out.residuals[static_cast<std::size_t>(M)][i] = static_cast<double>(magnitude(lhs[i] - partial));
    }
  }
  for (int N = 0; N <= order; ++N) {
    out.residual_exponents.push_back(loglog_slope(out.residual_ts, out.residuals[static_cast<std::size_t>(N)]));
    if (out.verified_order == N - 1 && out.residual_exponents.back() >= N + 0.9) out.verified_order = N;
  }
  return out;
}

RichardsonTable richardson(const std::vector<Real>& t, const std::vector<Complex>& values) {
  if (t.size() != values.size() || t.empty()) throw ValidationError("extrapolation needs matching nonempty samples");
  const std::size_t n = t.size();
  RichardsonTable R;
  R.table.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    R.table[j].push_back(values[j]);
    for (std::size_t m = 1; m <= j; ++m) {
      const Real& ti = t[j - m];
      const Real& tj = t[j];
      Real den = ti - tj;
      if (den.is_zero()) throw ValidationError("extrapolation schedule repeats a point");
      R.table[j].push_back((R.table[j][m - 1] * ti - R.table[j - 1][m - 1] * tj) / Complex(den, Real(den.precision())));
    }
  }
  const double inf = std::numeric_limits<double>::infinity();
  R.best_error = inf;
  R.row_col.assign(n, 0);
  R.row_error.assign(n, inf);
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t m = 1; m <= j; ++m) {
      const Complex& v = R.table[j][m];
      double e1 = static_cast<double>(magnitude(v - R.table[j][m - 1]));
      double e2 = static_cast<double>(
          magnitude(v - (m <= j - 1 ? R.table[j - 1][m] : R.table[j - 1][m - 1])));
      double e = std::max(e1, e2);
      if (e < R.row_error[j]) {
        R.row_error[j] = e;
        R.row_col[j] = m;
      }
      if (e < R.best_error) {
        R.best_error = e;
        R.best_row = j;
        R.best_col = m;
      }
    }
  }
  return R;
}

std::vector<Rational> parse_schedule(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw ValidationError("schedule must look like geometric:t0,ratio,count or list:t1,...");
  const std::string kind = text.substr(0, colon);
  std::vector<std::string> parts;
  std::stringstream ss(text.substr(colon + 1));
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  std::vector<Rational> out;
  if (kind == "geometric") {
    if (parts.size() != 3) throw ValidationError("geometric schedule needs t0,ratio,count");
    Rational t0 = parse_rational(parts[0]), ratio = parse_rational(parts[1]);
    Rational cq = parse_rational(parts[2]);
    if (!is_integer(cq) || cq < 1) throw ValidationError("schedule count must be a positive integer");
    if (t0 <= 0 || ratio <= 1) throw ValidationError("geometric schedule needs t0 > 0 and ratio > 1");
    Rational t = t0;
    for (std::int64_t j = 0; j <= to_int64(cq.get_num()); ++j, t /= ratio) out.push_back(t);
  } else if (kind == "list") {
    for (const auto& p : parts) {
      Rational t = parse_rational(p);
      if (t <= 0) throw ValidationError("schedule points must be positive");
      out.push_back(t);
    }
    if (out.size() < 2) throw ValidationError("schedule needs at least two points");
  } else {
    throw ValidationError("unknown schedule kind '" + kind + "'");
  }
  return out;
}

LimitVerification verify_limit(const RootSystem& rs, const SeifertData& data, std::int64_t k,
                               const VerifyOptions& opt) {
  const Precision prec = opt.precision;
  LimitVerification out;
  FiniteSumOptions fo;
  fo.precision = prec;
  fo.workers = opt.workers;
  fo.coset_cap = opt.coset_cap;
  out.finite = radial_limit_finite_sum(rs, data, k, fo);

  std::vector<Rational> schedule = opt.schedule.empty() ? parse_schedule("geometric:0.1,2,12") : opt.schedule;
  Rational tmin = schedule.front();
  for (const auto& t : schedule) tmin = std::min(tmin, t);
  const long double tail_tol = opt.tail_tolerance.value_or(opt.tolerance * 1e-3L);

  BlockOptions bo;
  bo.include_prefactor = true;
  bo.max_roots = opt.max_roots;
  bo.max_visits = opt.max_visits;
  bo.workers = opt.workers;
  if (opt.cutoff) {
    bo.cutoff = *opt.cutoff;
  } else {
    bo.cutoff = block_base_exponent(rs, data) + 1;
    PuiseuxSeries probe = homological_block(rs, data, bo);
    bo.cutoff = probe.tail->required_cutoff(static_cast<long double>(tmin.get_d()), tail_tol);
  }
  out.cutoff = bo.cutoff;
  PuiseuxSeries series = homological_block(rs, data, bo);
  out.series_terms = series.size();

  const std::size_t n = schedule.size();
  std::vector<RadialValue> vals(n);
  parallel_for(static_cast<std::int64_t>(n), opt.workers, [&](std::int64_t i) {
    RadialPoint pt(k, Real(schedule[static_cast<std::size_t>(i)], prec), prec);
    vals[static_cast<std::size_t>(i)] = evaluate_radial(series, pt, tail_tol);
  });
  std::vector<Real> ts;
  std::vector<Complex> vs;
  for (std::size_t i = 0; i < n; ++i) {
    ts.emplace_back(schedule[i], prec);
    vs.push_back(vals[i].value);
  }
  RichardsonTable R = richardson(ts, vs);
  for (std::size_t i = 0; i < n; ++i) {
    VerifyRow row{schedule[i], vals[i].value, vals[i].tail_bound, R.table[i][R.row_col[i]], R.row_error[i]};
    out.rows.push_back(std::move(row));
  }
  out.extrapolant = R.best();
  out.extrapolation_error = R.best_error;
  out.abs_error = static_cast<double>(magnitude(out.extrapolant - out.finite.value_float));
  out.converged = R.best_error <= static_cast<double>(opt.tolerance);
  out.pass = out.converged && out.abs_error <= static_cast<double>(opt.tolerance);
  return out;
}

}  // namespace qblocks
