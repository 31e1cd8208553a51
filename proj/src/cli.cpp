#include "qblocks/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "qblocks/asymptotics.hpp"
#include "qblocks/error.hpp"
#include "qblocks/finite.hpp"
#include "qblocks/qseries.hpp"
#include "toml.hpp"

namespace qblocks {

OutputFormat parse_output_format(const std::string& s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  if (s == "text") return OutputFormat::text;
  throw ValidationError("unknown output format '" + s + "' (expected json, csv or text)");
}

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::json: return "json";
    case OutputFormat::csv: return "csv";
    case OutputFormat::text: return "text";
  }
  return "json";
}

namespace {

std::string fmt_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
  std::int64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ValidationError(what + " must be an integer, got '" + s + "'");
  return v;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError(what + " must be a number, got '" + s + "'");
}

Rational parse_cutoff(const std::string& s) {
  try {
    return parse_rational(s);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw ValidationError("cutoff must be a rational number, got '" + s + "'");
  }
}

std::string complex_csv(const Complex& z) {
  std::string im = z.im().to_decimal();
  if (im.empty() || (im[0] != '-' && im[0] != '+')) im = "+" + im;
  return z.re().to_decimal() + im + "i";
}

// ---- TOML ----------------------------------------------------------------

[[noreturn]] void toml_type_error(const std::string& key, const std::string& expected) {
  throw ValidationError("config key '" + key + "' must be " + expected);
}

std::int64_t toml_int(const toml::node& n, const std::string& key) {
  if (auto v = n.value_exact<std::int64_t>()) return *v;
  toml_type_error(key, "an integer");
}

double toml_number(const toml::node& n, const std::string& key) {
  if (auto v = n.value_exact<double>()) return *v;
  if (auto v = n.value_exact<std::int64_t>()) return static_cast<double>(*v);
  toml_type_error(key, "a number");
}

std::string toml_string(const toml::node& n, const std::string& key) {
  if (auto v = n.value_exact<std::string>()) return *v;
  toml_type_error(key, "a string");
}

bool toml_bool(const toml::node& n, const std::string& key) {
  if (auto v = n.value_exact<bool>()) return *v;
  toml_type_error(key, "a boolean");
}

Rational toml_rational(const toml::node& n, const std::string& key) {
  if (auto v = n.value_exact<std::int64_t>()) return make_rational(*v);
  if (auto v = n.value_exact<std::string>()) return parse_cutoff(*v);
  toml_type_error(key, "an integer or a rational string such as \"21/2\"");
}

std::vector<SeifertPair> toml_pairs(const toml::node& n) {
  if (auto s = n.value_exact<std::string>()) return parse_seifert_pairs(*s);
  const auto* arr = n.as_array();
  if (!arr) toml_type_error("seifert.pairs", "an array of [p, q] pairs");
  std::vector<SeifertPair> out;
  for (const auto& item : *arr) {
    const auto* pq = item.as_array();
    if (!pq || pq->size() != 2) toml_type_error("seifert.pairs", "an array of [p, q] pairs");
    out.push_back({toml_int(*pq->get(0), "seifert.pairs"), toml_int(*pq->get(1), "seifert.pairs")});
  }
  return out;
}

void apply_toml(RunConfig& c, const std::string& path) {
  toml::table tbl;
  try {
    tbl = toml::parse_file(path);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "malformed TOML in " << path << ": " << e.description() << " (line " << e.source().begin.line
        << ")";
    throw ValidationError(msg.str());
  }
  std::vector<std::string> unknown;
  for (const auto& [key_node, value] : tbl) {
    const std::string key(key_node.str());
    if (key == "algebra") {
      c.algebra = CartanLabel::parse(toml_string(value, key));
      c.algebra->validate();
    } else if (key == "level") {
      c.level = toml_int(value, key);
    } else if (key == "precision") {
      c.precision = toml_int(value, key);
    } else if (key == "cutoff") {
      c.cutoff = toml_rational(value, key);
    } else if (key == "tolerance") {
      c.tolerance = toml_number(value, key);
    } else if (key == "validation") {
      c.validation = parse_validation_mode(toml_string(value, key));
    } else if (key == "format") {
      c.format = parse_output_format(toml_string(value, key));
    } else if (key == "workers") {
      c.workers = static_cast<int>(toml_int(value, key));
    } else if (key == "exact") {
      c.exact = toml_bool(value, key);
    } else if (key == "prefactor") {
      c.prefactor = toml_bool(value, key);
    } else if (key == "schedule") {
      c.schedule = toml_string(value, key);
    } else if (key == "tail_tolerance") {
      c.tail_tolerance = toml_number(value, key);
    } else if (key == "source") {
      c.source = toml_string(value, key);
    } else if (key == "max_m") {
      c.max_m = toml_int(value, key);
    } else if (key == "seifert") {
      const auto* t = value.as_table();
      if (!t) toml_type_error(key, "a table with a 'pairs' entry");
      for (const auto& [k2, v2] : *t) {
        if (k2.str() == "pairs")
          c.seifert = toml_pairs(v2);
        else
          unknown.push_back("seifert." + std::string(k2.str()));
      }
    } else if (key == "caps") {
      const auto* t = value.as_table();
      if (!t) toml_type_error(key, "a table");
      for (const auto& [k2, v2] : *t) {
        const std::string sub(k2.str());
        if (sub == "cosets")
          c.coset_cap = toml_int(v2, "caps.cosets");
        else if (sub == "roots")
          c.max_roots = static_cast<std::size_t>(std::max<std::int64_t>(0, toml_int(v2, "caps.roots")));
        else if (sub == "exact_order")
          c.exact_order_cap = toml_int(v2, "caps.exact_order");
        else
          unknown.push_back("caps." + sub);
      }
    } else {
      unknown.push_back(key);
    }
  }
  if (!unknown.empty()) {
    std::vector<std::string> v;
    for (const auto& k : unknown) v.push_back("unknown config key '" + k + "' in " + path);
    throw ValidationError(v);
  }
}

// ---- flags ---------------------------------------------------------------

struct Flags {
  std::string config, algebra, seifert, level, precision, cutoff, tolerance, validation, format;
  std::string coset_cap, max_roots, exact_order_cap, workers, schedule, tail_tolerance, source, max_m;
  std::string emit_table, output;
  bool exact = false, floating = false, prefactor = false, no_prefactor = false, timing = false;
};

struct Section {
  bool algebra, seifert, level, cutoff, tolerance, exact, prefactor, schedule, source, max_m, cosets, roots,
      exact_order;
};

void add_options(CLI::App* sub, Flags& f, const Section& s) {
  sub->add_option("--config", f.config, "TOML configuration file; flags override its values");
  sub->add_option("--precision", f.precision,
                  "working precision in bits (default 128, or QBLOCKS_PRECISION when set)");
  sub->add_option("--format", f.format, "report format: json, csv or text (default json)");
  sub->add_option("--output,-o", f.output, "write the report to this file instead of stdout");
  sub->add_option("--emit-table", f.emit_table, "also write the main table as CSV to this file");
  sub->add_option("--workers", f.workers, "worker threads (default 1); never changes the report");
  sub->add_option("--validation", f.validation,
                  "Seifert data check: relaxed (P*sum q/p = +-1 mod P, default) or strict");
  sub->add_flag("--timing", f.timing, "record wall time in the report");
  if (s.algebra) sub->add_option("--algebra", f.algebra, "Cartan label such as A1, A2, D4, E6");
  if (s.seifert) sub->add_option("--seifert", f.seifert, "surgery data p1/q1,p2/q2,...");
  if (s.level) sub->add_option("--level,-k", f.level, "level k >= 1");
  if (s.cutoff) sub->add_option("--cutoff", f.cutoff, "cutoff on the inner exponent m^T S m / 8P");
  if (s.tolerance) sub->add_option("--tol,--tolerance", f.tolerance, "check tolerance");
  if (s.exact) {
    sub->add_flag("--exact", f.exact, "also compute in exact cyclotomic arithmetic");
    sub->add_flag("--float", f.floating, "floating point only (default)");
  }
  if (s.prefactor) {
    sub->add_flag("--prefactor", f.prefactor, "include the q^{-dim(g) phi |rho|^2/2} prefactor (default)");
    sub->add_flag("--no-prefactor", f.no_prefactor, "omit the prefactor");
  }
  if (s.schedule) {
    sub->add_option("--schedule", f.schedule,
                    "t schedule: geometric:t0,ratio,count or list:t1,t2,... (default geometric:0.1,2,12)");
    sub->add_option("--tail-tol", f.tail_tolerance, "allowed series tail per point (default tol * 1e-3)");
  }
  if (s.source) sub->add_option("--source", f.source, "marino, from_limit or both (default both)");
  if (s.max_m) sub->add_option("--max-m", f.max_m, "largest m listed (default 100)");
  if (s.cosets) sub->add_option("--coset-cap", f.coset_cap, "largest coset quotient enumerated (default 1e8)");
  if (s.roots) sub->add_option("--max-roots", f.max_roots, "largest number of positive roots (default 6)");
  if (s.exact_order)
    sub->add_option("--exact-order-cap", f.exact_order_cap,
                    "largest cyclotomic order for exact sums (default 2000)");
}

void require(bool ok, const std::string& what, std::vector<std::string>& problems) {
  if (!ok) problems.push_back(what);
}

}  // namespace

RunConfig load_config(const std::vector<std::string>& args, std::optional<std::string> env_precision) {
  CLI::App app{"qblocks: homological blocks of Seifert homology spheres and their radial limits"};
  app.set_version_flag("--version", kVersionString);
  app.require_subcommand(1, 1);
  app.fallthrough(false);
  Flags f;
  const std::vector<std::pair<std::string, Section>> sections{
      {"block", {true, true, false, true, false, false, true, false, false, false, false, true, false}},
      {"limit", {true, true, true, false, true, true, false, false, false, false, true, false, true}},
      {"wrt", {true, true, true, false, true, true, false, false, true, false, true, false, true}},
      {"verify", {true, true, true, true, true, false, false, true, false, false, true, true, false}},
      {"gauss", {true, false, true, false, true, true, false, false, false, false, true, false, false}},
      {"chi", {false, true, false, false, false, false, false, false, false, true, false, false, false}},
  };
  const std::map<std::string, std::string> help{
      {"block", "q-series of the homological block"},
      {"limit", "finite-sum value of the radial limit at zeta_k"},
      {"wrt", "WRT invariant by the Marino sum and from the radial limit"},
      {"verify", "extrapolated series limit against the finite sum"},
      {"gauss", "lattice Gauss sum, direct against closed form"},
      {"chi", "coefficients chi_m, closed form against series expansion"},
  };
  for (const auto& [name, s] : sections) add_options(app.add_subcommand(name, help.at(name)), f, s);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      std::ostringstream text;
      app.exit(e, text, text);
      throw HelpRequested{text.str()};
    }
    throw ValidationError(e.what());
  }

  RunConfig c;
  for (const auto* sub : app.get_subcommands()) c.command = sub->get_name();

  if (env_precision && !env_precision->empty()) c.precision = parse_int(*env_precision, "QBLOCKS_PRECISION");
  if (!f.config.empty()) apply_toml(c, f.config);

  std::vector<std::string> problems;
  auto guarded = [&](auto&& fn) {
    try {
      fn();
    } catch (const ValidationError& e) {
      for (const auto& v : e.violations()) problems.push_back(v);
    }
  };
  if (!f.algebra.empty()) guarded([&] {
    c.algebra = CartanLabel::parse(f.algebra);
    c.algebra->validate();
  });
  if (!f.seifert.empty()) guarded([&] { c.seifert = parse_seifert_pairs(f.seifert); });
  if (!f.level.empty()) guarded([&] { c.level = parse_int(f.level, "--level"); });
  if (!f.precision.empty()) guarded([&] { c.precision = parse_int(f.precision, "--precision"); });
  if (!f.cutoff.empty()) guarded([&] { c.cutoff = parse_cutoff(f.cutoff); });
  if (!f.tolerance.empty()) guarded([&] { c.tolerance = parse_double(f.tolerance, "--tol"); });
  if (!f.validation.empty()) guarded([&] { c.validation = parse_validation_mode(f.validation); });
  if (!f.format.empty()) guarded([&] { c.format = parse_output_format(f.format); });
  if (!f.coset_cap.empty()) guarded([&] { c.coset_cap = parse_int(f.coset_cap, "--coset-cap"); });
  if (!f.max_roots.empty())
    guarded([&] { c.max_roots = static_cast<std::size_t>(std::max<std::int64_t>(0, parse_int(f.max_roots, "--max-roots"))); });
  if (!f.exact_order_cap.empty())
    guarded([&] { c.exact_order_cap = parse_int(f.exact_order_cap, "--exact-order-cap"); });
  if (!f.workers.empty()) guarded([&] { c.workers = static_cast<int>(parse_int(f.workers, "--workers")); });
  if (!f.schedule.empty()) c.schedule = f.schedule;
  if (!f.tail_tolerance.empty()) guarded([&] { c.tail_tolerance = parse_double(f.tail_tolerance, "--tail-tol"); });
  if (!f.source.empty()) c.source = f.source;
  if (!f.max_m.empty()) guarded([&] { c.max_m = parse_int(f.max_m, "--max-m"); });
  if (!f.emit_table.empty()) c.emit_table = f.emit_table;
  if (!f.output.empty()) c.output = f.output;
  if (f.timing) c.timing = true;
  if (f.exact && f.floating) problems.push_back("contradictory options --exact and --float");
  if (f.exact) c.exact = true;
  if (f.floating) c.exact = false;
  if (f.prefactor && f.no_prefactor) problems.push_back("contradictory options --prefactor and --no-prefactor");
  if (f.prefactor) c.prefactor = true;
  if (f.no_prefactor) c.prefactor = false;

  const std::string& cmd = c.command;
  const bool needs_algebra = cmd != "chi";
  const bool needs_seifert = cmd != "gauss";
  const bool needs_level = cmd == "limit" || cmd == "wrt" || cmd == "verify" || cmd == "gauss";
  require(!needs_algebra || c.algebra.has_value() || !f.algebra.empty(), cmd + " needs --algebra", problems);
  require(!needs_seifert || !c.seifert.empty(), cmd + " needs --seifert", problems);
  require(!needs_level || c.level.has_value(), cmd + " needs --level", problems);
  require(!c.level || *c.level >= 1, "level must be positive", problems);
  require(c.precision >= 32 && c.precision <= (1 << 20), "precision must lie in [32, 1048576] bits", problems);
  require(!c.cutoff || *c.cutoff > 0, "cutoff must be positive", problems);
  require(!c.tolerance || (std::isfinite(*c.tolerance) && *c.tolerance > 0), "tolerance must be positive",
          problems);
  require(!c.tail_tolerance || (std::isfinite(*c.tail_tolerance) && *c.tail_tolerance > 0),
          "tail tolerance must be positive", problems);
  require(c.coset_cap > 0, "coset cap must be positive", problems);
  require(c.max_roots > 0, "root cap must be positive", problems);
  require(c.exact_order_cap > 0, "exact order cap must be positive", problems);
  require(c.workers >= 1, "workers must be positive", problems);
  require(c.max_m > 0, "max-m must be positive", problems);
  require(c.source == "marino" || c.source == "from_limit" || c.source == "both",
          "source must be marino, from_limit or both", problems);
  if (cmd == "verify") guarded([&] { parse_schedule(c.schedule); });
  if (!problems.empty()) throw ValidationError(problems);
  return c;
}

namespace {

long double effective_tolerance(const RunConfig& c) {
  if (c.tolerance) return *c.tolerance;
  if (c.command == "verify") return 1e-6L;
  if (c.command == "limit") return 1e-20L;
  return 1e-10L;
}

std::map<std::string, std::string> echo(const RunConfig& c) {
  std::map<std::string, std::string> e;
  e["command"] = c.command;
  if (c.algebra) e["algebra"] = c.algebra->str();
  if (!c.seifert.empty()) {
    std::string s;
    for (const auto& p : c.seifert) s += (s.empty() ? "" : ",") + std::to_string(p.p) + "/" + std::to_string(p.q);
    e["seifert"] = s;
  }
  if (c.level) e["level"] = std::to_string(*c.level);
  e["precision"] = std::to_string(c.precision);
  e["validation"] = to_string(c.validation);
  e["format"] = to_string(c.format);
  if (c.command != "block" && c.command != "chi")
    e["tolerance"] = fmt_double(static_cast<double>(effective_tolerance(c)));
  e["caps.cosets"] = std::to_string(c.coset_cap);
  if (c.command == "block" || c.command == "verify") e["caps.roots"] = std::to_string(c.max_roots);
  if (c.command == "limit" || c.command == "wrt") {
    e["caps.exact_order"] = std::to_string(c.exact_order_cap);
  }
  if (c.command == "limit" || c.command == "wrt" || c.command == "gauss") e["exact"] = c.exact ? "true" : "false";
  if (c.command == "block") {
    e["cutoff"] = to_string(c.cutoff.value_or(Rational(10)));
    e["prefactor"] = c.prefactor ? "true" : "false";
  }
  if (c.command == "verify") {
    e["schedule"] = c.schedule;
    if (c.cutoff) e["cutoff"] = to_string(*c.cutoff);
    if (c.tail_tolerance) e["tail_tolerance"] = fmt_double(*c.tail_tolerance);
  }
  if (c.command == "wrt") e["source"] = c.source;
  if (c.command == "chi") e["max_m"] = std::to_string(c.max_m);
  if (c.emit_table) e["emit_table"] = *c.emit_table;
  if (c.output) e["output"] = *c.output;
  if (c.timing) e["timing"] = "true";
  return e;
}

CheckResult make_check(std::string name, std::string lhs_source, const Complex& lhs, std::string rhs_source,
                       const Complex& rhs, long double tol) {
  CheckResult c;
  c.name = std::move(name);
  c.lhs_source = std::move(lhs_source);
  c.rhs_source = std::move(rhs_source);
  c.lhs_re = lhs.re().to_decimal();
  c.lhs_im = lhs.im().to_decimal();
  c.rhs_re = rhs.re().to_decimal();
  c.rhs_im = rhs.im().to_decimal();
  Real err = abs(lhs - rhs);
  c.abs_error = err.to_decimal();
  c.tolerance = fmt_double(static_cast<double>(tol));
  c.pass = err <= Real(static_cast<double>(tol), err.precision());
  return c;
}

void put_complex(VerificationReport& r, const std::string& key, const Complex& z) {
  r.results[key + "_re"] = z.re().to_decimal();
  r.results[key + "_im"] = z.im().to_decimal();
}

std::string matched_mode(const SeifertData& d) {
  if (d.mode == ValidationMode::strict) return "strict: P * sum q_i/p_i = 1";
  std::ostringstream s;
  s << "relaxed: P * sum q_i/p_i = " << d.normalization_value << " = " << (d.normalization_sign > 0 ? "+1" : "-1")
    << " mod " << d.P;
  return s.str();
}

SeifertData seifert_of(const RunConfig& c, VerificationReport& r) {
  SeifertData d = validate_seifert(c.seifert, c.validation);
  r.results["validation_matched"] = matched_mode(d);
  r.results["P"] = std::to_string(d.P);
  return d;
}

std::string coset_note(const RootSystem& rs, const SeifertData& d, std::int64_t k) {
  Integer n = make_integer(rs.index_XY);
  for (std::int64_t i = 0; i < rs.rank_h; ++i) n *= make_integer(k * d.P);
  return "the finite sum runs over (kP)^r [X:Y] = " + to_string(n) +
         " cosets; higher ranks are not reproducible at desk scale";
}

FiniteSumOptions finite_options(const RunConfig& c) {
  FiniteSumOptions fo;
  fo.precision = c.precision;
  fo.exact = c.exact;
  fo.exact_order_cap = c.exact_order_cap;
  fo.coset_cap = c.coset_cap;
  fo.workers = c.workers;
  return fo;
}

void add_sum_results(VerificationReport& r, const FiniteSumResult& s) {
  r.results["excluded_count"] = std::to_string(s.excluded_count);
  r.results["total_count"] = std::to_string(s.total_count);
  if (s.total_count > 0 && s.excluded_count == s.total_count)
    r.notes.push_back("every coset lies in M at this level, so the finite sum is empty and the limit is 0");
}

void run_block(const RunConfig& c, VerificationReport& r) {
  RootSystem rs = build_root_system(*c.algebra);
  SeifertData d = seifert_of(c, r);
  BlockOptions bo;
  bo.cutoff = c.cutoff.value_or(Rational(10));
  bo.include_prefactor = c.prefactor;
  bo.max_roots = c.max_roots;
  bo.workers = c.workers;
  PuiseuxSeries s = homological_block(rs, d, bo);
  SeriesPayload p;
  p.denom = std::to_string(s.denom());
  ReportTable t;
  t.columns = {"exponent", "coefficient"};
  for (const auto& [num, coeff] : s.terms()) {
    p.terms.push_back({std::to_string(num), to_string(coeff.get_num()), to_string(coeff.get_den())});
    t.rows.push_back({to_string(s.exponent_of(num)), to_string(coeff)});
  }
  if (s.cutoff()) p.cutoff = to_string(*s.cutoff());
  p.prefactor_exponent = to_string(s.prefactor_exponent);
  r.series = std::move(p);
  r.tables["terms"] = std::move(t);
  r.results["term_count"] = std::to_string(s.size());
  r.results["phi"] = to_string(phi_invariant(d));
  r.results["m0"] = std::to_string(m0_support(d));
  if (auto lead = s.leading_exponent()) r.results["leading_exponent"] = to_string(*lead);
}

void run_limit(const RunConfig& c, VerificationReport& r) {
  RootSystem rs = build_root_system(*c.algebra);
  SeifertData d = seifert_of(c, r);
  const std::int64_t k = *c.level;
  FiniteSumResult s = radial_limit_finite_sum(rs, d, k, finite_options(c));
  put_complex(r, "value", s.value_float);
  put_complex(r, "raw_sum", s.raw_sum);
  add_sum_results(r, s);
  r.results["mode"] = s.value_exact ? "exact" : "float";
  if (s.value_exact) {
    Complex e = s.value_exact->embed(c.precision);
    r.results["exact_order"] = std::to_string(s.value_exact->order());
    r.checks.push_back(make_check("exact_vs_float", "finite-sum-exact", e, "finite-sum", s.value_float,
                                  effective_tolerance(c)));
  } else if (c.exact) {
    r.notes.push_back("exact path skipped: " + s.exact_note);
  }
  r.notes.push_back(coset_note(rs, d, k));
}

void run_wrt(const RunConfig& c, VerificationReport& r) {
  RootSystem rs = build_root_system(*c.algebra);
  require_simply_laced(rs);
  SeifertData d = seifert_of(c, r);
  const std::int64_t k = *c.level;
  FiniteSumResult s = radial_limit_finite_sum(rs, d, k, finite_options(c));
  add_sum_results(r, s);
  put_complex(r, "limit", s.value_float);
  if (s.value_exact)
    r.checks.push_back(make_check("exact_vs_float", "finite-sum-exact", s.value_exact->embed(c.precision),
                                  "finite-sum", s.value_float, 1e-20L));
  else if (c.exact)
    r.notes.push_back("exact path skipped: " + s.exact_note);
  Complex marino = wrt_marino(rs, d, k, s, c.precision);
  Complex from_limit = wrt_from_limit(rs, d, k, s.value_float, c.precision);
  if (c.source != "from_limit") put_complex(r, "tau_marino", marino);
  if (c.source != "marino") put_complex(r, "tau_from_limit", from_limit);
  if (c.source == "both")
    r.checks.push_back(make_check("wrt_consistency", "marino", marino, "finite-sum", from_limit,
                                  effective_tolerance(c)));
  r.notes.push_back(coset_note(rs, d, k));
}

void run_verify(const RunConfig& c, VerificationReport& r) {
  RootSystem rs = build_root_system(*c.algebra);
  SeifertData d = seifert_of(c, r);
  const std::int64_t k = *c.level;
  VerifyOptions vo;
  vo.precision = c.precision;
  vo.tolerance = effective_tolerance(c);
  vo.schedule = parse_schedule(c.schedule);
  if (c.tail_tolerance) vo.tail_tolerance = *c.tail_tolerance;
  vo.cutoff = c.cutoff;
  vo.workers = c.workers;
  vo.coset_cap = c.coset_cap;
  vo.max_roots = c.max_roots;
  LimitVerification v = verify_limit(rs, d, k, vo);

  r.checks.push_back(
      make_check("radial_limit", "series", v.extrapolant, "finite-sum", v.finite.value_float, vo.tolerance));
  put_complex(r, "extrapolant", v.extrapolant);
  put_complex(r, "finite_sum", v.finite.value_float);
  r.results["extrapolation_error"] = fmt_double(v.extrapolation_error);
  r.results["series_cutoff"] = to_string(v.cutoff);
  r.results["series_terms"] = std::to_string(v.series_terms);
  r.results["converged"] = v.converged ? "true" : "false";
  add_sum_results(r, v.finite);

  ReportTable t;
  t.columns = {"t", "series_value_re", "series_value_im", "tail_bound", "extrapolant", "finite_sum", "abs_error"};
  const std::string fin = complex_csv(v.finite.value_float);
  for (const auto& row : v.rows) {
    t.rows.push_back({Real(row.t, c.precision).to_decimal(), row.series.re().to_decimal(),
                      row.series.im().to_decimal(), fmt_double(static_cast<double>(row.tail_bound)),
                      complex_csv(row.extrapolant), fin, abs(row.extrapolant - v.finite.value_float).to_decimal()});
  }
  r.tables["extrapolation"] = std::move(t);

  if (rs.simply_laced) {
    Complex marino = wrt_marino(rs, d, k, v.finite, c.precision);
    Complex from_limit = wrt_from_limit(rs, d, k, v.finite.value_float, c.precision);
    put_complex(r, "tau_marino", marino);
    put_complex(r, "tau_from_series", wrt_from_limit(rs, d, k, v.extrapolant, c.precision));
    r.checks.push_back(make_check("wrt_consistency", "marino", marino, "finite-sum", from_limit, 1e-10L));
  } else {
    r.notes.push_back("the WRT comparison needs a simply-laced algebra and was skipped");
  }
  r.notes.push_back(coset_note(rs, d, k));
  if (!v.converged) {
    r.notes.push_back("Richardson error estimate " + fmt_double(v.extrapolation_error) + " exceeds the tolerance");
    r.status = "non_convergent";
  }
}

void run_gauss(const RunConfig& c, VerificationReport& r) {
  RootSystem rs = build_root_system(*c.algebra);
  QuadraticLattice L = root_lattice(rs);
  const std::int64_t k = *c.level;
  GaussSumResult direct = gauss_sum(L, k, GaussMode::direct, c.precision, c.exact, c.coset_cap);
  GaussSumResult closed = gauss_sum(L, k, GaussMode::closed, c.precision, c.exact, c.coset_cap);
  put_complex(r, "direct", direct.value);
  put_complex(r, "closed", closed.value);
  r.results["terms"] = std::to_string(direct.terms);
  r.results["lattice"] = L.name;
  r.checks.push_back(make_check("gauss_reciprocity", "direct", direct.value, "closed", closed.value,
                                effective_tolerance(c)));
  if (c.exact) {
    CheckResult e;
    e.name = "gauss_exact";
    e.lhs_source = "direct-exact";
    e.rhs_source = "closed-exact";
    const bool have = direct.exact && closed.exact;
    const bool equal = have && *direct.exact == *closed.exact;
    Complex de = have ? direct.exact->embed(c.precision) : Complex(c.precision);
    Complex ce = have ? closed.exact->embed(c.precision) : Complex(c.precision);
    e.lhs_re = de.re().to_decimal();
    e.lhs_im = de.im().to_decimal();
    e.rhs_re = ce.re().to_decimal();
    e.rhs_im = ce.im().to_decimal();
    e.abs_error = equal ? "0" : (have ? abs(de - ce).to_decimal() : "nan");
    e.tolerance = "0";
    e.pass = equal;
    r.checks.push_back(std::move(e));
    if (!have) r.notes.push_back("exact Gauss sums unavailable at this size");
  }
}

void run_chi(const RunConfig& c, VerificationReport& r) {
  SeifertData d = seifert_of(c, r);
  const std::int64_t m0 = m0_support(d);
  PuiseuxSeries g = expand_G(d, make_rational(c.max_m, 2 * d.P));
  ReportTable t;
  t.columns = {"m", "chi"};
  std::int64_t closed_nonzero = 0, series_nonzero = 0, mismatches = 0;
  for (std::int64_t m = std::min(m0, -c.max_m); m <= c.max_m; ++m) {
    Rational a = chi_closed(m, d);
    Rational b = g.coefficient(make_rational(m, 2 * d.P));
    if (a != 0) {
      ++closed_nonzero;
      t.rows.push_back({std::to_string(m), to_string(a)});
    }
    if (b != 0) ++series_nonzero;
    if (a != b) ++mismatches;
  }
  r.tables["chi"] = std::move(t);
  r.results["m0"] = std::to_string(m0);
  r.results["nonzero"] = std::to_string(closed_nonzero);
  CheckResult e;
  e.name = "chi_closed_vs_expand_G";
  e.lhs_source = "chi-closed";
  e.rhs_source = "series";
  e.lhs_re = std::to_string(closed_nonzero);
  e.lhs_im = "0";
  e.rhs_re = std::to_string(series_nonzero);
  e.rhs_im = "0";
  e.abs_error = std::to_string(mismatches);
  e.tolerance = "0";
  e.pass = mismatches == 0;
  r.checks.push_back(std::move(e));
  r.notes.push_back("nonzero counts compared; abs_error counts m in range where the two disagree");
}

const ReportTable* main_table(const VerificationReport& r) {
  for (const char* name : {"extrapolation", "terms", "chi"}) {
    auto it = r.tables.find(name);
    if (it != r.tables.end()) return &it->second;
  }
  return nullptr;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::ios_base::failure("cannot open " + path + " for writing");
  f << bytes;
  f.flush();
  if (!f) throw std::ios_base::failure("write to " + path + " failed");
}

}  // namespace

VerificationReport run(const RunConfig& config) {
  auto start = std::chrono::steady_clock::now();
  VerificationReport r;
  r.command = config.command;
  r.config = echo(config);
  if (config.command == "block")
    run_block(config, r);
  else if (config.command == "limit")
    run_limit(config, r);
  else if (config.command == "wrt")
    run_wrt(config, r);
  else if (config.command == "verify")
    run_verify(config, r);
  else if (config.command == "gauss")
    run_gauss(config, r);
  else if (config.command == "chi")
    run_chi(config, r);
  else
    throw ValidationError("unknown command '" + config.command + "'");
  if (r.status == "pass")
    for (const auto& ch : r.checks)
      if (!ch.pass) r.status = "fail";
  if (config.timing) {
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    r.wall_time = fmt_double(dt.count());
  }
  return r;
}

int exit_code(const VerificationReport& report) {
  if (report.status == "non_convergent") return static_cast<int>(ErrorKind::non_convergence);
  if (report.status != "pass") return kExitCheckFailed;
  return 0;
}

std::string render(const VerificationReport& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::json: return emit_json(report);
    case OutputFormat::text: return emit_text(report);
    case OutputFormat::csv: {
      const ReportTable* t = main_table(report);
      return emit_csv(t ? *t : checks_table(report));
    }
  }
  return emit_json(report);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const char* env = std::getenv("QBLOCKS_PRECISION");
    RunConfig c = load_config(args, env ? std::optional<std::string>(env) : std::nullopt);
    VerificationReport r = run(c);
    const std::string bytes = render(r, c.format);
    if (c.emit_table) {
      const ReportTable* t = main_table(r);
      write_file(*c.emit_table, emit_csv(t ? *t : checks_table(r)));
    }
    if (c.output)
      write_file(*c.output, bytes);
    else
      out << bytes;
    out.flush();
    if (r.status != "pass")
      for (const auto& ch : r.checks)
        if (!ch.pass) err << "check " << ch.name << " failed: |difference| " << ch.abs_error << " > " << ch.tolerance << "\n";
    return exit_code(r);
  } catch (const HelpRequested& h) {
    out << h.text;
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::validation);
  }
}

}  // namespace qblocks
