#include "doctest.h"

#include <complex>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "qblocks/cli.hpp"
#include "qblocks/error.hpp"

using namespace qblocks;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  std::string path = "/tmp/qblocks_test_" + name;
  std::ofstream(path) << text;
  return path;
}

struct Captured {
  int code;
  std::string out, err;
};

Captured cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string message_of(const std::vector<std::string>& args, std::optional<std::string> env = std::nullopt) {
  try {
    load_config(args, env);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

// chi_m by multiplying out prod (x^{P/p} - x^{-P/p}) * (-sum_j x^{P + 2Pj})^{n-2}
// in x = q^{1/2P}, with plain integer polynomials.
std::map<std::int64_t, std::int64_t> chi_oracle(const std::vector<std::int64_t>& ps, std::int64_t max_m) {
  std::int64_t P = 1;
  for (auto p : ps) P *= p;
  std::map<std::int64_t, std::int64_t> poly{{0, 1}};
  for (auto p : ps) {
    std::map<std::int64_t, std::int64_t> next;
    for (auto [e, c] : poly) {
      next[e + P / p] += c;
      next[e - P / p] -= c;
    }
    poly.swap(next);
  }
  for (std::size_t i = 2; i < ps.size(); ++i) {
    std::map<std::int64_t, std::int64_t> next;
    for (auto [e, c] : poly)
      for (std::int64_t j = 0; e + P + 2 * P * j <= max_m; ++j) next[e + P + 2 * P * j] -= c;
    poly.swap(next);
  }
  std::map<std::int64_t, std::int64_t> out;
  for (auto [e, c] : poly)
    if (c != 0 && e <= max_m) out[e] = c;
  return out;
}

}  // namespace

TEST_CASE("load_config accepts the minimal flag set and fills defaults") {
  RunConfig c = load_config({"limit", "--algebra", "A1", "--seifert", "2/1,3/1,5/1", "--level", "5"});
  CHECK(c.command == "limit");
  CHECK(c.algebra->str() == "A1");
  REQUIRE(c.seifert.size() == 3);
  CHECK(c.seifert[2] == SeifertPair{5, 1});
  CHECK(*c.level == 5);
  CHECK(c.precision == 128);
  CHECK(c.validation == ValidationMode::relaxed);
  CHECK(c.format == OutputFormat::json);
  CHECK(c.workers == 1);
  CHECK_FALSE(c.exact);
}

TEST_CASE("precedence: defaults, environment, file, flags") {
  std::string path = write_temp("prec.toml", "precision = 64\n");
  std::vector<std::string> base{"gauss", "--algebra", "A1", "--level", "3"};
  CHECK(load_config(base).precision == 128);
  CHECK(load_config(base, std::string("96")).precision == 96);
  auto with_file = base;
  with_file.insert(with_file.end(), {"--config", path});
  CHECK(load_config(with_file, std::string("96")).precision == 64);
  auto with_flag = with_file;
  with_flag.insert(with_flag.end(), {"--precision", "192"});
  CHECK(load_config(with_flag, std::string("96")).precision == 192);
}

TEST_CASE("TOML file carries the full schema") {
  std::string path = write_temp("full.toml",
                                "algebra = \"A2\"\n"
                                "level = 2\n"
                                "tolerance = 1e-4\n"
                                "schedule = \"geometric:0.02,2,7\"\n"
                                "validation = \"relaxed\"\n"
                                "format = \"text\"\n"
                                "cutoff = \"21/2\"\n"
                                "[seifert]\n"
                                "pairs = [[2,1],[3,1],[5,1]]\n"
                                "[caps]\n"
                                "cosets = 5000\n"
                                "roots = 3\n"
                                "exact_order = 100\n");
  RunConfig c = load_config({"verify", "--config", path});
  CHECK(c.algebra->str() == "A2");
  CHECK(*c.level == 2);
  CHECK(*c.tolerance == doctest::Approx(1e-4));
  CHECK(c.schedule == "geometric:0.02,2,7");
  CHECK(c.format == OutputFormat::text);
  CHECK(*c.cutoff == make_rational(21, 2));
  CHECK(c.seifert == std::vector<SeifertPair>{{2, 1}, {3, 1}, {5, 1}});
  CHECK(c.coset_cap == 5000);
  CHECK(c.max_roots == 3);
  CHECK(c.exact_order_cap == 100);
}

TEST_CASE("configuration errors") {
  CHECK(message_of({"limit", "--algebra", "Z9", "--seifert", "2,3,5", "--level", "5"}).find("Z9") !=
        std::string::npos);
  CHECK(message_of({"limit", "--algebra", "A1", "--seifert", "2,3,5", "--level", "5", "--bogus"}).find("--bogus") !=
        std::string::npos);
  CHECK(message_of({"limit", "--algebra", "A1", "--seifert", "2,3,5", "--level", "5", "--exact", "--float"})
            .find("contradictory") != std::string::npos);
  CHECK(message_of({"limit", "--algebra", "A1", "--seifert", "2,3,5"}).find("--level") != std::string::npos);
  CHECK(message_of({"limit", "--algebra", "A1", "--seifert", "2,3,5", "--level", "0"}).find("positive") !=
        std::string::npos);
  CHECK(message_of({"gauss", "--algebra", "A1", "--level", "3", "--format", "xml"}).find("xml") !=
        std::string::npos);
  CHECK(message_of({"gauss", "--algebra", "A1", "--level", "3"}, std::string("lots")).find("QBLOCKS_PRECISION") !=
        std::string::npos);
  CHECK(message_of({"verify", "--algebra", "A1", "--seifert", "2,3,5", "--level", "5", "--schedule", "linear:1"})
            .size() > 0);
  // flags that belong to another subcommand are unknown here
  CHECK(message_of({"chi", "--seifert", "2,3,5", "--level", "3"}).size() > 0);

  std::string bad = write_temp("bad.toml", "precision = = 3\n");
  CHECK(message_of({"gauss", "--algebra", "A1", "--level", "3", "--config", bad}).find("malformed TOML") !=
        std::string::npos);
  std::string typo = write_temp("typo.toml", "precison = 64\n");
  CHECK(message_of({"gauss", "--algebra", "A1", "--level", "3", "--config", typo}).find("precison") !=
        std::string::npos);
  std::string wrong_type = write_temp("type.toml", "level = \"five\"\n");
  CHECK(message_of({"gauss", "--algebra", "A1", "--config", wrong_type}).find("level") != std::string::npos);
}

TEST_CASE("help and version print and exit 0") {
  auto h = cli({"verify", "--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("--schedule") != std::string::npos);
  CHECK(h.out.find("default geometric:0.1,2,12") != std::string::npos);
  auto v = cli({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find("qblocks 0.1.0") != std::string::npos);
}

TEST_CASE("chi lists the nonzero coefficients of the expanded product") {
  const std::vector<std::pair<std::string, std::vector<std::int64_t>>> cases{
      {"2,3,5", {2, 3, 5}}, {"2,3,7", {2, 3, 7}}, {"3/1,4/1,5/2", {3, 4, 5}}, {"2/1,3/1,5/3,7/4", {2, 3, 5, 7}}};
  for (const auto& [s, ps] : cases) {
    RunConfig c = load_config({"chi", "--seifert", s, "--max-m", "300"});
    VerificationReport r = run(c);
    CHECK(r.status == "pass");
    auto oracle = chi_oracle(ps, 300);
    const auto& rows = r.tables.at("chi").rows;
    REQUIRE(rows.size() == oracle.size());
    std::size_t i = 0;
    for (auto [m, chi] : oracle) {
      CHECK(rows[i][0] == std::to_string(m));
      CHECK(rows[i][1] == std::to_string(chi));
      ++i;
    }
  }
}

TEST_CASE("gauss reports direct and closed sums") {
  auto res = cli({"gauss", "--algebra", "A1", "--level", "3", "--exact"});
  CHECK(res.code == 0);
  VerificationReport r = parse_report_json(res.out);
  // sum_{j mod 6} e(-j^2/12)
  std::complex<long double> s = 0;
  for (int j = 0; j < 6; ++j) s += std::polar(1.0L, -2 * 3.14159265358979323846L * j * j / 12);
  CHECK(std::stold(r.results.at("direct_re")) == doctest::Approx(static_cast<double>(s.real())).epsilon(1e-15));
  CHECK(std::stold(r.results.at("direct_im")) == doctest::Approx(static_cast<double>(s.imag())).epsilon(1e-15));
  REQUIRE(r.checks.size() == 2);
  CHECK(r.checks[0].name == "gauss_reciprocity");
  CHECK(r.checks[0].pass);
  CHECK(r.checks[1].name == "gauss_exact");
  CHECK(r.checks[1].abs_error == "0");
}

TEST_CASE("verify on A1 (2,3,5) at k = 5 passes with default tolerance") {
  std::string table = "/tmp/qblocks_test_verify.csv";
  std::remove(table.c_str());
  auto res = cli({"verify", "--algebra", "A1", "--seifert", "2/1,3/1,5/1", "--level", "5", "--emit-table", table});
  CHECK(res.code == 0);
  VerificationReport r = parse_report_json(res.out);
  CHECK(r.status == "pass");
  CHECK(r.config.at("tolerance") == "1e-06");
  CHECK(r.config.count("workers") == 0);
  CHECK_FALSE(r.wall_time.has_value());
  REQUIRE(r.checks.size() == 2);
  CHECK(r.checks[0].name == "radial_limit");
  CHECK(r.checks[0].lhs_source == "series");
  CHECK(r.checks[0].rhs_source == "finite-sum");
  CHECK(r.checks[1].lhs_source == "marino");
  CHECK(r.results.at("validation_matched").find("relaxed") == 0);
  bool noted = false;
  for (const auto& n : r.notes) noted = noted || n.find("not reproducible at desk scale") != std::string::npos;
  CHECK(noted);

  std::ifstream f(table);
  std::string header;
  std::getline(f, header);
  CHECK(header == "t,series_value_re,series_value_im,tail_bound,extrapolant,finite_sum,abs_error");
  std::string first;
  std::getline(f, first);
  CHECK(first.find("i,") != std::string::npos);
}

TEST_CASE("reports do not depend on the worker count") {
  std::vector<std::string> base{"verify", "--algebra", "A1", "--seifert", "2/1,3/1,7/1", "--level", "3"};
  auto one = base, four = base;
  one.insert(one.end(), {"--workers", "1"});
  four.insert(four.end(), {"--workers", "4"});
  auto a = cli(one), b = cli(four);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("timing is opt-in") {
  auto res = cli({"gauss", "--algebra", "A2", "--level", "2", "--timing"});
  VerificationReport r = parse_report_json(res.out);
  CHECK(r.wall_time.has_value());
  CHECK(r.config.at("timing") == "true");
}

TEST_CASE("exit codes") {
  CHECK(cli({"limit", "--algebra", "A1", "--seifert", "2,3,5", "--level", "5", "--oops"}).code == 1);
  CHECK(cli({"limit", "--algebra", "A1", "--seifert", "2,4,5", "--level", "5"}).code == 1);
  CHECK(cli({"wrt", "--algebra", "B2", "--seifert", "2,3,5", "--level", "5"}).code == 1);
  CHECK(cli({"limit", "--algebra", "A1", "--seifert", "2,3,5", "--level", "5", "--coset-cap", "10"}).code == 2);
  auto short_cut = cli({"verify", "--algebra", "A1", "--seifert", "2,3,5", "--level", "5", "--cutoff", "5"});
  CHECK(short_cut.code == 3);
  CHECK(short_cut.err.find("suggested") != std::string::npos);
  CHECK(cli({"gauss", "--algebra", "A1", "--level", "3", "--tol", "1e-60"}).code == 4);
  CHECK(cli({"gauss", "--algebra", "A1", "--level", "3", "-o", "/nonexistent_dir/r.json"}).code == 5);
}

TEST_CASE("limit at k = 1 is the empty sum") {
  auto res = cli({"limit", "--algebra", "A1", "--seifert", "2,3,5", "--level", "1"});
  CHECK(res.code == 0);
  VerificationReport r = parse_report_json(res.out);
  CHECK(r.results.at("value_re") == "0");
  CHECK(r.results.at("excluded_count") == r.results.at("total_count"));
}

TEST_CASE("wrt agrees between the two sources") {
  auto res = cli({"wrt", "--algebra", "A1", "--seifert", "2,3,5", "--level", "3"});
  CHECK(res.code == 0);
  VerificationReport r = parse_report_json(res.out);
  REQUIRE(r.checks.size() == 1);
  CHECK(r.checks[0].lhs_source == "marino");
  CHECK(r.checks[0].pass);
}

TEST_CASE("block emits the series payload and a csv table") {
  auto res = cli({"block", "--algebra", "A1", "--seifert", "2/1,3/1,5/1", "--cutoff", "3", "--format", "csv"});
  CHECK(res.code == 0);
  CHECK(res.out == "exponent,coefficient\n-133/60,1\n-73/60,-1\n");
  auto js = cli({"block", "--algebra", "A1", "--seifert", "2/1,3/1,5/1", "--cutoff", "3"});
  VerificationReport r = parse_report_json(js.out);
  REQUIRE(r.series.has_value());
  CHECK(r.series->prefactor_exponent == "-89/40");
  CHECK(r.series->terms.front() == std::vector<std::string>{"-532", "1", "1"});
  CHECK(js.out.find("\"denom\": 240") != std::string::npos);
}
