#include "qblocks/report.hpp"

#include <sstream>

#include "json.hpp"
#include "qblocks/error.hpp"

namespace qblocks {

namespace {

using nlohmann::json;

// Integers go out as JSON numbers when they fit in 64 bits.
json int_or_string(const std::string& s) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used == s.size() && std::to_string(v) == s) return v;
  } catch (const std::exception&) {
  }
  return s;
}

std::string as_string(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw ValidationError("report field is neither a string nor an integer");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string complex_text(const std::string& re, const std::string& im) {
  if (!im.empty() && im[0] == '-') return re + " - " + im.substr(1) + "i";
  return re + " + " + im + "i";
}

}  // namespace

std::string emit_json(const VerificationReport& r) {
  json j;
  j["schema"] = kReportSchema;
  j["version"] = r.version;
  j["command"] = r.command;
  j["config"] = r.config;
  j["results"] = r.results;
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"lhs_source", c.lhs_source},
                      {"rhs_source", c.rhs_source},
                      {"lhs", {{"re", c.lhs_re}, {"im", c.lhs_im}}},
                      {"rhs", {{"re", c.rhs_re}, {"im", c.rhs_im}}},
                      {"abs_error", c.abs_error},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  }
  j["checks"] = checks;
  json tables = json::object();
  for (const auto& [name, t] : r.tables) tables[name] = {{"columns", t.columns}, {"rows", t.rows}};
  j["tables"] = tables;
  if (r.series) {
    json terms = json::array();
    for (const auto& t : r.series->terms) {
      json row = json::array();
      for (const auto& x : t) row.push_back(int_or_string(x));
      terms.push_back(row);
    }
    j["series"] = {{"denom", int_or_string(r.series->denom)},
                   {"terms", terms},
                   {"cutoff", r.series->cutoff ? json(*r.series->cutoff) : json(nullptr)},
                   {"prefactor_exponent", r.series->prefactor_exponent}};
  }
  j["notes"] = r.notes;
  j["status"] = r.status;
  if (r.wall_time) j["wall_time_s"] = *r.wall_time;
  return j.dump(2) + "\n";
}

VerificationReport parse_report_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed report JSON: ") + e.what());
  }
  VerificationReport r;
  try {
    r.version = j.at("version").get<std::string>();
    r.command = j.at("command").get<std::string>();
    r.config = j.at("config").get<std::map<std::string, std::string>>();
    r.results = j.at("results").get<std::map<std::string, std::string>>();
    for (const auto& c : j.at("checks")) {
      CheckResult x;
      x.name = c.at("name").get<std::string>();
      x.lhs_source = c.at("lhs_source").get<std::string>();
      x.rhs_source = c.at("rhs_source").get<std::string>();
      x.lhs_re = c.at("lhs").at("re").get<std::string>();
      x.lhs_im = c.at("lhs").at("im").get<std::string>();
      x.rhs_re = c.at("rhs").at("re").get<std::string>();
      x.rhs_im = c.at("rhs").at("im").get<std::string>();
      x.abs_error = c.at("abs_error").get<std::string>();
      x.tolerance = c.at("tolerance").get<std::string>();
      x.pass = c.at("pass").get<bool>();
      r.checks.push_back(std::move(x));
    }
    for (const auto& [name, t] : j.at("tables").items()) {
      ReportTable tab;
      tab.columns = t.at("columns").get<std::vector<std::string>>();
      tab.rows = t.at("rows").get<std::vector<std::vector<std::string>>>();
      r.tables[name] = std::move(tab);
    }
    if (j.contains("series")) {
      const auto& s = j.at("series");
      SeriesPayload p;
      p.denom = as_string(s.at("denom"));
      for (const auto& row : s.at("terms")) {
        std::vector<std::string> t;
        for (const auto& x : row) t.push_back(as_string(x));
        p.terms.push_back(std::move(t));
      }
      if (!s.at("cutoff").is_null()) p.cutoff = s.at("cutoff").get<std::string>();
      p.prefactor_exponent = s.at("prefactor_exponent").get<std::string>();
      r.series = std::move(p);
    }
    r.notes = j.at("notes").get<std::vector<std::string>>();
    r.status = j.at("status").get<std::string>();
    if (j.contains("wall_time_s")) r.wall_time = j.at("wall_time_s").get<std::string>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("report JSON does not match the schema: ") + e.what());
  }
  return r;
}

std::string emit_csv(const ReportTable& t) {
  std::ostringstream out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_field(t.columns[i]);
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
  return out.str();
}

ReportTable checks_table(const VerificationReport& r) {
  ReportTable t;
  t.columns = check_columns();
  for (const auto& c : r.checks)
    t.rows.push_back({c.name, c.lhs_source, c.lhs_re, c.lhs_im, c.rhs_source, c.rhs_re, c.rhs_im, c.abs_error,
                      c.tolerance, c.pass ? "true" : "false"});
  return t;
}

std::string emit_text(const VerificationReport& r) {
  std::ostringstream out;
  out << r.version << "  " << r.command << "\n";
  out << "config:\n";
  for (const auto& [k, v] : r.config) out << "  " << k << " = " << v << "\n";
  if (!r.results.empty()) {
    out << "results:\n";
    for (const auto& [k, v] : r.results) out << "  " << k << " = " << v << "\n";
  }
  if (r.series) {
    out << "series: " << r.series->terms.size() << " terms, exponents num/" << r.series->denom;
    if (r.series->cutoff) out << ", exact through " << *r.series->cutoff;
    out << ", prefactor exponent " << r.series->prefactor_exponent << "\n";
    for (const auto& t : r.series->terms) out << "  q^(" << t[0] << "/" << r.series->denom << ") * " << t[1]
                                              << (t[2] == "1" ? "" : "/" + t[2]) << "\n";
  }
  for (const auto& c : r.checks) {
    out << "check " << c.name << ": " << (c.pass ? "PASS" : "FAIL") << "\n"
        << "  " << c.lhs_source << " = " << complex_text(c.lhs_re, c.lhs_im) << "\n"
        << "  " << c.rhs_source << " = " << complex_text(c.rhs_re, c.rhs_im) << "\n"
        << "  |difference| = " << c.abs_error << " (tolerance " << c.tolerance << ")\n";
  }
  for (const auto& [name, t] : r.tables) {
    out << "table " << name << " (" << t.rows.size() << " rows):\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << "  " << t.columns[i];
    out << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << "  " << row[i];
      out << "\n";
    }
  }
  for (const auto& n : r.notes) out << "note: " << n << "\n";
  if (r.wall_time) out << "wall time: " << *r.wall_time << " s\n";
  out << "status: " << r.status << "\n";
  return out.str();
}

}  // namespace qblocks
