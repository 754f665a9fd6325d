#include "spectral_lt/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace spectral_lt {
namespace {

// JSON has no infinities; they are written as strings and read back.
Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double read_number(const Json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

Json to_json(const InequalityCertificate& c) {
  Json j;
  j["name"] = c.name;
  j["lhs"] = number(c.lhs);
  j["rhs"] = number(c.rhs);
  j["margin"] = number(c.margin);
  j["slack"] = number(c.slack);
  j["passed"] = c.passed;
  Json params = Json::object();
  for (const auto& [k, v] : c.parameters) params[k] = number(v);
  j["parameters"] = std::move(params);
  Json meta = Json::object();
  for (const auto& [k, v] : c.metadata) meta[k] = v;
  j["metadata"] = std::move(meta);
  return j;
}

InequalityCertificate certificate_from_json(const Json& j) {
  InequalityCertificate c;
  c.name = j.at("name").get<std::string>();
  c.lhs = read_number(j.at("lhs"));
  c.rhs = read_number(j.at("rhs"));
  c.margin = read_number(j.at("margin"));
  c.slack = read_number(j.at("slack"));
  c.passed = j.at("passed").get<bool>();
  for (const auto& [k, v] : j.at("parameters").items()) c.parameters.emplace_back(k, read_number(v));
  for (const auto& [k, v] : j.at("metadata").items()) c.metadata.emplace_back(k, v.get<std::string>());
  return c;
}

Json to_json(const Spectrum& s) {
  Json values = Json::array();
  for (std::size_t k = 0; k < s.size(); ++k) {
    Json row;
    row["re"] = s.values[k].real();
    row["im"] = s.values[k].imag();
    row["multiplicity"] = s.multiplicities[k];
    row["residual"] = s.residuals[k];
    values.push_back(std::move(row));
  }
  Json j;
  j["eigenvalues"] = std::move(values);
  j["backward_error"] = s.backward_error ? Json(*s.backward_error) : Json(nullptr);
  return j;
}

Spectrum spectrum_from_json(const Json& j) {
  Spectrum s;
  for (const auto& row : j.at("eigenvalues")) {
    s.values.emplace_back(row.at("re").get<double>(), row.at("im").get<double>());
    s.multiplicities.push_back(row.at("multiplicity").get<int>());
    s.residuals.push_back(row.at("residual").get<double>());
  }
  if (!j.at("backward_error").is_null()) s.backward_error = j.at("backward_error").get<double>();
  return s;
}

Json to_json(const KyFanReport& r) {
  Json j;
  j["eigen_sum"] = number(r.eigen_sum);
  j["sampled_min"] = number(r.sampled_min);
  j["optimized"] = number(r.optimized);
  j["samples"] = r.samples;
  j["iterations"] = r.iterations;
  j["lower_bound_margin"] = number(r.lower_bound_margin);
  j["monotone"] = r.monotone;
  return j;
}

Json to_json(const CounterexampleTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json row;
    row["n"] = r.n;
    row["gamma"] = r.gamma;
    row["lhs"] = number(r.lhs);
    row["rhs"] = number(r.rhs);
    row["ratio"] = number(r.ratio);
    rows.push_back(std::move(row));
  }
  Json j;
  j["rows"] = std::move(rows);
  j["unbounded_below_one"] = t.unbounded_below_one;
  return j;
}

Json to_json(const CampaignSummary& s) {
  Json j;
  j["total"] = s.total;
  j["failures"] = s.failures;
  j["min_margin"] = number(s.min_margin);
  j["max_abs_margin"] = number(s.max_abs_margin);
  j["max_schur_residual"] = number(s.max_schur_residual);
  j["seeds"] = s.seeds;
  return j;
}

Json to_json(const ReportDocument& doc) {
  Json j;
  j["tool_version"] = doc.tool_version;
  j["config"] = doc.config;
  Json certs = Json::array();
  for (const auto& c : doc.certificates) certs.push_back(to_json(c));
  j["certificates"] = std::move(certs);
  j["spectrum"] = doc.spectrum ? to_json(*doc.spectrum) : Json(nullptr);
  j["results"] = doc.results;
  j["timings"] = doc.timings;
  return j;
}

ReportDocument report_from_json(const Json& j) {
  ReportDocument doc;
  doc.tool_version = j.at("tool_version").get<std::string>();
  doc.config = j.at("config");
  for (const auto& c : j.at("certificates")) doc.certificates.push_back(certificate_from_json(c));
  if (!j.at("spectrum").is_null()) doc.spectrum = spectrum_from_json(j.at("spectrum"));
  doc.results = j.at("results");
  doc.timings = j.at("timings");
  return doc;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

std::string canonical_report(const ReportDocument& doc) {
  Json j = to_json(doc);
  j.erase("timings");
  return dump_json(j);
}

std::string spectrum_csv(const Spectrum& s) {
  std::ostringstream os;
  os << "re,im,multiplicity,residual\n";
  for (std::size_t k = 0; k < s.size(); ++k) {
    os << format_double(s.values[k].real()) << ',' << format_double(s.values[k].imag()) << ','
       << s.multiplicities[k] << ',' << format_double(s.residuals[k]) << '\n';
  }
  return os.str();
}

}  // namespace spectral_lt
