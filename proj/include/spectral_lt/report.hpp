#pragma once

// JSON and CSV serialization of spectra, certificates and run reports.
// Keys are emitted in a fixed order so identical runs give identical bytes.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectral_lt/verify.hpp"

namespace spectral_lt {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

Json to_json(const InequalityCertificate& c);
InequalityCertificate certificate_from_json(const Json& j);

Json to_json(const Spectrum& s);
Spectrum spectrum_from_json(const Json& j);

Json to_json(const KyFanReport& r);
Json to_json(const CounterexampleTable& t);
Json to_json(const CampaignSummary& s);

struct ReportDocument {
  std::string tool_version = kToolVersion;
  Json config = Json::object();
  std::vector<InequalityCertificate> certificates;
  std::optional<Spectrum> spectrum;
  Json results = Json::object();  // command specific payload
  Json timings = Json::object();  // wall-clock seconds; excluded from comparisons
};

Json to_json(const ReportDocument& doc);
ReportDocument report_from_json(const Json& j);

/// Pretty-printed JSON with a trailing newline.
std::string dump_json(const Json& j);

/// The document without its timings, for determinism comparisons.
std::string canonical_report(const ReportDocument& doc);

/// Header `re,im,multiplicity,residual`, one row per distinct eigenvalue.
std::string spectrum_csv(const Spectrum& s);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

}  // namespace spectral_lt
