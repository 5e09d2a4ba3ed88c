#pragma once

// Report serialization: JSON with fixed key order and 17-significant-digit
// floats, and the sweep CSV.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "resolvon/resolver.hpp"
#include "resolvon/soft_cover.hpp"

namespace resolvon {

using Json = nlohmann::ordered_json;

/// printf("%.17g"); throws NumericalError for NaN or infinity.
std::string format_double(double v);

/// Two-space indented JSON, keys in insertion order, floats via format_double.
std::string dump_json(const Json& j);

Json to_json(const SoftCoverParams& p);
Json to_json(const CoverCertificate& c);
Json to_json(const BoundTerms& b);
Json to_json(const ResolvabilityReport& r);
Json to_json(const GeneralResolveReport& r);
Json to_json(const BaselineStats& s);
Json to_json(const TypeClass& t);
Json to_json(const Sequence& s);

struct SweepRow {
  std::uint64_t l = 0;
  double trace_dist = 0.0;
  double bound = 0.0;
  double d_max = 0.0;
  std::uint64_t required_l = 0;
  std::optional<double> baseline_mean;
};

Json to_json(const SweepRow& row);

inline constexpr const char* kSweepCsvHeader = "L,trace_dist,bound,d_max,required_L,baseline_mean";

/// Header line plus one line per row; a missing baseline is an empty field.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Writes `text` to `path`, throwing std::runtime_error with the OS detail.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace resolvon
