#pragma once

// CSV and JSON encodings shared by the command line and the tests.

#include "mobius/arithfn.hpp"
#include "mobius/construct.hpp"
#include "mobius/density.hpp"
#include "mobius/experiment.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace mobius::io {

using nlohmann::json;

// `n,value` with a header, one row per n in [1, N].
void write_function_csv(std::ostream& out, const ArithFunction& f);
// Rows must be n = 1, 2, ..., N in order. FormatError otherwise.
ArithFunction read_function_csv(std::istream& in, std::string label);
ArithFunction read_function_csv(const std::filesystem::path& path);
void write_function_csv(const std::filesystem::path& path, const ArithFunction& f);

// `x,count,ratio`.
void write_checkpoints_csv(std::ostream& out, const DensityEstimate& est);
json checkpoints_json(const DensityEstimate& est);

// Z breakpoints from a CSV with header `x,value`.
ZFunction read_z_table(const std::filesystem::path& path);

// Comma separated nonnegative integers; empty string gives an empty list.
std::vector<std::uint64_t> parse_list(const std::string& text);
std::string format_list(std::span<const std::uint64_t> values);

json to_json(const Criterion& c);
json to_json(const ExperimentReport& r);
json to_json(const PrimeSelection& s);
json to_json(const ConstructionReport& r);

ExperimentReport report_from_json(const json& j);

// Statuses re-evaluated from the stored observed values and thresholds.
// Inconclusive criteria stay inconclusive.
std::vector<Criterion> recompute_verdict(const ExperimentReport& r);

// The report with runtime_ms dropped, for reproducibility comparisons.
json comparable(const ExperimentReport& r);

void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

} // namespace mobius::io
