#pragma once

#include "iac/verifier.hpp"

#include <string>
#include <vector>

namespace iac
{

constexpr const char* report_schema_id = "iacheck-report";
constexpr int report_schema_version = 1;

struct CheckEntry
{
    std::string left_file;
    std::string right_file;
    CompatReport report;
};

/// Structured report for one or more checks, laid out as described by
/// `docs/report-schema.json`. Key order and formatting are fixed, so equal
/// inputs give byte-identical text.
std::string report_json( const std::vector<CheckEntry>& checks );

/// Human-readable summary of one check, as printed by `iacheck check`.
std::string report_text( const CheckEntry& entry, bool with_witness );

/// `s0 -a;-> s1 -b!-> s2` against the product the trace was taken from.
std::string format_trace( const Trace& t, const ProductResult& p );

} // namespace iac
