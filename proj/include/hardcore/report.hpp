#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hardcore/block_bound.hpp"
#include "hardcore/bound_report.hpp"
#include "hardcore/oracles.hpp"

namespace hardcore {

inline constexpr int report_schema_version = 1;

struct Provenance {
    std::string version;
    std::uint64_t seed = 0;
    double seconds = 0.0;
    std::string command;
};

struct ReportBundle {
    std::vector<BoundReport> reports;
    Provenance provenance;
};

nlohmann::json to_json(const BoundReport& r);
BoundReport bound_report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ReportBundle& bundle);
nlohmann::json to_json(const StageStats& s);
nlohmann::json to_json(const DensityProfile& p);

/// Human-readable table, one row per report.
void write_table(std::ostream& out, const std::vector<BoundReport>& reports);

/// CSV with columns k, probability, generator.
void write_profiles_csv(std::ostream& out, const std::vector<DensityProfile>& profiles);

struct StripRow {
    int width;
    StripBoundary boundary;
    double entropy;
};

/// CSV with columns width, boundary, entropy.
void write_strips_csv(std::ostream& out, const std::vector<StripRow>& rows);

std::string library_version();

} // namespace hardcore
