#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dimspec/config.hpp"

namespace dimspec::cli {

// One machine-readable result. Enclosures are always serialized as two
// endpoints, never as a midpoint.
struct ResultRecord {
    nlohmann::json task;     // task echo
    nlohmann::json input;    // config echo
    nlohmann::json outputs;  // task-specific payload
    nlohmann::json flags;    // converged, guard_band_hits, ...
    std::optional<double> wall_time_ms;

    nlohmann::json to_json() const;
    static ResultRecord from_json(const nlohmann::json& j);

    bool operator==(const ResultRecord& other) const;
};

struct RunOutcome {
    std::vector<ResultRecord> records;
    int exit_code = 0;     // 0 ok, 2 validation error, 3 budget exhaustion
    std::string error;     // diagnostic for nonzero exit codes
};

// Dispatches the configured task. Budget exhaustion keeps the records
// produced so far and reports exit code 3.
RunOutcome run(const RunConfig& cfg);

// Serializes records: "json" yields a JSON array mirroring ResultRecord;
// "csv" yields tables for curve/exhaust and flat name,value rows otherwise.
// Identical records serialize byte-identically.
std::string emit(const std::vector<ResultRecord>& records, const std::string& format);

}  // namespace dimspec::cli
