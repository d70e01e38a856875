#pragma once

// Experiment orchestration behind the command-line surface: a parsed
// config, a dispatcher over the library modules, and report
// serialization to JSON, CSV, and plain text.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace tuplesieve {

struct ExperimentConfig {
    std::string command;            // e.g. "moment", "thresholds.table34"
    std::string tuple1;             // comma-separated shifts
    std::string tuple2;
    uint64_t N = 0;
    uint64_t Q = 0;
    double R = 0.0;
    std::optional<double> R_exp;    // R = N^R_exp when set
    unsigned l1 = 0, l2 = 0, ell = 0;
    uint64_t h0 = 0;
    uint64_t h = 0;
    std::vector<std::string> theta_list;
    std::string theta;              // decimal string, parsed exactly
    unsigned r = 1;
    unsigned nu = 2;
    double theta0 = 0.5;
    unsigned k = 0, L = 0;
    std::optional<double> x;        // thm3 polynomial evaluation point
    uint64_t trunc = 100'000;       // singular series truncation
    std::string convention = "ordered";
    std::string weight = "ell";
    std::vector<double> poly_b;
    std::string mode = "eprime";
    std::string path = "both";
    std::string format = "text";    // json | csv | text
    int workers = 1;
    std::string cache_dir;          // or env TUPLESIEVE_CACHE_DIR
    uint64_t budget = 2'000'000'000;
    bool table_check = false;       // thresholds.bessel: compare against matrix table
};

struct RunReport {
    std::string version;
    std::string command;
    nlohmann::json config;
    nlohmann::json results;
    std::vector<std::string> warnings;
    double wall_ms = 0.0;
    bool mismatch = false;          // reproduce: any diff against reference
    bool resource_flagged = false;  // partial result due to budget limits

    nlohmann::json to_json() const;
    // identical payload minus the wall clock; used by determinism checks
    std::string deterministic_payload() const;
    std::string to_csv() const;
    std::string to_text() const;
    std::string render(const std::string& format) const;
};

// Dispatches the config to the matching module operation.
// Throws std::invalid_argument for unusable configs.
RunReport run(const ExperimentConfig& config);

// Regenerates both threshold tables, the matrix and Bessel constants, and
// the E_r bounds, diffing them against the embedded reference values.
RunReport reproduce_reference_tables();

// Round-trips a serialized report (parse of the JSON rendering).
RunReport report_from_json(const std::string& text);

}  // namespace tuplesieve
