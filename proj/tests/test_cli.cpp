#include <doctest.h>

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <sstream>
#include <sys/wait.h>

#include "tuplesieve/cli.hpp"

using namespace tuplesieve;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    REQUIRE(res.ec == std::errc());
    return v;
}

}  // namespace

TEST_CASE("run dispatches tuple admissibility checks") {
    ExperimentConfig cfg;
    cfg.command = "tuple.check";
    cfg.tuple1 = "0,4,6,10,12,16";
    auto report = run(cfg);
    CHECK(report.results["admissible"] == true);
    CHECK(report.results["diameter"] == 16);

    cfg.tuple1 = "0,1";
    auto bad = run(cfg);
    CHECK(bad.results["admissible"] == false);
    CHECK(bad.results["witness_prime"] == 2);
}

TEST_CASE("run dispatches singular series") {
    ExperimentConfig cfg;
    cfg.command = "singular-series";
    cfg.tuple1 = "0,1";
    cfg.trunc = 10'000;
    auto report = run(cfg);
    CHECK(report.results["value"] == 0.0);
    CHECK(report.results["admissible"] == false);
}

TEST_CASE("run builds the threshold table") {
    ExperimentConfig cfg;
    cfg.command = "thresholds.table34";
    cfg.theta_list = {"1", "0.95", "0.90"};
    auto report = run(cfg);
    const auto& rows = report.results["rows"];
    REQUIRE(rows.size() == 3);
    CHECK(rows[0]["k"] == 7);
    CHECK(rows[0]["ell_or_L"] == 1);
    CHECK(rows[0]["h_k"] == 20);
    CHECK(rows[1]["k"] == 8);
    CHECK(rows[2]["k"] == 9);
    CHECK(rows[2]["h_k"] == 30);
}

TEST_CASE("identical configs give bit-identical deterministic payloads") {
    ExperimentConfig cfg;
    cfg.command = "moment";
    cfg.tuple1 = "0,2";
    cfg.N = 20'000;
    cfg.R = 50.0;
    cfg.path = "both";
    cfg.workers = 2;
    auto a = run(cfg);
    auto b = run(cfg);
    CHECK(a.deterministic_payload() == b.deterministic_payload());
}

TEST_CASE("report serialization round-trips losslessly") {
    ExperimentConfig cfg;
    cfg.command = "thresholds.er";
    cfg.r = 2;
    cfg.theta = "1";
    auto report = run(cfg);
    auto parsed = report_from_json(report.to_json().dump());
    CHECK(parsed.deterministic_payload() == report.deterministic_payload());
    CHECK(parsed.wall_ms == report.wall_ms);
}

TEST_CASE("CSV and JSON payloads carry identical numeric values") {
    ExperimentConfig cfg;
    cfg.command = "moment";
    cfg.tuple1 = "0,2";
    cfg.N = 5'000;
    cfg.R = 30.0;
    cfg.path = "both";
    auto report = run(cfg);

    std::istringstream csv(report.to_csv());
    std::string header_line, value_line;
    REQUIRE(std::getline(csv, header_line));
    REQUIRE(std::getline(csv, value_line));
    auto headers = split_csv_line(header_line);
    auto values = split_csv_line(value_line);
    REQUIRE(headers.size() == values.size());

    int numeric_checked = 0;
    for (size_t i = 0; i < headers.size(); ++i) {
        const auto& field = report.results[headers[i]];
        if (!field.is_number_float()) continue;
        double from_csv = parse_double(values[i]);
        double from_json = field.get<double>();
        CHECK(std::memcmp(&from_csv, &from_json, sizeof(double)) == 0);  // bitwise equal
        ++numeric_checked;
    }
    CHECK(numeric_checked >= 4);  // R, brute_force, fast_path, predicted_main, ratio
}

TEST_CASE("reproduce reports zero mismatches") {
    auto report = reproduce_reference_tables();
    CHECK(report.results["mismatches"] == 0);
    CHECK(!report.mismatch);
}

TEST_CASE("prime table cache is created and reused") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "tuplesieve_cli_cache";
    fs::remove_all(dir);

    ExperimentConfig cfg;
    cfg.command = "bv-scan";
    cfg.N = 5'000;
    cfg.Q = 20;
    cfg.cache_dir = dir.string();
    auto first = run(cfg);
    CHECK(fs::exists(dir / "primes_5000.gpyp"));
    auto second = run(cfg);  // served from the cache file
    CHECK(first.deterministic_payload() == second.deterministic_payload());
    fs::remove_all(dir);
}

#ifdef CLI_BINARY_PATH
namespace {
int run_binary(const std::string& args) {
    std::string cmd = std::string(CLI_BINARY_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}
}  // namespace

TEST_CASE("binary exit codes") {
    CHECK(run_binary("reproduce") == 0);
    CHECK(run_binary("tuple check 0,4,6,10,12,16") == 0);
    CHECK(run_binary("--no-such-flag") == 1);
    CHECK(run_binary("moment --tuple 0,2") == 1);           // missing required N
    CHECK(run_binary("moment --tuple 0,2 --N 1000") == 1);  // missing R
    CHECK(run_binary("tuple narrowest --k 9 --budget 10") == 3);  // budget exhausted
}
#endif
