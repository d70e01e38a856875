#include "tuplesieve/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "tuplesieve/numerics.hpp"
#include "tuplesieve/primes.hpp"
#include "tuplesieve/reference_tables.hpp"
#include "tuplesieve/sieve_weights.hpp"
#include "tuplesieve/singular_series.hpp"
#include "tuplesieve/thresholds.hpp"
#include "tuplesieve/tuples.hpp"

namespace tuplesieve {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string cache_path(const std::string& dir, uint64_t limit) {
    return dir + "/primes_" + std::to_string(limit) + ".gpyp";
}

PrimeTable acquire_table(uint64_t limit, const std::string& cache_dir) {
    std::string dir = cache_dir;
    if (dir.empty()) {
        if (const char* env = std::getenv("TUPLESIEVE_CACHE_DIR")) dir = env;
    }
    if (!dir.empty()) {
        if (auto t = PrimeTable::load(cache_path(dir, limit)); t && t->limit() == limit)
            return std::move(*t);
    }
    PrimeTable t = PrimeTable::build(limit);
    if (!dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        t.save(cache_path(dir, limit));
    }
    return t;
}

double resolved_R(const ExperimentConfig& c) {
    if (c.R_exp) {
        if (c.N == 0) throw std::invalid_argument("R exponent needs N");
        return std::pow(static_cast<double>(c.N), *c.R_exp);
    }
    if (c.R <= 0.0) throw std::invalid_argument("missing R (or R exponent)");
    return c.R;
}

nlohmann::json config_echo(const ExperimentConfig& c) {
    nlohmann::json j;
    j["command"] = c.command;
    if (!c.tuple1.empty()) j["tuple1"] = c.tuple1;
    if (!c.tuple2.empty()) j["tuple2"] = c.tuple2;
    if (c.N) j["N"] = c.N;
    if (c.Q) j["Q"] = c.Q;
    if (c.R > 0) j["R"] = c.R;
    if (c.R_exp) j["R_exp"] = *c.R_exp;
    if (c.command == "correlate" || c.command == "weighted") {
        j["l1"] = c.l1;
        j["l2"] = c.l2;
    }
    if (c.command == "weighted") j["h0"] = c.h0;
    if (c.command == "rho") {
        j["weight"] = c.weight;
        j["ell"] = c.ell;
        if (!c.poly_b.empty()) j["poly_b"] = c.poly_b;
    }
    if (c.command == "gallagher") {
        j["k"] = c.k;
        j["h"] = c.h;
        j["convention"] = c.convention;
    }
    if (!c.theta_list.empty()) j["theta_list"] = c.theta_list;
    if (!c.theta.empty()) j["theta"] = c.theta;
    if (c.command == "singular-series" || c.command == "gallagher")
        j["trunc"] = c.trunc;
    if (c.command.rfind("thresholds", 0) == 0) {
        if (c.k) j["k"] = c.k;
        j["L"] = c.L;
        j["r"] = c.r;
        j["nu"] = c.nu;
        j["theta0"] = c.theta0;
        j["ell"] = c.ell;
        if (c.x) j["x"] = *c.x;
    }
    if (c.command == "tuple.narrowest") {
        j["k"] = c.k;
        j["budget"] = c.budget;
    }
    if (c.command == "bv-scan") j["mode"] = c.mode;
    if (c.command == "moment") j["path"] = c.path;
    j["workers"] = c.workers;
    return j;
}

nlohmann::json moment_json(const MomentReport& m) {
    nlohmann::json j;
    j["N"] = m.N;
    j["R"] = m.R;
    j["params"] = m.params;
    j["brute_force"] = m.brute_force;
    j["fast_path"] = m.fast_path;
    j["predicted_main"] = m.predicted_main;
    j["ratio"] = m.ratio;
    j["warnings"] = m.warnings;
    return j;
}

MomentPath parse_path(const std::string& s) {
    if (s == "per_n") return MomentPath::PerN;
    if (s == "per_d") return MomentPath::PerD;
    if (s == "both") return MomentPath::Both;
    throw std::invalid_argument("path must be per_n, per_d, or both");
}

uint64_t tuple_max_shift(const HTuple& t) { return t.shifts().back(); }

void dispatch(const ExperimentConfig& c, RunReport& report) {
    nlohmann::json& res = report.results;

    if (c.command == "tuple.check") {
        HTuple H = HTuple::parse(c.tuple1);
        auto rep = is_admissible(H);
        res["tuple"] = H.to_string();
        res["k"] = H.k();
        res["diameter"] = H.diameter();
        res["admissible"] = rep.admissible;
        if (rep.witness_prime) res["witness_prime"] = *rep.witness_prime;
        nlohmann::json nu = nlohmann::json::object();
        for (auto& [p, v] : rep.nu_values) nu[std::to_string(p)] = v;
        res["nu_values"] = nu;
        if (H.k() >= 2) res["log_delta"] = std::log(delta_product(H).get_d());
    } else if (c.command == "tuple.narrowest") {
        if (c.k < 2) throw std::invalid_argument("narrowest needs --k >= 2");
        auto r = narrowest_admissible(c.k, c.budget);
        res["k"] = c.k;
        res["diameter"] = r.diameter;
        res["tuple"] = HTuple(r.shifts).to_string();
        res["proven_minimal"] = r.proven_minimal;
        res["nodes"] = r.nodes;
        if (!r.proven_minimal) {
            report.resource_flagged = true;
            report.warnings.push_back("node budget exhausted: diameter is an upper bound only");
        }
    } else if (c.command == "singular-series") {
        HTuple H = HTuple::parse(c.tuple1);
        auto s = singular_series(H, c.trunc);
        res["tuple"] = H.to_string();
        res["trunc"] = s.truncation_prime;
        res["value"] = s.value;
        res["tail_bound"] = s.tail_bound;
        res["admissible"] = s.admissible();
        res["tail_model"] = "sum of 2k^2/p^2 over omitted primes";
    } else if (c.command == "gallagher") {
        auto conv = c.convention == "unordered" ? GallagherConvention::Unordered
                                                : GallagherConvention::Ordered;
        double ratio = gallagher_ratio(c.k, c.h, conv, c.trunc);
        res["k"] = c.k;
        res["h"] = c.h;
        res["convention"] = c.convention;
        res["trunc"] = c.trunc;
        res["ratio"] = ratio;
    } else if (c.command == "moment") {
        HTuple H = HTuple::parse(c.tuple1);
        double R = resolved_R(c);
        FactorSieve sieve = FactorSieve::build(c.N + tuple_max_shift(H));
        auto m = first_moment(H, R, c.N, parse_path(c.path), sieve, c.workers);
        res = moment_json(m);
        report.warnings.insert(report.warnings.end(), m.warnings.begin(), m.warnings.end());
    } else if (c.command == "correlate") {
        HTuple H1 = HTuple::parse(c.tuple1), H2 = HTuple::parse(c.tuple2);
        double R = resolved_R(c);
        uint64_t hmax = std::max(tuple_max_shift(H1), tuple_max_shift(H2));
        FactorSieve sieve = FactorSieve::build(c.N + hmax);
        auto m = pair_correlation(H1, H2, c.l1, c.l2, R, c.N, sieve, c.workers);
        res = moment_json(m);
        report.warnings.insert(report.warnings.end(), m.warnings.begin(), m.warnings.end());
    } else if (c.command == "weighted") {
        HTuple H1 = HTuple::parse(c.tuple1), H2 = HTuple::parse(c.tuple2);
        double R = resolved_R(c);
        uint64_t hmax = std::max(tuple_max_shift(H1), tuple_max_shift(H2));
        FactorSieve sieve = FactorSieve::build(c.N + hmax);
        PrimeTable table = acquire_table(c.N + c.h0 + 1, c.cache_dir);
        auto m = weighted_correlation(H1, H2, c.l1, c.l2, c.h0, R, c.N, sieve, table);
        res = moment_json(m);
        auto cs = prop2_case(H1, H2, c.l1, c.l2, c.h0, R);
        res["case"] = cs.kind == Prop2Case::NotInH      ? "not_in_H"
                      : cs.kind == Prop2Case::InH1Only ? (cs.swapped ? "in_H2_only" : "in_H1_only")
                                                       : "in_both";
        res["C_R"] = cs.C_R;
        report.warnings.insert(report.warnings.end(), m.warnings.begin(), m.warnings.end());
    } else if (c.command == "rho") {
        HTuple H = HTuple::parse(c.tuple1);
        double R = resolved_R(c);
        RhoWeight w;
        if (c.weight == "ell") {
            w.kind = RhoWeight::Ell;
            w.ell = c.ell;
        } else if (c.weight == "product") {
            w.kind = RhoWeight::Product;
        } else if (c.weight == "poly") {
            w.kind = RhoWeight::Polynomial;
            w.poly_b = c.poly_b;
            if (w.poly_b.empty()) throw std::invalid_argument("poly weight needs --b coefficients");
        } else {
            throw std::invalid_argument("weight must be ell, product, or poly");
        }
        uint64_t hmax = tuple_max_shift(H);
        FactorSieve sieve = FactorSieve::build(2 * c.N + hmax + 1);
        PrimeTable table = acquire_table(2 * c.N + hmax + 1, c.cache_dir);
        double rho = rho_statistic(H, w, R, c.N, sieve, table, c.workers);
        res["N"] = c.N;
        res["R"] = R;
        res["weight"] = c.weight;
        res["rho"] = rho;
    } else if (c.command == "thresholds.table34") {
        std::vector<Rational> thetas;
        for (auto& t : c.theta_list) thetas.push_back(rational_from_decimal(t));
        auto rows = table_34(thetas);
        nlohmann::json arr = nlohmann::json::array();
        for (size_t i = 0; i < rows.size(); ++i) {
            nlohmann::json row;
            row["theta"] = c.theta_list[i];
            if (rows[i]) {
                row["k"] = rows[i]->k;
                row["ell_or_L"] = rows[i]->ell_or_L;
                row["h_k"] = rows[i]->h_k;
                row["h_k_upper_bound"] = rows[i]->h_k_upper_bound;
            } else {
                row["unsat"] = true;
            }
            arr.push_back(row);
        }
        res["rows"] = arr;
    } else if (c.command == "thresholds.matrix") {
        if (c.k < 1) throw std::invalid_argument("matrix needs --k");
        if (!c.theta.empty()) {
            Rational theta = rational_from_decimal(c.theta);
            WeightMatrix m = weight_matrix(c.k, c.L, theta);
            res["k"] = c.k;
            res["L"] = c.L;
            res["theta"] = c.theta;
            res["lambda_max"] = max_eigenvalue(m);
            res["sign"] = weight_matrix_sign(c.k, c.L, theta);
            if (c.k + 2 * c.L > 170)
                report.warnings.push_back(
                    "raw 1/(k+i+j)! entries underflow doubles at this k; "
                    "sign comes from exactly rescaled entries");
        } else {
            auto th = theta_threshold_matrix(c.k, c.L);
            res["k"] = c.k;
            res["L"] = c.L;
            if (th) {
                res["theta_threshold"] = *th;
            } else {
                res["unsat"] = true;
            }
            if (c.k == 6 && c.L == 1) res["closed_form"] = k6_closed_form();
        }
    } else if (c.command == "thresholds.bessel") {
        if (c.k < 3) throw std::invalid_argument("bessel needs --k >= 3");
        res["k"] = c.k;
        res["threshold"] = bessel_threshold(c.k);
        if (c.table_check) {
            // compare smallest-k against the matrix table; series range limits
            // the rows that can be evaluated, the rest are recorded as skipped
            nlohmann::json arr = nlohmann::json::array();
            std::map<unsigned, double> memo;
            auto thr = [&](unsigned kk) {
                auto it = memo.find(kk);
                if (it != memo.end()) return it->second;
                double v = bessel_threshold(kk);
                memo.emplace(kk, v);
                return v;
            };
            for (const auto& row : reference_table_matrix()) {
                nlohmann::json jr;
                jr["theta"] = row.theta;
                jr["table_k"] = row.k;
                double theta = rational_from_decimal(row.theta).get_d();
                try {
                    bool match = thr(row.k) < theta &&
                                 (row.k == 3 || thr(row.k - 1) >= theta);
                    jr["match"] = match;
                    jr["threshold_k"] = memo[row.k];
                } catch (const numeric_failure&) {
                    jr["skipped"] = "beyond Bessel series stability range";
                }
                arr.push_back(jr);
            }
            res["table_check"] = arr;
        }
    } else if (c.command == "thresholds.er") {
        if (c.theta.empty()) throw std::invalid_argument("er needs --theta");
        double theta = rational_from_decimal(c.theta).get_d();
        auto b = er_bounds(c.r, theta);
        res["r"] = c.r;
        res["theta"] = theta;
        res["simple"] = b.simple;
        if (b.thm3) res["thm3"] = *b.thm3;
        res["unconditional"] = b.unconditional;
    } else if (c.command == "thresholds.thm3") {
        unsigned k = c.k ? c.k : (c.ell + 1) * (c.ell + 1);
        Thm3Params params(k, c.ell, c.nu, c.theta0);
        res["k"] = k;
        res["ell"] = c.ell;
        res["nu"] = c.nu;
        res["theta0"] = c.theta0;
        res["phi"] = params.phi;
        res["a"] = params.a;
        res["Theta"] = params.Theta;
        if (c.x) {
            res["x"] = *c.x;
            res["P"] = thm3_polynomial(params, *c.x);
        } else {
            auto lam = min_lambda(k, c.ell, c.nu, c.theta0);
            if (lam) {
                res["lambda"] = *lam;
            } else {
                res["unsat"] = true;
            }
        }
    } else if (c.command == "bv-scan") {
        if (c.Q == 0 || c.N == 0) throw std::invalid_argument("bv-scan needs --N and --Q");
        PrimeTable table = acquire_table(c.N, c.cache_dir);
        auto mode = c.mode == "estar" ? RemainderMode::EStar : RemainderMode::EPrime;
        double v = bv_sum(c.N, c.Q, table, mode, c.workers);
        res["N"] = c.N;
        res["Q"] = c.Q;
        res["mode"] = c.mode;
        res["value"] = v;
    } else {
        throw std::invalid_argument("unknown command: " + c.command);
    }
}

}  // namespace

RunReport run(const ExperimentConfig& config) {
    RunReport report;
    report.version = kVersion;
    report.command = config.command;
    report.config = config_echo(config);
    auto t0 = std::chrono::steady_clock::now();
    if (config.command == "reproduce") {
        RunReport r = reproduce_reference_tables();
        r.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0).count();
        return r;
    }
    dispatch(config, report);
    report.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0).count();
    return report;
}

RunReport reproduce_reference_tables() {
    RunReport report;
    report.version = kVersion;
    report.command = "reproduce";
    report.config = {{"command", "reproduce"}};
    auto t0 = std::chrono::steady_clock::now();
    int mismatches = 0;

    // first table: minimal (k, ell) from the exact inequality
    {
        nlohmann::json arr = nlohmann::json::array();
        std::vector<Rational> thetas;
        for (const auto& row : reference_table_condition())
            thetas.push_back(rational_from_decimal(row.theta));
        auto rows = table_34(thetas);
        size_t i = 0;
        for (const auto& expect : reference_table_condition()) {
            nlohmann::json jr;
            jr["theta"] = expect.theta;
            jr["expected_k"] = expect.k;
            jr["expected_ell"] = expect.ell_or_L;
            jr["expected_h_k"] = expect.h_k;
            bool ok = rows[i].has_value() && rows[i]->k == expect.k &&
                      rows[i]->ell_or_L == expect.ell_or_L &&
                      rows[i]->h_k == expect.h_k;
            if (rows[i]) {
                jr["k"] = rows[i]->k;
                jr["ell"] = rows[i]->ell_or_L;
                jr["h_k"] = rows[i]->h_k;
            }
            jr["match"] = ok;
            if (!ok) ++mismatches;
            arr.push_back(jr);
            ++i;
        }
        report.results["table_condition"] = arr;
    }

    // second table: positivity at (k, L, theta) plus minimality of k
    {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& expect : reference_table_matrix()) {
            nlohmann::json jr;
            jr["theta"] = expect.theta;
            jr["k"] = expect.k;
            jr["L"] = expect.ell_or_L;
            Rational theta = rational_from_decimal(expect.theta);
            bool positive = weight_matrix_sign(expect.k, expect.ell_or_L, theta) > 0;
            bool minimal = true;
            for (unsigned Lp = 0; Lp <= 12 && minimal; ++Lp)
                if (weight_matrix_sign(expect.k - 1, Lp, theta) > 0) minimal = false;
            auto hk = known_min_diameter(expect.k);
            bool hk_ok = hk && static_cast<int64_t>(hk->first) == expect.h_k;
            jr["lambda_positive"] = positive;
            jr["k_minus_1_fails"] = minimal;
            jr["h_k"] = expect.h_k;
            bool ok = positive && minimal && hk_ok;
            jr["match"] = ok;
            if (!ok) ++mismatches;
            arr.push_back(jr);
        }
        report.results["table_matrix"] = arr;
    }

    // threshold constants
    {
        nlohmann::json j;
        auto th = theta_threshold_matrix(6, 1);
        double cf = k6_closed_form();
        j["bisection"] = th ? *th : std::numeric_limits<double>::quiet_NaN();
        j["closed_form"] = cf;
        bool ok = th && std::abs(*th - cf) < 1e-6;
        j["match"] = ok;
        if (!ok) ++mismatches;
        report.results["matrix_threshold_k6"] = j;
    }
    {
        nlohmann::json j;
        double th = bessel_threshold(6);
        j["threshold"] = th;
        j["expected"] = 0.95971;
        bool ok = std::abs(th - 0.95971) < 1e-3;
        j["match"] = ok;
        if (!ok) ++mismatches;
        bool below = th < k6_closed_form();
        j["below_matrix_threshold"] = below;
        if (!below) ++mismatches;
        report.results["bessel_threshold_k6"] = j;
    }
    {
        nlohmann::json j;
        auto b2 = er_bounds(2, 1.0);
        j["e2_at_theta_1"] = b2.simple;
        bool ok = b2.simple == 0.0;
        static const double expected_unconditional[] = {
            0.0, 0.17157287525380993, 0.5358983848622456, 1.0};
        nlohmann::json arr = nlohmann::json::array();
        for (unsigned r = 1; r <= 4; ++r) {
            double v = er_bounds(r, 0.5).unconditional;
            bool rok = std::abs(v - expected_unconditional[r - 1]) < 1e-12;
            arr.push_back({{"r", r}, {"value", v}, {"match", rok}});
            ok = ok && rok;
        }
        j["unconditional"] = arr;
        j["match"] = ok;
        if (!ok) ++mismatches;
        report.results["er_bounds"] = j;
    }

    report.results["mismatches"] = mismatches;
    report.mismatch = mismatches > 0;
    report.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0).count();
    return report;
}

nlohmann::json RunReport::to_json() const {
    nlohmann::json j;
    j["version"] = version;
    j["command"] = command;
    j["config"] = config;
    j["results"] = results;
    j["warnings"] = warnings;
    j["wall_ms"] = wall_ms;
    if (command == "reproduce") j["mismatch"] = mismatch;
    if (resource_flagged) j["resource_flagged"] = true;
    return j;
}

std::string RunReport::deterministic_payload() const {
    nlohmann::json j = to_json();
    j.erase("wall_ms");
    return j.dump();
}

namespace {

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

void csv_row_from_json(std::ostringstream& out, const nlohmann::json& row,
                       const std::vector<std::string>& cols) {
    for (size_t i = 0; i < cols.size(); ++i) {
        if (i) out << ',';
        if (!row.contains(cols[i])) {
            out << "";
        } else if (row[cols[i]].is_number_float()) {
            out << fmt_double(row[cols[i]].get<double>());
        } else if (row[cols[i]].is_string()) {
            out << csv_quote(row[cols[i]].get<std::string>());
        } else {
            out << row[cols[i]].dump();
        }
    }
    out << '\n';
}

}  // namespace

std::string RunReport::to_csv() const {
    std::ostringstream out;
    auto table = [&](const nlohmann::json& rows, const std::vector<std::string>& cols) {
        for (size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
        out << '\n';
        for (const auto& row : rows) csv_row_from_json(out, row, cols);
    };
    if (results.contains("rows")) {
        table(results["rows"], {"theta", "k", "ell_or_L", "h_k"});
        return out.str();
    }
    if (command == "reproduce") {
        out << "section,match\n";
        for (auto& [key, val] : results.items()) {
            if (val.is_object() && val.contains("match"))
                out << key << ',' << val["match"].dump() << '\n';
            if (val.is_array())
                for (const auto& row : val)
                    if (row.contains("match"))
                        out << key << ',' << row["match"].dump() << '\n';
        }
        return out.str();
    }
    // generic single-row: flatten scalar fields in key order
    std::vector<std::string> cols;
    for (auto& [key, val] : results.items())
        if (val.is_primitive()) cols.push_back(key);
    for (size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    csv_row_from_json(out, results, cols);
    return out.str();
}

std::string RunReport::to_text() const {
    std::ostringstream out;
    out << command << " (v" << version << ")\n";
    std::function<void(const nlohmann::json&, int)> dump = [&](const nlohmann::json& j,
                                                               int indent) {
        std::string pad(indent, ' ');
        if (j.is_object()) {
            for (auto& [key, val] : j.items()) {
                if (val.is_object() || val.is_array()) {
                    out << pad << key << ":\n";
                    dump(val, indent + 2);
                } else if (val.is_number_float()) {
                    out << pad << key << ": " << fmt_double(val.get<double>()) << '\n';
                } else {
                    out << pad << key << ": " << val.dump() << '\n';
                }
            }
        } else if (j.is_array()) {
            for (const auto& item : j) {
                out << pad << "-\n";
                dump(item, indent + 2);
            }
        }
    };
    dump(results, 2);
    for (const auto& w : warnings) out << "  warning: " << w << '\n';
    out << "  wall_ms: " << fmt_double(wall_ms) << '\n';
    return out.str();
}

std::string RunReport::render(const std::string& format) const {
    if (format == "json") return to_json().dump(2) + "\n";
    if (format == "csv") return to_csv();
    return to_text();
}

RunReport report_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    RunReport r;
    r.version = j.at("version").get<std::string>();
    r.command = j.at("command").get<std::string>();
    r.config = j.at("config");
    r.results = j.at("results");
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.wall_ms = j.at("wall_ms").get<double>();
    if (j.contains("mismatch")) r.mismatch = j["mismatch"].get<bool>();
    if (j.contains("resource_flagged")) r.resource_flagged = j["resource_flagged"].get<bool>();
    return r;
}

}  // namespace tuplesieve
