#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tuplesieve/cli.hpp"
#include "tuplesieve/errors.hpp"

using tuplesieve::ExperimentConfig;

namespace {

// exit codes: 0 ok, 1 usage, 2 reproduce mismatch, 3 resource limit
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMismatch = 2;
constexpr int kExitResource = 3;

void add_R_options(CLI::App* cmd, ExperimentConfig& cfg, double& r_exp, bool& has_exp) {
    cmd->add_option("--R", cfg.R, "divisor truncation R");
    auto* opt = cmd->add_option("--R-exp", r_exp, "R as an exponent of N (R = N^e)");
    opt->each([&has_exp](const std::string&) { has_exp = true; });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"prime tuple sieve experiments: admissible tuples, singular series,\n"
                 "truncated divisor-sum weights, and the two-primes threshold calculus"};
    app.require_subcommand(1);
    app.fallthrough();

    ExperimentConfig cfg;
    double N_in = 0, Q_in = 0, h0_in = 0, h_in = 0, trunc_in = 100000, budget_in = 2e9;
    double r_exp = 0;
    bool has_exp = false;
    std::string theta_csv;

    app.add_option("--format", cfg.format, "output format: text|json|csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--workers", cfg.workers, "worker threads for partitionable sums")
        ->check(CLI::Range(1, 256));
    app.add_option("--cache", cfg.cache_dir,
                   "prime table cache directory (or TUPLESIEVE_CACHE_DIR)");

    auto* tuple = app.add_subcommand("tuple", "tuple admissibility and search");
    auto* tcheck = tuple->add_subcommand("check", "test admissibility of a tuple");
    tcheck->add_option("shifts", cfg.tuple1, "comma-separated shifts, e.g. 0,4,6,10,12,16")
        ->required();
    auto* tnarrow = tuple->add_subcommand("narrowest", "minimum-diameter admissible k-tuple");
    tnarrow->add_option("--k", cfg.k, "tuple size")->required();
    tnarrow->add_option("--budget", budget_in, "search node budget");

    auto* ss = app.add_subcommand("singular-series", "truncated Euler product for a tuple");
    ss->add_option("--tuple", cfg.tuple1, "comma-separated shifts")->required();
    ss->add_option("--trunc", trunc_in, "truncation prime");

    auto* gal = app.add_subcommand("gallagher", "window average of the singular series");
    gal->add_option("--k", cfg.k, "tuple size (<= 3)")->required();
    gal->add_option("--window", h_in, "window length h")->required();
    gal->add_option("--convention", cfg.convention, "ordered|unordered")
        ->check(CLI::IsMember({"ordered", "unordered"}));
    gal->add_option("--trunc", trunc_in, "truncation prime");

    auto* mom = app.add_subcommand("moment", "first moment of the tuple weight");
    mom->add_option("--tuple", cfg.tuple1)->required();
    mom->add_option("--N", N_in, "range length")->required();
    add_R_options(mom, cfg, r_exp, has_exp);
    mom->add_option("--path", cfg.path, "per_n|per_d|both")
        ->check(CLI::IsMember({"per_n", "per_d", "both"}));

    auto* cor = app.add_subcommand("correlate", "second moment / pair correlation");
    cor->add_option("--tuple1", cfg.tuple1)->required();
    cor->add_option("--tuple2", cfg.tuple2)->required();
    cor->add_option("--l1", cfg.l1);
    cor->add_option("--l2", cfg.l2);
    cor->add_option("--N", N_in)->required();
    add_R_options(cor, cfg, r_exp, has_exp);

    auto* wgt = app.add_subcommand("weighted", "prime-weighted correlation");
    wgt->add_option("--tuple1", cfg.tuple1)->required();
    wgt->add_option("--tuple2", cfg.tuple2)->required();
    wgt->add_option("--l1", cfg.l1);
    wgt->add_option("--l2", cfg.l2);
    wgt->add_option("--h0", h0_in, "evaluation shift")->required();
    wgt->add_option("--N", N_in)->required();
    add_R_options(wgt, cfg, r_exp, has_exp);

    auto* rho = app.add_subcommand("rho", "detector ratio Q2/(Q1 log 3N) on (N, 2N]");
    rho->add_option("--tuple", cfg.tuple1)->required();
    rho->add_option("--weight", cfg.weight, "ell|product|poly")
        ->check(CLI::IsMember({"ell", "product", "poly"}));
    rho->add_option("--ell", cfg.ell);
    rho->add_option("--b", cfg.poly_b, "polynomial weight coefficients b_0,b_1,...")
        ->delimiter(',');
    rho->add_option("--N", N_in)->required();
    add_R_options(rho, cfg, r_exp, has_exp);

    auto* th = app.add_subcommand("thresholds", "threshold calculus");
    auto* t34 = th->add_subcommand("table34", "minimal (k, ell) per theta, exact");
    t34->add_option("--theta", theta_csv, "comma-separated theta values")->required();
    auto* tmx = th->add_subcommand("matrix", "eigenvalue method");
    tmx->add_option("--k", cfg.k)->required();
    tmx->add_option("--L", cfg.L);
    tmx->add_option("--theta", cfg.theta, "evaluate lambda_max at this theta; "
                                          "omit to bisect the threshold");
    auto* tbs = th->add_subcommand("bessel", "variational threshold");
    tbs->add_option("--k", cfg.k)->required();
    tbs->add_flag("--table-check", cfg.table_check, "compare against the matrix table");
    auto* ter = th->add_subcommand("er", "normalized prime-gap bounds");
    ter->add_option("--r", cfg.r)->required();
    ter->add_option("--theta", cfg.theta)->required();
    auto* tt3 = th->add_subcommand("thm3", "interval polynomial machinery");
    tt3->add_option("--nu", cfg.nu)->required();
    tt3->add_option("--theta0", cfg.theta0)->required();
    tt3->add_option("--ell", cfg.ell)->required();
    tt3->add_option("--k", cfg.k, "defaults to (ell+1)^2");
    double x_in = 0;
    bool has_x = false;
    tt3->add_option("--x", x_in, "evaluate P(x) instead of minimizing lambda")
        ->each([&has_x](const std::string&) { has_x = true; });

    auto* bv = app.add_subcommand("bv-scan", "sum of remainder terms over moduli q <= Q");
    bv->add_option("--N", N_in)->required();
    bv->add_option("--Q", Q_in)->required();
    bv->add_option("--mode", cfg.mode, "eprime|estar")
        ->check(CLI::IsMember({"eprime", "estar"}));

    app.add_subcommand("reproduce", "regenerate threshold tables and constants, "
                                    "diff against embedded reference values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    cfg.N = static_cast<uint64_t>(N_in);
    cfg.Q = static_cast<uint64_t>(Q_in);
    cfg.h0 = static_cast<uint64_t>(h0_in);
    cfg.h = static_cast<uint64_t>(h_in);
    cfg.trunc = static_cast<uint64_t>(trunc_in);
    cfg.budget = static_cast<uint64_t>(budget_in);
    if (has_exp) cfg.R_exp = r_exp;
    if (has_x) cfg.x = x_in;
    if (!theta_csv.empty()) {
        std::string item;
        for (size_t pos = 0; pos <= theta_csv.size();) {
            size_t next = theta_csv.find(',', pos);
            if (next == std::string::npos) next = theta_csv.size();
            item = theta_csv.substr(pos, next - pos);
            if (!item.empty()) cfg.theta_list.push_back(item);
            pos = next + 1;
        }
    }

    // resolve the command name from the parsed subcommands
    if (tcheck->parsed()) cfg.command = "tuple.check";
    else if (tnarrow->parsed()) cfg.command = "tuple.narrowest";
    else if (ss->parsed()) cfg.command = "singular-series";
    else if (gal->parsed()) cfg.command = "gallagher";
    else if (mom->parsed()) cfg.command = "moment";
    else if (cor->parsed()) cfg.command = "correlate";
    else if (wgt->parsed()) cfg.command = "weighted";
    else if (rho->parsed()) cfg.command = "rho";
    else if (t34->parsed()) cfg.command = "thresholds.table34";
    else if (tmx->parsed()) cfg.command = "thresholds.matrix";
    else if (tbs->parsed()) cfg.command = "thresholds.bessel";
    else if (ter->parsed()) cfg.command = "thresholds.er";
    else if (tt3->parsed()) cfg.command = "thresholds.thm3";
    else if (bv->parsed()) cfg.command = "bv-scan";
    else if (app.get_subcommand("reproduce")->parsed()) cfg.command = "reproduce";
    else {
        std::cerr << "no command selected\n";
        return kExitUsage;
    }

    try {
        tuplesieve::RunReport report = tuplesieve::run(cfg);
        std::cout << report.render(cfg.format);
        if (report.mismatch) return kExitMismatch;
        if (report.resource_flagged) return kExitResource;
        return kExitOk;
    } catch (const tuplesieve::resource_limit_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
