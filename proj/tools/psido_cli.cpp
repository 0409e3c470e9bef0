#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "psido/harness.hpp"

using namespace psido;

namespace {

int exit_code(const std::string& verdict) { return verdict == "fail" ? 2 : 0; }

int cmd_run(const std::string& path, const std::string& out, std::optional<int> workers, std::optional<std::uint64_t> seed,
            int verbosity) {
    ExperimentConfig c;
    try {
        c = parse_config_file(path);
    } catch (const ConfigError& e) {
        for (const auto& v : e.violations) std::cerr << "config error: " << v << "\n";
        return 1;
    }
    RunOptions o;
    o.workers = workers;
    o.seed = seed;
    if (verbosity > 0) o.log = [](const std::string& s) { std::cerr << "  " << s << "\n"; };
    const Report r = run_experiment(c, o);
    const auto [jp, cp] = write_report(r, out);
    if (verbosity >= 0) {
        std::cout << report_table(r);
        std::cout << "  wrote " << jp << "\n  wrote " << cp << "\n";
        std::cout << "  runtime " << r.seconds << " s\n";
    }
    return exit_code(r.verdict);
}

int cmd_validate(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        std::cerr << "config error: cannot read '" << path << "'\n";
        return 1;
    }
    json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        std::cerr << "config error: not valid JSON (" << e.what() << ")\n";
        return 1;
    }
    const auto v = validate_config(j);
    for (const auto& s : v) std::cerr << "config error: " << s << "\n";
    if (!v.empty()) return 1;
    std::cout << path << ": valid\n";
    return 0;
}

int cmd_show(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        std::cerr << "error: cannot read '" << path << "'\n";
        return 1;
    }
    json j;
    is >> j;
    Report r = report_from_json(j);
    const std::string recomputed = compute_verdict(r);
    if (recomputed != r.verdict) {
        std::cerr << "warning: stored verdict '" << r.verdict << "' differs from the recomputed '" << recomputed << "'\n";
        r.verdict = recomputed;
    }
    std::cout << report_table(r);
    return exit_code(r.verdict);
}

int cmd_list() {
    std::cout << "symbol and amplitude families:\n";
    for (const auto& [n, d] : builtin_family_names()) std::cout << "  " << n << ": " << d << "\n";
    std::cout << "domain fixtures:\n";
    for (const auto& [n, d] : domain_fixture_names()) std::cout << "  " << n << ": " << d << "\n";
    std::cout << "experiment kinds:\n";
    for (const auto& k : experiment_kinds()) std::cout << "  " << k << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"psido: Schatten quasi-norm experiments for pseudo-differential operators"};
    app.require_subcommand(1);
    app.fallthrough();
    int verbose = 0;
    bool quiet = false;
    app.add_flag("-v,--verbose", verbose, "progress messages on stderr");
    app.add_flag("-q,--quiet", quiet, "no summary table");

    std::string config, out = "reports", report;
    std::optional<int> workers;
    std::optional<std::uint64_t> seed;

    auto* run = app.add_subcommand("run", "run an experiment and write <out>/<name>.json and .csv");
    run->add_option("config", config, "config file")->required()->check(CLI::ExistingFile);
    run->add_option("--out,-o", out, "output directory");
    run->add_option("--workers,-j", workers, "worker threads (overrides the config)")->check(CLI::PositiveNumber);
    run->add_option("--seed,-s", seed, "seed (overrides the config)");

    auto* list = app.add_subcommand("list-fixtures", "list symbol families, domains and experiment kinds");
    auto* val = app.add_subcommand("validate-config", "check a config without running it");
    val->add_option("config", config, "config file")->required();
    auto* show = app.add_subcommand("show-report", "print a stored report as a table");
    show->add_option("report", report, "report .json file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    try {
        if (*run) return cmd_run(config, out, workers, seed, quiet ? -1 : verbose);
        if (*list) return cmd_list();
        if (*val) return cmd_validate(config);
        if (*show) return cmd_show(report);
    } catch (const ResolutionError& e) {
        std::cerr << "error: " << e.what() << " (required " << e.required() << ")\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
