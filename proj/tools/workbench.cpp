#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "wpl/suites.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

void print_summary(const wpl::Report& rep) {
    using wpl::Status;
    std::cout << rep.suite << ": " << rep.checks.size() << " checks, " << rep.count(Status::Pass) << " PASS, "
              << rep.count(Status::PassProbabilistic) << " PASS(probabilistic), " << rep.count(Status::Fail)
              << " FAIL, " << rep.count(Status::Skipped) << " SKIPPED\n";
    for (const auto& c : rep.checks)
        if (c.status == Status::Fail) std::cout << "FAIL " << c.id << " [" << c.paper_ref << "]\n  lhs: " << c.lhs << "\n  rhs: " << c.rhs << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verification workbench for weighted projective lines"};
    app.require_subcommand(1);

    wpl::SuiteConfig cfg;
    cfg.cache_dir = wpl::default_cache_dir();
    std::string weights, qs = "2,3,5", mode = "probabilistic", ns, report_path;
    bool timings = false;

    auto* run = app.add_subcommand("run", "run a verification suite");
    run->add_option("suite", cfg.suite, "suite id")->required();
    run->add_option("--weights", weights, "weight tuples, e.g. 2,3;2,2,2");
    run->add_option("--q", qs, "field sizes, e.g. 2,3,5");
    run->add_option("--mode", mode, "probabilistic|exact");
    run->add_option("--n", ns, "chain lengths for the linear suites, e.g. 2,3,4");
    run->add_option("--height-cap", cfg.height_cap, "root height cap for sign coherence");
    run->add_option("--depth", cfg.depth, "Phi dictionary depth");
    run->add_option("--cache", cfg.cache_dir, "Hall-number cache directory");
    run->add_option("--report", report_path, "write the JSON report here");
    run->add_option("--seed", cfg.seed, "seed for sampled checks");
    run->add_flag("--timings", timings, "record elapsed_ms in the report");

    std::string cache_cmd, cache_dir = cfg.cache_dir;
    unsigned cache_seed = 1;
    auto* cache = app.add_subcommand("cache", "maintain the Hall-number cache");
    cache->add_option("command", cache_cmd, "stats|verify|compact")
        ->required()
        ->check(CLI::IsMember({"stats", "verify", "compact"}));
    cache->add_option("--cache", cache_dir, "cache directory");
    cache->add_option("--seed", cache_seed, "offset of the verify sample");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (*cache) {
        if (cache_dir.empty()) {
            std::cerr << "error: no cache directory (use --cache or WPL_CACHE_DIR)\n";
            return kExitConfig;
        }
        try {
            wpl::CacheSummary s = wpl::cache_admin(cache_cmd, cache_dir, cache_seed);
            std::cout << "records " << s.records;
            if (cache_cmd == "verify") std::cout << " checked " << s.checked << " mismatches " << s.mismatches;
            if (cache_cmd == "compact") std::cout << " removed " << s.removed;
            std::cout << "\n";
            if (!s.detail.empty()) std::cout << s.detail << "\n";
            return s.mismatches ? kExitFail : 0;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitIo;
        }
    }

    wpl::Report rep;
    try {
        if (!weights.empty()) cfg.weights = wpl::parse_weights(weights);
        cfg.q_list = wpl::parse_int_list(qs, "q");
        if (!ns.empty()) cfg.n_list = wpl::parse_int_list(ns, "n");
        if (mode == "probabilistic") cfg.mode = wpl::OracleMode::Probabilistic;
        else if (mode == "exact") cfg.mode = wpl::OracleMode::Exact;
        else throw wpl::ConfigError("mode must be probabilistic or exact");
        rep = wpl::run_suite(cfg);
    } catch (const wpl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::out_of_range& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }

    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) {
            std::cerr << "error: cannot write " << report_path << "\n";
            return kExitIo;
        }
        out << rep.to_json(timings).dump(2) << "\n";
    }
    print_summary(rep);
    return rep.ok() ? 0 : kExitFail;
}
