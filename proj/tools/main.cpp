#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "commands.hpp"
#include "config.hpp"
#include "eplab/acceptance.hpp"
#include "eplab/core.hpp"

namespace {

enum Exit { ok = 0, validation = 2, pole = 3, resolution = 4, internal = 5 };

int validate_suite(const std::vector<int>& ids, std::uint64_t seed, bool verbose) {
    eplab::AcceptanceOptions opt;
    opt.only = ids;
    opt.seed = seed;
    std::printf("%-4s  %-9s  %-60s  %s\n", "id", "status", "criterion", "seconds");
    bool all = true;
    for (const auto& r : eplab::run_acceptance(opt)) {
        std::printf("%-4d  %-9s  %-60s  %.3g\n", r.id, r.passed() ? "PASS" : "FAIL", r.title.c_str(), r.seconds);
        for (const auto& c : r.checks)
            if (verbose || !c.passed)
                std::printf("      %s %s: %s\n", c.passed ? "ok  " : "FAIL", c.name.c_str(), c.detail.c_str());
        std::fflush(stdout);
        all = all && r.passed();
    }
    return all ? ok : validation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exceptional-point sensor noise toolkit"};
    app.require_subcommand(1);
    std::string config_path, out_dir, formula;
    std::uint64_t seed = 0;
    int workers = 1;
    bool no_guard = false, verbose = false;
    std::vector<int> ids;

    std::vector<CLI::App*> runs;
    for (const char* name : {"eigen", "tf", "spectrum", "freqnoise", "simulate", "imprecision", "sweep"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
        sub->add_option("--seed", seed, "base seed (overrides seed)");
        sub->add_option("--workers", workers, "parallel sweep workers")->check(CLI::PositiveNumber);
        sub->add_option("--formula", formula, "formula family (overrides formula)")
            ->check(CLI::IsMember({"exact", "near_resonance", "both"}));
        sub->add_flag("--no-pole-guard", no_guard, "fail instead of excluding bins near a real resonance");
        runs.push_back(sub);
    }
    auto* val = app.add_subcommand("validate", "run the acceptance suite");
    val->add_option("ids", ids, "criterion ids (default all)");
    val->add_option("--seed", seed, "seed for the stochastic criteria");
    val->add_flag("-v,--verbose", verbose, "print every check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : validation;
    }

    try {
        if (val->parsed()) return validate_suite(ids, val->count("--seed") ? seed : eplab::AcceptanceOptions{}.seed, verbose);
        for (auto* sub : runs) {
            if (!sub->parsed()) continue;
            auto cfg = eplab::cli::load_config(config_path);
            if (sub->count("--out")) cfg.set_text("output.dir", out_dir);
            if (sub->count("--seed")) cfg.set_integer("seed", std::int64_t(seed));
            if (sub->count("--formula")) cfg.set_text("formula", formula);
            eplab::cli::RunOptions opt;
            opt.workers = workers;
            opt.pole_guard = !no_guard;
            std::cout << eplab::cli::run_and_write(sub->get_name(), cfg, opt) << "\n";
        }
        return ok;
    } catch (const eplab::ValidationError& e) {
        std::cerr << "error: validation failed:\n";
        for (const auto& v : e.violations()) std::cerr << "  " << v << "\n";
        return validation;
    } catch (const eplab::PoleError& e) {
        std::cerr << "error: pole guard: " << e.what() << "\n";
        return pole;
    } catch (const eplab::ResolutionError& e) {
        std::cerr << "error: resolution: " << e.what() << "\n";
        return resolution;
    } catch (const eplab::StatisticsError& e) {
        std::cerr << "error: statistics: " << e.what() << "\n";
        return resolution;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return validation;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return validation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return internal;
    }
}
