// Command-line front end: exact verification suites for the zero-mode state
// space, generic nilpotent homology on user matrices, and the dimension
// feasibility solver. All heavy lifting lives in the headers; this file only
// parses flags and forwards to the stream-based drivers.

#include "qhomology/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"exact homological verification for the lattice zero-mode state space"};
    app.name(qh::cli::kToolName);
    app.set_version_flag("--version", std::string(qh::cli::kToolVersion));
    app.require_subcommand(1);

    qh::cli::SuiteConfig cfg;
    bool heights_given = false, suites_given = false;
    std::vector<int> heights_in;
    std::vector<std::string> suites_in;
    CLI::App* verify = app.add_subcommand("verify", "run verification suites");
    verify->add_option("--height", heights_in, "heights to verify (default: 2 3)")
        ->check(CLI::Range(2, 64))
        ->each([&](const std::string&) { heights_given = true; });
    verify
        ->add_option("--suite", suites_in,
                     "suites to run: relations, theorem0, section3, theorem1, hochschild, all "
                     "(default: all)")
        ->each([&](const std::string&) { suites_given = true; });
    verify->add_option("--seed", cfg.seed, "PRNG seed recorded in reports");
    verify->add_option("--trials", cfg.trials, "randomized trial count")
        ->check(CLI::PositiveNumber);
    verify->add_option("--out", cfg.out_path, "write the report to a file instead of stdout");
    verify->add_option("--format", cfg.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    verify->add_option("--cache-dir", cfg.cache_dir, "directory for the solved-model cache")
        ->envname("QHOMOLOGY_CACHE_DIR");
    verify->add_flag("--force", cfg.force, "run size-capped suites anyway");
    verify->add_flag("--no-cache", cfg.no_cache, "ignore and do not write the model cache");

    qh::cli::HomologyArgs hargs;
    int hom_height = 0, hom_k = 0;
    CLI::App* homology =
        app.add_subcommand("homology", "generalized homology of an h-nilpotent matrix file");
    homology->add_option("matrix_file", hargs.matrix_file, "JSON matrix file")->required();
    CLI::Option* opt_height =
        homology->add_option("--height", hom_height, "expected height (must match the file)");
    CLI::Option* opt_k = homology->add_option("--k", hom_k, "single homology order to report");
    homology->add_option("--format", hargs.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    homology->add_option("--out", hargs.out_path, "write the report to a file instead of stdout");

    qh::cli::FeasibilityArgs fargs;
    CLI::App* feas = app.add_subcommand(
        "feasibility", "which block multiplicities can realize a total dimension");
    feas->add_option("--dim", fargs.dim, "total dimension")->required();
    feas->add_option("--height", fargs.height, "height")->required()->check(CLI::Range(2, 1024));
    feas->add_option("--format", fargs.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    feas->add_option("--out", fargs.out_path, "write the report to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (heights_given) cfg.heights = heights_in;
    if (suites_given) cfg.suites = suites_in;
    if (opt_height->count() > 0) hargs.height = hom_height;
    if (opt_k->count() > 0) hargs.k = hom_k;

    try {
        if (verify->parsed()) return qh::cli::run_verify(cfg, std::cout, std::cerr);
        if (homology->parsed()) return qh::cli::run_homology(hargs, std::cout, std::cerr);
        return qh::cli::run_feasibility(fargs, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
