// llb: pseudo-spectral Landau-Lifshitz-Bloch experiment driver.
//
//   llb solve|verify|sweep-smallness|blowup-watch|stability|plot
//       --config <path> [--resume] [--out <dir>] [--seed <u64>] [--workers <n>]
//
// Exit codes: 0 success/complete, 2 divergence (or failed verdicts), 1 config
// error.  LLB_OUT_DIR, when set, is the root for relative output directories.

#include <cstdlib>
#include <filesystem>
#ifdef __GLIBC__
#include <malloc.h>
#endif
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "llb/errors.hpp"
#include "llb/run.hpp"

namespace fs = std::filesystem;

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    bool resume = false;
    bool seed_set = false;
    std::uint64_t seed = 0;
    int workers = 0;
};

std::string resolve_out_dir(const llb::ExperimentConfig& cfg, const CliOptions& opt) {
    fs::path dir = !opt.out_dir.empty()
                       ? fs::path(opt.out_dir)
                       : (!cfg.output_dir.empty() ? fs::path(cfg.output_dir)
                                                  : fs::path("llb-out"));
    if (dir.is_relative()) {
        if (const char* root = std::getenv("LLB_OUT_DIR"); root && *root)
            dir = fs::path(root) / dir;
    }
    return dir.string();
}

llb::ExperimentConfig load_config(const CliOptions& opt, const std::string& command) {
    llb::ExperimentConfig cfg = llb::ExperimentConfig::from_file(opt.config_path);
    if (cfg.kind != command)
        throw llb::ConfigError("config kind '" + cfg.kind +
                               "' does not match the '" + command + "' command");
    if (opt.seed_set) {
        if (cfg.kind == "verify")
            cfg.verify.seed = opt.seed;
        else if (cfg.kind == "stability")
            cfg.stability.perturbation_seed = opt.seed;
        else
            cfg.initial.seed = opt.seed;
    }
    if (opt.workers > 0) cfg.sweep.workers = opt.workers;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef __GLIBC__
    // Large spectral fields churn through the allocator; keep the big
    // blocks on the heap instead of round-tripping them through mmap.
    mallopt(M_MMAP_THRESHOLD, 64 * 1024 * 1024);
    mallopt(M_TRIM_THRESHOLD, 256 * 1024 * 1024);
#endif
    CLI::App app{"Pseudo-spectral Landau-Lifshitz-Bloch solver and estimate lab"};
    app.require_subcommand(1);

    CliOptions opt;
    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* c = sub->add_option("--config", opt.config_path, "JSON experiment config");
        if (config_required) c->required();
        sub->add_option("--out", opt.out_dir, "Output directory (overrides config)");
        sub->add_option("--seed", opt.seed, "Seed override")
            ->each([&](const std::string&) { opt.seed_set = true; });
        sub->add_option("--workers", opt.workers, "Worker pool size for sweeps");
        return sub;
    };

    CLI::App* solve = add_common(app.add_subcommand("solve", "Run one solve"), true);
    solve->add_flag("--resume", opt.resume, "Continue from the last checkpoint");
    CLI::App* blowup =
        add_common(app.add_subcommand("blowup-watch", "Solve and track the blow-up integrand"),
                   true);
    blowup->add_flag("--resume", opt.resume, "Continue from the last checkpoint");
    add_common(app.add_subcommand("verify", "Run inequality verifier suites"), true);
    add_common(app.add_subcommand("sweep-smallness", "Amplitude-ladder sweep"), true);
    add_common(app.add_subcommand("stability", "Two-run perturbation probe"), true);
    CLI::App* plot = add_common(
        app.add_subcommand("plot", "Emit SVG charts from a run directory"), false);
    plot->add_option("--run-dir", opt.out_dir,
                     "Run directory (default: the config file's directory)");

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        if (command == "plot") {
            std::string dir = opt.out_dir;
            if (dir.empty()) {
                if (opt.config_path.empty())
                    throw llb::ConfigError("plot needs --config or --run-dir");
                dir = fs::path(opt.config_path).parent_path().string();
                if (dir.empty()) dir = ".";
            }
            llb::run_plot(dir);
            return 0;
        }

        const llb::ExperimentConfig cfg = load_config(opt, command);
        const std::string out_dir = resolve_out_dir(cfg, opt);

        if (command == "solve" || command == "blowup-watch") {
            const llb::RunSummary s = llb::run_solve(cfg, out_dir, opt.resume);
            if (s.diverged) {
                std::cerr << "diverged: " << s.diagnostic << "\n";
                return 2;
            }
            std::cout << out_dir << "\n";
            return 0;
        }
        if (command == "verify") {
            const bool all_passed = llb::run_verify(cfg, out_dir);
            std::cout << out_dir << "\n";
            return all_passed ? 0 : 2;
        }
        if (command == "sweep-smallness") {
            llb::run_sweep(cfg, out_dir);
            std::cout << out_dir << "\n";
            return 0;
        }
        if (command == "stability") {
            const llb::StabilityReport r = llb::run_stability(cfg, out_dir);
            if (r.diverged) {
                std::cerr << "diverged: " << r.diagnostic << "\n";
                return 2;
            }
            std::cout << out_dir << "\n";
            return 0;
        }
        throw llb::ConfigError("unknown command '" + command + "'");
    } catch (const llb::MissingData& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const llb::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
