#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "llb/monitors.hpp"
#include "llb/solver.hpp"
#include "llb/verifiers.hpp"

namespace llb {

/// Named analytic initial profiles plus checkpoint and random-band data.
struct InitialDataSpec {
    std::string profile = "zero";   // zero | constant | single-mode | two-mode |
                                    // gaussian-bump | random-band | checkpoint
    std::array<int, 3> k{1, 0, 0};
    std::array<int, 3> k_second{0, 2, 0};
    double amplitude = 0.0;
    double amplitude_second = 0.0;
    int component = 1;              // 1-based
    int component_second = 2;
    double width = 1.0;             // gaussian-bump
    int j_lo = 0, j_hi = 1;         // random-band
    std::uint64_t seed = 0;
    std::string path;               // checkpoint
};

SpectralField build_initial_data(const InitialDataSpec& spec, const Grid& grid,
                                 const DyadicPartition& P);

struct MonitorConfig {
    double smallness_eps = 0.0;     // 0 disables the smallness monitor
    bool damped_split = false;      // damped heat flow in the u = uL + utilde split
    double gronwall_c = 1.0;        // C in the stability bound exp(C int ...)
    double condition1_c = 1.0;      // C in the int phi exp(C int psi) report
};

struct SweepConfig {
    std::vector<double> amplitudes;
    int workers = 0;                // 0 = hardware concurrency
};

struct StabilityConfig {
    double perturbation_scale = 1e-6;
    std::uint64_t perturbation_seed = 1;
};

struct VerifyConfig {
    std::string suite = "all";
    int samples = 50;
    std::uint64_t seed = 7;
};

struct ExperimentConfig {
    std::string kind;               // solve | verify | sweep-smallness |
                                    // blowup-watch | stability
    int grid_n = 32;
    double box_length = 2.0 * M_PI;
    LLBParams params;
    InitialDataSpec initial;
    double horizon = 1.0;
    double dt = 0.0;                // 0 = CFL-style default
    std::string output_dir;
    MonitorConfig monitors;
    SweepConfig sweep;
    StabilityConfig stability;
    VerifyConfig verify;

    /// Fail-closed parse: unknown keys are errors, with the offending path.
    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig from_file(const std::string& path);
    std::string to_json() const;
};

struct RunSummary {
    bool completed = false;
    bool diverged = false;
    std::string diagnostic;
    double t_final = 0.0;
    double dt_used = 0.0;
    int steps = 0;
    std::map<std::string, double> accumulators;
    MonitorSample terminal;
    double c1 = 0.0;
    bool smallness_active = false;
    SmallnessReport smallness;
    double condition1_integral = 0.0;
    bool blowup_converged = false;
    std::string classification;     // decayed | bounded | diverged(grid-limited)
};

/// Executes a solve (or blowup-watch) run into `out_dir`: config.json,
/// monitors.csv, checkpoints/NNNNNN.llbs, summary.json.  With `resume`
/// the run continues from the last checkpoint.
RunSummary run_solve(const ExperimentConfig& cfg, const std::string& out_dir,
                     bool resume = false);

struct SweepPoint {
    double amplitude = 0.0;
    std::string classification;
    RunSummary summary;
};

std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg,
                                  const std::string& out_dir);

struct StabilityReport {
    std::vector<double> times;
    std::vector<double> ratios;     // ||du(t)|| / ||du(0)|| in B^{3/2}_{2,1}
    double max_ratio = 0.0;
    double gronwall_budget = 0.0;   // C * int (||u1||^2 + ||u2||^2)_{B^{3/2}}
    double bound = 0.0;             // exp(budget)
    bool within_bound = false;
    bool diverged = false;
    std::string diagnostic;
};

StabilityReport run_stability(const ExperimentConfig& cfg, const std::string& out_dir);

/// Runs the configured verifier suite, writes verdicts.jsonl into out_dir.
/// Returns true iff every verdict passed.
bool run_verify(const ExperimentConfig& cfg, const std::string& out_dir);

/// Emits energy.svg, besov.svg, phipsi.svg, blowup.svg from monitors.csv.
void run_plot(const std::string& run_dir);

}  // namespace llb
