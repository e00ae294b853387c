#pragma once

#include <array>
#include <string>
#include <vector>

#include "llb/norms.hpp"
#include "llb/solver.hpp"

namespace llb {

/// One row of the monitor time series; column order is fixed and matches
/// the monitors.csv layout.
struct MonitorSample {
    double t = 0.0;
    double L2_energy = 0.0;          // ||u||_L2
    double grad_L2 = 0.0;            // ||grad u||_L2
    double L4_fourth_power = 0.0;    // ||u||_L4^4
    double conservation_residual = 0.0;
    double besov_32 = 0.0;           // ||u||_{B^{3/2}_{2,1}}
    double besov_72 = 0.0;           // ||u||_{B^{7/2}_{2,1}}
    double phi_t = 0.0;
    double psi_t = 0.0;
    double blowup_integrand = 0.0;
    double Hm_norm = 0.0;

    bool finite() const;
    static const std::vector<std::string>& column_names();
    std::string csv_row() const;     // 17 significant digits
};

/// phi(t), psi(t) evaluated on the heat-flow part of the solution.
std::pair<double, double> monitor_phi_psi(const SpectralField& uL,
                                          const LLBParams& params,
                                          const DyadicPartition& P);

/// ||u||^2_{B^{3/p}_{p,1}} + ||u||^{2/(2-delta)}_{B^{2-delta}_{inf,inf}}.
double blowup_integrand(const SpectralField& u, const LLBParams& params,
                        const DyadicPartition& P);

/// Normalized defect of the energy balance between consecutive samples.
double conservation_residual(const MonitorSample& prev, const MonitorSample& next,
                             const LLBParams& params);

/// Fills every column except conservation_residual (pairwise quantity).
MonitorSample measure(const SpectralField& u, double t, const SpectralField& uL,
                      const LLBParams& params, const DyadicPartition& P);

/// Heat-dissipation constant fitted per grid: the minimum over blocks of
/// min |k|^2 on the block's support divided by 2^{2j}.
double fit_c1(const Grid& grid, const DyadicPartition& P);

struct SmallnessReport {
    bool passed = false;
    double eps = 0.0;
    double sup_term = 0.0;       // sup_t ||u||_{B^{3/2}_{2,1}}
    double heat_term = 0.0;      // (C1/2) int ||u||_{B^{7/2}_{2,1}}
    double damping_term = 0.0;   // (kappa/2) int ||u||_{B^{3/2}_{2,1}}
    double total = 0.0;
};

/// Theorem-style smallness check from the state's accumulators
/// ("sup_besov32", "int_besov72", "int_besov32") and a fitted C1.
SmallnessReport smallness_monitor(const SolverState& state, const LLBParams& params,
                                  double c1, double eps);

// Accumulator update: trapezoid between consecutive samples, plus running sup.
void accumulate(SolverState& state, const MonitorSample& prev,
                const MonitorSample& next);

}  // namespace llb
