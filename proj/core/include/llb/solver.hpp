#pragma once

#include <map>
#include <string>

#include "llb/field.hpp"

namespace llb {

struct LLBParams {
    double kappa = 1.0;        // damping
    double mu = 1.0;           // cubic relaxation strength
    double cross_coeff = 1.0;  // coefficient of u x Lap u (1.0 in all acceptance runs)
    double cutoff_n = 0.0;     // Friedrichs n; 0 means "grid maximum"
    double rho = 4.0;          // exponent in the psi monitor, > 2
    double delta = 1.5;        // blow-up criterion delta in (1, 2)
    double p_blowup = 2.0;     // p in the B^{3/p}_{p,1} blow-up norm
    int m_sobolev = 2;         // m for the H^m monitor
    double norm_ceiling = 1e6; // divergence guard on monitored norms

    void validate() const;
    double effective_cutoff(const Grid& g) const;
};

/// Evolving state: the field, physical time, step size, and running
/// time-integral accumulators (trapezoidal).
struct SolverState {
    SpectralField u;
    double t = 0.0;
    double dt = 1e-2;
    std::map<std::string, double> accumulators;
};

/// Full right-hand side Lap u - kappa u + u x Lap u - kappa mu |u|^2 u.
SpectralField rhs_full(const SpectralField& u, const LLBParams& params);

/// Friedrichs-projected right-hand side: the nonlinear terms are wrapped
/// in the cutoff projector.  Throws CutoffViolation when the input carries
/// more than 1e-12 relative spectral mass outside [1/n, n].
SpectralField rhs_friedrichs(const SpectralField& u, const LLBParams& params);

struct StepResult {
    SolverState state;
    bool diverged = false;
    std::string diagnostic;
};

/// One step of the integrating-factor RK4 scheme: the linear semigroup
/// exp((Lap - kappa) dt) is applied exactly; only the projected nonlinear
/// terms go through the RK stages.  On divergence the last healthy state
/// comes back with `diverged` set.
StepResult step(const SolverState& state, const LLBParams& params);

/// u = uL + utilde splitting against the heat flow of the initial data
/// (damped: exp(t(Lap - kappa)), otherwise exp(t Lap)).
std::pair<SpectralField, SpectralField> split_solution(const SolverState& state,
                                                       const SpectralField& u0,
                                                       bool damped,
                                                       const LLBParams& params);

/// CFL-like default step: 0.5 / (1 + max|k|^2 * ||u||_inf).
double default_dt(const SpectralField& u, const LLBParams& params);

}  // namespace llb
