#include "llb/solver.hpp"

#include <cmath>

#include "llb/errors.hpp"
#include "llb/fft.hpp"
#include "llb/norms.hpp"
#include "llb/operators.hpp"

namespace llb {

void LLBParams::validate() const {
    if (!(kappa > 0.0)) throw ConfigError("LLBParams: kappa must be positive");
    if (!(mu > 0.0)) throw ConfigError("LLBParams: mu must be positive");
    if (cutoff_n < 0.0) throw ConfigError("LLBParams: cutoff_n must be nonnegative");
    if (!(rho > 2.0)) throw ConfigError("LLBParams: rho must be > 2");
    if (!(delta > 1.0 && delta < 2.0)) throw ConfigError("LLBParams: delta must be in (1, 2)");
    if (!(p_blowup > 1.0) || p_blowup == kInf)
        throw ConfigError("LLBParams: p_blowup must be in (1, inf)");
    if (m_sobolev < 2) throw ConfigError("LLBParams: m_sobolev must be >= 2");
}

double LLBParams::effective_cutoff(const Grid& g) const {
    const double grid_max = g.k_max();
    return cutoff_n > 0.0 ? std::min(cutoff_n, grid_max) : grid_max;
}

namespace {

// Per-axis mode bound implied by a Euclidean cutoff (for product grids).
int band_of_cutoff(const Grid& g, double cutoff) {
    const double unit = 2.0 * M_PI / g.box_length;
    const int b = static_cast<int>(std::floor(cutoff / unit + 1e-12));
    return std::min(b, g.n / 2 - 1);
}

// E_n(u x Lap u) - kappa mu E_n(|u|^2 u), the projected nonlinearity.
SpectralField projected_nonlinearity(const SpectralField& u, const LLBParams& params,
                                     double cutoff, int in_band) {
    // The projector zeroes everything beyond the cutoff band anyway, so the
    // product grid only needs to resolve output modes up to in_band.
    auto [cross, cubic] = llb_nonlinearity(u, in_band, in_band);
    // The projector is linear, so combine first and truncate once.
    SpectralField nl = std::move(cross);
    nl *= params.cross_coeff;
    nl -= (params.kappa * params.mu) * std::move(cubic);
    const std::array<cplx, 3> mean{nl.at(0, 0, 0, 0), nl.at(1, 0, 0, 0),
                                   nl.at(2, 0, 0, 0)};
    nl = spectral_cutoff(nl, cutoff);
    if (params.cutoff_n == 0.0) {
        // No Friedrichs truncation requested: keep the mean-mode dynamics
        // (the annulus [1/n, n] would otherwise drop only k = 0 here).
        for (int c = 0; c < 3; ++c) nl.at(c, 0, 0, 0) = mean[c];
    }
    return nl;
}

SpectralField linear_multiplier(const SpectralField& F, double t, double kappa) {
    return heat_propagate(F, t, kappa);
}

}  // namespace

SpectralField rhs_full(const SpectralField& u, const LLBParams& params) {
    SpectralField out = apply_laplacian(u);
    out -= params.kappa * u;
    out += params.cross_coeff * pointwise_cross_with_laplacian(u);
    out -= (params.kappa * params.mu) * pointwise_cubic(u);
    return out;
}

SpectralField rhs_friedrichs(const SpectralField& u, const LLBParams& params) {
    const double cutoff = params.effective_cutoff(u.grid);
    const double resid = cutoff_residual(u, cutoff);
    if (resid > 1e-12)
        throw CutoffViolation("rhs_friedrichs: relative spectral mass " +
                              std::to_string(resid) + " outside [1/n, n]");
    SpectralField out = apply_laplacian(u);
    out -= params.kappa * u;
    out += projected_nonlinearity(u, params, cutoff, band_of_cutoff(u.grid, cutoff));
    return out;
}

namespace {

// Copies the shared mode cube |m_i| <= min(n)/2 - 1 between storage grids.
SpectralField resize_modes(const SpectralField& f, const Grid& gto) {
    SpectralField out(gto, f.real_valued);
    const int b = std::min(f.grid.n, gto.n) / 2 - 1;
    auto slot = [](const Grid& g, int m) { return m >= 0 ? m : g.n + m; };
    for (int c = 0; c < 3; ++c)
        for (int m1 = -b; m1 <= b; ++m1)
            for (int m2 = -b; m2 <= b; ++m2)
                for (int m3 = -b; m3 <= b; ++m3)
                    out.at(c, slot(gto, m1), slot(gto, m2), slot(gto, m3)) =
                        f.at(c, slot(f.grid, m1), slot(f.grid, m2),
                             slot(f.grid, m3));
    return out;
}

// True iff every coefficient with a per-axis mode beyond `band` is zero.
bool supported_in_band(const SpectralField& f, int band) {
    const Grid& g = f.grid;
    for (int c = 0; c < 3; ++c) {
        const cplx* a = f.component(c);
        for (int i1 = 0; i1 < g.n; ++i1) {
            const bool out1 = std::abs(g.mode(i1)) > band;
            for (int i2 = 0; i2 < g.n; ++i2) {
                const bool out2 = out1 || std::abs(g.mode(i2)) > band;
                for (int i3 = 0; i3 < g.n; ++i3)
                    if ((out2 || std::abs(g.mode(i3)) > band) &&
                        a[g.index(i1, i2, i3)] != cplx{})
                        return false;
            }
        }
    }
    return true;
}

StepResult step_impl(const SolverState& state, const LLBParams& params);

}  // namespace

StepResult step(const SolverState& state, const LLBParams& params) {
    // A Friedrichs-truncated state lives in a small mode cube; evolving it
    // on a cropped grid gives bit-identical coefficients (the dealiased
    // product grid and the pointwise multipliers depend only on the modes,
    // not on the storage grid) at a fraction of the dense-pass cost.
    const Grid& g = state.u.grid;
    const int band = band_of_cutoff(g, params.effective_cutoff(g));
    const int n_small = 2 * band + 2;
    if (n_small >= g.n || n_small < 8 || !supported_in_band(state.u, band))
        return step_impl(state, params);
    SolverState small = state;
    small.u = resize_modes(state.u, Grid(n_small, g.box_length));
    StepResult r = step_impl(small, params);
    r.state.u = resize_modes(r.state.u, g);
    return r;
}

namespace {

StepResult step_impl(const SolverState& state, const LLBParams& params) {
    const SpectralField& u = state.u;
    const Grid& g = u.grid;
    const double cutoff = params.effective_cutoff(g);
    const int band = band_of_cutoff(g, cutoff);
    const double dt = state.dt;
    const double kappa = params.kappa;

    auto healthy = [&](const SpectralField& f) {
        if (!f.finite()) return false;
        return l2_norm(f) <= params.norm_ceiling;
    };
    if (!healthy(u)) {
        return {state, true, "step: input state unhealthy"};
    }

    // Classical RK4 on v' = exp(-tL) N(exp(tL) v) with the substitution
    // unwound, L = Lap - kappa applied exactly.
    auto N = [&](const SpectralField& w) {
        return projected_nonlinearity(w, params, cutoff, band);
    };

    const SpectralField k1 = N(u);
    const SpectralField u_half = linear_multiplier(u, 0.5 * dt, kappa);
    const SpectralField k2 =
        N(u_half + (0.5 * dt) * linear_multiplier(k1, 0.5 * dt, kappa));
    const SpectralField k3 = N(u_half + (0.5 * dt) * k2);
    const SpectralField u_full = linear_multiplier(u, dt, kappa);
    const SpectralField k4 =
        N(u_full + dt * linear_multiplier(k3, 0.5 * dt, kappa));

    SpectralField next = u_full;
    next += (dt / 6.0) * linear_multiplier(k1, dt, kappa);
    next += (dt / 3.0) * linear_multiplier(k2 + k3, 0.5 * dt, kappa);
    next += (dt / 6.0) * k4;

    if (!healthy(next)) {
        return {state, true, "step: diverged (norm ceiling " +
                                 std::to_string(params.norm_ceiling) + " exceeded)"};
    }
    StepResult res;
    res.state = state;
    res.state.u = std::move(next);
    res.state.t = state.t + dt;
    return res;
}

}  // namespace

std::pair<SpectralField, SpectralField> split_solution(const SolverState& state,
                                                       const SpectralField& u0,
                                                       bool damped,
                                                       const LLBParams& params) {
    SpectralField uL = heat_propagate(u0, state.t, damped ? params.kappa : 0.0);
    SpectralField utilde = state.u - uL;
    return {std::move(uL), std::move(utilde)};
}

double default_dt(const SpectralField& u, const LLBParams& params) {
    const Grid& g = u.grid;
    const double kmax = params.effective_cutoff(g);
    const double amp = lebesgue_norm(inverse_transform(u), kInf);
    return 0.5 / (1.0 + kmax * kmax * amp);
}

}  // namespace llb
