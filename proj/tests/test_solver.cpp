#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "llb/errors.hpp"
#include "llb/operators.hpp"
#include "llb/solver.hpp"

using namespace llb;
using llbtest::field_rel_err;
using llbtest::rel_err;

namespace {

// Closed form for the constant-data reduction dc/dt = -kappa c - kappa mu c^3:
// c(t)^2 = c0^2 e^{-2 kappa t} / (1 + mu c0^2 (1 - e^{-2 kappa t})).
double scalar_ode(double c0, double kappa, double mu, double t) {
    const double e = std::exp(-2.0 * kappa * t);
    return c0 * std::sqrt(e / (1.0 + mu * c0 * c0 * (1.0 - e)));
}

SolverState run_to(SpectralField u0, double dt, double T, const LLBParams& params) {
    SolverState s;
    s.u = std::move(u0);
    s.dt = dt;
    const long n = std::lround(T / dt);
    for (long i = 0; i < n; ++i) {
        StepResult r = step(s, params);
        REQUIRE(!r.diverged);
        s = std::move(r.state);
    }
    return s;
}

}  // namespace

TEST_SUITE_BEGIN("solver");

TEST_CASE("parameter validation") {
    LLBParams p;
    CHECK_NOTHROW(p.validate());
    SUBCASE("kappa") { p.kappa = 0.0; CHECK_THROWS_AS(p.validate(), ConfigError); }
    SUBCASE("mu") { p.mu = -1.0; CHECK_THROWS_AS(p.validate(), ConfigError); }
    SUBCASE("rho") { p.rho = 2.0; CHECK_THROWS_AS(p.validate(), ConfigError); }
    SUBCASE("delta") { p.delta = 2.0; CHECK_THROWS_AS(p.validate(), ConfigError); }
    SUBCASE("m") { p.m_sobolev = 1; CHECK_THROWS_AS(p.validate(), ConfigError); }
}

TEST_CASE("rhs closed forms") {
    const Grid g(16);
    LLBParams params;
    params.kappa = 2.0;
    params.mu = 0.5;
    SUBCASE("linear part on a single mode") {
        // For u = a cos(k.x) e1 with tiny a the nonlinearity is O(a^3).
        const SpectralField u = llbtest::single_mode(g, {2, 0, 0}, 1e-5);
        const SpectralField r = rhs_full(u, params);
        // Lap u - kappa u = -(4 + 2) u.
        CHECK(field_rel_err(r, -6.0 * u) < 1e-9);
    }
    SUBCASE("constant data: pure cubic relaxation") {
        SpectralField u(g, true);
        u.at(0, 0, 0, 0) = cplx(0.5, 0.0);
        const SpectralField r = rhs_full(u, params);
        // -kappa c - kappa mu c^3 = -2*0.5 - 2*0.5*0.125 = -1.125.
        CHECK(rel_err(r.at(0, 0, 0, 0).real(), -1.125) < 1e-12);
    }
}

TEST_CASE("Friedrichs rhs enforces and preserves the cutoff") {
    const Grid g(16);
    const DyadicPartition P = build_partition(g);
    LLBParams params;
    params.cutoff_n = 4.0;
    const SpectralField full = llbtest::random_field(g, P, 61, 0.5);
    CHECK_THROWS_AS(rhs_friedrichs(full, params), CutoffViolation);
    const SpectralField u = spectral_cutoff(full, 4.0);
    const SpectralField r = rhs_friedrichs(u, params);
    CHECK(cutoff_residual(r, 4.0) < 1e-12);
}

TEST_CASE("constant data reproduces the scalar ODE to high accuracy") {
    const Grid g(16);
    LLBParams params;
    params.kappa = 1.0;
    params.mu = 1.0;
    SpectralField u0(g, true);
    u0.at(0, 0, 0, 0) = cplx(0.1, 0.0);
    const SolverState s = run_to(u0, 1e-2, 1.0, params);
    const double want = scalar_ode(0.1, 1.0, 1.0, 1.0);
    CHECK(rel_err(s.u.at(0, 0, 0, 0).real(), want) < 1e-8);
    CHECK(std::abs(s.u.at(1, 0, 0, 0)) == 0.0);
}

TEST_CASE("tiny amplitude decays like the linear semigroup") {
    const Grid g(16);
    LLBParams params;
    params.kappa = 1.0;
    const double a = 1e-6;
    const SpectralField u0 = llbtest::single_mode(g, {1, 0, 0}, a);
    const SolverState s = run_to(u0, 1e-2, 0.5, params);
    const double want = (a / 2.0) * std::exp(-(1.0 + 1.0) * 0.5);
    CHECK(rel_err(s.u.at(0, 1, 0, 0).real(), want) < 1e-9);
}

TEST_CASE("fourth-order convergence on a nonlinear run") {
    const Grid g(16);
    const DyadicPartition P = build_partition(g);
    LLBParams params;
    const SpectralField u0 = llbtest::random_field(g, P, 62, 0.5);
    const double T = 0.25;
    const SpectralField ref = run_to(u0, T / 128.0, T, params).u;
    const double e1 = field_rel_err(run_to(u0, T / 16.0, T, params).u, ref);
    const double e2 = field_rel_err(run_to(u0, T / 32.0, T, params).u, ref);
    const double ratio = e1 / e2;
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("divergence guard returns the last healthy state") {
    const Grid g(16);
    const DyadicPartition P = build_partition(g);
    LLBParams params;
    params.norm_ceiling = 1e2;
    SolverState s;
    s.u = llbtest::random_field(g, P, 63, 50.0);
    s.dt = 0.1;  // far beyond the nonlinear stability limit at this amplitude
    StepResult r = step(s, params);
    int guard = 0;
    while (!r.diverged && guard++ < 50) r = step(r.state, params);
    REQUIRE(r.diverged);
    CHECK(r.state.u.finite());
    CHECK(!r.diagnostic.empty());
}

TEST_CASE("split_solution reconstructs u and uses the right heat flow") {
    const Grid g(16);
    const DyadicPartition P = build_partition(g);
    LLBParams params;
    params.kappa = 2.0;
    const SpectralField u0 = llbtest::random_field(g, P, 64, 0.1);
    SolverState s = run_to(u0, 1e-2, 0.2, params);
    SUBCASE("undamped") {
        const auto [uL, ut] = split_solution(s, u0, false, params);
        CHECK(field_rel_err(uL, heat_propagate(u0, 0.2)) < 1e-12);
        CHECK(field_rel_err(uL + ut, s.u) < 1e-12);
    }
    SUBCASE("damped") {
        const auto [uL, ut] = split_solution(s, u0, true, params);
        CHECK(field_rel_err(uL, heat_propagate(u0, 0.2, 2.0)) < 1e-12);
        CHECK(field_rel_err(uL + ut, s.u) < 1e-12);
    }
}

TEST_CASE("default_dt matches its formula and shrinks with amplitude") {
    const Grid g(16);
    LLBParams params;
    const SpectralField small = llbtest::single_mode(g, {1, 0, 0}, 1e-6);
    const SpectralField big = llbtest::single_mode(g, {1, 0, 0}, 10.0);
    const double dt_small = default_dt(small, params);
    const double dt_big = default_dt(big, params);
    CHECK(dt_small > dt_big);
    CHECK(dt_small <= 0.5);
    // Explicit check: 0.5 / (1 + kmax^2 * ||u||_inf) with ||u||_inf = 10.
    const double kmax2 = g.k_max() * g.k_max();
    CHECK(rel_err(dt_big, 0.5 / (1.0 + kmax2 * 10.0)) < 1e-6);
}

TEST_CASE("cutoff is preserved along a Friedrichs run") {
    const Grid g(32);
    LLBParams params;
    params.cutoff_n = 4.0;
    SpectralField u0 = llbtest::single_mode(g, {1, 0, 0}, 0.5, 0);
    u0 += llbtest::single_mode(g, {0, 2, 0}, 0.5, 1);
    u0 = spectral_cutoff(u0, 4.0);
    SolverState s;
    s.u = u0;
    s.dt = 5e-3;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        StepResult r = step(s, params);
        REQUIRE(!r.diverged);
        s = std::move(r.state);
        worst = std::max(worst, cutoff_residual(s.u, 4.0));
    }
    CHECK(worst < 1e-11);
}

TEST_SUITE_END();
