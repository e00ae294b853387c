#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "llb/ensemble.hpp"
#include "llb/norms.hpp"

namespace llb {

/// Outcome of one randomized inequality check.  `fitted_constant` is the
/// extremal lhs/rhs-style ratio over the ensemble (min for Bernstein's
/// lower-bound form, max otherwise); `passed` means every sample ratio was
/// finite.
struct InequalityVerdict {
    std::string name;
    int samples = 0;
    double fitted_constant = 0.0;
    std::uint64_t worst_sample_seed = 0;
    bool passed = false;
    std::map<std::string, double> parameters;
    std::vector<std::string> spec_json;   // replay info

    std::string to_json_line() const;
};

// Lemma-style Bernstein lower bound on a dyadic annulus:
// c0 R1^2/p^2 int |u|^p <= -1/(p-1) int (Lap u)|u|^{p-2}u.
InequalityVerdict verify_bernstein(const FieldEnsembleSpec& spec, const Grid& grid,
                                   const DyadicPartition& P, double p, int j);

// ||f||_{B^{th s1+(1-th)s2}} <= C ||f||^th_{B^{s1}} ||f||^{1-th}_{B^{s2}}.
InequalityVerdict verify_interpolation(const FieldEnsembleSpec& spec, const Grid& grid,
                                       const DyadicPartition& P, double s1, double s2,
                                       double theta, double p, double r);

// ||uv||_{B^{s1+s2-3/p}_{p,1}} <= C ||u||_{B^{s1}_{p,1}} ||v||_{B^{s2}_{p,1}}.
InequalityVerdict verify_product(const FieldEnsembleSpec& spec_u,
                                 const FieldEnsembleSpec& spec_v, const Grid& grid,
                                 const DyadicPartition& P, double s1, double s2,
                                 double p);

// ||fg||_{B^s_{p,r}} <= C (||f||_inf ||g||_{B^s} + ||g||_inf ||f||_{B^s}).
InequalityVerdict verify_algebra(const FieldEnsembleSpec& spec_f,
                                 const FieldEnsembleSpec& spec_g, const Grid& grid,
                                 const DyadicPartition& P, double s, double p, double r);

// ||[block_j, a]b||_{L^r} <= C 2^{-j} ||grad a||_{L^p} ||b||_{L^q}.
InequalityVerdict verify_commutator_basic(const FieldEnsembleSpec& spec_a,
                                          const FieldEnsembleSpec& spec_b,
                                          const Grid& grid, const DyadicPartition& P,
                                          int j, double p, double q, double r);

// sum_j 2^{js} ||[block_j, b]a||_{L2} <= C ( ||a||_{B^{s-2/rho}_{2,1}} ||b||_{B^{2/rho}_{inf,inf}}
//   + ||b||_{B^{s+1-2/rho}_{2,1}} ||a||_{B^{2/rho}_{inf,inf}} ).
InequalityVerdict verify_commutator_lemma4(const FieldEnsembleSpec& spec_a,
                                           const FieldEnsembleSpec& spec_b,
                                           const Grid& grid, const DyadicPartition& P,
                                           double s, double rho);

// ||d^al(fg) - f d^al g||_{L2} <= C (||Df||_inf ||g||_{H^{m-1}} + ||g||_inf ||f||_{H^m}).
InequalityVerdict verify_moser_commutator(const FieldEnsembleSpec& spec_f,
                                          const FieldEnsembleSpec& spec_g,
                                          const Grid& grid, const DyadicPartition& P,
                                          int m, const std::array<int, 3>& alpha);

// |||u|^2 u||_{B^s_{2,1}} <= C ||u||^2_inf ||u||_{B^s_{2,1}}.
InequalityVerdict verify_composition(const FieldEnsembleSpec& spec, const Grid& grid,
                                     const DyadicPartition& P, double s);

// || e^{t Lap} u0 ||_{L^m_T B^{s+2+2/m}_{2,1}} <= C ||u0||_{B^{s+2}_{2,1}}.
InequalityVerdict verify_heat_smoothing(const FieldEnsembleSpec& spec, const Grid& grid,
                                        const DyadicPartition& P, double m, double s,
                                        double T, int time_steps);

const std::vector<std::string>& suite_names();

/// Runs one named suite (or "all") with the parameter choices the solver
/// analysis leans on.  Each verdict additionally carries a doubled-ensemble
/// stability check (fitted constant change < 25%); the bernstein and basic
/// commutator suites append a cross-j stability verdict (spread < factor 10).
std::vector<InequalityVerdict> run_suite(const std::string& suite, const Grid& grid,
                                         const DyadicPartition& P, int samples,
                                         std::uint64_t seed);

}  // namespace llb
