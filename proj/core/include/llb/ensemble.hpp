#pragma once

#include <cstdint>
#include <string>

#include "llb/dyadic.hpp"

namespace llb {

/// Deterministic random-field ensembles.  Three spectrum families stress
/// block-local and cross-frequency interactions; coefficients are Gaussian
/// with Hermitian symmetry enforced, so every sample is real-valued.
struct FieldEnsembleSpec {
    enum class Kind { SingleBlock, Band, PowerLaw };

    int count = 1;
    Kind kind = Kind::PowerLaw;
    int j = 0;                  // SingleBlock
    int j_lo = 0, j_hi = 0;     // Band
    double alpha = 2.0;         // PowerLaw decay exponent
    double amplitude = 1.0;     // resulting L2 norm of each sample
    std::uint64_t seed = 0;
    int components = 3;         // 1 for scalar-style samples

    std::string to_json() const;
};

// Per-sample sub-seed, a pure function of (seed, index).
std::uint64_t sample_seed(const FieldEnsembleSpec& spec, int index);

/// Sample `index` of the ensemble; bit-reproducible from (spec, grid, index).
SpectralField ensemble_sample(const FieldEnsembleSpec& spec, const Grid& grid,
                              const DyadicPartition& P, int index);

}  // namespace llb
