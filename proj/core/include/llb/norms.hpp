#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "llb/dyadic.hpp"

namespace llb {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BesovParams {
    double s = 0.0;       // regularity
    double p = 2.0;       // integrability in [1, inf]
    double r = 1.0;       // summability in [1, inf]
    bool homogeneous = true;
};

/// A computed norm value tagged with its parameters.  For Besov norms
/// per_block holds (j, 2^{js} ||block_j f||_{L^p}).
struct NormReport {
    double value = 0.0;
    std::string kind = "besov";   // "besov" | "sobolev" | "lebesgue"
    BesovParams params;
    std::vector<std::pair<int, double>> per_block;

    std::string to_json() const;
};

/// Homogeneous/inhomogeneous Besov norm via per-block L^p norms.  p = 2
/// blocks are evaluated spectrally (Parseval); other p go through physical
/// space.  The mean mode is excluded from every homogeneous block.
NormReport besov_norm(const SpectralField& f, const BesovParams& params,
                      const DyadicPartition& P);

// Convenience: just the value.
double besov(const SpectralField& f, double s, double p, double r,
             const DyadicPartition& P);

/// Spectral Sobolev norm, weight |k|^{2s} (homogeneous) or (1+|k|^2)^s.
NormReport sobolev_norm(const SpectralField& f, double s, bool homogeneous);

/// L^p norm of the pointwise Euclidean magnitude, uniform grid quadrature;
/// p = kInf is the grid max.
double lebesgue_norm(const PhysicalField& f, double p);

}  // namespace llb
