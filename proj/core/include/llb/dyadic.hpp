#pragma once

#include "llb/field.hpp"

namespace llb {

/// Dyadic Littlewood-Paley partition.  The low-frequency profile chi is 1
/// on [0, 3/4], decays smoothly on [3/4, 4/3], and is exactly 0 beyond;
/// phi(r) = chi(r/2) - chi(r), supported in [3/4, 8/3].  Telescoping makes
/// chi(r) + sum_{q>=0} phi(2^-q r) = 1 hold to round-off by construction.
/// Homogeneous blocks always exclude the mean (k=0) mode.
struct DyadicPartition {
    int j_min = 0;
    int j_max = 0;

    static double chi(double r);
    static double phi(double r);

    // Value of the block-j multiplier at |k| = r: phi(2^-j r).
    double block_weight(int j, double r) const { return phi(std::ldexp(r, -j)); }

    int shell_count() const { return j_max - j_min + 1; }
    bool in_range(int j) const { return j >= j_min && j <= j_max; }
};

/// Chooses [j_min, j_max] so every nonzero grid wavenumber up to the cube
/// corner is fully covered.  Throws GridTooSmall below 3 resolvable shells.
DyadicPartition build_partition(const Grid& grid);

/// Block operator: multiplies the coefficient at k by phi(2^-j |k|).
SpectralField dyadic_block(const SpectralField& f, int j, const DyadicPartition& P);

/// Low-frequency cutoff: sum of blocks strictly below j, i.e. the multiplier
/// chi(2^-j |k|) on nonzero modes (mean mode excluded).
SpectralField low_freq_cutoff(const SpectralField& f, int j, const DyadicPartition& P);

/// L2 norms of every dyadic block in one pass over the coefficients; entry
/// j - j_min equals l2_norm(dyadic_block(f, j, P)) bit for bit.
std::vector<double> dyadic_block_l2(const SpectralField& f, const DyadicPartition& P);

}  // namespace llb
