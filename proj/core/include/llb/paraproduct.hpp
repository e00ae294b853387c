#pragma once

#include "llb/dyadic.hpp"

namespace llb {

/// Bony paraproduct T_u v = sum_j (S_{j-1} u)(block_j v), componentwise,
/// with dealiased pointwise products.
SpectralField paraproduct(const SpectralField& u, const SpectralField& v,
                          const DyadicPartition& P);

/// Bony remainder R(u, v) = sum_{|j-j'|<=1} (block_j u)(block_j' v).
SpectralField remainder(const SpectralField& u, const SpectralField& v,
                        const DyadicPartition& P);

/// [block_j, a] b = block_j(ab) - a block_j(b), dealiased products.
SpectralField block_commutator(const SpectralField& a, const SpectralField& b,
                               int j, const DyadicPartition& P);

}  // namespace llb
