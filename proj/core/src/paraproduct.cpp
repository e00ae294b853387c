#include "llb/paraproduct.hpp"

#include "llb/errors.hpp"
#include "llb/operators.hpp"

namespace llb {

SpectralField paraproduct(const SpectralField& u, const SpectralField& v,
                          const DyadicPartition& P) {
    SpectralField acc(u.grid, true);
    for (int j = P.j_min; j <= P.j_max; ++j) {
        if (j - 1 < P.j_min) continue;   // empty low-frequency sum
        const SpectralField low = low_freq_cutoff(u, j - 1, P);
        const SpectralField blk = dyadic_block(v, j, P);
        acc += dealiased_product(low, blk);
    }
    return acc;
}

SpectralField remainder(const SpectralField& u, const SpectralField& v,
                        const DyadicPartition& P) {
    std::vector<SpectralField> bu, bv;
    bu.reserve(P.shell_count());
    bv.reserve(P.shell_count());
    for (int j = P.j_min; j <= P.j_max; ++j) {
        bu.push_back(dyadic_block(u, j, P));
        bv.push_back(dyadic_block(v, j, P));
    }
    SpectralField acc(u.grid, true);
    for (int j = P.j_min; j <= P.j_max; ++j)
        for (int jp = std::max(j - 1, P.j_min); jp <= std::min(j + 1, P.j_max); ++jp)
            acc += dealiased_product(bu[j - P.j_min], bv[jp - P.j_min]);
    return acc;
}

SpectralField block_commutator(const SpectralField& a, const SpectralField& b,
                               int j, const DyadicPartition& P) {
    if (!P.in_range(j))
        throw IndexOutOfRange("block_commutator: j=" + std::to_string(j));
    const SpectralField ab = dealiased_product(a, b);
    const SpectralField first = dyadic_block(ab, j, P);
    const SpectralField second = dealiased_product(a, dyadic_block(b, j, P));
    return first - second;
}

}  // namespace llb
