#include "llb/dyadic.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "llb/errors.hpp"

namespace llb {

namespace {

double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// Per-(grid, partition) multiplier tables.  chi_w[j - j_min][idx] holds
// chi(2^-j |k|) for j in [j_min, j_max + 1] (zero at the mean mode); the
// block multiplier phi(2^-j |k|) is chi_w[j+1] - chi_w[j] by telescoping,
// bit-identical to evaluating DyadicPartition::phi directly.
struct WeightTables {
    std::vector<std::vector<double>> chi_w;
};

const WeightTables& weight_tables(const Grid& g, const DyadicPartition& P) {
    using Key = std::tuple<int, double, int, int>;
    static std::mutex mu;
    static std::map<Key, std::unique_ptr<WeightTables>> cache;
    const Key key{g.n, g.box_length, P.j_min, P.j_max};
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;

    auto t = std::make_unique<WeightTables>();
    t->chi_w.assign(P.shell_count() + 1, std::vector<double>(g.points(), 0.0));
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2)
            for (int i3 = 0; i3 < g.n; ++i3) {
                const double k = std::sqrt(g.k_squared(i1, i2, i3));
                if (k == 0.0) continue;
                const std::size_t idx = g.index(i1, i2, i3);
                for (int j = P.j_min; j <= P.j_max + 1; ++j)
                    t->chi_w[j - P.j_min][idx] =
                        DyadicPartition::chi(std::ldexp(k, -j));
            }
    const WeightTables& ref = *t;
    cache.emplace(key, std::move(t));
    return ref;
}

}  // namespace

double DyadicPartition::chi(double r) {
    // Smooth transition 1 -> 0 across [3/4, 4/3].
    const double t = (4.0 / 3.0 - r) / (4.0 / 3.0 - 3.0 / 4.0);
    if (t >= 1.0) return 1.0;
    if (t <= 0.0) return 0.0;
    const double a = bump(t), b = bump(1.0 - t);
    return a / (a + b);
}

double DyadicPartition::phi(double r) { return chi(0.5 * r) - chi(r); }

DyadicPartition build_partition(const Grid& grid) {
    // Smallest nonzero |k| on the grid and the cube-corner maximum.
    const double k_lo = 2.0 * M_PI / grid.box_length;
    const double k_hi = grid.k_max();
    // Block j is alive iff (3/4, 8/3) * 2^j intersects [k_lo, k_hi].
    DyadicPartition P;
    P.j_min = static_cast<int>(std::ceil(std::log2(k_lo * 3.0 / 8.0) + 1e-12));
    if (DyadicPartition::phi(std::ldexp(k_lo, -P.j_min)) == 0.0) ++P.j_min;
    P.j_max = static_cast<int>(std::floor(std::log2(k_hi * 4.0 / 3.0) - 1e-12));
    if (DyadicPartition::phi(std::ldexp(k_hi, -P.j_max)) == 0.0) --P.j_max;
    if (P.shell_count() < 3)
        throw GridTooSmall("build_partition: fewer than 3 resolvable dyadic shells");
    return P;
}

SpectralField dyadic_block(const SpectralField& f, int j, const DyadicPartition& P) {
    if (!P.in_range(j))
        throw IndexOutOfRange("dyadic_block: j=" + std::to_string(j) +
                              " outside [" + std::to_string(P.j_min) + ", " +
                              std::to_string(P.j_max) + "]");
    const Grid& g = f.grid;
    const WeightTables& t = weight_tables(g, P);
    const std::vector<double>& lo = t.chi_w[j - P.j_min];
    const std::vector<double>& hi = t.chi_w[j - P.j_min + 1];
    SpectralField out = f;
    for (int c = 0; c < 3; ++c) {
        cplx* a = out.component(c);
        for (std::size_t i = 0; i < g.points(); ++i) a[i] *= hi[i] - lo[i];
    }
    return out;
}

std::vector<double> dyadic_block_l2(const SpectralField& f, const DyadicPartition& P) {
    const Grid& g = f.grid;
    const WeightTables& t = weight_tables(g, P);
    std::vector<double> sums(P.shell_count(), 0.0);
    // Accumulation visits the terms in the same order as l2_norm over a
    // blocked copy, so each entry matches the blocked norm bit for bit.
    for (int c = 0; c < 3; ++c) {
        const cplx* a = f.component(c);
        for (int s = 0; s < P.shell_count(); ++s) {
            const double* lo = t.chi_w[s].data();
            const double* hi = t.chi_w[s + 1].data();
            double acc = sums[s];
            for (std::size_t i = 0; i < g.points(); ++i)
                acc += std::norm(a[i] * (hi[i] - lo[i]));
            sums[s] = acc;
        }
    }
    for (double& s : sums) s = std::sqrt(s * g.volume());
    return sums;
}

SpectralField low_freq_cutoff(const SpectralField& f, int j, const DyadicPartition& P) {
    // Telescoped sum of blocks below j: the multiplier chi(2^-j |k|),
    // mean mode excluded.  j = j_max+1 is allowed (full field minus mean).
    if (j < P.j_min || j > P.j_max + 1)
        throw IndexOutOfRange("low_freq_cutoff: j=" + std::to_string(j) +
                              " outside [" + std::to_string(P.j_min) + ", " +
                              std::to_string(P.j_max + 1) + "]");
    const Grid& g = f.grid;
    const std::vector<double>& w = weight_tables(g, P).chi_w[j - P.j_min];
    SpectralField out = f;
    for (int c = 0; c < 3; ++c) {
        cplx* a = out.component(c);
        for (std::size_t i = 0; i < g.points(); ++i) a[i] *= w[i];
    }
    return out;
}

}  // namespace llb
