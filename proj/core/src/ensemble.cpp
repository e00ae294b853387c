#include "llb/ensemble.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <tuple>
#include <vector>

namespace llb {

namespace {

// splitmix64 finalizer; keeps sample streams independent.
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Hand-rolled Box-Muller: bit-reproducible, unlike std::normal_distribution.
struct Gauss {
    std::mt19937_64 rng;
    bool has_spare = false;
    double spare = 0.0;

    explicit Gauss(std::uint64_t seed) : rng(seed) {}

    double uniform() {
        // 53-bit uniform in (0, 1].
        return (static_cast<double>(rng() >> 11) + 1.0) / 9007199254740993.0;
    }
    double operator()() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        const double u = uniform(), v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double a = 2.0 * M_PI * v;
        spare = r * std::sin(a);
        has_spare = true;
        return r * std::cos(a);
    }
};

// Spectral shaping per storage slot, cached per (grid, partition, spectrum):
// the shape is sample-independent, and the bump/power evaluations dominate a
// draw.  Zero entries mark modes that stay empty (mean, Nyquist, dead shape).
const std::vector<double>& shape_table(const FieldEnsembleSpec& spec, const Grid& grid,
                                       const DyadicPartition& P) {
    using Key = std::tuple<int, double, int, int, int, int, int, int, double>;
    static std::mutex mu;
    static std::map<Key, std::unique_ptr<std::vector<double>>> cache;
    const Key key{grid.n,  grid.box_length, P.j_min,   P.j_max, static_cast<int>(spec.kind),
                  spec.j,  spec.j_lo,       spec.j_hi, spec.alpha};
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;

    auto t = std::make_unique<std::vector<double>>(grid.points(), 0.0);
    const int b = grid.n / 2 - 1;
    for (int i1 = 0; i1 < grid.n; ++i1)
        for (int i2 = 0; i2 < grid.n; ++i2)
            for (int i3 = 0; i3 < grid.n; ++i3) {
                const int m1 = grid.mode(i1), m2 = grid.mode(i2), m3 = grid.mode(i3);
                if (std::abs(m1) > b || std::abs(m2) > b || std::abs(m3) > b)
                    continue;   // Nyquist planes stay empty
                const double k = std::sqrt(grid.k_squared(i1, i2, i3));
                if (k == 0.0) continue;   // zero mean
                double shape = 0.0;
                switch (spec.kind) {
                    case FieldEnsembleSpec::Kind::SingleBlock:
                        shape = P.block_weight(spec.j, k);
                        break;
                    case FieldEnsembleSpec::Kind::Band:
                        for (int jj = spec.j_lo; jj <= spec.j_hi; ++jj)
                            shape += P.block_weight(jj, k);
                        break;
                    case FieldEnsembleSpec::Kind::PowerLaw:
                        shape = std::pow(k, -spec.alpha);
                        break;
                }
                (*t)[grid.index(i1, i2, i3)] = shape;
            }
    const std::vector<double>& ref = *t;
    cache.emplace(key, std::move(t));
    return ref;
}

}  // namespace

std::uint64_t sample_seed(const FieldEnsembleSpec& spec, int index) {
    return mix(spec.seed ^ mix(static_cast<std::uint64_t>(index) + 1));
}

std::string FieldEnsembleSpec::to_json() const {
    std::ostringstream os;
    const char* kinds[] = {"single-block", "band", "power-law"};
    os << "{\"count\":" << count << ",\"spectrum\":\"" << kinds[static_cast<int>(kind)]
       << "\",\"j\":" << j << ",\"j_lo\":" << j_lo << ",\"j_hi\":" << j_hi
       << ",\"alpha\":" << alpha << ",\"amplitude\":" << amplitude
       << ",\"seed\":" << seed << ",\"components\":" << components << "}";
    return os.str();
}

SpectralField ensemble_sample(const FieldEnsembleSpec& spec, const Grid& grid,
                              const DyadicPartition& P, int index) {
    Gauss gauss(sample_seed(spec, index));
    SpectralField f(grid, true);
    const std::vector<double>& shape = shape_table(spec, grid, P);
    for (int c = 0; c < spec.components; ++c) {
        cplx* a = f.component(c);
        for (std::size_t i = 0; i < grid.points(); ++i) {
            // Draw in fixed order so the stream is independent of shaping.
            const double re = gauss(), im = gauss();
            if (shape[i] != 0.0) a[i] = shape[i] * cplx(re, im);
        }
    }
    f.symmetrize();
    const double norm = l2_norm(f);
    if (norm > 0.0) f *= spec.amplitude / norm;
    return f;
}

}  // namespace llb
