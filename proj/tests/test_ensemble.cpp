#include <doctest.h>

#include "helpers.hpp"
#include "llb/ensemble.hpp"
#include "llb/fft.hpp"

using namespace llb;
using llbtest::rel_err;

TEST_SUITE_BEGIN("ensemble");

TEST_CASE("samples are bit-reproducible") {
    const Grid g(16);
    const DyadicPartition P = build_partition(g);
    FieldEnsembleSpec spec;
    spec.kind = FieldEnsembleSpec::Kind::PowerLaw;
    spec.seed = 99;
    const SpectralField a = ensemble_sample(spec, g, P, 0);
    const SpectralField b = ensemble_sample(spec, g, P, 0);
    bool identical = a.coeffs.size() == b.coeffs.size();
    for (std::size_t i = 0; identical && i < a.coeffs.size(); ++i)
        identical = a.coeffs[i] == b.coeffs[i];
    CHECK(identical);
}

TEST_CASE("sub-seeds are a pure function of (seed, index) and distinct") {
    FieldEnsembleSpec spec;
    spec.seed = 7;
    CHECK(sample_seed(spec, 0) == sample_seed(spec, 0));
    CHECK(sample_seed(spec, 0) != sample_seed(spec, 1));
    FieldEnsembleSpec other = spec;
    other.seed = 8;
    CHECK(sample_seed(spec, 3) != sample_seed(other, 3));
}

TEST_CASE("different indices give different fields, same spectrum family") {
    const Grid g(16);
    const DyadicPartition P = build_partition(g);
    FieldEnsembleSpec spec;
    spec.seed = 12;
    const SpectralField a = ensemble_sample(spec, g, P, 0);
    const SpectralField b = ensemble_sample(spec, g, P, 1);
    CHECK(l2_norm(a - b) > 1e-3);
}

TEST_CASE("amplitude sets the L2 norm exactly") {
    const Grid g(16);
    const DyadicPartition P = build_partition(g);
    for (auto kind : {FieldEnsembleSpec::Kind::SingleBlock, FieldEnsembleSpec::Kind::Band,
                      FieldEnsembleSpec::Kind::PowerLaw}) {
        FieldEnsembleSpec spec;
        spec.kind = kind;
        spec.j = P.j_min + 2;
        spec.j_lo = P.j_min + 1;
        spec.j_hi = P.j_min + 2;
        spec.amplitude = 0.125;
        spec.seed = 5;
        const SpectralField u = ensemble_sample(spec, g, P, 0);
        CHECK(rel_err(l2_norm(u), 0.125) < 1e-12);
    }
}

TEST_CASE("samples are real-valued with zero mean") {
    const Grid g(16);
    const DyadicPartition P = build_partition(g);
    FieldEnsembleSpec spec;
    spec.seed = 31;
    const SpectralField u = ensemble_sample(spec, g, P, 0);
    CHECK_NOTHROW(inverse_transform(u));
    for (int c = 0; c < 3; ++c) CHECK(std::abs(u.at(c, 0, 0, 0)) == 0.0);
}

TEST_CASE("single-block samples live on the block's annulus") {
    const Grid g(32);
    const DyadicPartition P = build_partition(g);
    FieldEnsembleSpec spec;
    spec.kind = FieldEnsembleSpec::Kind::SingleBlock;
    spec.j = 2;
    spec.seed = 3;
    const SpectralField u = ensemble_sample(spec, g, P, 0);
    // Support within (3/4, 8/3) * 2^j.
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2)
            for (int i3 = 0; i3 < g.n; ++i3) {
                const double k = std::sqrt(g.k_squared(i1, i2, i3));
                if (P.block_weight(2, k) == 0.0)
                    CHECK(std::abs(u.at(0, i1, i2, i3)) == 0.0);
            }
    CHECK(l2_norm(u) > 0.0);
}

TEST_CASE("scalar-style samples put everything in the first component") {
    const Grid g(16);
    const DyadicPartition P = build_partition(g);
    FieldEnsembleSpec spec;
    spec.components = 1;
    spec.seed = 2;
    const SpectralField u = ensemble_sample(spec, g, P, 0);
    double rest = 0.0;
    for (std::size_t i = g.points(); i < u.coeffs.size(); ++i)
        rest = std::max(rest, std::abs(u.coeffs[i]));
    CHECK(rest == 0.0);
    CHECK(l2_norm(u) > 0.0);
}

TEST_CASE("spec serializes to JSON") {
    FieldEnsembleSpec spec;
    spec.amplitude = 0.5;
    const std::string js = spec.to_json();
    CHECK(js.find("amplitude") != std::string::npos);
    CHECK(js.find("seed") != std::string::npos);
}

TEST_SUITE_END();
