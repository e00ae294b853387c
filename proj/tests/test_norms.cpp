#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "llb/norms.hpp"

using namespace llb;
using llbtest::rel_err;
using llbtest::single_mode;

namespace {

// Independent oracle for a single cosine mode: every dyadic block is a
// scalar multiple of the mode, so the Besov norm is an explicit weight sum.
double mode_besov(double kmag, double s, double l2, const DyadicPartition& P) {
    double total = 0.0;
    for (int j = P.j_min; j <= P.j_max; ++j)
        total += std::pow(2.0, j * s) * DyadicPartition::phi(std::ldexp(kmag, -j)) * l2;
    return total;
}

}  // namespace

TEST_SUITE_BEGIN("norms");

TEST_CASE("single-mode Besov closed form, several s") {
    const Grid g(32);
    const DyadicPartition P = build_partition(g);
    const double A = 0.7;
    const SpectralField u = single_mode(g, {0, 3, 0}, A);
    const double l2 = A * std::sqrt(g.volume() / 2.0);
    CHECK(rel_err(l2_norm(u), l2) < 1e-12);
    for (double s : {0.0, 1.5, 3.5, -0.5}) {
        const double got = besov(u, s, 2.0, 1.0, P);
        CHECK(rel_err(got, mode_besov(3.0, s, l2, P)) < 1e-12);
    }
}

TEST_CASE("Besov r-monotonicity and the r = inf sup") {
    const Grid g(32);
    const DyadicPartition P = build_partition(g);
    const SpectralField u = llbtest::random_field(g, P, 41);
    const double r1 = besov(u, 1.0, 2.0, 1.0, P);
    const double r2 = besov(u, 1.0, 2.0, 2.0, P);
    const double ri = besov(u, 1.0, 2.0, kInf, P);
    CHECK(r1 >= r2);
    CHECK(r2 >= ri);
    CHECK(ri > 0.0);
    // r = inf equals the max per-block weight.
    const NormReport rep = besov_norm(u, {1.0, 2.0, kInf, true}, P);
    double mx = 0.0;
    for (const auto& [j, v] : rep.per_block) mx = std::max(mx, v);
    CHECK(rel_err(rep.value, mx) < 1e-13);
}

TEST_CASE("Besov norm is homogeneous of degree 1 in the field") {
    const Grid g(32);
    const DyadicPartition P = build_partition(g);
    const SpectralField u = llbtest::random_field(g, P, 42);
    const double base = besov(u, 1.5, 2.0, 1.0, P);
    CHECK(rel_err(besov(3.0 * u, 1.5, 2.0, 1.0, P), 3.0 * base) < 1e-12);
}

TEST_CASE("homogeneous norms ignore the mean; inhomogeneous see it") {
    const Grid g(32);
    const DyadicPartition P = build_partition(g);
    SpectralField u = single_mode(g, {2, 0, 0}, 0.5);
    const double hom_before = besov(u, 1.5, 2.0, 1.0, P);
    BesovParams inh{1.5, 2.0, 1.0, false};
    const double inh_before = besov_norm(u, inh, P).value;
    u.at(0, 0, 0, 0) = cplx(0.3, 0.0);
    CHECK(rel_err(besov(u, 1.5, 2.0, 1.0, P), hom_before) < 1e-13);
    CHECK(besov_norm(u, inh, P).value > inh_before);
}

TEST_CASE("B^0_{2,2} is comparable to L2 on a single block") {
    const Grid g(32);
    const DyadicPartition P = build_partition(g);
    // A field with all its mass where some phi = 1 sees norm equality.
    const SpectralField u = single_mode(g, {0, 0, 3}, 1.0);  // phi(3/2^j): j=1 -> 1
    CHECK(rel_err(besov(u, 0.0, 2.0, 2.0, P), l2_norm(u)) < 1e-12);
}

TEST_CASE("p = inf blocks: single mode sup norm") {
    const Grid g(32);
    const DyadicPartition P = build_partition(g);
    const double A = 0.9;
    const SpectralField u = single_mode(g, {2, 0, 0}, A);
    // Every block of a cosine mode is phi * A cos(2 x1), sup = phi * A.
    double expect = 0.0;
    for (int j = P.j_min; j <= P.j_max; ++j)
        expect += std::pow(2.0, 0.5 * j) * DyadicPartition::phi(std::ldexp(2.0, -j)) * A;
    CHECK(rel_err(besov(u, 0.5, kInf, 1.0, P), expect) < 1e-11);
}

TEST_CASE("sobolev norms") {
    const Grid g(32);
    const double A = 0.4;
    const SpectralField u = single_mode(g, {0, 2, 1}, A);
    const double l2 = A * std::sqrt(g.volume() / 2.0);
    const double k2 = 5.0;
    CHECK(rel_err(sobolev_norm(u, 1.0, true).value, std::sqrt(k2) * l2) < 1e-12);
    CHECK(rel_err(sobolev_norm(u, 2.0, true).value, k2 * l2) < 1e-12);
    CHECK(rel_err(sobolev_norm(u, 1.0, false).value, std::sqrt(1.0 + k2) * l2) < 1e-12);
    CHECK(rel_err(sobolev_norm(u, 0.0, true).value, l2) < 1e-12);

    SUBCASE("negative homogeneous order needs zero mean") {
        SpectralField v = u;
        v.at(0, 0, 0, 0) = cplx(1.0, 0.0);
        CHECK_THROWS_AS(sobolev_norm(v, -0.5, true), std::invalid_argument);
        CHECK_NOTHROW(sobolev_norm(u, -0.5, true));
    }
}

TEST_CASE("lebesgue norms on constant and mode fields") {
    const Grid g(16);
    SpectralField c(g, true);
    c.at(0, 0, 0, 0) = cplx(0.25, 0.0);
    const PhysicalField f = inverse_transform(c);
    CHECK(rel_err(lebesgue_norm(f, 2.0), 0.25 * std::sqrt(g.volume())) < 1e-12);
    CHECK(rel_err(lebesgue_norm(f, 4.0), 0.25 * std::pow(g.volume(), 0.25)) < 1e-12);
    CHECK(rel_err(lebesgue_norm(f, kInf), 0.25) < 1e-12);

    // ||cos||_{L4}^4 = (3/8) V; vector magnitude is Euclidean across components.
    const PhysicalField m = inverse_transform(single_mode(g, {1, 0, 0}, 1.0));
    CHECK(rel_err(std::pow(lebesgue_norm(m, 4.0), 4.0), 0.375 * g.volume()) < 1e-12);
    CHECK(rel_err(lebesgue_norm(m, kInf), 1.0) < 1e-12);
}

TEST_CASE("NormReport serializes to flat JSON") {
    const Grid g(32);
    const DyadicPartition P = build_partition(g);
    const SpectralField u = single_mode(g, {2, 0, 0}, 1.0);
    const std::string js = besov_norm(u, {1.5, 2.0, kInf, true}, P).to_json();
    CHECK(js.find("\"kind\"") != std::string::npos);
    CHECK(js.find("besov") != std::string::npos);
    CHECK(js.find("\"inf\"") != std::string::npos);  // r = inf spelled out
    CHECK(js.find("per_block") != std::string::npos);
}

TEST_SUITE_END();
