#include <doctest.h>

#include "helpers.hpp"
#include "llb/errors.hpp"
#include "llb/operators.hpp"
#include "llb/paraproduct.hpp"

using namespace llb;
using llbtest::field_rel_err;

namespace {

// w_c = mean(u_c) * v_c
SpectralField mean_times(const SpectralField& u, const SpectralField& v) {
    SpectralField w = v;
    for (int c = 0; c < 3; ++c) {
        const cplx m = u.at(c, 0, 0, 0);
        cplx* a = w.component(c);
        for (std::size_t i = 0; i < w.grid.points(); ++i) a[i] *= m;
    }
    return w;
}

}  // namespace

TEST_SUITE_BEGIN("paraproduct");

TEST_CASE("Bony reconstruction is exact up to mean bookkeeping") {
    const Grid g(32);
    const DyadicPartition P = build_partition(g);
    SpectralField u = llbtest::random_field(g, P, 51, 0.8);
    SpectralField v = llbtest::random_field(g, P, 52, 1.1);
    u.at(0, 0, 0, 0) = cplx(0.2, 0.0);   // nonzero means stress the bookkeeping
    v.at(1, 0, 0, 0) = cplx(-0.1, 0.0);

    const SpectralField product = dealiased_product(u, v);
    SpectralField bony = paraproduct(u, v, P);
    bony += paraproduct(v, u, P);
    bony += remainder(u, v, P);
    // uv = (u - mu)(v - mv) + mu v + mv u - mu mv, and the Bony pieces
    // reconstruct the first (mean-free) product exactly.
    bony += mean_times(u, v);
    bony += mean_times(v, u);
    SpectralField mu_mv(g, true);
    for (int c = 0; c < 3; ++c)
        mu_mv.at(c, 0, 0, 0) = u.at(c, 0, 0, 0) * v.at(c, 0, 0, 0);
    bony -= mu_mv;
    CHECK(field_rel_err(bony, product) < 1e-10);
}

TEST_CASE("paraproduct of a single low mode against a high block") {
    const Grid g(32);
    const DyadicPartition P = build_partition(g);
    // u concentrated at |k| = 1, v at |k| = 8: S_{j-1}u is all of u for the
    // blocks carrying v, so T_u v = u * (v - mean) exactly.
    const SpectralField u = llbtest::single_mode(g, {1, 0, 0}, 0.5);
    const SpectralField v = llbtest::single_mode(g, {0, 8, 0}, 1.0);
    const SpectralField t_uv = paraproduct(u, v, P);
    CHECK(field_rel_err(t_uv, dealiased_product(u, v)) < 1e-10);
    // The opposite paraproduct sees no low part of v below u's shells.
    CHECK(l2_norm(paraproduct(v, u, P)) < 1e-12);
}

TEST_CASE("remainder vanishes for well-separated frequencies") {
    const Grid g(32);
    const DyadicPartition P = build_partition(g);
    const SpectralField u = llbtest::single_mode(g, {1, 0, 0}, 1.0);
    const SpectralField v = llbtest::single_mode(g, {0, 8, 0}, 1.0);
    // |k|=1 lives in shells j <= 0; |k|=8 in j in {2,3}: gap >= 2 everywhere.
    CHECK(l2_norm(remainder(u, v, P)) < 1e-12);
    CHECK(l2_norm(remainder(u, u, P)) > 0.0);
}

TEST_CASE("commutator with a constant multiplier is zero") {
    const Grid g(32);
    const DyadicPartition P = build_partition(g);
    SpectralField a(g, true);
    for (int c = 0; c < 3; ++c) a.at(c, 0, 0, 0) = cplx(0.7, 0.0);
    const SpectralField b = llbtest::random_field(g, P, 53);
    const SpectralField comm = block_commutator(a, b, P.j_min + 2, P);
    CHECK(l2_norm(comm) < 1e-12 * l2_norm(b));
}

TEST_CASE("commutator matches its definition") {
    const Grid g(32);
    const DyadicPartition P = build_partition(g);
    const SpectralField a = llbtest::random_field(g, P, 54, 0.6);
    const SpectralField b = llbtest::random_field(g, P, 55, 0.9);
    const int j = P.j_min + 3;
    const SpectralField direct =
        dyadic_block(dealiased_product(a, b), j, P) -
        dealiased_product(a, dyadic_block(b, j, P));
    CHECK(field_rel_err(block_commutator(a, b, j, P), direct) < 1e-12);
    CHECK_THROWS_AS(block_commutator(a, b, P.j_max + 1, P), IndexOutOfRange);
}

TEST_SUITE_END();
