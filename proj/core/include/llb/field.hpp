#pragma once

#include <complex>
#include <vector>

#include "llb/grid.hpp"

namespace llb {

using cplx = std::complex<double>;

/// Fourier coefficients of a 3-component vector field on the discrete torus.
/// Storage is component-major, then k1-major (FFT index order per axis).
/// `real_valued` marks fields representing real physical data; such fields
/// must keep Hermitian symmetry coeff(c,-k) = conj(coeff(c,k)).
struct SpectralField {
    Grid grid;
    std::vector<cplx> coeffs;   // size 3 * n^3
    bool real_valued = true;

    SpectralField() = default;
    explicit SpectralField(const Grid& g, bool real_flag = true)
        : grid(g), coeffs(3 * g.points(), cplx(0.0, 0.0)), real_valued(real_flag) {}

    cplx& at(int c, int i1, int i2, int i3) {
        return coeffs[c * grid.points() + grid.index(i1, i2, i3)];
    }
    const cplx& at(int c, int i1, int i2, int i3) const {
        return coeffs[c * grid.points() + grid.index(i1, i2, i3)];
    }

    cplx* component(int c) { return coeffs.data() + c * grid.points(); }
    const cplx* component(int c) const { return coeffs.data() + c * grid.points(); }

    bool finite() const;

    // Project onto the Hermitian-symmetric part (makes the physical field real).
    void symmetrize();

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double a);

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double a, SpectralField f) { return f *= a; }
};

/// Real-space samples of a 3-component vector field, layout matching SpectralField.
struct PhysicalField {
    Grid grid;
    std::vector<double> values;   // size 3 * n^3

    PhysicalField() = default;
    explicit PhysicalField(const Grid& g) : grid(g), values(3 * g.points(), 0.0) {}

    double& at(int c, int i1, int i2, int i3) {
        return values[c * grid.points() + grid.index(i1, i2, i3)];
    }
    double at(int c, int i1, int i2, int i3) const {
        return values[c * grid.points() + grid.index(i1, i2, i3)];
    }

    double* component(int c) { return values.data() + c * grid.points(); }
    const double* component(int c) const { return values.data() + c * grid.points(); }
};

// L2 inner product over the box, sum_c integral u_c v_c dx (grid quadrature).
double inner_product(const PhysicalField& u, const PhysicalField& v);

// Spectral-side L2 inner product, L^3 * sum_k Re <u(k), conj(v(k))>.
double inner_product(const SpectralField& u, const SpectralField& v);

double l2_norm(const SpectralField& u);
double max_abs(const SpectralField& u);

}  // namespace llb
