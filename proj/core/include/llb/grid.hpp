#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace llb {

/// Uniform periodic grid on the cube [0, L)^3, same point count per axis.
/// With L = 2*pi the wavenumbers are the integers in [-n/2, n/2).
struct Grid {
    int n = 0;              // points per axis, even, >= 8
    double box_length = 2.0 * M_PI;

    Grid() = default;
    Grid(int n_per_axis, double L = 2.0 * M_PI) : n(n_per_axis), box_length(L) {
        if (n < 8 || n % 2 != 0)
            throw std::invalid_argument("Grid: n_per_axis must be even and >= 8");
        if (!(box_length > 0.0))
            throw std::invalid_argument("Grid: box_length must be positive");
    }

    std::size_t points() const { return static_cast<std::size_t>(n) * n * n; }

    // Integer mode index along one axis for storage slot i (FFT order).
    int mode(int i) const { return i < n / 2 ? i : i - n; }

    // Scaled wavenumber along one axis: 2*pi/L * mode.
    double wavenumber(int i) const { return 2.0 * M_PI / box_length * mode(i); }

    double k_squared(int i1, int i2, int i3) const {
        const double a = wavenumber(i1), b = wavenumber(i2), c = wavenumber(i3);
        return a * a + b * b + c * c;
    }

    // Largest |k| representable on the grid (cube corner).
    double k_max() const {
        const double h = 2.0 * M_PI / box_length * (n / 2);
        return std::sqrt(3.0) * h;
    }

    double dx() const { return box_length / n; }
    double cell_volume() const { return dx() * dx() * dx(); }
    double volume() const { return box_length * box_length * box_length; }

    std::size_t index(int i1, int i2, int i3) const {
        return (static_cast<std::size_t>(i1) * n + i2) * n + i3;
    }

    bool operator==(const Grid& o) const {
        return n == o.n && box_length == o.box_length;
    }
};

}  // namespace llb
