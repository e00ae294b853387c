#pragma once

#include <array>
#include <memory>
#include <utility>
#include <vector>

#include "llb/fft.hpp"

namespace llb {

/// Multiplies the coefficient at wavenumber k by -|k|^2.
SpectralField apply_laplacian(const SpectralField& F);

/// Multiplies the coefficient at k by exp(-(|k|^2 + damping) t).
SpectralField heat_propagate(const SpectralField& F, double t, double damping = 0.0);

/// Friedrichs projector: zeroes every coefficient with |k| outside [1/n, n].
SpectralField spectral_cutoff(const SpectralField& F, double n);

// Relative spectral mass outside [1/n, n] (diagnostic for CutoffViolation).
double cutoff_residual(const SpectralField& F, double n);

/// Spectral derivative d^alpha: multiplies by (i k1)^a1 (i k2)^a2 (i k3)^a3.
SpectralField apply_derivative(const SpectralField& F, const std::array<int, 3>& alpha);

// Smallest transform-friendly (factors 2,3,5,7) even size >= m.
int next_fast_size(int m);

/// Alias-free pointwise map: transforms the inputs to a zero-padded grid
/// sized for products of total degree `degree` of fields band-limited to
/// per-axis mode `in_band`, applies `combine` at every point, transforms
/// back and truncates to per-axis mode `out_band` (Nyquist plane dropped).
/// `combine(vals, out)`: vals[i] is the 3-vector of input i at one point.
using PointwiseCombiner = void (*)(const double* const* vals, double* out);

SpectralField dealiased_map(const std::vector<const SpectralField*>& inputs,
                            PointwiseCombiner combine, int degree,
                            int in_band = -1, int out_band = -1);

/// Componentwise dealiased product (w_c = u_c v_c).
SpectralField dealiased_product(const SpectralField& u, const SpectralField& v,
                                int in_band = -1, int out_band = -1);

/// Caches the padded physical transform of one product factor; times(v)
/// equals dealiased_product(u, v, in_band, out_band) for the construction-time
/// u, but repeated calls skip re-transforming the fixed side.
class FixedFactor {
  public:
    explicit FixedFactor(const SpectralField& u, int in_band = -1, int out_band = -1);
    ~FixedFactor();
    FixedFactor(const FixedFactor&) = delete;
    FixedFactor& operator=(const FixedFactor&) = delete;

    SpectralField times(const SpectralField& v) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl;
};

/// w = u x (Laplacian u), computed pointwise in physical space with dealiasing.
SpectralField pointwise_cross_with_laplacian(const SpectralField& u,
                                             int in_band = -1, int out_band = -1);

/// w = |u|^2 u pointwise with dealiasing (no kappa*mu prefactor).
SpectralField pointwise_cubic(const SpectralField& u,
                              int in_band = -1, int out_band = -1);

/// Both LLB nonlinear terms from one set of padded transforms:
/// returns (u x Laplacian u, |u|^2 u).
std::pair<SpectralField, SpectralField> llb_nonlinearity(const SpectralField& u,
                                                         int in_band = -1,
                                                         int out_band = -1);

}  // namespace llb
