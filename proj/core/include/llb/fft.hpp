#pragma once

#include "llb/field.hpp"

namespace llb {

/// Discrete forward transform; coefficients are divided by n^3 so the
/// k=0 coefficient equals the mean of the field.
SpectralField forward_transform(const PhysicalField& f);

/// Exact inverse of forward_transform.  For real-flagged fields the
/// imaginary residue is checked against `imag_tol` (max norm) and
/// discarded; NonRealOutput is thrown when it exceeds the tolerance.
PhysicalField inverse_transform(const SpectralField& F, double imag_tol = 1e-10);

// Low-level c2c helpers on a raw n^3 cube (plans cached per size).
void fft3_forward(int n, const cplx* in, cplx* out);    // unscaled
void fft3_backward(int n, const cplx* in, cplx* out);   // unscaled

}  // namespace llb
