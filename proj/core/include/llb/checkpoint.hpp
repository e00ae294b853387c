#pragma once

#include <string>

#include "llb/field.hpp"

namespace llb {

/// Binary spectral checkpoint (.llbs), little-endian:
/// magic "LLBS", format version u32, n_per_axis u32, box_length f64,
/// time f64, then 3*n^3 coefficients as interleaved (re, im) f64 in
/// component-major, k1-major order.  Round trip is bit-exact.
void write_checkpoint(const std::string& path, const SpectralField& u, double time);

struct Checkpoint {
    SpectralField field;
    double time = 0.0;
};

Checkpoint read_checkpoint(const std::string& path);

}  // namespace llb
