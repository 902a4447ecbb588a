#pragma once

// Fast transforms between coefficient space and the collocation grid.
// x1 uses a real-to-complex FFT; x2 uses DCT-II/III (CosY) or DST-II/III
// (SinY) at the midpoint nodes. Plans are cached per grid size and guarded
// by a mutex; execution uses per-call scratch buffers so transforms are
// safe to run concurrently from several threads.

#include <span>
#include <vector>

#include "ksns/spectral.hpp"

namespace ksns {

// Pointwise values of f at (x1_nodes x x2_nodes), row-major (i1 * n2 + j).
std::vector<double> to_physical(const SpectralField& f);

// Coefficients of the interpolant of grid values in the tagged basis.
SpectralField to_spectral(std::span<const double> values, const Grid& grid, BasisTag tag);

}  // namespace ksns
