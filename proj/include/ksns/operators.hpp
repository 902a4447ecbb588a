#pragma once

// Spectral differential operators, inverse Laplacians with Neumann/Dirichlet
// boundary behavior, the exact cos->sin change of basis, 2/3-rule dealiasing
// and the pseudo-spectral product.

#include "ksns/spectral.hpp"

namespace ksns {

// d/dx1: multiplies coefficients by i*k1, tag unchanged. The Nyquist mode
// has no representable odd partner and is zeroed.
SpectralField ddx1(const SpectralField& f);

// d/dx2: flips parity. CosY -> SinY with cos(k x2) -> -k sin(k x2);
// SinY -> CosY with sin(k x2) -> k cos(k x2). The one mode falling outside
// the target truncation is dropped.
SpectralField ddx2(const SpectralField& f);

// Laplacian: multiplies by -(k1^2 + k2^2), tag unchanged.
SpectralField laplacian(const SpectralField& f);

// Inverse of the homogeneous Neumann Laplacian on the mean-zero part;
// the (0,0) coefficient of the result is 0 and the input mean is ignored.
SpectralField inv_laplace_neumann(const SpectralField& f);

// Inverse of the homogeneous Dirichlet Laplacian, power 1 or 2.
SpectralField inv_laplace_dirichlet(const SpectralField& f, int power = 1);

// L2[0,pi] projection of a Neumann-parity field onto the Dirichlet basis,
// via the exact change-of-basis matrix
//   S[k][m] = (2/pi) * k (1-(-1)^{k+m}) / (k^2 - m^2),  k != m;  S[k][k] = 0.
SpectralField cos_to_sin(const SpectralField& f);

// 2/3-rule: zeroes coefficients with |k1| > n1/3 or k2 > 2*n2/3. Idempotent.
SpectralField dealias(const SpectralField& f);
bool in_dealias_band(const Grid& g, int k1, int k2);

// Pseudo-spectral product: dealiases both inputs, multiplies pointwise on
// the grid, transforms back in the parity-routed output basis
// (CosY*CosY -> CosY, SinY*SinY -> CosY, mixed -> SinY) and dealiases.
SpectralField multiply(const SpectralField& f, const SpectralField& g);

}  // namespace ksns
