#pragma once

#include <complex>
#include <vector>

#include "torenv/field.hpp"

namespace torenv {

/// In-place iterative radix-2 FFT (size must be a power of two).
void fft_radix2(std::complex<double>* a, std::size_t n, bool inverse);

/// Forward/backward FFT over all 2n axes of a grid-shaped complex array.
void fft_grid(std::vector<std::complex<double>>& a, const TorusGrid& g, bool inverse);

/// Solve the periodic discrete Poisson equation  Lap_h u = f  (5-point
/// Laplacian per complex axis pair, all 2n axes) with zero-mean right-hand
/// side, returning the zero-mean solution.  Throws if |mean f| > 1e-8.
ScalarField poisson_solve(const ScalarField& f);

/// Circular convolution of a field with an arbitrary kernel given as
/// weighted lattice taps: out(z) = sum_t w_t u(z + off_t).
struct LatticeKernel {
    std::vector<std::array<int, 4>> offsets;  // per-tap node offsets
    std::vector<double> weights;
};
ScalarField convolve_fft(const ScalarField& u, const LatticeKernel& k);

/// Circular cross-correlation c(a) = (1/M) sum_z u(z) g(z - a) over nodes
/// (M = node count), used for Green-potential gradients.
std::vector<double> correlate_mean_fft(const std::vector<double>& u,
                                       const std::vector<double>& g,
                                       const TorusGrid& grid);

}  // namespace torenv
