#pragma once

#include <array>
#include <vector>

#include "torenv/field.hpp"

namespace torenv {

/// The compactly supported radial mollifier
///   chi(t) = C_n (1-t)^{-2} exp(1/(t-1))  for t < 1,   0 for t >= 1,
/// normalized so that int_{|x|<=1 in R^{2n}} chi(|x|^2) dx = 1.
/// In n=1 the normalizer has the closed form C_1 = e / pi.
double chi_unnormalized(double t);

struct KernelSample {
    std::array<double, 4> zeta{0, 0, 0, 0};  // point of the unit ball in R^{2n}
    double w = 0.0;                          // quadrature weight (sums to 1)
};

/// Quadrature design for the convolution against chi(|zeta|^2):
/// Gauss-Legendre in s = r^2 (32 nodes) tensored with uniform angles
/// (32 per sphere angle).  `raw_normalization` is the quadrature value of
/// the normalization integral with C_n in place (should be 1 up to the
/// rule's accuracy); sample weights are rescaled afterwards so that they
/// sum to 1 exactly and constants are reproduced at quadrature level.
struct SmoothingKernel {
    int n = 1;
    double C_n = 0.0;
    double raw_normalization = 0.0;
    std::vector<KernelSample> samples;

    explicit SmoothingKernel(int n_);
};

}  // namespace torenv
