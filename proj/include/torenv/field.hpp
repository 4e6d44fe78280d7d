#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "torenv/grid.hpp"

namespace torenv {

/// Clamp value stored at nodes where a field is -infinity (log pole).
inline constexpr double kPoleClamp = -40.0;

/// Marker for an isolated logarithmic pole: the field behaves like
/// coeff * log|z - node|^2 plus a smooth part near the node.
struct PoleMarker {
    std::size_t node = 0;
    double coeff = 0.0;
};

/// Grid-sampled real function.  Nodes with pole_mask set hold a finite
/// clamp in `v`; `poles` records the declared log coefficients.
struct ScalarField {
    TorusGrid grid;
    std::vector<double> v;
    std::vector<std::uint8_t> pole_mask;
    std::vector<PoleMarker> poles;

    ScalarField() = default;
    explicit ScalarField(const TorusGrid& g, double fill = 0.0)
        : grid(g), v(g.nodes(), fill), pole_mask(g.nodes(), 0) {}

    std::size_t size() const { return v.size(); }
    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }

    bool has_poles() const { return !poles.empty(); }

    void mark_pole(std::size_t node, double coeff) {
        pole_mask[node] = 1;
        v[node] = kPoleClamp;
        poles.push_back({node, coeff});
    }

    double min() const {
        double m = v[0];
        for (double x : v) m = std::min(m, x);
        return m;
    }
    double max() const {
        double m = v[0];
        for (double x : v) m = std::max(m, x);
        return m;
    }
};

/// Per-node n x n Hermitian coefficient matrix of a (1,1)-form, stored in
/// the density normalization used throughout: for F = dd^c u the entries
/// are (1/pi) d^2u / dz_j dz_k-bar, so that in n=1 the single entry equals
/// Lap(u)/(4 pi) and the top-power density is n! det.
/// Layout: h11, h22 real; h12 complex (h21 = conj(h12)).  For n=1 only h11
/// is used.  `skip` flags nodes where the matrix was not evaluated
/// (pole-adjacent stencils).
struct HermitianField {
    TorusGrid grid;
    std::vector<double> h11, h22, re12, im12;
    std::vector<std::uint8_t> skip;

    HermitianField() = default;
    explicit HermitianField(const TorusGrid& g)
        : grid(g), h11(g.nodes(), 0.0), skip(g.nodes(), 0) {
        if (g.n == 2) {
            h22.assign(g.nodes(), 0.0);
            re12.assign(g.nodes(), 0.0);
            im12.assign(g.nodes(), 0.0);
        }
    }

    std::size_t size() const { return h11.size(); }

    /// Smallest eigenvalue at node i (closed form, n <= 2).
    double min_eig(std::size_t i) const {
        if (grid.n == 1) return h11[i];
        const double m = 0.5 * (h11[i] + h22[i]);
        const double d = 0.5 * (h11[i] - h22[i]);
        return m - std::sqrt(d * d + re12[i] * re12[i] + im12[i] * im12[i]);
    }

    double max_eig(std::size_t i) const {
        if (grid.n == 1) return h11[i];
        const double m = 0.5 * (h11[i] + h22[i]);
        const double d = 0.5 * (h11[i] - h22[i]);
        return m + std::sqrt(d * d + re12[i] * re12[i] + im12[i] * im12[i]);
    }

    /// Spectral norm (largest |eigenvalue|).
    double spec_norm(std::size_t i) const {
        return std::max(std::abs(min_eig(i)), std::abs(max_eig(i)));
    }

    double det(std::size_t i) const {
        if (grid.n == 1) return h11[i];
        return h11[i] * h22[i] - (re12[i] * re12[i] + im12[i] * im12[i]);
    }

    double trace(std::size_t i) const {
        return grid.n == 1 ? h11[i] : h11[i] + h22[i];
    }
};

/// Constant Hermitian n x n matrix (the flat cohomology representative).
struct ConstHermitian {
    int n = 1;
    double b11 = 0.0, b22 = 0.0, re12 = 0.0, im12 = 0.0;

    static ConstHermitian scalar(double s) { return {1, s, 0.0, 0.0, 0.0}; }
    static ConstHermitian diag2(double a, double b) { return {2, a, b, 0.0, 0.0}; }

    double min_eig() const {
        if (n == 1) return b11;
        const double m = 0.5 * (b11 + b22), d = 0.5 * (b11 - b22);
        return m - std::sqrt(d * d + re12 * re12 + im12 * im12);
    }
    double det() const {
        return n == 1 ? b11 : b11 * b22 - (re12 * re12 + im12 * im12);
    }
    /// n! * det: density of the top wedge power of the constant form.
    double top_density() const { return n == 1 ? b11 : 2.0 * det(); }
    /// Quadratic form ζ* B ζ for a complex direction.
    double form(std::complex<double> z1, std::complex<double> z2) const {
        if (n == 1) return b11 * std::norm(z1);
        return b11 * std::norm(z1) + b22 * std::norm(z2) +
               2.0 * (re12 * (z1.real() * z2.real() + z1.imag() * z2.imag()) +
                      im12 * (z1.imag() * z2.real() - z1.real() * z2.imag()));
    }
};

}  // namespace torenv
