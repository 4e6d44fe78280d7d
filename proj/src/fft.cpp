#include "torenv/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace torenv {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void fft_radix2(std::complex<double>* a, std::size_t n, bool inverse) {
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? kTwoPi : -kTwoPi) / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) a[i] *= inv;
    }
}

void fft_grid(std::vector<std::complex<double>>& a, const TorusGrid& g, bool inverse) {
    const int axes = g.axes();
    const std::size_t N = static_cast<std::size_t>(g.N);
    const std::size_t total = g.nodes();
    std::vector<std::complex<double>> line(N);
    // axis ax has stride = N^(axes-1-ax)
    for (int ax = 0; ax < axes; ++ax) {
        std::size_t stride = 1;
        for (int k = ax + 1; k < axes; ++k) stride *= N;
        const std::size_t block = stride * N;
        for (std::size_t base = 0; base < total; base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                for (std::size_t i = 0; i < N; ++i) line[i] = a[base + off + i * stride];
                fft_radix2(line.data(), N, inverse);
                for (std::size_t i = 0; i < N; ++i) a[base + off + i * stride] = line[i];
            }
        }
    }
}

ScalarField poisson_solve(const ScalarField& f) {
    const TorusGrid& g = f.grid;
    const std::size_t M = g.nodes();
    std::vector<std::complex<double>> a(M);
    for (std::size_t i = 0; i < M; ++i) a[i] = f.v[i];
    fft_grid(a, g, false);
    if (std::abs(a[0]) / static_cast<double>(M) > 1e-8)
        throw std::invalid_argument("poisson_solve: right-hand side must have zero mean");

    const int axes = g.axes();
    const double inv_h2 = static_cast<double>(g.N) * static_cast<double>(g.N);
    // symbol of the (2n-axis) 5/9-point Laplacian: sum_ax (2 cos(2 pi k/N) - 2)/h^2
    std::vector<double> c(g.N);
    for (int k = 0; k < g.N; ++k) c[k] = 2.0 * std::cos(kTwoPi * k / g.N) - 2.0;
    for (std::size_t idx = 0; idx < M; ++idx) {
        if (idx == 0) { a[0] = 0.0; continue; }
        auto co = g.coords(idx);
        double sym = 0.0;
        for (int ax = 0; ax < axes; ++ax) sym += c[co[ax]];
        sym *= inv_h2;
        a[idx] /= sym;
    }
    fft_grid(a, g, true);
    ScalarField out(g);
    for (std::size_t i = 0; i < M; ++i) out.v[i] = a[i].real();
    return out;
}

ScalarField convolve_fft(const ScalarField& u, const LatticeKernel& k) {
    const TorusGrid& g = u.grid;
    const std::size_t M = g.nodes();
    std::vector<std::complex<double>> A(M), K(M, 0.0);
    for (std::size_t i = 0; i < M; ++i) A[i] = u.v[i];
    for (std::size_t t = 0; t < k.weights.size(); ++t) {
        // out(z) = sum w u(z + off): kernel tap at node (+off)
        K[g.index(k.offsets[t])] += k.weights[t];
    }
    fft_grid(A, g, false);
    fft_grid(K, g, false);
    // out = sum_y k(y) u(z + y) = cross-correlation: F[out] = F[u] * conj(F[k])
    for (std::size_t i = 0; i < M; ++i) A[i] *= std::conj(K[i]);
    fft_grid(A, g, true);
    ScalarField out(g);
    for (std::size_t i = 0; i < M; ++i) out.v[i] = A[i].real();
    out.pole_mask = u.pole_mask;
    out.poles = u.poles;
    return out;
}

std::vector<double> correlate_mean_fft(const std::vector<double>& u,
                                       const std::vector<double>& gg,
                                       const TorusGrid& grid) {
    const std::size_t M = grid.nodes();
    std::vector<std::complex<double>> A(M), B(M);
    for (std::size_t i = 0; i < M; ++i) {
        A[i] = u[i];
        B[i] = gg[i];
    }
    fft_grid(A, grid, false);
    fft_grid(B, grid, false);
    // c(a) = (1/M) sum_z u(z) g(z - a):  F[c] = F[u] * conj(F[g]) / M
    for (std::size_t i = 0; i < M; ++i) A[i] *= std::conj(B[i]) / static_cast<double>(M);
    fft_grid(A, grid, true);
    std::vector<double> out(M);
    for (std::size_t i = 0; i < M; ++i) out[i] = A[i].real();
    return out;
}

}  // namespace torenv
