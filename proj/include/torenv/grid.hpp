#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace torenv {

/// Uniform periodic grid on the flat complex torus C^n / (Z + iZ)^n,
/// n in {1,2}.  Each complex coordinate z_j = x_j + i y_j contributes two
/// real axes, so the grid has 2n axes with N nodes each and spacing h = 1/N.
/// Axis order is (x_1, y_1, x_2, y_2); indices wrap modulo N.
struct TorusGrid {
    int n = 1;       // complex dimension
    int N = 0;       // nodes per real axis, power of two
    double h = 0.0;  // spacing, h*N == 1 exactly

    TorusGrid() = default;
    TorusGrid(int n_, int N_) : n(n_), N(N_), h(1.0 / N_) {
        if (n != 1 && n != 2) throw std::invalid_argument("TorusGrid: n must be 1 or 2");
        if (N < 8) throw std::invalid_argument("TorusGrid: N must be >= 8");
        if ((N & (N - 1)) != 0) throw std::invalid_argument("TorusGrid: N must be a power of two");
    }

    int axes() const { return 2 * n; }
    std::size_t nodes() const {
        std::size_t t = 1;
        for (int a = 0; a < axes(); ++a) t *= static_cast<std::size_t>(N);
        return t;
    }

    int wrap(int i) const { return i & (N - 1); }

    std::size_t index(const std::array<int, 4>& c) const {
        std::size_t idx = 0;
        for (int a = 0; a < axes(); ++a) idx = idx * N + static_cast<std::size_t>(wrap(c[a]));
        return idx;
    }

    std::array<int, 4> coords(std::size_t idx) const {
        std::array<int, 4> c{0, 0, 0, 0};
        for (int a = axes() - 1; a >= 0; --a) {
            c[a] = static_cast<int>(idx % N);
            idx /= N;
        }
        return c;
    }

    /// Neighbor of idx shifted by d (may be negative) along axis.
    std::size_t shift(std::size_t idx, int axis, int d) const {
        auto c = coords(idx);
        c[axis] = wrap(c[axis] + d);
        return index(c);
    }

    /// Physical position of a node in [0,1)^{2n}.
    std::array<double, 4> pos(std::size_t idx) const {
        auto c = coords(idx);
        return {c[0] * h, c[1] * h, c[2] * h, c[3] * h};
    }

    /// Squared torus distance between two nodes (each axis difference
    /// reduced to [-1/2, 1/2)).
    double dist2(std::size_t a, std::size_t b) const {
        auto ca = coords(a), cb = coords(b);
        double s = 0.0;
        for (int ax = 0; ax < axes(); ++ax) {
            int d = wrap(ca[ax] - cb[ax]);
            if (d > N / 2) d -= N;
            double dd = d * h;
            s += dd * dd;
        }
        return s;
    }

    bool operator==(const TorusGrid& o) const { return n == o.n && N == o.N; }
};

}  // namespace torenv
