#include "torenv/ops.hpp"

#include <cmath>
#include <numbers>

#include "torenv/parallel.hpp"

namespace torenv {

namespace {
constexpr double kPi = std::numbers::pi;
}

HermitianField hessian_fd(const ScalarField& u) {
    const TorusGrid& g = u.grid;
    HermitianField F(g);

    // pole-adjacent nodes (within 2 cells on any axis combination) are skipped
    if (u.has_poles()) {
        for (const auto& p : u.poles) {
            auto c = g.coords(p.node);
            if (g.n == 1) {
                for (int di = -2; di <= 2; ++di)
                    for (int dj = -2; dj <= 2; ++dj)
                        F.skip[g.index({c[0] + di, c[1] + dj, 0, 0})] = 1;
            } else {
                for (int d0 = -2; d0 <= 2; ++d0)
                    for (int d1 = -2; d1 <= 2; ++d1)
                        for (int d2 = -2; d2 <= 2; ++d2)
                            for (int d3 = -2; d3 <= 2; ++d3)
                                F.skip[g.index({c[0] + d0, c[1] + d1, c[2] + d2, c[3] + d3})] = 1;
            }
        }
    }

    const double inv_h2 = 1.0 / (g.h * g.h);
    const double s2 = inv_h2 / (4.0 * kPi);          // second differences -> density
    const double sm = inv_h2 / (4.0 * 4.0 * kPi);    // mixed (4 h^2) -> density

    const int N = g.N;
    const double* V = u.v.data();

    if (g.n == 1) {
        const std::size_t nn = g.nodes();
        parallel_blocks(nn, [&](std::size_t b, std::size_t e) {
            for (std::size_t idx = b; idx < e; ++idx) {
                if (F.skip[idx]) continue;
                const int i = static_cast<int>(idx) / N, j = static_cast<int>(idx) % N;
                const int im = (i - 1) & (N - 1), ip = (i + 1) & (N - 1);
                const int jm = (j - 1) & (N - 1), jp = (j + 1) & (N - 1);
                const double lap = V[std::size_t(ip) * N + j] + V[std::size_t(im) * N + j] +
                                   V[std::size_t(i) * N + jp] + V[std::size_t(i) * N + jm] -
                                   4.0 * V[idx];
                F.h11[idx] = lap * s2;
            }
        });
        return F;
    }

    // n = 2: axes (x1, y1, x2, y2)
    const std::size_t nn = g.nodes();
    auto at = [&](int a, int b2, int c2, int d) -> double {
        return V[((std::size_t((a) & (N - 1)) * N + ((b2) & (N - 1))) * N +
                  ((c2) & (N - 1))) * N + ((d) & (N - 1))];
    };
    parallel_blocks(nn, [&](std::size_t blk_b, std::size_t blk_e) {
        for (std::size_t idx = blk_b; idx < blk_e; ++idx) {
            if (F.skip[idx]) continue;
            auto c = g.coords(idx);
            const int a = c[0], b = c[1], cc = c[2], d = c[3];
            const double u0 = V[idx];
            const double uxx1 = at(a + 1, b, cc, d) + at(a - 1, b, cc, d) - 2 * u0;
            const double uyy1 = at(a, b + 1, cc, d) + at(a, b - 1, cc, d) - 2 * u0;
            const double uxx2 = at(a, b, cc + 1, d) + at(a, b, cc - 1, d) - 2 * u0;
            const double uyy2 = at(a, b, cc, d + 1) + at(a, b, cc, d - 1) - 2 * u0;
            F.h11[idx] = (uxx1 + uyy1) * s2;
            F.h22[idx] = (uxx2 + uyy2) * s2;
            // mixed: dz1 dz2-bar = (1/4)[(u_x1x2 + u_y1y2) + i (u_x1y2 - u_y1x2)]
            const double ux1x2 = at(a + 1, b, cc + 1, d) - at(a + 1, b, cc - 1, d) -
                                 at(a - 1, b, cc + 1, d) + at(a - 1, b, cc - 1, d);
            const double uy1y2 = at(a, b + 1, cc, d + 1) - at(a, b + 1, cc, d - 1) -
                                 at(a, b - 1, cc, d + 1) + at(a, b - 1, cc, d - 1);
            const double ux1y2 = at(a + 1, b, cc, d + 1) - at(a + 1, b, cc, d - 1) -
                                 at(a - 1, b, cc, d + 1) + at(a - 1, b, cc, d - 1);
            const double uy1x2 = at(a, b + 1, cc + 1, d) - at(a, b + 1, cc - 1, d) -
                                 at(a, b - 1, cc + 1, d) + at(a, b - 1, cc - 1, d);
            F.re12[idx] = (ux1x2 + uy1y2) * sm;
            F.im12[idx] = (ux1y2 - uy1x2) * sm;
        }
    });
    return F;
}

ScalarField ma_density(const HermitianField& F) {
    ScalarField out(F.grid);
    parallel_blocks(F.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            out.v[i] = (F.grid.n == 1) ? F.det(i) : 2.0 * F.det(i);
            out.pole_mask[i] = F.skip[i];
        }
    });
    return out;
}

ScalarField min_eigenvalue(const HermitianField& F) {
    ScalarField out(F.grid);
    parallel_blocks(F.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            out.v[i] = F.min_eig(i);
            out.pole_mask[i] = F.skip[i];
        }
    });
    return out;
}

ScalarField trace_density(const HermitianField& F) {
    ScalarField out(F.grid);
    parallel_blocks(F.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            out.v[i] = F.trace(i);
            out.pole_mask[i] = F.skip[i];
        }
    });
    return out;
}

double tree_sum(const double* x, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return tree_sum(x, half) + tree_sum(x + half, n - half);
}

double tree_sum(const std::vector<double>& x) { return tree_sum(x.data(), x.size()); }

void add_const(HermitianField& F, const ConstHermitian& beta) {
    for (std::size_t i = 0; i < F.size(); ++i) {
        F.h11[i] += beta.b11;
        if (F.grid.n == 2) {
            F.h22[i] += beta.b22;
            F.re12[i] += beta.re12;
            F.im12[i] += beta.im12;
        }
    }
}

}  // namespace torenv
