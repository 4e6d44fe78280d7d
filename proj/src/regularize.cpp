#include "torenv/regularize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "torenv/fft.hpp"
#include "torenv/ops.hpp"
#include "torenv/parallel.hpp"

namespace torenv {

RegularizationParams RegularizationParams::defaults(double K, double c, double delta,
                                                    double delta0, int n_radii) {
    RegularizationParams p;
    p.K = K;
    p.c = c;
    p.delta = delta;
    p.delta0 = delta0;
    p.t_grid.resize(n_radii);
    const double t_min = delta0 / 256.0;
    for (int i = 0; i < n_radii; ++i) {
        const double s = static_cast<double>(i) / (n_radii - 1);
        p.t_grid[i] = t_min * std::exp(s * std::log(delta0 / t_min));
    }
    p.t_grid.back() = delta0;
    return p;
}

double estimate_K(const AlphaForm& alpha) {
    HermitianField dq = hessian_fd(alpha.q);
    double sup = 0.0;
    for (std::size_t i = 0; i < dq.size(); ++i) sup = std::max(sup, dq.spec_norm(i));
    return sup + 1.0;
}

namespace {

/// Splat the kernel samples at radius t onto lattice taps with the same
/// multilinear weights used by the direct interpolation path, so the FFT
/// convolution realizes the identical linear operator.
LatticeKernel splat_kernel(const SmoothingKernel& kernel, double t, const TorusGrid& g) {
    const int axes = g.axes();
    struct Key {
        int c[4];
        bool operator<(const Key& o) const {
            for (int i = 0; i < 4; ++i)
                if (c[i] != o.c[i]) return c[i] < o.c[i];
            return false;
        }
    };
    std::map<Key, double> acc;
    for (const auto& ks : kernel.samples) {
        double cellpos[4] = {0, 0, 0, 0};
        int base[4] = {0, 0, 0, 0};
        double frac[4] = {0, 0, 0, 0};
        for (int a = 0; a < axes; ++a) {
            cellpos[a] = t * ks.zeta[a] / g.h;
            base[a] = static_cast<int>(std::floor(cellpos[a]));
            frac[a] = cellpos[a] - base[a];
        }
        const int corners = 1 << axes;
        for (int m = 0; m < corners; ++m) {
            double w = ks.w;
            Key key{{0, 0, 0, 0}};
            for (int a = 0; a < axes; ++a) {
                const int bit = (m >> a) & 1;
                w *= bit ? frac[a] : 1.0 - frac[a];
                key.c[a] = base[a] + bit;
            }
            if (w != 0.0) acc[key] += w;
        }
    }
    LatticeKernel k;
    k.offsets.reserve(acc.size());
    k.weights.reserve(acc.size());
    for (const auto& [key, w] : acc) {
        k.offsets.push_back({key.c[0], key.c[1], key.c[2], key.c[3]});
        k.weights.push_back(w);
    }
    return k;
}

}  // namespace

ScalarField rho(const ScalarField& psi, double t, const SmoothingKernel& kernel) {
    if (t <= 0.0) throw std::invalid_argument("rho: t must be positive");
    LatticeKernel k = splat_kernel(kernel, t, psi.grid);
    return convolve_fft(psi, k);
}

double rho_at(const ScalarField& psi, double t, const SmoothingKernel& kernel,
              std::size_t node) {
    if (t <= 0.0) throw std::invalid_argument("rho: t must be positive");
    const TorusGrid& g = psi.grid;
    const int axes = g.axes();
    auto c0 = g.coords(node);
    double acc = 0.0;
    for (const auto& ks : kernel.samples) {
        int base[4] = {0, 0, 0, 0};
        double frac[4] = {0, 0, 0, 0};
        for (int a = 0; a < axes; ++a) {
            const double p = c0[a] + t * ks.zeta[a] / g.h;
            base[a] = static_cast<int>(std::floor(p));
            frac[a] = p - base[a];
        }
        const int corners = 1 << axes;
        double v = 0.0;
        for (int m = 0; m < corners; ++m) {
            double w = 1.0;
            std::array<int, 4> cc{0, 0, 0, 0};
            for (int a = 0; a < axes; ++a) {
                const int bit = (m >> a) & 1;
                w *= bit ? frac[a] : 1.0 - frac[a];
                cc[a] = base[a] + bit;
            }
            v += w * psi.v[g.index(cc)];
        }
        acc += ks.w * v;
    }
    return acc;
}

MonotoneTable monotone_transform(const ScalarField& psi, std::size_t node,
                                 const RegularizationParams& params,
                                 const SmoothingKernel& kernel) {
    MonotoneTable tab;
    tab.t = params.t_grid;
    tab.value.resize(tab.t.size());
    for (std::size_t i = 0; i < tab.t.size(); ++i) {
        const double t = tab.t[i];
        tab.value[i] = rho_at(psi, t, kernel, node) + params.K * t * t;
    }
    for (std::size_t i = 0; i + 1 < tab.value.size(); ++i)
        tab.worst_decrease = std::max(tab.worst_decrease, tab.value[i] - tab.value[i + 1]);
    return tab;
}

SlopeResult lambda_slope(const MonotoneTable& table, double t) {
    const auto& ts = table.t;
    if (ts.size() < 2) throw std::invalid_argument("lambda_slope: table too short");
    // nearest table index
    std::size_t k = 0;
    double best = std::abs(std::log(ts[0] / t));
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double d = std::abs(std::log(ts[i] / t));
        if (d < best) { best = d; k = i; }
    }
    SlopeResult r;
    std::size_t lo, hi;
    if (k == 0) { lo = 0; hi = 1; r.boundary = true; }
    else if (k + 1 == ts.size()) { lo = k - 1; hi = k; r.boundary = true; }
    else { lo = k - 1; hi = k + 1; }
    const double raw = (table.value[hi] - table.value[lo]) /
                       (std::log(ts[hi]) - std::log(ts[lo]));
    r.lambda = 0.5 * raw;
    return r;
}

KiselmanResult kiselman_transform(const ScalarField& psi,
                                  const RegularizationParams& params,
                                  const SmoothingKernel& kernel) {
    if (params.c <= 0.0) throw std::invalid_argument("kiselman: c must be positive");
    if (params.delta <= 0.0 || params.delta > params.delta0)
        throw std::invalid_argument("kiselman: need 0 < delta <= delta0");
    const TorusGrid& g = psi.grid;

    std::vector<double> radii;
    for (double t : params.t_grid)
        if (t <= params.delta * (1.0 + 1e-12)) radii.push_back(t);
    if (radii.empty()) throw std::invalid_argument("kiselman: no radii below delta");
    if (radii.back() < params.delta) radii.push_back(params.delta);

    const double K = params.K, c = params.c, d = params.delta;
    const std::size_t M = g.nodes();

    KiselmanResult out;
    out.field = ScalarField(g);
    out.argmin_t.assign(M, d);
    out.unbounded.assign(M, 0);
    out.lambda_at_delta.assign(M, 0.0);

    std::vector<double> best(M, 0.0), prev2(M, 0.0), prev1(M, 0.0);
    std::vector<double> first(M, 0.0), second(M, 0.0);
    for (std::size_t k = 0; k < radii.size(); ++k) {
        const double t = radii[k];
        ScalarField r = rho(psi, t, kernel);
        const double shift = K * t * t - K * d * d - c * std::log(t / d);
        parallel_blocks(M, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                const double val = r.v[i] + shift;
                if (k == 0) { first[i] = val; best[i] = val; out.argmin_t[i] = t; }
                else if (val < best[i]) { best[i] = val; out.argmin_t[i] = t; }
                if (k == 1) second[i] = val;
                if (k + 2 == radii.size()) prev2[i] = r.v[i] + K * t * t;
                if (k + 1 == radii.size()) prev1[i] = r.v[i] + K * t * t;
            }
        });
    }
    const double dlog = radii.size() >= 2
                            ? std::log(radii.back() / radii[radii.size() - 2])
                            : 1.0;
    for (std::size_t i = 0; i < M; ++i) {
        // infimum still decreasing toward t -> 0: true infimum is -inf
        if (out.argmin_t[i] == radii.front() && second[i] > first[i]) {
            out.unbounded[i] = 1;
            best[i] = std::max(best[i], kPoleClamp);
        }
        out.field.v[i] = best[i];
        out.lambda_at_delta[i] = 0.5 * (prev1[i] - prev2[i]) / dlog;
    }
    out.field.pole_mask = psi.pole_mask;
    out.field.poles = psi.poles;
    return out;
}

FloorReport hessian_floor_check(const ScalarField& psi,
                                const RegularizationParams& params,
                                const AlphaForm& alpha,
                                const SmoothingKernel& kernel) {
    KiselmanResult kr = kiselman_transform(psi, params, kernel);
    HermitianField H = hessian_fd(kr.field);
    for (std::size_t i = 0; i < H.size(); ++i) {
        H.h11[i] += alpha.density.h11[i];
        if (H.grid.n == 2) {
            H.h22[i] += alpha.density.h22[i];
            H.re12[i] += alpha.density.re12[i];
            H.im12[i] += alpha.density.im12[i];
        }
    }

    FloorReport rep;
    rep.kdelta2 = params.K * params.delta * params.delta;
    for (std::size_t i = 0; i < H.size(); ++i) {
        if (H.skip[i] || psi.pole_mask[i] || kr.unbounded[i]) continue;
        const double lam = std::max(0.0, kr.lambda_at_delta[i]);
        const double floor = -(params.A * std::min(params.c, lam) + rep.kdelta2);
        const double me = H.min_eig(i);
        const double viol = floor - me;
        if (viol > rep.worst_violation) {
            rep.worst_violation = viol;
            rep.worst_node = i;
            rep.min_eig_at_worst = me;
            rep.floor_at_worst = floor;
        }
    }
    return rep;
}

}  // namespace torenv
