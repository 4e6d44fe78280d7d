#include "torenv/integrate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "torenv/ops.hpp"
#include "torenv/quad.hpp"

namespace torenv {

namespace {
constexpr double kPi = std::numbers::pi;

/// Torus-periodic displacement of node `idx` from node `a`, in physical
/// units, each axis reduced to [-1/2, 1/2).
inline void torus_delta(const TorusGrid& g, std::size_t idx, std::size_t a,
                        double& dx, double& dy) {
    auto ci = g.coords(idx), ca = g.coords(a);
    int d0 = g.wrap(ci[0] - ca[0]);
    int d1 = g.wrap(ci[1] - ca[1]);
    if (d0 > g.N / 2) d0 -= g.N;
    if (d1 > g.N / 2) d1 -= g.N;
    dx = d0 * g.h;
    dy = d1 * g.h;
}

/// log of the local singular profile sum at physical offset (x,y) from the
/// pole set, i.e. sum_j kappa_j log|p - a_j|^2 measured on the torus.
double singular_part(const ScalarField& E, double px, double py) {
    double s = 0.0;
    for (const auto& p : E.poles) {
        auto ca = E.grid.coords(p.node);
        double dx = px - ca[0] * E.grid.h;
        double dy = py - ca[1] * E.grid.h;
        dx -= std::round(dx);
        dy -= std::round(dy);
        const double r2 = dx * dx + dy * dy;
        s += p.coeff * std::log(r2);
    }
    return s;
}

/// Smooth part of E at a node: E minus all declared singular profiles.
/// At a pole node itself the clamped value is meaningless; callers must
/// not request it (handled by neighbor averaging below).
double smooth_at_node(const ScalarField& E, std::size_t idx) {
    auto c = E.grid.coords(idx);
    return E.v[idx] - singular_part(E, c[0] * E.grid.h, c[1] * E.grid.h);
}

/// Bilinearly interpolated smooth part of E at physical point (px,py).
/// Pole nodes are replaced by the average of their four axis neighbors.
double smooth_interp(const ScalarField& E, double px, double py) {
    const TorusGrid& g = E.grid;
    const double gx = px * g.N, gy = py * g.N;
    const int i0 = static_cast<int>(std::floor(gx));
    const int j0 = static_cast<int>(std::floor(gy));
    const double fx = gx - i0, fy = gy - j0;
    double val = 0.0;
    for (int di = 0; di <= 1; ++di) {
        for (int dj = 0; dj <= 1; ++dj) {
            const double w = (di ? fx : 1.0 - fx) * (dj ? fy : 1.0 - fy);
            const std::size_t node = g.index({i0 + di, j0 + dj, 0, 0});
            double sv;
            if (E.pole_mask[node]) {
                sv = 0.0;
                auto c = g.coords(node);
                sv += smooth_at_node(E, g.index({c[0] + 1, c[1], 0, 0}));
                sv += smooth_at_node(E, g.index({c[0] - 1, c[1], 0, 0}));
                sv += smooth_at_node(E, g.index({c[0], c[1] + 1, 0, 0}));
                sv += smooth_at_node(E, g.index({c[0], c[1] - 1, 0, 0}));
                sv *= 0.25;
            } else {
                sv = smooth_at_node(E, node);
            }
            val += w * sv;
        }
    }
    return val;
}

}  // namespace

double integrate(const ScalarField& u, const ScalarField* weight) {
    if (u.has_poles())
        throw std::invalid_argument("integrate: field has pole markers; use the pole-aware routines");
    std::vector<double> tmp(u.size());
    if (weight) {
        for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u.v[i] * weight->v[i];
    } else {
        tmp = u.v;
    }
    return tree_sum(tmp) / static_cast<double>(u.size());
}

double integrate_exp(const ScalarField& E, double refine_radius_cells) {
    const TorusGrid& g = E.grid;
    if (g.n != 1) throw std::invalid_argument("integrate_exp: n=1 only");
    for (const auto& p : E.poles) {
        if (p.coeff <= -1.0)
            throw std::domain_error("integrate_exp: non-integrable pole (klt condition violated)");
    }
    const double R = refine_radius_cells * g.h;

    // trapezoid part with pole discs excluded
    std::vector<double> cell(E.size(), 0.0);
    for (std::size_t i = 0; i < E.size(); ++i) {
        bool excluded = false;
        for (const auto& p : E.poles) {
            if (p.coeff >= 0.0) continue;  // positive powers: plain trapezoid is fine
            if (g.dist2(i, p.node) <= R * R) { excluded = true; break; }
        }
        if (!excluded) cell[i] = std::exp(E.v[i]);
    }
    double total = tree_sum(cell) / static_cast<double>(E.size());

    // adaptive polar quadrature on each excluded disc
    const auto& rq = gauss_legendre(16);
    const int n_ang = 16;
    for (const auto& p : E.poles) {
        if (p.coeff >= 0.0) continue;
        auto ca = g.coords(p.node);
        const double ax = ca[0] * g.h, ay = ca[1] * g.h;
        const double kappa = p.coeff;
        const double m = 2.0 * kappa + 2.0;  // > 0 by the klt guard
        // int_0^R t^{2k+1} S(t,th) dt = (1/m) int_0^{R^m} S(u^{1/m}) du
        const double um = std::pow(R, m);
        double disc = 0.0;
        for (std::size_t iq = 0; iq < rq.x.size(); ++iq) {
            const double uu = um * rq.x[iq];
            const double t = std::pow(uu, 1.0 / m);
            double ang = 0.0;
            for (int ia = 0; ia < n_ang; ++ia) {
                const double th = 2.0 * kPi * (ia + 0.5) / n_ang;
                const double px = ax + t * std::cos(th), py = ay + t * std::sin(th);
                // integrand = exp(E) = exp(smooth + all singular parts);
                // factor out this pole's own t^{2 kappa}:
                const double rest = singular_part(E, px, py) - kappa * std::log(t * t);
                ang += std::exp(smooth_interp(E, px, py) + rest);
            }
            ang /= n_ang;
            disc += rq.w[iq] * um / m * ang;
        }
        disc *= 2.0 * kPi;
        total += disc;
    }
    return total;
}

double integrate_log_singular(const ScalarField& u) {
    const TorusGrid& g = u.grid;
    if (!u.has_poles()) return integrate(u);
    if (g.n != 1) throw std::invalid_argument("integrate_log_singular: n=1 only");
    const double R = 4.0 * g.h;
    std::vector<double> cell(u.size(), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        bool excluded = false;
        for (const auto& p : u.poles)
            if (g.dist2(i, p.node) <= R * R) { excluded = true; break; }
        if (!excluded) cell[i] = u.v[i];
    }
    double total = tree_sum(cell) / static_cast<double>(u.size());

    const auto& rq = gauss_legendre(16);
    const int n_ang = 16;
    for (const auto& p : u.poles) {
        auto ca = g.coords(p.node);
        const double ax = ca[0] * g.h, ay = ca[1] * g.h;
        double disc = 0.0;
        for (std::size_t iq = 0; iq < rq.x.size(); ++iq) {
            const double t = R * rq.x[iq];
            double ang = 0.0;
            for (int ia = 0; ia < n_ang; ++ia) {
                const double th = 2.0 * kPi * (ia + 0.5) / n_ang;
                const double px = ax + t * std::cos(th), py = ay + t * std::sin(th);
                // u = smooth + singular; integrate both parts of the model
                ang += smooth_interp(u, px, py) + singular_part(u, px, py);
            }
            ang /= n_ang;
            disc += rq.w[iq] * R * t * ang;
        }
        disc *= 2.0 * kPi;
        total += disc;
    }
    return total;
}

}  // namespace torenv
