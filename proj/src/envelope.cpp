#include "torenv/envelope.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <numbers>

#include "torenv/ops.hpp"
#include "torenv/parallel.hpp"
#include "torenv/rng.hpp"

namespace torenv {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kCirclePoints = 16;
constexpr double kRadiusCells = 3.0;
}  // namespace

std::vector<std::array<double, 4>> direction_covering(int m) {
    // Fibonacci lattice on S^2 ~ CP^1 including both poles: cos(theta) runs
    // over 1 - 2k/(m-1), so k=0 is the pure first complex axis and k=m-1 the
    // pure second; azimuths advance by the golden angle.
    std::vector<std::array<double, 4>> dirs;
    dirs.reserve(m);
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < m; ++k) {
        const double cz = (m == 1) ? 1.0 : 1.0 - 2.0 * k / (m - 1.0);
        const double th = std::acos(std::clamp(cz, -1.0, 1.0));
        const double ph = golden * k;
        const double a = std::cos(0.5 * th), b = std::sin(0.5 * th);
        dirs.push_back({a, 0.0, b * std::cos(ph), b * std::sin(ph)});
    }
    return dirs;
}

ScalarField prolong_2x(const ScalarField& coarse) {
    const TorusGrid& gc = coarse.grid;
    TorusGrid gf(gc.n, gc.N * 2);
    ScalarField fine(gf);
    const int axes = gf.axes();
    parallel_blocks(gf.nodes(), [&](std::size_t b, std::size_t e) {
        for (std::size_t idx = b; idx < e; ++idx) {
            auto cf = gf.coords(idx);
            std::array<int, 4> base{0, 0, 0, 0};
            double frac[4] = {0, 0, 0, 0};
            for (int a = 0; a < axes; ++a) {
                base[a] = cf[a] >> 1;
                frac[a] = (cf[a] & 1) ? 0.5 : 0.0;
            }
            double v = 0.0;
            const int corners = 1 << axes;
            for (int msk = 0; msk < corners; ++msk) {
                double w = 1.0;
                std::array<int, 4> cc{0, 0, 0, 0};
                for (int a = 0; a < axes; ++a) {
                    const int bit = (msk >> a) & 1;
                    w *= bit ? frac[a] : 1.0 - frac[a];
                    cc[a] = base[a] + bit;
                }
                if (w != 0.0) v += w * coarse.v[gc.index(cc)];
            }
            fine.v[idx] = v;
        }
    });
    return fine;
}

// ---------------------------------------------------------------------------
// Projected SOR for the n=1 linear complementarity problem.
// ---------------------------------------------------------------------------

namespace {

struct PsorOutcome {
    long sweeps = 0;
    double residual = 0.0;
};

PsorOutcome psor_sweeps(std::vector<double>& u, const std::vector<double>& a, int N,
                        double tol, long max_sweeps, double omega, bool error_stop) {
    const double h2 = 1.0 / (static_cast<double>(N) * N);
    std::vector<double> rhs(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) rhs[i] = 4.0 * kPi * h2 * a[i];

    PsorOutcome out;
    double prev_upd = 0.0;
    for (long sweep = 0; sweep < max_sweeps; ++sweep) {
        double sup_upd = 0.0;
        for (int color = 0; color < 2; ++color) {
            // red-black: 5-point neighbors are all of the other color, so
            // eager in-place updates are order-independent within a color.
            std::vector<double> local_max(std::max(1, thread_count()), 0.0);
            parallel_blocks(static_cast<std::size_t>(N), [&](std::size_t rb, std::size_t re) {
                double lm = 0.0;
                for (std::size_t i = rb; i < re; ++i) {
                    const int im = (static_cast<int>(i) - 1) & (N - 1);
                    const int ip = (static_cast<int>(i) + 1) & (N - 1);
                    const std::size_t row = i * N, rowm = static_cast<std::size_t>(im) * N,
                                      rowp = static_cast<std::size_t>(ip) * N;
                    for (int j = (static_cast<int>(i) + color) & 1; j < N; j += 2) {
                        const int jm = (j - 1) & (N - 1), jp = (j + 1) & (N - 1);
                        const std::size_t idx = row + j;
                        const double gs = 0.25 * (u[rowm + j] + u[rowp + j] + u[row + jm] +
                                                  u[row + jp] + rhs[idx]);
                        const double nv = std::min(0.0, u[idx] + omega * (gs - u[idx]));
                        const double d = std::abs(nv - u[idx]);
                        if (d > lm) lm = d;
                        u[idx] = nv;
                    }
                }
                // deterministic reduction: block index by starting row
                const std::size_t slot = (thread_count() > 1)
                                             ? std::min<std::size_t>(local_max.size() - 1,
                                                                     rb / ((N + local_max.size() - 1) / local_max.size()))
                                             : 0;
                if (lm > local_max[slot]) local_max[slot] = lm;
            });
            for (double lm : local_max) sup_upd = std::max(sup_upd, lm);
        }
        out.sweeps = sweep + 1;
        out.residual = sup_upd;
        bool done;
        if (error_stop && prev_upd > 0.0 && sup_upd < prev_upd) {
            const double rho = std::min(sup_upd / prev_upd, 0.9999);
            done = sup_upd * rho / (1.0 - rho) < tol;
        } else {
            done = sup_upd < tol;
        }
        prev_upd = sup_upd;
        if (done) return out;
    }
    throw SolverStall("projected SOR did not converge", out.residual);
}

std::vector<std::uint8_t> make_contact(const ScalarField& phi, double contact_tol) {
    std::vector<std::uint8_t> m(phi.size(), 0);
    for (std::size_t i = 0; i < phi.size(); ++i) m[i] = phi.v[i] >= -contact_tol ? 1 : 0;
    return m;
}

}  // namespace

std::vector<std::uint8_t> contact_set(const ScalarField& phi, double contact_tol) {
    return make_contact(phi, contact_tol);
}

EnvelopeResult envelope_obstacle_1d(const AlphaForm& alpha, const SolverOptions& opt) {
    if (alpha.grid.n != 1)
        throw std::invalid_argument("envelope_obstacle_1d: complex dimension must be 1");
    if (alpha.class_mass < 0.0)
        throw NotPseudoEffective("class mass is negative: not pseudo-effective");

    const double tol = opt.tol_for(1);
    EnvelopeResult res;
    res.method = "obstacle";
    res.class_mass = alpha.class_mass;
    res.contact_tol = opt.contact_tol_factor * tol;

    long total_sweeps = 0;
    ScalarField u;
    if (opt.init != nullptr) {
        u = *opt.init;
        for (auto& x : u.v) x = std::min(0.0, x);
    } else if (opt.cascadic && alpha.grid.N > 32) {
        // coarse-to-fine: solve the same class on dyadic subgrids first
        int N0 = 32;
        ScalarField cu;
        for (int N = N0; N <= alpha.grid.N; N *= 2) {
            TorusGrid g(1, N);
            AlphaForm al(g, alpha.beta, alpha.q_spec);
            ScalarField lvl = cu.v.empty() ? ScalarField(g) : prolong_2x(cu);
            for (auto& x : lvl.v) x = std::min(0.0, x);
            if (N < alpha.grid.N) {
                auto oc = psor_sweeps(lvl.v, al.scalar_density(), N, tol, opt.max_sweeps,
                                      opt.omega, opt.error_stop);
                total_sweeps += oc.sweeps;
                cu = lvl;
            } else {
                u = lvl;
            }
        }
    } else {
        u = ScalarField(alpha.grid);
    }

    auto oc = psor_sweeps(u.v, alpha.scalar_density(), alpha.grid.N, tol, opt.max_sweeps,
                          opt.omega, opt.error_stop);
    res.iterations = total_sweeps + oc.sweeps;
    res.residual = oc.residual;
    res.phi = u;
    res.phi.grid = alpha.grid;
    res.contact = make_contact(res.phi, res.contact_tol);
    return res;
}

// ---------------------------------------------------------------------------
// Disc-average solver.
// ---------------------------------------------------------------------------

namespace {

/// Consolidated lattice taps of the 16-point circle mean at radius 3h in
/// the complex 2-plane spanned by a unit direction zeta (multilinear
/// corner weights merged per offset).  The center tap is removed and the
/// remaining weights and corrections divided by (1 - w_center), so the
/// constraint reads  u(z) <= sum w'_t u(z + p_t) + corr(z).
struct DiscStencil {
    std::vector<std::array<int, 4>> offs;
    std::vector<double> w;        // normalized, center removed
    std::vector<long> flat;       // flat-index deltas (no wrap)
    double quad = 0.0;            // calibrated beta-correction / (1-w0)
    double inv_1mw0 = 1.0;
    std::array<double, 4> zeta{1, 0, 0, 0};
    // q-correction via exact tap application to the trig terms:
    // corr_q(z) = sum_k A_k cos(2 pi <k,z>) + B_k sin(...) (center included,
    // q(z) subtracted, scaled by 1/(1-w0))
    std::vector<std::array<double, 2>> q_coeff;  // per q_spec term
};

DiscStencil build_stencil(const TorusGrid& g, const std::array<double, 4>& zeta,
                          const ConstHermitian& beta, const TrigPoly& q_spec) {
    const int axes = g.axes();
    struct Key {
        std::array<int, 4> c;
        bool operator<(const Key& o) const { return c < o.c; }
    };
    std::map<Key, double> acc;
    for (int p = 0; p < kCirclePoints; ++p) {
        const double th = 2.0 * kPi * (p + 0.5) / kCirclePoints;
        // e^{i th} * zeta, complex multiplication per complex coordinate
        const double ct = std::cos(th), st = std::sin(th);
        double off[4] = {0, 0, 0, 0};
        for (int cplx = 0; cplx < g.n; ++cplx) {
            const double zr = zeta[2 * cplx], zi = zeta[2 * cplx + 1];
            off[2 * cplx] = kRadiusCells * (ct * zr - st * zi);
            off[2 * cplx + 1] = kRadiusCells * (st * zr + ct * zi);
        }
        int base[4] = {0, 0, 0, 0};
        double frac[4] = {0, 0, 0, 0};
        for (int a = 0; a < axes; ++a) {
            base[a] = static_cast<int>(std::floor(off[a]));
            frac[a] = off[a] - base[a];
        }
        const int corners = 1 << axes;
        for (int msk = 0; msk < corners; ++msk) {
            double w = 1.0 / kCirclePoints;
            Key key{{0, 0, 0, 0}};
            for (int a = 0; a < axes; ++a) {
                const int bit = (msk >> a) & 1;
                w *= bit ? frac[a] : 1.0 - frac[a];
                key.c[a] = base[a] + bit;
            }
            if (w != 0.0) acc[key] += w;
        }
    }

    DiscStencil st;
    st.zeta = zeta;
    double w0 = 0.0;
    const Key zero{{0, 0, 0, 0}};
    // quad correction: discrete mean of Q_beta(p) = pi * p* beta p (p as a
    // complex n-vector); exact stationarity for constant-coefficient data.
    double quad = 0.0;
    for (const auto& [key, w] : acc) {
        const double x1 = key.c[0] * g.h, y1 = key.c[1] * g.h;
        const double x2 = key.c[2] * g.h, y2 = key.c[3] * g.h;
        quad += w * kPi * beta.form({x1, y1}, {x2, y2});
        if (key.c == zero.c) {
            w0 = w;
            continue;
        }
        st.offs.push_back(key.c);
        st.w.push_back(w);
    }
    if (w0 >= 1.0) throw std::logic_error("disc stencil degenerate: center weight 1");
    st.inv_1mw0 = 1.0 / (1.0 - w0);
    for (auto& w : st.w) w *= st.inv_1mw0;
    st.quad = quad * st.inv_1mw0;

    // exact tap application to each trig term of q:
    //   sum_t w_t q(z + p_t) - q(z) = Re/Im recombination with factor
    //   kappa_k = sum_t w_t e^{2 pi i <k, p_t>} (full stencil incl. center).
    for (const auto& term : q_spec.terms) {
        double kr = 0.0, ki = 0.0;
        for (const auto& [key, w] : acc) {
            double ph = 0.0;
            for (int a = 0; a < axes; ++a) ph += term.k[a] * key.c[a] * g.h;
            ph *= 2.0 * kPi;
            kr += w * std::cos(ph);
            ki += w * std::sin(ph);
        }
        // sum_t w q(z+p) = (a cos + b sin)(z) * kr + (-a sin + b cos)(z) * ki
        //               = [a kr + b ki] cos + [b kr - a ki] sin
        const double A = term.a * (kr - 1.0) + term.b * ki;   // minus q(z)
        const double B = term.b * (kr - 1.0) - term.a * ki;
        st.q_coeff.push_back({A * st.inv_1mw0, B * st.inv_1mw0});
    }

    // flat deltas for the wrap-free fast path
    st.flat.resize(st.offs.size());
    for (std::size_t t = 0; t < st.offs.size(); ++t) {
        long f = 0;
        for (int a = 0; a < axes; ++a) f = f * g.N + st.offs[t][a];
        st.flat[t] = f;
    }
    return st;
}

/// max |offset| over taps and axes (interior margin for the fast path)
int stencil_reach(const std::vector<DiscStencil>& sts) {
    int r = 0;
    for (const auto& st : sts)
        for (const auto& o : st.offs)
            for (int a = 0; a < 4; ++a) r = std::max(r, std::abs(o[a]));
    return r;
}

struct SweepScratch {
    std::vector<double> snapshot;
    std::vector<double> newval;
    std::vector<std::uint8_t> updated;
};

/// One constraint value at a node: normalized tap sum + corrections.
inline double constraint_value(const DiscStencil& st, const std::vector<double>& u,
                               const TorusGrid& g, const std::array<int, 4>& c,
                               std::size_t idx, bool interior,
                               const double* cosk, const double* sink) {
    double s = 0.0;
    if (interior) {
        const double* base = u.data() + idx;
        for (std::size_t t = 0; t < st.flat.size(); ++t) s += st.w[t] * base[st.flat[t]];
    } else {
        for (std::size_t t = 0; t < st.offs.size(); ++t) {
            std::array<int, 4> cc = c;
            for (int a = 0; a < g.axes(); ++a) cc[a] += st.offs[t][a];
            s += st.w[t] * u[g.index(cc)];
        }
    }
    double corr = st.quad;
    for (std::size_t k = 0; k < st.q_coeff.size(); ++k)
        corr += st.q_coeff[k][0] * cosk[k] + st.q_coeff[k][1] * sink[k];
    return s + corr;
}

/// Constraint along the per-node minimal-eigenvector direction of
/// alpha + dd^c(snapshot), evaluated on the fly (n=2 only).  Returns +inf
/// when the local form is safely positive (constraint slack).
double adaptive_constraint(const TorusGrid& g, const AlphaForm& alpha,
                           const std::vector<double>& snap, const std::vector<double>& u,
                           const std::array<int, 4>& c, std::size_t idx) {
    const int N = g.N;
    const double inv4pi_h2 = static_cast<double>(N) * N / (4.0 * kPi);
    auto at = [&](int a, int b, int cc, int d) -> double {
        return snap[((std::size_t((a) & (N - 1)) * N + ((b) & (N - 1))) * N +
                     ((cc) & (N - 1))) * N + ((d) & (N - 1))];
    };
    const int a0 = c[0], b0 = c[1], c0 = c[2], d0 = c[3];
    const double u0 = snap[idx];
    const double h11 = alpha.density.h11[idx] +
                       (at(a0 + 1, b0, c0, d0) + at(a0 - 1, b0, c0, d0) +
                        at(a0, b0 + 1, c0, d0) + at(a0, b0 - 1, c0, d0) - 4 * u0) * inv4pi_h2;
    const double h22 = alpha.density.h22[idx] +
                       (at(a0, b0, c0 + 1, d0) + at(a0, b0, c0 - 1, d0) +
                        at(a0, b0, c0, d0 + 1) + at(a0, b0, c0, d0 - 1) - 4 * u0) * inv4pi_h2;
    const double q4 = inv4pi_h2 * 0.25;
    const double ux1x2 = at(a0 + 1, b0, c0 + 1, d0) - at(a0 + 1, b0, c0 - 1, d0) -
                         at(a0 - 1, b0, c0 + 1, d0) + at(a0 - 1, b0, c0 - 1, d0);
    const double uy1y2 = at(a0, b0 + 1, c0, d0 + 1) - at(a0, b0 + 1, c0, d0 - 1) -
                         at(a0, b0 - 1, c0, d0 + 1) + at(a0, b0 - 1, c0, d0 - 1);
    const double ux1y2 = at(a0 + 1, b0, c0, d0 + 1) - at(a0 + 1, b0, c0, d0 - 1) -
                         at(a0 - 1, b0, c0, d0 + 1) + at(a0 - 1, b0, c0, d0 - 1);
    const double uy1x2 = at(a0, b0 + 1, c0 + 1, d0) - at(a0, b0 + 1, c0 - 1, d0) -
                         at(a0, b0 - 1, c0 + 1, d0) + at(a0, b0 - 1, c0 - 1, d0);
    const double re12 = alpha.density.re12[idx] + (ux1x2 + uy1y2) * q4;
    const double im12 = alpha.density.im12[idx] + (ux1y2 - uy1x2) * q4;

    const double m = 0.5 * (h11 + h22), dd = 0.5 * (h11 - h22);
    const double rad = std::sqrt(dd * dd + re12 * re12 + im12 * im12);
    const double lmin = m - rad, lmax = m + rad;
    if (lmin > 0.05 * std::max(1.0, std::abs(lmax)))
        return std::numeric_limits<double>::infinity();

    // eigenvector for lmin: (B, lmin - A), fallback to axis vectors
    double v1r = re12, v1i = im12, v2r = lmin - h11, v2i = 0.0;
    double nrm = std::sqrt(v1r * v1r + v1i * v1i + v2r * v2r + v2i * v2i);
    if (nrm < 1e-14) {
        if (h11 <= h22) { v1r = 1.0; v2r = 0.0; }
        else { v1r = 0.0; v2r = 1.0; }
        v1i = v2i = 0.0;
        nrm = 1.0;
    }
    v1r /= nrm; v1i /= nrm; v2r /= nrm; v2i /= nrm;

    // circle mean along the direction, multilinear corners on the fly
    const double* Q = alpha.q.v.data();
    double acc = 0.0, quad = 0.0, w_center = 0.0;
    for (int p = 0; p < kCirclePoints; ++p) {
        const double th = 2.0 * kPi * (p + 0.5) / kCirclePoints;
        const double ct = std::cos(th), st = std::sin(th);
        const double off[4] = {kRadiusCells * (ct * v1r - st * v1i),
                               kRadiusCells * (st * v1r + ct * v1i),
                               kRadiusCells * (ct * v2r - st * v2i),
                               kRadiusCells * (st * v2r + ct * v2i)};
        int base[4];
        double frac[4];
        for (int a = 0; a < 4; ++a) {
            base[a] = static_cast<int>(std::floor(off[a]));
            frac[a] = off[a] - base[a];
        }
        for (int msk = 0; msk < 16; ++msk) {
            double w = 1.0 / kCirclePoints;
            int cc[4];
            bool is_center = true;
            for (int a = 0; a < 4; ++a) {
                const int bit = (msk >> a) & 1;
                w *= bit ? frac[a] : 1.0 - frac[a];
                cc[a] = base[a] + bit;
                if (cc[a] != 0) is_center = false;
            }
            if (w == 0.0) continue;
            const std::size_t j = ((std::size_t((c[0] + cc[0]) & (N - 1)) * N +
                                    ((c[1] + cc[1]) & (N - 1))) * N +
                                   ((c[2] + cc[2]) & (N - 1))) * N + ((c[3] + cc[3]) & (N - 1));
            acc += w * (u[j] + Q[j]);
            const double x1 = cc[0] * g.h, y1 = cc[1] * g.h;
            const double x2 = cc[2] * g.h, y2 = cc[3] * g.h;
            quad += w * kPi * alpha.beta.form({x1, y1}, {x2, y2});
            if (is_center) w_center += w;
        }
    }
    const double qz = Q[idx];
    return (acc + quad - w_center * u[idx] - qz) / (1.0 - w_center);
}

}  // namespace

EnvelopeResult envelope_disc_average(const AlphaForm& alpha, const ScalarField& obstacle,
                                     const SolverOptions& opt) {
    const TorusGrid& g = alpha.grid;
    if (!(obstacle.grid == g))
        throw std::invalid_argument("envelope_disc_average: obstacle grid mismatch");
    const double tol = opt.tol_for(g.n);

    EnvelopeResult res;
    res.method = "disc-average";
    res.class_mass = alpha.class_mass;
    res.contact_tol = opt.contact_tol_factor * tol;

    // direction set
    std::vector<std::array<double, 4>> dirs;
    if (g.n == 1) {
        dirs.push_back({1.0, 0.0, 0.0, 0.0});
    } else {
        dirs = direction_covering(opt.n_dirs);
    }
    std::vector<DiscStencil> sts;
    sts.reserve(dirs.size());
    for (const auto& d : dirs) sts.push_back(build_stencil(g, d, alpha.beta, alpha.q_spec));
    const int reach = stencil_reach(sts) + 1;

    ScalarField u;
    long total_sweeps = 0;
    if (opt.init != nullptr) {
        u = *opt.init;
        for (std::size_t i = 0; i < u.size(); ++i) u.v[i] = std::min(obstacle.v[i], u.v[i]);
    } else if (opt.cascadic && g.N > (g.n == 1 ? 32 : 16)) {
        const int N0 = g.n == 1 ? 32 : 16;
        ScalarField cu;
        for (int N = N0; N < g.N; N *= 2) {
            TorusGrid gl(g.n, N);
            AlphaForm al(gl, alpha.beta, alpha.q_spec);
            // coarse obstacle: restriction by injection of the analytic 0
            // obstacle is exact for the envelope use case; general obstacles
            // are restricted by node injection.
            ScalarField ob(gl);
            if (!(obstacle.min() == 0.0 && obstacle.max() == 0.0)) {
                const int stride = g.N / N;
                for (std::size_t i = 0; i < gl.nodes(); ++i) {
                    auto c = gl.coords(i);
                    ob.v[i] = obstacle.v[g.index({c[0] * stride, c[1] * stride,
                                                  c[2] * stride, c[3] * stride})];
                }
            }
            SolverOptions o2 = opt;
            o2.cascadic = false;
            o2.init = cu.v.empty() ? nullptr : &cu;
            ScalarField prol = cu.v.empty() ? ScalarField() : prolong_2x(cu);
            o2.init = prol.v.empty() ? nullptr : &prol;
            EnvelopeResult lvl = envelope_disc_average(al, ob, o2);
            total_sweeps += lvl.iterations;
            cu = lvl.phi;
        }
        u = prolong_2x(cu);
        for (std::size_t i = 0; i < u.size(); ++i) u.v[i] = std::min(obstacle.v[i], u.v[i]);
    } else {
        u = obstacle;
        for (auto& x : u.v) x = std::min(0.0, x);
    }

    const std::size_t M = g.nodes();
    const int N = g.N;
    SweepScratch scratch;
    scratch.newval.assign(M, 0.0);
    if (opt.adaptive_dir && g.n == 2) scratch.snapshot.assign(M, 0.0);

    // shared per-node trig phases of the q terms
    const auto& terms = alpha.q_spec.terms;
    const std::size_t T = terms.size();

    double prev_upd = 0.0;
    const double omega = opt.omega_disc;
    for (long sweep = 0; sweep < opt.max_sweeps; ++sweep) {
        double sup_upd = 0.0;
        const bool adaptive = opt.adaptive_dir && g.n == 2;
        if (adaptive) scratch.snapshot = u.v;

        for (int color = 0; color < 2; ++color) {
            std::vector<double> blk_max(64, 0.0);
            std::atomic<int> blk_counter{0};
            parallel_blocks(M, [&](std::size_t bb, std::size_t be) {
                const int slot = blk_counter.fetch_add(1) & 63;
                double lm = 0.0;
                double cosk[8], sink[8];
                for (std::size_t idx = bb; idx < be; ++idx) {
                    auto c = g.coords(idx);
                    int parity = 0;
                    for (int a = 0; a < g.axes(); ++a) parity += c[a];
                    if ((parity & 1) != color) continue;
                    bool interior = true;
                    for (int a = 0; a < g.axes(); ++a)
                        if (c[a] < reach || c[a] >= N - reach) { interior = false; break; }
                    auto pos = g.pos(idx);
                    for (std::size_t k = 0; k < T; ++k) {
                        double ph = 0.0;
                        for (int a = 0; a < g.axes(); ++a) ph += terms[k].k[a] * pos[a];
                        ph *= 2.0 * kPi;
                        cosk[k] = std::cos(ph);
                        sink[k] = std::sin(ph);
                    }
                    double best = obstacle.v[idx];
                    for (const auto& st : sts) {
                        const double val =
                            constraint_value(st, u.v, g, c, idx, interior, cosk, sink);
                        if (val < best) best = val;
                    }
                    if (adaptive) {
                        // minimal-eigenvector direction from the snapshot
                        const double va =
                            adaptive_constraint(g, alpha, scratch.snapshot, u.v, c, idx);
                        if (va < best) best = va;
                    }
                    const double old = u.v[idx];
                    double nv = old + omega * (best - old);
                    if (nv > obstacle.v[idx]) nv = obstacle.v[idx];
                    scratch.newval[idx] = nv;
                    const double d = std::abs(nv - old);
                    if (d > lm) lm = d;
                }
                if (lm > blk_max[slot]) blk_max[slot] = lm;
            });
            // commit color
            parallel_blocks(M, [&](std::size_t bb, std::size_t be) {
                for (std::size_t idx = bb; idx < be; ++idx) {
                    auto c = g.coords(idx);
                    int parity = 0;
                    for (int a = 0; a < g.axes(); ++a) parity += c[a];
                    if ((parity & 1) != color) continue;
                    u.v[idx] = scratch.newval[idx];
                }
            });
            for (double lm : blk_max) sup_upd = std::max(sup_upd, lm);
        }

        total_sweeps += 1;
        res.residual = sup_upd;
        bool done;
        if (opt.error_stop && prev_upd > 0.0 && sup_upd < prev_upd) {
            const double rho = std::min(sup_upd / prev_upd, 0.9999);
            done = sup_upd * rho / (1.0 - rho) < tol;
        } else {
            done = sup_upd < tol;
        }
        prev_upd = sup_upd;
        if (done) {
            res.iterations = total_sweeps;
            res.phi = u;
            res.contact = make_contact(u, res.contact_tol);
            return res;
        }
    }
    throw SolverStall("disc-average envelope did not converge", res.residual);
}

}  // namespace torenv
