#pragma once

#include <optional>
#include <vector>

#include "torenv/alpha.hpp"
#include "torenv/field.hpp"
#include "torenv/kernel.hpp"

namespace torenv {

/// Parameters of the regularization family: quadratic compensator K,
/// curvature bound A (0 on the flat torus), maximal radius delta0, the
/// log-spaced radius table, attenuation c and working radius delta.
/// B = 2 A / eps0 is the blow-up exponent of the global Hessian bound;
/// it vanishes identically in the flat setting.
struct RegularizationParams {
    double K = 1.0;
    double A = 0.0;
    double delta0 = 0.25;
    std::vector<double> t_grid;  // strictly increasing, in (0, delta0]
    double c = 1.0;
    double delta = 0.25;
    double eps0 = 1.0;

    double B() const { return eps0 > 0.0 ? 2.0 * A / eps0 : 0.0; }

    /// 32 log-spaced radii from delta0/256 to delta0.
    static RegularizationParams defaults(double K, double c, double delta,
                                         double delta0 = 0.25, int n_radii = 32);
};

/// K estimate for an AlphaForm: sup-node spectral norm of dd^c q plus a
/// unit safety margin.
double estimate_K(const AlphaForm& alpha);

/// rho_t psi: convolution of psi against the kernel at radius t.
/// Whole-field evaluation (FFT path; identical linear operator to the
/// direct quadrature with bilinear sampling).
ScalarField rho(const ScalarField& psi, double t, const SmoothingKernel& kernel);

/// Direct quadrature evaluation at a single node.
double rho_at(const ScalarField& psi, double t, const SmoothingKernel& kernel,
              std::size_t node);

/// Table of t |-> Psi(z,t) + K t^2 over params.t_grid at one node, plus the
/// largest decrease between consecutive radii (0 if nondecreasing).
struct MonotoneTable {
    std::vector<double> t;
    std::vector<double> value;    // rho_t psi (z) + K t^2
    double worst_decrease = 0.0;  // max over k of value[k] - value[k+1]
};
MonotoneTable monotone_transform(const ScalarField& psi, std::size_t node,
                                 const RegularizationParams& params,
                                 const SmoothingKernel& kernel);

/// Slope lambda(z,t) = 1/2 d/dlog t (Psi(z,t)+Kt^2), centered differences
/// on the log-spaced table (one-sided at the ends, `boundary` set).  The
/// factor 1/2 converts the raw log-t slope to the Lelong normalization in
/// which the unit Dirac mass (profile log|z|^2) has slope 1; it is frozen
/// against the radial quadrature oracle in the unit tests.
struct SlopeResult {
    double lambda = 0.0;
    bool boundary = false;
};
SlopeResult lambda_slope(const MonotoneTable& table, double t);

/// Kiselman-Legendre transform
///   psi_{c,delta}(z) = inf_{t in (0,delta]} rho_t psi(z) + Kt^2 - K delta^2
///                      - c log(t/delta),
/// realized as the discrete infimum over t_grid /\ (0, delta].  Returns the
/// transformed field, the argmin radius per node, and a flag marking nodes
/// where the infimum is still decreasing at the smallest radius (log-pole
/// nodes with Lelong number >= c: the true infimum is -infinity there and
/// the value is clamped).
struct KiselmanResult {
    ScalarField field;
    std::vector<double> argmin_t;
    std::vector<std::uint8_t> unbounded;
    std::vector<double> lambda_at_delta;  // slope at t = delta per node
};
KiselmanResult kiselman_transform(const ScalarField& psi,
                                  const RegularizationParams& params,
                                  const SmoothingKernel& kernel);

/// Check of the Hessian floor
///   min eig(alpha + dd^c psi_{c,delta}) >= -(A min(c, lambda(z,delta)) + K delta^2)
/// over non-pole nodes.  worst_violation = max(0, floor - mineig) at the
/// worst node.
struct FloorReport {
    double worst_violation = 0.0;
    std::size_t worst_node = 0;
    double min_eig_at_worst = 0.0;
    double floor_at_worst = 0.0;
    double kdelta2 = 0.0;
};
FloorReport hessian_floor_check(const ScalarField& psi,
                                const RegularizationParams& params,
                                const AlphaForm& alpha,
                                const SmoothingKernel& kernel);

}  // namespace torenv
