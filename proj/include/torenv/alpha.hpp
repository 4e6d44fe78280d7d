#pragma once

#include <optional>

#include "torenv/field.hpp"
#include "torenv/ops.hpp"
#include "torenv/trig.hpp"

namespace torenv {

/// A smooth closed (1,1)-form alpha = beta + dd^c q on the torus, with
/// beta the constant (cohomology) representative and q a periodic
/// potential.  The strict pair (psi0, eps0) certifies bigness:
/// alpha + dd^c psi0 >= eps0 * omega; on the torus psi0 = -q always works
/// with eps0 = min eig(beta), and then alpha + dd^c psi0 = beta exactly
/// (node-wise, since the discrete Hessian is linear).
struct AlphaForm {
    TorusGrid grid;
    ConstHermitian beta;
    TrigPoly q_spec;
    ScalarField q;            // sampled potential
    HermitianField density;   // beta + hessian_fd(q)
    double class_mass = 0.0;  // integral of alpha^n = n! det(beta)
    ScalarField psi0;         // strict potential (default -q)
    double eps0 = 0.0;

    AlphaForm() = default;
    AlphaForm(const TorusGrid& g, const ConstHermitian& b, const TrigPoly& qs);

    /// n=1 only: scalar density a(z) = beta + Lap q / (4 pi).
    const std::vector<double>& scalar_density() const { return density.h11; }

    /// Discrete mass consistency |sum MA(alpha) - class_mass| (exact for
    /// n=1; O(h^2) for n=2 where det couples differences).
    double discrete_mass_residual() const;
};

}  // namespace torenv
