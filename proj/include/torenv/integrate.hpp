#pragma once

#include <optional>

#include "torenv/field.hpp"

namespace torenv {

/// Plain periodic trapezoid integral over the unit-volume torus:
/// node mean times volume.  `weight` multiplies pointwise.
/// Fields with pole markers are rejected here; use integrate_exp for
/// integrands with declared singularities.
double integrate(const ScalarField& u,
                 const ScalarField* weight = nullptr);

/// Integral of exp(E) where E carries isolated log singularities:
/// E ~ kappa_j * log|z - a_j|^2 + smooth near each marked pole a_j
/// (kappa_j = E.poles[j].coeff; the integrand behaves as |z-a_j|^{2 kappa}).
/// Nodes within `refine_radius_cells` of a pole are replaced by adaptive
/// polar quadrature of the local model.  Throws if some kappa_j <= -1
/// (non-integrable; the klt condition of the declared weights fails).
/// n = 1 only (supercanonical module operates on curves).
double integrate_exp(const ScalarField& E, double refine_radius_cells = 4.0);

/// Same pole-aware machinery for a plain (non-exponentiated) integrand
/// behaving like coeff * log|z-a|^2 + smooth near poles (always integrable).
double integrate_log_singular(const ScalarField& u);

}  // namespace torenv
