#pragma once

#include "torenv/field.hpp"
#include "torenv/grid.hpp"

namespace torenv {

/// Discrete dd^c u in the density normalization (see HermitianField).
/// Central second differences, O(h^2).  Nodes within 2 cells of a pole
/// node are flagged `skip` and left unevaluated.
HermitianField hessian_fd(const ScalarField& u);

/// Density of the top wedge power F^n against Lebesgue measure:
/// n! * det(coeff).  Indefinite nodes return the signed determinant.
ScalarField ma_density(const HermitianField& F);

/// Smallest eigenvalue per node (closed form for n <= 2).
ScalarField min_eigenvalue(const HermitianField& F);

/// Trace of the coefficient matrix per node (the dd^c-Laplacian density).
ScalarField trace_density(const HermitianField& F);

/// Deterministic pairwise tree sum (order independent of threading).
double tree_sum(const double* x, std::size_t n);
double tree_sum(const std::vector<double>& x);

/// Shift beta into F node-wise: F += beta.
void add_const(HermitianField& F, const ConstHermitian& beta);

}  // namespace torenv
