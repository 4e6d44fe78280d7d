#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "torenv/alpha.hpp"
#include "torenv/field.hpp"

namespace torenv {

struct SolverOptions {
    double tol = 0.0;            // 0: pick default by dimension (1e-8 / 1e-6)
    long max_sweeps = 200000;
    double omega = 1.8;          // projected-SOR relaxation
    double omega_disc = 1.5;     // disc-average relaxation
    double contact_tol_factor = 10.0;
    bool cascadic = true;        // coarse-to-fine initialization
    int n_dirs = 16;             // direction count for n=2 disc averaging
    bool adaptive_dir = true;    // extra per-node minimal-eigenvector direction
    bool error_stop = true;      // stop on extrapolated remaining error < tol
    const ScalarField* init = nullptr;

    double tol_for(int n) const { return tol > 0.0 ? tol : (n == 1 ? 1e-8 : 1e-6); }
};

struct EnvelopeResult {
    ScalarField phi;
    std::vector<std::uint8_t> contact;
    long iterations = 0;
    double residual = 0.0;  // final sup-norm update
    std::string method;     // "obstacle" | "disc-average"
    double contact_tol = 0.0;
    double class_mass = 0.0;
};

/// n=1 oracle: the envelope sup{psi <= 0, a + Lap psi/(4pi) >= 0} as a
/// linear complementarity problem, solved by projected SOR with red-black
/// sweeps (thread-count independent).  Throws NotPseudoEffective if the
/// class mass is negative, SolverStall on non-convergence.
EnvelopeResult envelope_obstacle_1d(const AlphaForm& alpha, const SolverOptions& opt = {});

/// General method (n = 1 or 2): Perron-type iteration enforcing the
/// sub-mean-value property on complex discs of radius 3h, with the
/// alpha-shift calibrated so constant-coefficient quadratics are exactly
/// stationary.  The fixed point is the largest alpha-psh minorant of the
/// obstacle.
EnvelopeResult envelope_disc_average(const AlphaForm& alpha, const ScalarField& obstacle,
                                     const SolverOptions& opt = {});

/// Contact mask {phi >= -contact_tol}.
std::vector<std::uint8_t> contact_set(const ScalarField& phi, double contact_tol);

/// Seeded admissible candidates: psi = psi0 + s*v with v a low-frequency
/// trigonometric polynomial and s small enough that alpha + dd^c psi stays
/// psd both analytically and discretely, shifted to psi <= 0.
std::vector<ScalarField> candidate_generator(const AlphaForm& alpha, std::uint64_t seed,
                                             int count);
/// The rescaled smooth directions used by the generator (for energy tests).
std::vector<ScalarField> candidate_directions(const AlphaForm& alpha, std::uint64_t seed,
                                              int count);

struct NotPseudoEffective : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SolverStall : std::runtime_error {
    explicit SolverStall(const std::string& what, double residual_)
        : std::runtime_error(what), residual(residual_) {}
    double residual;
};

/// Fibonacci covering of the direction sphere CP^1 (poles included) used
/// by the n=2 and geodesic solvers: entry k is (zeta_w, zeta_z).
std::vector<std::array<double, 4>> direction_covering(int m);

/// Periodic multilinear prolongation of a field to a grid of twice the
/// resolution (used by the cascadic initializers).
ScalarField prolong_2x(const ScalarField& coarse);

}  // namespace torenv
