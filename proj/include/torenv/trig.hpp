#pragma once

#include <array>
#include <vector>

#include "torenv/field.hpp"
#include "torenv/grid.hpp"

namespace torenv {

/// Real trigonometric polynomial on the torus:
///   sum_k  a_k cos(2 pi <k, x>) + b_k sin(2 pi <k, x>),
/// with integer frequency vectors over the 2n real axes (x1,y1,x2,y2).
/// Derivatives are available in closed form, which makes these the test
/// data of choice for oracle comparisons.
struct TrigPoly {
    struct Term {
        std::array<int, 4> k{0, 0, 0, 0};
        double a = 0.0;  // cosine coefficient
        double b = 0.0;  // sine coefficient
    };
    std::vector<Term> terms;

    TrigPoly() = default;

    void add(std::array<int, 4> k, double a, double b = 0.0) { terms.push_back({k, a, b}); }

    double eval(const std::array<double, 4>& x, int axes) const;
    /// d/dx_axis
    double deriv(const std::array<double, 4>& x, int axes, int axis) const;
    /// d^2/dx_axis1 dx_axis2
    double deriv2(const std::array<double, 4>& x, int axes, int a1, int a2) const;

    ScalarField sample(const TorusGrid& g) const;

    /// Exact dd^c density matrix at a point (analytic second derivatives,
    /// same normalization as hessian_fd).
    void exact_hessian(const std::array<double, 4>& x, int n,
                       double& h11, double& h22, double& re12, double& im12) const;

    bool empty() const { return terms.empty(); }
};

}  // namespace torenv
