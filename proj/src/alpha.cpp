#include "torenv/alpha.hpp"

#include <cmath>

namespace torenv {

AlphaForm::AlphaForm(const TorusGrid& g, const ConstHermitian& b, const TrigPoly& qs)
    : grid(g), beta(b), q_spec(qs) {
    if (beta.n != g.n) throw std::invalid_argument("AlphaForm: beta dimension mismatch");
    q = qs.sample(g);
    density = hessian_fd(q);
    add_const(density, beta);
    class_mass = beta.top_density();
    psi0 = q;
    for (auto& x : psi0.v) x = -x;
    eps0 = beta.min_eig();
}

double AlphaForm::discrete_mass_residual() const {
    ScalarField ma = ma_density(density);
    double mass = tree_sum(ma.v) / static_cast<double>(ma.size());
    return std::abs(mass - class_mass);
}

}  // namespace torenv
