#include "torenv/trig.hpp"

#include <cmath>
#include <numbers>

#include "torenv/parallel.hpp"

namespace torenv {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double TrigPoly::eval(const std::array<double, 4>& x, int axes) const {
    double s = 0.0;
    for (const auto& t : terms) {
        double ph = 0.0;
        for (int a = 0; a < axes; ++a) ph += t.k[a] * x[a];
        ph *= kTwoPi;
        s += t.a * std::cos(ph) + t.b * std::sin(ph);
    }
    return s;
}

double TrigPoly::deriv(const std::array<double, 4>& x, int axes, int axis) const {
    double s = 0.0;
    for (const auto& t : terms) {
        double ph = 0.0;
        for (int a = 0; a < axes; ++a) ph += t.k[a] * x[a];
        ph *= kTwoPi;
        const double f = kTwoPi * t.k[axis];
        s += f * (-t.a * std::sin(ph) + t.b * std::cos(ph));
    }
    return s;
}

double TrigPoly::deriv2(const std::array<double, 4>& x, int axes, int a1, int a2) const {
    double s = 0.0;
    for (const auto& t : terms) {
        double ph = 0.0;
        for (int a = 0; a < axes; ++a) ph += t.k[a] * x[a];
        ph *= kTwoPi;
        const double f = kTwoPi * kTwoPi * t.k[a1] * t.k[a2];
        s += -f * (t.a * std::cos(ph) + t.b * std::sin(ph));
    }
    return s;
}

ScalarField TrigPoly::sample(const TorusGrid& g) const {
    ScalarField out(g);
    parallel_blocks(g.nodes(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) out.v[i] = eval(g.pos(i), g.axes());
    });
    return out;
}

void TrigPoly::exact_hessian(const std::array<double, 4>& x, int n,
                             double& h11, double& h22, double& re12, double& im12) const {
    const int axes = 2 * n;
    const double inv4pi = 1.0 / (4.0 * std::numbers::pi);
    h11 = (deriv2(x, axes, 0, 0) + deriv2(x, axes, 1, 1)) * inv4pi;
    h22 = re12 = im12 = 0.0;
    if (n == 2) {
        h22 = (deriv2(x, axes, 2, 2) + deriv2(x, axes, 3, 3)) * inv4pi;
        re12 = (deriv2(x, axes, 0, 2) + deriv2(x, axes, 1, 3)) * inv4pi;
        im12 = (deriv2(x, axes, 0, 3) - deriv2(x, axes, 1, 2)) * inv4pi;
    }
}

}  // namespace torenv
