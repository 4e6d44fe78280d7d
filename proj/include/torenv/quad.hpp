#pragma once

#include <cstddef>
#include <vector>

namespace torenv {

/// Gauss-Legendre rule mapped to [0,1]: sum w_i f(x_i) ~ int_0^1 f.
struct QuadRule {
    std::vector<double> x, w;
};

/// Cached rule with `n` nodes (computed once by Newton iteration on P_n).
const QuadRule& gauss_legendre(int n);

}  // namespace torenv
