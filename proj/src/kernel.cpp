#include "torenv/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "torenv/quad.hpp"

namespace torenv {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kRadialNodes = 32;
constexpr int kAngular = 32;
}  // namespace

double chi_unnormalized(double t) {
    if (t >= 1.0) return 0.0;
    const double d = 1.0 - t;
    return std::exp(-1.0 / d) / (d * d);
}

SmoothingKernel::SmoothingKernel(int n_) : n(n_) {
    if (n != 1 && n != 2) throw std::invalid_argument("SmoothingKernel: n must be 1 or 2");
    const auto& rq = gauss_legendre(kRadialNodes);

    // Normalizer: int_{R^{2n}} chi(|x|^2) dx written radially in s = r^2:
    //   n=1:  pi   * int_0^1 chi(s) ds
    //   n=2:  pi^2 * int_0^1 chi(s) s ds
    double I = 0.0;
    for (std::size_t i = 0; i < rq.x.size(); ++i) {
        const double s = rq.x[i];
        I += rq.w[i] * chi_unnormalized(s) * (n == 2 ? s : 1.0);
    }
    const double geom = (n == 1) ? kPi : kPi * kPi;
    // n=1: the substitution v = 1/(1-s) turns int_0^1 chi into e^{-1},
    // so C_1 = e/pi in closed form; the quadrature value of the
    // normalization integral is then the accuracy check.  n=2 has no such
    // form and C_2 is fixed by the quadrature itself.
    C_n = (n == 1) ? std::numbers::e / kPi : 1.0 / (geom * I);
    raw_normalization = geom * C_n * I;

    // Build samples.  Radial abscissae r = sqrt(s); the radial weight in
    // the s variable already carries the full Jacobian.
    if (n == 1) {
        samples.reserve(rq.x.size() * kAngular);
        for (std::size_t i = 0; i < rq.x.size(); ++i) {
            const double s = rq.x[i], r = std::sqrt(s);
            const double wr = rq.w[i] * C_n * chi_unnormalized(s) * kPi;  // pi ds
            for (int a = 0; a < kAngular; ++a) {
                const double th = 2.0 * kPi * (a + 0.5) / kAngular;
                KernelSample ks;
                ks.zeta = {r * std::cos(th), r * std::sin(th), 0.0, 0.0};
                ks.w = wr / kAngular;
                samples.push_back(ks);
            }
        }
    } else {
        // S^3 angles: sigma = (cos p1, sin p1 cos p2, sin p1 sin p2 cos p3,
        // sin p1 sin p2 sin p3), measure sin^2 p1 sin p2 dp1 dp2 dp3 / (2 pi^2).
        samples.reserve(rq.x.size() * kAngular * kAngular * kAngular);
        std::vector<double> p1(kAngular), w1(kAngular), p2(kAngular), w2(kAngular);
        for (int a = 0; a < kAngular; ++a) {
            p1[a] = kPi * (a + 0.5) / kAngular;
            w1[a] = std::sin(p1[a]) * std::sin(p1[a]) * (kPi / kAngular);
            p2[a] = kPi * (a + 0.5) / kAngular;
            w2[a] = std::sin(p2[a]) * (kPi / kAngular);
        }
        for (std::size_t i = 0; i < rq.x.size(); ++i) {
            const double s = rq.x[i], r = std::sqrt(s);
            // pi^2 * chi(s) * s ds, split over the normalized sphere measure
            const double wr = rq.w[i] * C_n * chi_unnormalized(s) * s * kPi * kPi;
            for (int a1 = 0; a1 < kAngular; ++a1) {
                for (int a2 = 0; a2 < kAngular; ++a2) {
                    for (int a3 = 0; a3 < kAngular; ++a3) {
                        const double ph3 = 2.0 * kPi * (a3 + 0.5) / kAngular;
                        KernelSample ks;
                        const double s1 = std::sin(p1[a1]), c1 = std::cos(p1[a1]);
                        const double s2 = std::sin(p2[a2]), c2 = std::cos(p2[a2]);
                        ks.zeta = {r * c1, r * s1 * c2, r * s1 * s2 * std::cos(ph3),
                                   r * s1 * s2 * std::sin(ph3)};
                        // sphere weights normalized: total angular mass 2 pi^2
                        ks.w = wr * w1[a1] * w2[a2] * (2.0 * kPi / kAngular) / (2.0 * kPi * kPi);
                        samples.push_back(ks);
                    }
                }
            }
        }
    }

    // Rescale so quadrature reproduces constants exactly.
    double sum = 0.0;
    for (const auto& ks : samples) sum += ks.w;
    raw_normalization = sum;  // the +-1e-8 normalization check quantity
    for (auto& ks : samples) ks.w /= sum;
}

}  // namespace torenv
