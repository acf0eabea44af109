#ifndef GVLAB_QUADRATURE_HPP
#define GVLAB_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <vector>

namespace gvlab {

// Gauss-Legendre nodes/weights on [-1,1], computed once per order by Newton
// iteration on the Legendre polynomial.
struct GaussLegendre {
    std::vector<double> x;
    std::vector<double> w;

    explicit GaussLegendre(int n) : x(n), w(n) {
        for (int i = 0; i < n; ++i) {
            double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double p0 = 0, p1 = 0;
            for (int it = 0; it < 100; ++it) {
                p0 = 1.0;
                p1 = 0.0;
                for (int j = 0; j < n; ++j) {
                    double p2 = p1;
                    p1 = p0;
                    p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
                }
                double dp = n * (t * p0 - p1) / (t * t - 1.0);
                double dt = p0 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-15) break;
            }
            p0 = 1.0;
            p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
            }
            double dp = n * (t * p0 - p1) / (t * t - 1.0);
            x[i] = t;
            w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }

    static const GaussLegendre& order(int n);

    // integral of f over [a,b]
    template <typename F>
    auto integrate(F&& f, double a, double b) const -> decltype(f(0.0)) {
        decltype(f(0.0)) acc{};
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (size_t i = 0; i < x.size(); ++i) acc += w[i] * f(mid + half * x[i]);
        return acc * half;
    }

    // composite over [a,b] split into npanels equal panels
    template <typename F>
    auto panels(F&& f, double a, double b, int npanels) const -> decltype(f(0.0)) {
        decltype(f(0.0)) acc{};
        double h = (b - a) / npanels;
        for (int p = 0; p < npanels; ++p) acc += integrate(f, a + p * h, a + (p + 1) * h);
        return acc;
    }
};

}  // namespace gvlab

#endif
