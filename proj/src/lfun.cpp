#include "gvlab/lfun.hpp"

#include <cmath>

#include "gvlab/qforms.hpp"
#include "gvlab/quadrature.hpp"

namespace gvlab::lfun {

int kronecker_symbol(int64_t d, int64_t n) {
    if (d % 4 != 0 && ((d % 4) + 4) % 4 != 1)
        throw InvalidDiscriminant("kronecker character needs d = 0,1 mod 4");
    int64_t a = d;
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if (a % 2 == 0 && n % 2 == 0) return 0;
    int k = 1;
    int v = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++v;
    }
    if (v % 2 == 1) {
        int64_t am8 = ((a % 8) + 8) % 8;
        if (am8 == 3 || am8 == 5) k = -k;
    }
    if (n < 0) {
        n = -n;
        if (a < 0) k = -k;
    }
    while (true) {
        a = ((a % n) + n) % n;
        if (a == 0) return n == 1 ? k : 0;
        v = 0;
        while (a % 2 == 0) {
            a /= 2;
            ++v;
        }
        if (v % 2 == 1) {
            int64_t nm8 = n % 8;
            if (nm8 == 3 || nm8 == 5) k = -k;
        }
        if (a % 4 == 3 && n % 4 == 3) k = -k;
        int64_t t = a;
        a = n;
        n = t;
    }
}

namespace {

// Gamma(k, x) for integer k >= 1: (k-1)! e^{-x} sum_{j<k} x^j/j!
double upper_gamma_int(int k, double x) {
    if (x > 720.0) return 0.0;
    double term = 1.0, sum = 1.0;
    for (int j = 1; j < k; ++j) {
        term *= x / j;
        sum += term;
    }
    double fact = 1.0;
    for (int j = 2; j < k; ++j) fact *= j;
    return fact * std::exp(-x) * sum;
}

// Lambda_raw(m/2) = int_0^infty f_chi(iy) y^{m/2-1} dy via the split at t/d;
// the dual sum carries the root number (-1)^{m/2}.
double lambda_raw(const modforms::HolomorphicEigenform& f, int64_t d, double t,
                  double* tail_bound) {
    const int m = f.weight;
    const int half = m / 2;
    const double eps = (half % 2 == 0) ? 1.0 : -1.0;
    const double dd = static_cast<double>(d);
    double acc = 0;
    double tail = 1.0;
    int64_t n = 1;
    for (; n <= f.size(); ++n) {
        const int chi = d == 1 ? 1 : kronecker_symbol(d, n);
        const double x1 = 2 * M_PI * n * t / dd;
        const double x2 = 2 * M_PI * n / (dd * t);
        if (chi != 0) {
            const double g1 = upper_gamma_int(half, x1);
            const double g2 = upper_gamma_int(half, x2);
            const double p = std::pow(2 * M_PI * n, -half);
            acc += f.a(n) * chi * p * (g1 + eps * g2);
        }
        // Deligne: |a(n)| <= 2 n^{m/2}; Gamma(k,x) <= 2 x^{k-1} e^{-x} for x >= k
        const double xm = std::min(x1, x2);
        if (xm > half + 4) {
            tail = 4.0 * std::pow(n + 1.0, half) * std::pow(2 * M_PI * (n + 1.0), -half) *
                   2.0 * std::pow(xm, half - 1) * std::exp(-xm) * 4.0;
            if (tail < 1e-17 * (std::abs(acc) + 1e-30)) {
                ++n;
                break;
            }
        }
    }
    if (n > f.size() && tail >= 1e-12 * (std::abs(acc) + 1e-30))
        throw InsufficientCoefficients(
            "AFE needs more coefficients: have " + std::to_string(f.size()) +
            " for d=" + std::to_string(d) + ", weight " + std::to_string(f.weight));
    if (tail_bound) *tail_bound = tail;
    return acc;
}

CentralValue holomorphic_central(const modforms::HolomorphicEigenform& f, int64_t d,
                                 double t1, double t2) {
    const int m = f.weight;
    const int half = m / 2;
    CentralValue cv;
    if (half % 2 == 1) {
        cv.value = 0.0;
        cv.error_estimate = 0.0;
        cv.method = "root number -1, exact zero";
        return cv;
    }
    if (!(t1 > 0) || !(t2 > 0)) throw DomainError("cutoffs must be positive");
    double tail1 = 0, tail2 = 0;
    const double raw1 = lambda_raw(f, d, t1, &tail1);
    const double raw2 = lambda_raw(f, d, t2, &tail2);
    double fact = 1.0;
    for (int j = 2; j < half; ++j) fact *= j;
    const double scale = std::pow(2 * M_PI, half) / fact;
    cv.value = scale * raw1;
    cv.cutoff1 = t1;
    cv.cutoff2 = t2;
    cv.error_estimate =
        scale * (std::abs(raw1 - raw2) + tail1 + tail2) + 1e-14 * std::abs(cv.value);
    cv.method = d == 1 ? "incomplete-gamma AFE, level 1"
                       : "incomplete-gamma AFE, conductor d^2, d=" + std::to_string(d);
    if (cv.value < -cv.error_estimate) cv.method += " [WARNING: negative beyond error bar]";
    return cv;
}

}  // namespace

CentralValue central_value_holomorphic(const modforms::HolomorphicEigenform& f, double t1,
                                       double t2) {
    return holomorphic_central(f, 1, t1, t2);
}

CentralValue central_value_twisted(const modforms::HolomorphicEigenform& f, int64_t d,
                                   double t1, double t2) {
    if (d <= 0) throw NotFundamental("twist needs a positive discriminant");
    auto info = qforms::is_discriminant(d);
    if (d != 1 && (!info.valid || !info.fundamental))
        throw NotFundamental(std::to_string(d) + " is not a fundamental discriminant");
    return holomorphic_central(f, d, t1, t2);
}

CentralValue completed_central_maass(const modforms::MaassForm& phi) {
    CentralValue cv;
    if (!phi.even) {
        cv.value = 0.0;
        cv.method = "odd form, sign -1, exact zero";
        return cv;
    }
    const auto& K = *phi.bessel;
    auto series = [&](double y) {
        double sy = std::sqrt(y), sum = 0;
        for (int64_t n = 1; n <= phi.size(); ++n) {
            bool uf = false;
            double kv = K(2 * M_PI * n * y, &uf);
            sum += 2.0 * phi.a(n) * sy * kv;
            if (uf || (2 * M_PI * n * y > phi.spectral_R + 6 &&
                       std::abs(kv) * (n + 1) < 1e-18))
                break;
        }
        return sum;
    };
    const auto& gl = GaussLegendre::order(24);
    auto lam = [&](double t) {
        // 2 int_t^inf phi(iy) dy/y + 2 int_{1/t}^inf phi(iy) dy/y
        double acc = 0;
        for (double lo : {t, 1.0 / t}) {
            double a = lo;
            while (a < lo + 9.0) {
                double b = a + 0.75;
                acc += 2.0 * gl.integrate([&](double y) { return series(y) / y; }, a, b);
                a = b;
            }
        }
        return acc;
    };
    const double t1 = 1.0, t2 = 1.17;
    const double v1 = lam(t1), v2 = lam(t2);
    cv.value = v1;
    cv.cutoff1 = t1;
    cv.cutoff2 = t2;
    cv.error_estimate = std::abs(v1 - v2) + 1e-12 * std::abs(v1) + 1e-15;
    cv.method = "completed Lambda(1/2), split integral AFE";
    return cv;
}

}  // namespace gvlab::lfun
