#include "gvlab/specfun.hpp"

#include <cfloat>
#include <cmath>
#include <string>
#include <vector>

#include "gvlab/quadrature.hpp"

namespace gvlab {

const GaussLegendre& GaussLegendre::order(int n) {
    static thread_local std::vector<GaussLegendre*> cache(65, nullptr);
    if (n < 1 || n > 64) throw DomainError("unsupported Gauss-Legendre order");
    if (!cache[n]) cache[n] = new GaussLegendre(n);
    return *cache[n];
}

}  // namespace gvlab

namespace gvlab::specfun {

namespace {

// B_{2j} / (2j (2j-1)), Stirling series for log Gamma
const double kLogGammaCoef[] = {
    1.0 / 12,        -1.0 / 360,         1.0 / 1260,
    -1.0 / 1680,     1.0 / 1188,         -691.0 / 360360,
    1.0 / 156,       -3617.0 / 122400,   43867.0 / 244188,
};

// B_{2j} / (2j), Stirling series for digamma
const double kDigammaCoef[] = {
    1.0 / 12,   -1.0 / 120,       1.0 / 252, -1.0 / 240,
    1.0 / 132,  -691.0 / 32760,   1.0 / 12,  -3617.0 / 8160,
};

constexpr double kHalfLog2Pi = 0.918938533204672741780329736406;

Cplx stirling_log_gamma(Cplx z) {
    Cplx res = (z - 0.5) * std::log(z) - z + kHalfLog2Pi;
    Cplx w = 1.0 / z;
    Cplx w2 = w * w;
    Cplx term = w;
    for (double c : kLogGammaCoef) {
        res += c * term;
        term *= w2;
    }
    return res;
}

void check_pole(Cplx z) {
    if (z.imag() == 0 && z.real() <= 0 && z.real() == std::floor(z.real()))
        throw PoleAt("Gamma pole at z = " + std::to_string(z.real()));
}

}  // namespace

Cplx log_gamma(Cplx z) {
    check_pole(z);
    if (z.real() < 0.5) {
        // reflection formula; branch adequate for magnitudes and exp()
        Cplx s = std::sin(M_PI * z);
        return std::log(Cplx(M_PI)) - std::log(s) - log_gamma(1.0 - z);
    }
    Cplx acc = 0;
    while (z.real() < 14) {
        acc -= std::log(z);
        z += 1.0;
    }
    return stirling_log_gamma(z) + acc;
}

Cplx gamma(Cplx z) { return std::exp(log_gamma(z)); }

double gamma_abs_sq(Cplx z) { return std::exp(2.0 * log_gamma(z).real()); }

Cplx digamma(Cplx z) {
    check_pole(z);
    if (z.real() < 0.5) {
        Cplx pz = M_PI * z;
        return digamma(1.0 - z) - M_PI * std::cos(pz) / std::sin(pz);
    }
    Cplx acc = 0;
    while (z.real() < 14) {
        acc -= 1.0 / z;
        z += 1.0;
    }
    Cplx res = std::log(z) - 0.5 / z;
    Cplx w2 = 1.0 / (z * z);
    Cplx term = w2;
    for (double c : kDigammaCoef) {
        res -= c * term;
        term *= w2;
    }
    return res + acc;
}

double beta(double a, double b) {
    if (!(a > 0) || !(b > 0)) throw DomainError("beta requires positive arguments");
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// ---------------------------------------------------------------------------
// K_{iR} via K_{iR}(x) = int_0^inf exp(-x cosh t) cos(R t) dt.
// Plain trapezoid: the integrand extends to an analytic, double-exponentially
// decaying function of t, so the rule converges geometrically once
// h < 2 pi / (R + const).
// ---------------------------------------------------------------------------

BesselKiR::BesselKiR(double R) : r_(std::fabs(R)) {
    h_ = 6.283185307179586476925L / (static_cast<long double>(r_) + 40.0L);
    extend(40.0);
}

void BesselKiR::extend(double cosh_max) const {
    size_t k = cosh_.size();
    while (cosh_.empty() || cosh_.back() < cosh_max) {
        long double t = h_ * static_cast<long double>(k);
        cosh_.push_back(coshl(t));
        cos_.push_back(cosl(static_cast<long double>(r_) * t));
        ++k;
        if (k > 2000000) throw NumericalError("BesselKiR grid blowup");
    }
}

double BesselKiR::operator()(double x, bool* underflow) const {
    if (underflow) *underflow = false;
    if (!(x > 0)) throw DomainError("bessel_k_imag requires x > 0");
    if (x > 11300.0) {
        if (underflow) *underflow = true;
        return 0.0;
    }
    const long double cut = 1.0L + 64.0L / static_cast<long double>(x);
    long double res;
    // For large x the integrand narrows to width 1/sqrt(x); the grid step
    // must shrink accordingly, below the precomputed table's spacing.
    const long double h_need = 0.55L / sqrtl(static_cast<long double>(x));
    if (h_need < h_) {
        const long double h = h_ / ceill(h_ / h_need);
        long double sum = 0.5L * expl(-static_cast<long double>(x));
        for (size_t k = 1;; ++k) {
            long double t = h * static_cast<long double>(k);
            long double ch = coshl(t);
            if (ch > cut) break;
            sum += expl(-static_cast<long double>(x) * ch) *
                   cosl(static_cast<long double>(r_) * t);
        }
        res = sum * h;
    } else {
        if (cosh_.back() < cut) extend(static_cast<double>(cut) * 1.3);
        long double sum = 0.5L * expl(-static_cast<long double>(x));
        for (size_t k = 1; k < cosh_.size(); ++k) {
            if (cosh_[k] > cut) break;
            sum += expl(-static_cast<long double>(x) * cosh_[k]) * cos_[k];
        }
        res = sum * h_;
    }
    double out = static_cast<double>(res);
    if (out == 0.0 || fabsl(res) < static_cast<long double>(DBL_MIN)) {
        if (underflow) *underflow = true;
        return 0.0;
    }
    return out;
}

double bessel_k_imag(double R, double x, bool* underflow) {
    static thread_local double cached_r = -1;
    static thread_local BesselKiR* cached = nullptr;
    if (!cached || cached_r != R) {
        delete cached;
        cached = new BesselKiR(R);
        cached_r = R;
    }
    return (*cached)(x, underflow);
}

// ---------------------------------------------------------------------------
// Whittaker W via the Laplace-type representation
//   W_{k,mu}(y) = e^{-y/2} y^k / Gamma(mu-k+1/2)
//                 * int_0^inf e^{-t} t^{mu-k-1/2} (1+t/y)^{mu+k-1/2} dt
// (Re(mu-k+1/2) > 0), with the double-exponential map t = exp(v - e^{-v}).
// Larger k by the upward recurrence
//   W_{k+1} = (y-2k) W_k - (k-mu-1/2)(k+mu+... see below) W_{k-1}.
// ---------------------------------------------------------------------------

namespace {

Cplx whittaker_w_integral(double kappa, Cplx mu, Cplx y) {
    const Cplx alpha = mu + (0.5 - kappa);  // t-exponent + 1
    const Cplx beta_e = mu + (kappa - 0.5);
    const double h = 0.02 / (1.0 + 0.25 * std::abs(mu.imag()));
    const double vmin = -7.6, vmax = 5.4;
    Cplx sum = 0;
    const Cplx logy = std::log(y);
    for (double v = vmin; v <= vmax; v += h) {
        const double emv = std::exp(-v);
        const double logt = v - emv;
        const double t = std::exp(logt);
        // log(1 + t/y); Re(1 + t/y) > 0 for |arg y| < pi/2, branch safe
        const Cplx l1p = std::log(1.0 + t / y);
        const Cplx ex = alpha * logt - t + beta_e * l1p;
        if (ex.real() < -760.0) {
            if (v > 0) break;
            continue;
        }
        sum += std::exp(ex) * (1.0 + emv);
    }
    sum *= h;
    const Cplx pref = std::exp(-0.5 * y + kappa * logy - log_gamma(alpha));
    return pref * sum;
}

Cplx whittaker_w_cplx(double kappa, Cplx mu, Cplx y) {
    if (!(y.real() > 0) && !(std::abs(y) > 0 && std::abs(std::arg(y)) < 1.45))
        throw DomainError("whittaker_w requires Re y > 0 (or |arg y| < 1.45)");
    if (0.5 - kappa + mu.real() > 0.2 && kappa < 0.3)
        return whittaker_w_integral(kappa, mu, y);
    if (0.5 - (kappa - 2.0) + mu.real() <= 0.2)
        throw PrecisionUnreachable("whittaker_w parameter range unsupported");
    // climb in kappa: W_{k+1}(y) = (y-2k) W_k(y) - (k-mu-1/2)(k+mu-1/2) W_{k-1}(y)
    Cplx wm1 = whittaker_w_cplx(kappa - 2.0, mu, y);
    Cplx w0 = whittaker_w_cplx(kappa - 1.0, mu, y);
    double k = kappa - 1.0;
    return (y - 2.0 * k) * w0 - (k - mu - 0.5) * (k + mu - 0.5) * wm1;
}

}  // namespace

Cplx whittaker_w(double kappa, Cplx mu, double y) {
    if (!(y > 0)) throw DomainError("whittaker_w requires y > 0");
    return whittaker_w_cplx(kappa, mu, Cplx(y, 0));
}

// ---------------------------------------------------------------------------
// Mellin transforms of Whittaker products.
// ---------------------------------------------------------------------------

MellinWhittakerEvaluator::MellinWhittakerEvaluator(double k1, double k2, Cplx mu,
                                                   Cplx nu, double imag_budget,
                                                   double rotation) {
    rotation_ = rotation;
    y_min_ = 1e-12;
    const double cosr = std::cos(rotation);
    const double vmin = std::log(y_min_);
    const double vmax = std::log(95.0 / cosr);
    const double per_unit =
        std::max(2.0, (imag_budget + 2.0 * (std::abs(mu.imag()) + std::abs(nu.imag())) + 6.0) / 5.0);
    const int npanels = static_cast<int>(std::ceil((vmax - vmin) * per_unit));
    const double hp = (vmax - vmin) / npanels;
    const Cplx phase = std::polar(1.0, rotation);
    auto fill = [&](int order, std::vector<double>& logy, std::vector<double>& jac,
                    std::vector<Cplx>& prod) {
        const auto& gl = GaussLegendre::order(order);
        logy.reserve(static_cast<size_t>(npanels) * gl.x.size());
        for (int p = 0; p < npanels; ++p) {
            const double mid = vmin + (p + 0.5) * hp;
            for (size_t i = 0; i < gl.x.size(); ++i) {
                const double v = mid + 0.5 * hp * gl.x[i];
                logy.push_back(v);
                jac.push_back(0.5 * hp * gl.w[i]);
                const Cplx y = std::exp(v) * phase;
                prod.push_back(whittaker_w_cplx(k1, mu, y) * whittaker_w_cplx(k2, nu, y));
            }
        }
    };
    fill(16, logy_, jac_, prod_);
    fill(8, logy_lo_, jac_lo_, prod_lo_);
}

MellinResult MellinWhittakerEvaluator::value(Cplx s) const {
    if (!(s.real() > 0)) throw DomainError("Mellin transform requires Re s > 0");
    const Cplx sm1 = s - 1.0;
    // with y = u e^{i phi}: M(s) = e^{i phi (s-1)} int G(u e^{i phi}) u^{s-2} du
    const Cplx rot = std::exp(Cplx(0, rotation_) * sm1);
    auto sum = [&](const std::vector<double>& logy, const std::vector<double>& jac,
                   const std::vector<Cplx>& prod) {
        Cplx acc = 0;
        for (size_t i = 0; i < logy.size(); ++i)
            acc += jac[i] * prod[i] * std::exp(sm1 * logy[i]);
        return acc * rot;
    };
    const Cplx full = sum(logy_, jac_, prod_);
    const Cplx coarse = sum(logy_lo_, jac_lo_, prod_lo_);
    // tail below y_min: |integrand| ~ |G(y)/y| * y^{Re s}
    const double gslope = std::abs(prod_.front()) / y_min_;
    const double tail = gslope * std::pow(y_min_, s.real()) / s.real();
    MellinResult r;
    r.value = full;
    r.error = std::abs(full - coarse) + tail;
    return r;
}

MellinResult mellin_whittaker_pair(double k, Cplx mu, Cplx nu, Cplx s) {
    MellinWhittakerEvaluator ev(k, k, mu, nu, std::abs(s.imag()) + 2.0);
    return ev.value(s);
}

}  // namespace gvlab::specfun
