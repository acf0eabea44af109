#include "gvlab/modforms.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gvlab/geodesics.hpp"
#include "gvlab/quadrature.hpp"

namespace gvlab::modforms {

namespace {

int128 checked_mul128(int128 x, int128 y) {
    int128 r;
    if (__builtin_mul_overflow(x, y, &r)) throw OverflowError("int128 mul overflow");
    return r;
}

int128 checked_add128(int128 x, int128 y) {
    int128 r;
    if (__builtin_add_overflow(x, y, &r)) throw OverflowError("int128 add overflow");
    return r;
}

// Delta = q prod (1-q^n)^24 = q * P^8 with P = sum_j (-1)^j (2j+1) q^{j(j+1)/2}
// (the eta^3 series); seven sparse multiplications.
std::vector<int128> delta_coeffs(int64_t n) {
    std::vector<std::pair<int64_t, int128>> sparse;
    for (int64_t j = 0;; ++j) {
        int64_t e = j * (j + 1) / 2;
        if (e >= n) break;
        sparse.emplace_back(e, (j % 2 == 0 ? 1 : -1) * static_cast<int128>(2 * j + 1));
    }
    std::vector<int128> cur(static_cast<size_t>(n), 0);
    cur[0] = 1;
    std::vector<int128> next(static_cast<size_t>(n));
    for (int rep = 0; rep < 8; ++rep) {
        std::fill(next.begin(), next.end(), int128(0));
        for (const auto& [e, v] : sparse)
            for (int64_t m = 0; m + e < n; ++m)
                if (cur[m] != 0)
                    next[m + e] = checked_add128(next[m + e], checked_mul128(cur[m], v));
        cur.swap(next);
    }
    return cur;  // cur[m] = a_Delta(m+1)
}

// E_k = 1 + c_k sum sigma_{k-1}(n) q^n for k in {4,6,8,10,14}
std::vector<int128> eisenstein_coeffs(int k, int64_t n) {
    int64_t c;
    switch (k) {
        case 4: c = 240; break;
        case 6: c = -504; break;
        case 8: c = 480; break;
        case 10: c = -264; break;
        case 14: c = -24; break;
        default: throw UnsupportedWeight("no Eisenstein table for k=" + std::to_string(k));
    }
    std::vector<int128> e(static_cast<size_t>(n), 0);
    e[0] = 1;
    for (int64_t d = 1; d < n; ++d) {
        int128 p = 1;
        for (int i = 0; i < k - 1; ++i) p = checked_mul128(p, d);
        for (int64_t m = d; m < n; m += d) e[m] = checked_add128(e[m], checked_mul128(c, p));
    }
    return e;
}

uint64_t fnv1a(const void* data, size_t len, uint64_t h = 1469598103934665603ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

Cplx powi(Cplx base, int e) {
    Cplx r = 1.0;
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

}  // namespace

std::string HolomorphicEigenform::id() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "hol%d.%012llx", weight,
                  static_cast<unsigned long long>(content_hash & 0xffffffffffffull));
    return buf;
}

HolomorphicEigenform holomorphic_eigenform(int weight, int64_t n_coeffs) {
    if (n_coeffs < 1) throw DomainError("need at least one coefficient");
    const bool supported = weight == 12 || weight == 16 || weight == 18 ||
                           weight == 20 || weight == 22 || weight == 26;
    if (!supported)
        throw UnsupportedWeight("weight " + std::to_string(weight) +
                                " is not a one-dimensional cusp space");
    HolomorphicEigenform f;
    f.weight = weight;
    f.k_half = weight / 2;
    auto delta = delta_coeffs(n_coeffs);
    if (weight == 12) {
        f.coeffs = std::move(delta);
    } else {
        auto eis = eisenstein_coeffs(weight - 12, n_coeffs);
        f.coeffs.assign(static_cast<size_t>(n_coeffs), 0);
        for (int64_t i = 0; i < n_coeffs; ++i) {
            if (delta[i] == 0) continue;
            for (int64_t j = 0; i + j < n_coeffs; ++j)
                if (eis[j] != 0)
                    f.coeffs[i + j] =
                        checked_add128(f.coeffs[i + j], checked_mul128(delta[i], eis[j]));
        }
    }
    f.coeffs_d.resize(f.coeffs.size());
    for (size_t i = 0; i < f.coeffs.size(); ++i)
        f.coeffs_d[i] = static_cast<double>(f.coeffs[i]);
    f.content_hash = fnv1a(f.coeffs.data(), f.coeffs.size() * sizeof(int128),
                           fnv1a(&weight, sizeof weight));
    return f;
}

Cplx eval_holomorphic(const HolomorphicEigenform& f, Cplx z, double tol) {
    auto red = geodesics::reduce_to_fundamental_domain(z);
    const Cplx j = static_cast<double>(red.g.m10) * z + static_cast<double>(red.g.m11);
    const Cplx q = std::exp(Cplx(0, 2 * M_PI) * red.z);
    const double aq = std::abs(q);
    Cplx qn = 1.0;
    Cplx sum = 0.0;
    const double whalf = f.weight / 2.0;
    double qpow = 1.0;
    for (int64_t n = 1;; ++n) {
        if (n > f.size())
            throw PrecisionUnreachable("holomorphic evaluation needs more coefficients");
        qn *= q;
        qpow *= aq;
        sum += f.a(n) * qn;
        // Deligne tail: |a(m)| <= d(m) m^{(w-1)/2} <= 2 m^{w/2}; the absolute
        // floor covers points so high in the cusp that q underflows
        double next = 2.0 * std::pow(static_cast<double>(n + 1), whalf) * qpow * aq;
        if (next < tol * (std::abs(sum) + aq) + 1e-300 && n >= 3) break;
    }
    // f(g z) = j(g,z)^w f(z) with g z in the fundamental domain
    return sum * powi(1.0 / j, f.weight);
}

std::string MaassForm::id() const {
    char buf[80];
    std::snprintf(buf, sizeof buf, "maass%.6f%c.%012llx", spectral_R, even ? 'e' : 'o',
                  static_cast<unsigned long long>(content_hash & 0xffffffffffffull));
    return buf;
}

MaassForm load_maass_form(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open Maass data file: " + path);
    MaassForm phi;
    phi.provenance = path;
    phi.norm = std::nan("");
    bool have_r = false, have_parity = false, have_norm = false;
    std::vector<std::pair<int64_t, double>> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        auto where = [&] { return path + ":" + std::to_string(lineno); };
        if (tok == "R") {
            if (!(ls >> phi.spectral_R) || !(phi.spectral_R > 0))
                throw ParseError("bad R line at " + where());
            have_r = true;
        } else if (tok == "parity") {
            std::string p;
            if (!(ls >> p) || (p != "even" && p != "odd"))
                throw ParseError("bad parity line at " + where());
            phi.even = (p == "even");
            have_parity = true;
        } else if (tok == "norm") {
            std::string v;
            if (!(ls >> v)) throw ParseError("bad norm line at " + where());
            if (v != "unknown") {
                try {
                    phi.norm = std::stod(v);
                } catch (...) {
                    throw ParseError("bad norm value at " + where());
                }
            }
            have_norm = true;
        } else {
            int64_t n;
            double an;
            try {
                n = std::stoll(tok);
            } catch (...) {
                throw ParseError("unrecognized line at " + where());
            }
            if (!(ls >> an)) throw ParseError("missing coefficient at " + where());
            entries.emplace_back(n, an);
        }
    }
    if (!have_r) throw ParseError(path + ": missing R header");
    if (!have_parity) throw ParseError(path + ": missing parity header");
    if (!have_norm) throw ParseError(path + ": missing norm header");
    if (entries.empty()) throw ParseError(path + ": no coefficients");
    phi.coeffs.assign(entries.size(), 0.0);
    for (size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].first != static_cast<int64_t>(i + 1))
            throw ParseError(path + ": coefficients must run n = 1..N in order");
        phi.coeffs[i] = entries[i].second;
    }
    if (phi.coeffs[0] == 0) throw ValidationError(path + ": a(1) = 0");
    if (phi.coeffs[0] != 1.0)
        for (auto& c : phi.coeffs) c /= phi.coeffs[0];
    // data quality: approximate Hecke relation at stored prime squares
    for (int64_t p : {2, 3, 5}) {
        if (p * p > phi.size()) break;
        double resid = std::abs(phi.a(p * p) - (phi.a(p) * phi.a(p) - 1.0));
        if (resid > 2e-2)
            throw ValidationError(path + ": Hecke relation a(p^2)=a(p)^2-1 violated at p=" +
                                  std::to_string(p) + " (residual " + std::to_string(resid) + ")");
    }
    phi.content_hash =
        fnv1a(phi.coeffs.data(), phi.coeffs.size() * sizeof(double),
              fnv1a(&phi.spectral_R, sizeof phi.spectral_R, phi.even ? 2u : 3u));
    phi.bessel = std::make_shared<specfun::BesselKiR>(phi.spectral_R);
    return phi;
}

double eval_maass(const MaassForm& phi, Cplx z, double tol) {
    auto red = geodesics::reduce_to_fundamental_domain(z);
    const double x = red.z.real(), y = red.z.imag();
    const auto& K = *phi.bessel;
    const double sy = std::sqrt(y);
    double sum = 0.0;
    double peak = 0.0;
    for (int64_t n = 1;; ++n) {
        if (n > phi.size())
            throw PrecisionUnreachable("maass evaluation needs more coefficients");
        const double arg = 2 * M_PI * n * y;
        bool uf = false;
        const double kv = K(arg, &uf);
        const double cs = phi.even ? std::cos(2 * M_PI * n * x) : std::sin(2 * M_PI * n * x);
        const double term = 2.0 * phi.a(n) * sy * kv * cs;
        sum += term;
        const double tsz = std::abs(2.0 * phi.a(n) * sy * kv);
        peak = std::max(peak, tsz);
        // past the Bessel turning point terms decay like e^{-arg}
        if ((uf || tsz < tol * (peak + 1e-300)) && arg > phi.spectral_R + 4.0) break;
    }
    return sum;
}

namespace {

template <typename Eval>
double fd_norm(Eval&& f2, double y_max) {
    // integral over |x| <= 1/2, y >= sqrt(1-x^2), split at the arc; the
    // integrand is x-symmetric for real Fourier expansions
    const auto& glx = GaussLegendre::order(32);
    const auto& gly = GaussLegendre::order(16);
    double total = 0;
    for (size_t ix = 0; ix < glx.x.size(); ++ix) {
        const double x = 0.25 + 0.25 * glx.x[ix];  // [0, 1/2]
        const double y0 = std::sqrt(1.0 - x * x);
        double inner = 0;
        double lo = y0;
        while (lo < y_max) {
            double hi = std::min(y_max, lo < 4 ? lo + 0.5 : lo + 1.5);
            inner += gly.integrate([&](double y) { return f2(x, y); }, lo, hi);
            lo = hi;
        }
        total += glx.w[ix] * 0.25 * inner;
    }
    return 2.0 * total;  // x-symmetry
}

}  // namespace

double petersson_norm(const HolomorphicEigenform& f, double y_max) {
    auto f2 = [&](double x, double y) {
        Cplx q = std::exp(Cplx(0, 2 * M_PI) * Cplx(x, y));
        Cplx qn = 1.0, sum = 0.0;
        double decay = std::exp(-2 * M_PI * y);
        double qp = decay;
        for (int64_t n = 1; n <= f.size(); ++n) {
            qn *= q;
            sum += f.a(n) * qn;
            qp *= decay;
            if (2.0 * std::pow(n + 1.0, f.weight / 2.0) * qp < 1e-16 * std::abs(sum)) break;
        }
        return std::norm(sum) * std::pow(y, f.weight - 2);
    };
    double v = fd_norm(f2, y_max);
    if (!(v > 0)) throw PrecisionUnreachable("petersson norm quadrature failed");
    return v;
}

double petersson_norm(const MaassForm& phi, double y_max) {
    const auto& K = *phi.bessel;
    auto f2 = [&](double x, double y) {
        double sum = 0;
        double sy = std::sqrt(y);
        for (int64_t n = 1; n <= phi.size(); ++n) {
            double arg = 2 * M_PI * n * y;
            bool uf = false;
            double kv = K(arg, &uf);
            double cs = phi.even ? std::cos(2 * M_PI * n * x) : std::sin(2 * M_PI * n * x);
            sum += 2.0 * phi.a(n) * sy * kv * cs;
            if (uf || (arg > phi.spectral_R + 6 && std::abs(kv) * sy * (n + 1) < 1e-15))
                break;
        }
        return sum * sum / (y * y);
    };
    double v = fd_norm(f2, y_max);
    if (!(v > 0)) throw PrecisionUnreachable("petersson norm quadrature failed");
    return v;
}

}  // namespace gvlab::modforms
