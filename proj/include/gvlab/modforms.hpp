#ifndef GVLAB_MODFORMS_HPP
#define GVLAB_MODFORMS_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gvlab/errors.hpp"
#include "gvlab/specfun.hpp"

namespace gvlab::modforms {

using Cplx = std::complex<double>;
using int128 = __int128;

// Normalized Hecke eigenform for the one-dimensional cusp spaces,
// weights 12, 16, 18, 20, 22, 26. Exact integer q-expansion; doubles mirror
// for numerics.
struct HolomorphicEigenform {
    int weight = 0;             // w = 2k
    int k_half = 0;             // w/2
    std::vector<int128> coeffs; // a(1..N)
    std::vector<double> coeffs_d;
    uint64_t content_hash = 0;

    int64_t size() const { return static_cast<int64_t>(coeffs.size()); }
    double a(int64_t n) const { return coeffs_d[static_cast<size_t>(n - 1)]; }
    std::string id() const;
};

HolomorphicEigenform holomorphic_eigenform(int weight, int64_t n_coeffs);

// f at z via fundamental-domain pullback and the automorphy factor;
// truncation by the Deligne bound. Throws PrecisionUnreachable when the
// stored expansion cannot reach tol.
Cplx eval_holomorphic(const HolomorphicEigenform& f, Cplx z, double tol = 1e-12);

struct MaassForm {
    double spectral_R = 0;  // Laplace eigenvalue 1/4 + R^2
    bool even = true;
    std::vector<double> coeffs;  // a(1..N), a(1) = 1
    double norm = 0;             // <phi,phi>, NaN when unknown
    std::string provenance;
    uint64_t content_hash = 0;
    std::shared_ptr<const specfun::BesselKiR> bessel;  // fixed grid, shareable

    int64_t size() const { return static_cast<int64_t>(coeffs.size()); }
    double a(int64_t n) const { return coeffs[static_cast<size_t>(n - 1)]; }
    std::string id() const;
};

// Plain-text format: `R <decimal>`, `parity even|odd`, `norm <decimal|unknown>`,
// then `<n> <a(n)>` lines for n = 1..N; '#' starts a comment.
MaassForm load_maass_form(const std::string& path);

// phi(z) = 2 sqrt(y) sum a(n) K_{iR}(2 pi n y) cs(2 pi n x) after pullback.
double eval_maass(const MaassForm& phi, Cplx z, double tol = 1e-10);

// Petersson norms over the standard fundamental domain truncated at y_max;
// integrand |f|^2 y^w (holomorphic, weight w) resp. |phi|^2 (Maass), measure
// dx dy / y^2.
double petersson_norm(const HolomorphicEigenform& f, double y_max = 14.0);
double petersson_norm(const MaassForm& phi, double y_max = 14.0);

}  // namespace gvlab::modforms

#endif
