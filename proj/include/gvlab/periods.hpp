#ifndef GVLAB_PERIODS_HPP
#define GVLAB_PERIODS_HPP

#include <complex>
#include <functional>
#include <vector>

#include "gvlab/cache.hpp"
#include "gvlab/modforms.hpp"
#include "gvlab/qforms.hpp"

namespace gvlab::periods {

using Cplx = std::complex<double>;
using qforms::QuadForm;

// Either a holomorphic eigenform or a Maass form, not owned.
struct Form {
    const modforms::HolomorphicEigenform* hol = nullptr;
    const modforms::MaassForm* maass = nullptr;

    Form() = default;
    Form(const modforms::HolomorphicEigenform& f) : hol(&f) {}
    Form(const modforms::MaassForm& m) : maass(&m) {}
    bool is_holomorphic() const { return hol != nullptr; }
    std::string id() const { return hol ? hol->id() : maass->id(); }
};

struct PeriodValue {
    Cplx value;
    double err = 0;
};

// One arc piece of a trip around the rho-cycle: the geodesic of `q`'s root
// circle from flow time t_end (< 0) up to the apex at t = 0.
struct TripPiece {
    QuadForm q;
    double t_end = 0;
};

// Decompose one trip around the rho-cycle of the (reduced, primitive) class
// of q into fundamental-domain-sized arcs; piece lengths sum to the
// primitive geodesic length 2 log eps.
std::vector<TripPiece> trip_pieces(const QuadForm& q);

// Number of trips m with eps_{d_ambient} = eps_{d0}^m; requires
// d_ambient / d0 to be a perfect square.
int64_t wraps_between(int64_t d0, int64_t d_ambient);

// int_C F over the closed geodesic of q traversed with the ambient Pell
// unit; holomorphic integrand f(z) q(1,-z)^{k-1} dz / disc^{(k-1)/2}, Maass
// integrand phi ds.
PeriodValue period_holomorphic(const modforms::HolomorphicEigenform& f, const QuadForm& q,
                               int64_t d_ambient, double node_scale = 1.0);
PeriodValue period_maass(const modforms::MaassForm& phi, const QuadForm& q,
                         int64_t d_ambient, double node_scale = 1.0);
PeriodValue period(const Form& F, const QuadForm& q, int64_t d_ambient,
                   double node_scale = 1.0);

// mu_d(F) = sum of periods over the H(d) classes of discriminant d.
cache::Record mu_for_disc(const Form& F, int64_t d, double node_scale = 1.0);

struct BatchResult {
    size_t computed = 0;
    size_t cached = 0;
    std::vector<std::pair<int64_t, std::string>> failures;  // (d, reason)
};

// Fill the cache with mu_d for every valid discriminant in [d_lo, d_hi];
// cached records are not recomputed. Per-discriminant work items run on
// `threads` workers; cache writes are serialized.
BatchResult mu_batch(const Form& F, int64_t d_lo, int64_t d_hi, cache::PeriodCache& cache,
                     int threads = 1, double node_scale = 1.0,
                     const std::function<void(size_t, size_t)>& progress = {});

}  // namespace gvlab::periods

#endif
