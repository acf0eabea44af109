#ifndef GVLAB_LFUN_HPP
#define GVLAB_LFUN_HPP

#include <cstdint>
#include <string>

#include "gvlab/modforms.hpp"

namespace gvlab::lfun {

// Kronecker character chi_d(n) for a discriminant d (d = 0,1 mod 4).
int kronecker_symbol(int64_t d, int64_t n);

struct CentralValue {
    double value = 0;
    double error_estimate = 0;
    std::string method;
    double cutoff1 = 0, cutoff2 = 0;
};

// L(1/2, f) in the analytic normalization (= classical L(m/2)), by the exact
// incomplete-Gamma expansion of the completed L-function, validated by two
// split points (overridable; the expansion is exact, so any choice must agree
// within the reported error bar). Exact 0 short-circuit when the root number
// is -1.
CentralValue central_value_holomorphic(const modforms::HolomorphicEigenform& f,
                                       double t1 = 1.0, double t2 = 1.22);

// L(1/2, f x chi_d) for positive fundamental d, conductor d^2.
CentralValue central_value_twisted(const modforms::HolomorphicEigenform& f, int64_t d,
                                   double t1 = 1.0, double t2 = 1.22);

// Completed Lambda(1/2, phi) = pi^{-1/2} |Gamma(1/4 + iR/2)|^2 L(1/2, phi)
// for an even Maass form; odd forms short-circuit to 0.
CentralValue completed_central_maass(const modforms::MaassForm& phi);

}  // namespace gvlab::lfun

#endif
