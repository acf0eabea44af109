#ifndef GVLAB_GEODESICS_HPP
#define GVLAB_GEODESICS_HPP

#include <complex>

#include "gvlab/qforms.hpp"

namespace gvlab::geodesics {

using qforms::Mat2;
using qforms::PellSolution;
using qforms::QuadForm;

// Exact SL2(Z) matrix with arbitrary-precision entries; hyperbolic when
// |trace| > 2.
struct HyperbolicMatrix {
    BigInt m00, m01, m10, m11;

    static HyperbolicMatrix identity() { return {1, 0, 0, 1}; }
    BigInt trace() const { return m00 + m11; }
    BigInt det() const { return m00 * m11 - m01 * m10; }
    HyperbolicMatrix mul(const HyperbolicMatrix& o) const;
    HyperbolicMatrix inverse() const;  // adjugate, det = 1
    bool operator==(const HyperbolicMatrix&) const = default;
};

// gamma(f) = [(t-bu)/2, au; -cu, (t+bu)/2] for the Pell solution of disc(f).
// Requires p.d == disc(q); throws ParityViolation if t - bu is odd.
HyperbolicMatrix matrix_of_form(const QuadForm& q, const PellSolution& p);

// B(gamma) = sign(tr) [b, d-a, -c] / gcd: primitive, B(-g)=B(g),
// B(g^{-1}) = -B(g). Throws NotHyperbolic.
QuadForm form_of_matrix(const HyperbolicMatrix& m);

// Oriented closed geodesic attached to a form, traversed with the Pell unit
// of the ambient discriminant (wraps times around the primitive geodesic).
struct GeodesicArc {
    QuadForm form;
    int64_t d_ambient = 0;
    BigFloat w_minus;  // (b - sqrt(disc q)) / 2c
    BigFloat w_plus;   // (b + sqrt(disc q)) / 2c; the flow runs w_plus -> w_minus
    HyperbolicMatrix matrix;  // automorph with trace t_{d_ambient}
    BigFloat flow_length;     // 2 log eps_{d_ambient}
    std::complex<double> base_point;  // apex of the semicircle
    int64_t wraps = 1;        // trips around the primitive geodesic

    BigFloat attracting() const { return w_minus; }
    BigFloat repelling() const { return w_plus; }
};

// Requires d_ambient / disc(primitive part of q) to be a perfect square.
GeodesicArc geodesic_arc(const QuadForm& q, int64_t d_ambient);

std::complex<double> mobius(const Mat2& g, std::complex<double> z);

struct FDReduction {
    std::complex<double> z;  // |Re z| <= 1/2, |z| >= 1
    Mat2 g;                  // g(input) = z
};

// Pull a point of the upper half-plane into the standard fundamental domain.
FDReduction reduce_to_fundamental_domain(std::complex<double> z);

}  // namespace gvlab::geodesics

#endif
