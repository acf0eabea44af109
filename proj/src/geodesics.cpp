#include "gvlab/geodesics.hpp"

#include <cmath>
#include <string>

namespace gvlab::geodesics {

HyperbolicMatrix HyperbolicMatrix::mul(const HyperbolicMatrix& o) const {
    return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
            m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
}

HyperbolicMatrix HyperbolicMatrix::inverse() const { return {m11, -m01, -m10, m00}; }

HyperbolicMatrix matrix_of_form(const QuadForm& q, const PellSolution& p) {
    if (p.d != q.disc())
        throw DomainError("pell solution is for discriminant " + std::to_string(p.d) +
                          ", form has " + std::to_string(q.disc()));
    BigInt bu = q.b * p.u;
    if ((p.t - bu) % 2 != 0) throw ParityViolation("t - b u is odd");
    HyperbolicMatrix m{(p.t - bu) / 2, q.a * p.u, -q.c * p.u, (p.t + bu) / 2};
    if (m.det() != 1) throw NumericalError("automorph determinant != 1");
    return m;
}

static int64_t to_int64(const BigInt& v, const char* what) {
    if (v > INT64_MAX || v < INT64_MIN)
        throw OverflowError(std::string(what) + " exceeds int64");
    return static_cast<int64_t>(v);
}

QuadForm form_of_matrix(const HyperbolicMatrix& m) {
    if (m.det() != 1) throw NotHyperbolic("determinant != 1");
    BigInt tr = m.trace();
    if (tr * tr <= 4) throw NotHyperbolic("|trace| <= 2");
    BigInt b = m.m01, dma = m.m11 - m.m00, negc = -m.m10;
    BigInt g = gcd(gcd(abs(b), abs(dma)), abs(negc));
    int sign = tr > 0 ? 1 : -1;
    return {to_int64(sign * b / g, "form coefficient"),
            to_int64(sign * dma / g, "form coefficient"),
            to_int64(sign * negc / g, "form coefficient")};
}

GeodesicArc geodesic_arc(const QuadForm& q, int64_t d_ambient) {
    const int64_t dq = q.disc();
    qforms::require_discriminant(dq);
    qforms::require_discriminant(d_ambient);
    const QuadForm q0 = q.primitive_part();
    const int64_t d0 = q0.disc();
    if (d_ambient % d0 != 0)
        throw DomainError("ambient discriminant incompatible with form");
    int64_t ratio = d_ambient / d0;
    int64_t l = isqrt_floor(ratio);
    if (l * l != ratio)
        throw DomainError("ambient discriminant / primitive discriminant not a square");

    GeodesicArc arc;
    arc.form = q;
    arc.d_ambient = d_ambient;

    PellSolution p0 = qforms::pell_fundamental(d0);
    PellSolution pa = qforms::pell_fundamental(d_ambient);
    // eps_{d_ambient} = eps_{d0}^wraps: march powers of (t0,u0).
    BigInt T = p0.t, U = p0.u;
    const BigInt Ta = pa.t, Ua = pa.u * l;  // ambient unit as a d0-unit
    int64_t wraps = 1;
    while (!(T == Ta && U == Ua)) {
        BigInt Tn = (p0.t * T + d0 * p0.u * U) / 2;
        BigInt Un = (p0.t * U + p0.u * T) / 2;
        T = Tn;
        U = Un;
        ++wraps;
        if (wraps > 4096) throw NumericalError("ambient unit is not a power of the fundamental unit");
    }
    arc.wraps = wraps;
    arc.matrix = matrix_of_form(q0, PellSolution{d0, Ta, Ua, pa.epsilon, pa.length});
    arc.flow_length = pa.length;

    BigFloat sd = sqrt(BigFloat(dq));
    arc.w_minus = (BigFloat(q.b) - sd) / (2 * q.c);
    arc.w_plus = (BigFloat(q.b) + sd) / (2 * q.c);
    double x0 = static_cast<double>(q.b) / (2.0 * static_cast<double>(q.c));
    double rho = std::sqrt(static_cast<double>(dq)) / (2.0 * std::abs(static_cast<double>(q.c)));
    arc.base_point = {x0, rho};
    return arc;
}

std::complex<double> mobius(const Mat2& g, std::complex<double> z) {
    return (static_cast<double>(g.m00) * z + static_cast<double>(g.m01)) /
           (static_cast<double>(g.m10) * z + static_cast<double>(g.m11));
}

FDReduction reduce_to_fundamental_domain(std::complex<double> z) {
    if (!(z.imag() > 0)) throw DomainError("point not in the upper half-plane");
    Mat2 g = Mat2::identity();
    for (int iter = 0; iter < 20000; ++iter) {
        double n = std::nearbyint(z.real());
        if (n != 0) {
            z -= n;
            auto ni = static_cast<int64_t>(n);
            g = Mat2{1, -ni, 0, 1}.mul(g);
        }
        double norm2 = z.real() * z.real() + z.imag() * z.imag();
        if (norm2 < 1.0 - 1e-15) {
            z = -1.0 / z;
            g = Mat2{0, -1, 1, 0}.mul(g);
        } else {
            return {z, g};
        }
    }
    throw NumericalError("fundamental-domain reduction did not terminate");
}

}  // namespace gvlab::geodesics
