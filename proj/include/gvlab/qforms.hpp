#ifndef GVLAB_QFORMS_HPP
#define GVLAB_QFORMS_HPP

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <vector>

#include "gvlab/errors.hpp"

namespace gvlab {

using BigInt = boost::multiprecision::cpp_int;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

// Overflow-checked 64-bit arithmetic. Form coefficients stay comfortably in
// range for every supported discriminant; these guards catch misuse.
int64_t checked_add(int64_t x, int64_t y);
int64_t checked_sub(int64_t x, int64_t y);
int64_t checked_mul(int64_t x, int64_t y);

int64_t isqrt_floor(int64_t n);
int64_t gcd64(int64_t x, int64_t y);

namespace qforms {

// Integral binary quadratic form a x^2 + b xy + c y^2, written [a,b,c].
struct QuadForm {
    int64_t a = 0;
    int64_t b = 0;
    int64_t c = 0;

    int64_t disc() const;     // b^2 - 4ac
    int64_t content() const;  // gcd(|a|,|b|,|c|), >= 1 for nonzero forms
    bool is_primitive() const { return content() == 1; }
    QuadForm primitive_part() const;

    friend auto operator<=>(const QuadForm&, const QuadForm&) = default;
};

struct DiscriminantInfo {
    bool valid = false;        // n > 0, n = 0,1 mod 4, not a perfect square
    bool fundamental = false;
    bool square = false;
};

DiscriminantInfo is_discriminant(int64_t n);

// Throws NotADiscriminant unless is_discriminant(d).valid.
void require_discriminant(int64_t d);

// Unimodular 2x2 integer matrix acting on the upper half-plane by Mobius
// transformations.
struct Mat2 {
    int64_t m00 = 1, m01 = 0, m10 = 0, m11 = 1;

    static Mat2 identity() { return {}; }
    Mat2 mul(const Mat2& o) const;
    Mat2 inverse() const;  // adjugate; valid for det = 1
    int64_t det() const;

    friend auto operator<=>(const Mat2&, const Mat2&) = default;
};

// Substitution induced by the Mobius action: the root polynomial
// q(1,-z) = c z^2 - b z + a transforms as R'(w) = R(g w) j(g,w)^2 where
// j(g,w) = m10 w + m11.  Satisfies gamma(q.g) = g^{-1} gamma(q) g.
QuadForm mobius_action(const QuadForm& q, const Mat2& g);

// 0 < b < sqrt(d) and sqrt(d) - b < 2|a| < sqrt(d) + b, tested exactly.
bool is_reduced(const QuadForm& q);

// Gauss reduction for indefinite forms; throws SquareDiscriminant on square
// (or non-positive) discriminant.
QuadForm reduce_form(QuadForm q);

// Right neighbor [c, b', c'] of a reduced form, b' = -b mod 2c chosen inside
// the reduction window. Throws NotReduced. If step is non-null it receives
// the Mobius matrix with rho(q) = mobius_action(q, *step).
QuadForm rho_step(const QuadForm& q, Mat2* step = nullptr);

// All reduced forms of discriminant d (primitive only when requested),
// sorted. Exact enumeration over 0 < b < sqrt(d), 4|ac| = d - b^2.
std::vector<QuadForm> reduced_forms(int64_t d, bool primitive_only);

// rho-cycles partitioning the reduced primitive forms of discriminant d.
// Each cycle is listed starting from its smallest member; cycles sorted by
// that member. Cycle lengths are always even.
std::vector<std::vector<QuadForm>> rho_cycles(int64_t d);

struct PellSolution {
    int64_t d = 0;
    BigInt t;          // t^2 - d u^2 = 4, t > 0 minimal
    BigInt u;          // u > 0 minimal
    BigFloat epsilon;  // (t + u sqrt(d)) / 2
    BigFloat length;   // 2 log(epsilon)
};

// Fundamental solution of t^2 - d u^2 = 4 via the cycle of the principal
// form (continued-fraction expansion in disguise).
PellSolution pell_fundamental(int64_t d);

struct ClassList {
    int64_t d = 0;
    std::vector<QuadForm> reps;  // one per class; imprimitive included
    int64_t H = 0;               // Hurwitz class number = reps.size()
};

// One representative per SL2(Z)-class of forms of discriminant d, not
// necessarily primitive: primitive classes of d/l^2 scaled by l for every
// l^2 | d with d/l^2 = 0,1 mod 4.
ClassList enumerate_classes(int64_t d);

int64_t hurwitz_class_number(int64_t d);

// Principal form of discriminant d: [1,0,-d/4] or [1,1,(1-d)/4].
QuadForm principal_form(int64_t d);

// One trip around the rho-cycle of reduce_form(q): forms q_0, q_1, ...,
// q_{L-1} and Mobius steps N_1..N_L with q_j = mobius_action(q_{j-1}, N_j)
// and q_L = q_0. The product N_1...N_L is (up to sign) the inverse
// fundamental automorph of q_0.
struct CycleWalk {
    std::vector<QuadForm> forms;
    std::vector<Mat2> steps;
};

CycleWalk cycle_walk(const QuadForm& q);

}  // namespace qforms
}  // namespace gvlab

#endif
