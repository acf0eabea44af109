#include "gvlab/qforms.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <tuple>

namespace gvlab {

int64_t checked_add(int64_t x, int64_t y) {
    int64_t r;
    if (__builtin_add_overflow(x, y, &r)) throw OverflowError("int64 add overflow");
    return r;
}

int64_t checked_sub(int64_t x, int64_t y) {
    int64_t r;
    if (__builtin_sub_overflow(x, y, &r)) throw OverflowError("int64 sub overflow");
    return r;
}

int64_t checked_mul(int64_t x, int64_t y) {
    int64_t r;
    if (__builtin_mul_overflow(x, y, &r)) throw OverflowError("int64 mul overflow");
    return r;
}

int64_t isqrt_floor(int64_t n) {
    if (n < 0) throw DomainError("isqrt of negative");
    if (n == 0) return 0;
    auto s = static_cast<int64_t>(std::sqrt(static_cast<double>(n)));
    while (s > 0 && s * s > n) --s;
    while ((s + 1) * (s + 1) <= n) ++s;
    return s;
}

int64_t gcd64(int64_t x, int64_t y) {
    x = x < 0 ? -x : x;
    y = y < 0 ? -y : y;
    while (y) {
        int64_t t = x % y;
        x = y;
        y = t;
    }
    return x;
}

namespace qforms {

int64_t QuadForm::disc() const {
    return checked_sub(checked_mul(b, b), checked_mul(4, checked_mul(a, c)));
}

int64_t QuadForm::content() const { return gcd64(gcd64(a, b), c); }

QuadForm QuadForm::primitive_part() const {
    int64_t g = content();
    if (g <= 1) return *this;
    return {a / g, b / g, c / g};
}

static bool is_perfect_square(int64_t n) {
    if (n < 0) return false;
    int64_t s = isqrt_floor(n);
    return s * s == n;
}

static bool is_squarefree(int64_t n) {
    if (n <= 0) return false;
    for (int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return false;
        }
    }
    return true;
}

DiscriminantInfo is_discriminant(int64_t n) {
    DiscriminantInfo info;
    info.square = is_perfect_square(n);
    if (n <= 0 || (n % 4 != 0 && n % 4 != 1) || info.square) return info;
    info.valid = true;
    if (n % 4 == 1) {
        info.fundamental = is_squarefree(n);
    } else {
        int64_t m = n / 4;
        info.fundamental = is_squarefree(m) && (m % 4 == 2 || m % 4 == 3);
    }
    return info;
}

void require_discriminant(int64_t d) {
    DiscriminantInfo info = is_discriminant(d);
    if (!info.valid) {
        if (info.square) throw SquareDiscriminant("square discriminant " + std::to_string(d));
        throw NotADiscriminant("not a discriminant: " + std::to_string(d));
    }
}

Mat2 Mat2::mul(const Mat2& o) const {
    return {checked_add(checked_mul(m00, o.m00), checked_mul(m01, o.m10)),
            checked_add(checked_mul(m00, o.m01), checked_mul(m01, o.m11)),
            checked_add(checked_mul(m10, o.m00), checked_mul(m11, o.m10)),
            checked_add(checked_mul(m10, o.m01), checked_mul(m11, o.m11))};
}

Mat2 Mat2::inverse() const { return {m11, -m01, -m10, m00}; }

int64_t Mat2::det() const {
    return checked_sub(checked_mul(m00, m11), checked_mul(m01, m10));
}

QuadForm mobius_action(const QuadForm& q, const Mat2& g) {
    const int64_t p = g.m00, r = g.m10, s = g.m11, t = g.m01;
    // a' = q(s,-t), c' = q(-r,p), b' from the j(g,w)^2 transformation rule.
    int64_t a2 = checked_add(checked_sub(checked_mul(q.a, checked_mul(s, s)),
                                         checked_mul(q.b, checked_mul(t, s))),
                             checked_mul(q.c, checked_mul(t, t)));
    int64_t c2 = checked_add(checked_sub(checked_mul(q.a, checked_mul(r, r)),
                                         checked_mul(q.b, checked_mul(p, r))),
                             checked_mul(q.c, checked_mul(p, p)));
    int64_t b2 = checked_sub(checked_add(checked_mul(q.b, checked_add(checked_mul(p, s), checked_mul(t, r))),
                                         checked_mul(-2, checked_mul(q.a, checked_mul(r, s)))),
                             checked_mul(2, checked_mul(q.c, checked_mul(p, t))));
    return {a2, b2, c2};
}

bool is_reduced(const QuadForm& q) {
    int64_t d = q.disc();
    if (d <= 0 || is_perfect_square(d)) return false;
    if (q.b <= 0 || q.b * q.b >= d) return false;
    int64_t twoa = 2 * (q.a < 0 ? -q.a : q.a);
    // sqrt(d) - b < 2|a|  <=>  d < (2|a| + b)^2
    if (d >= checked_mul(twoa + q.b, twoa + q.b)) return false;
    // 2|a| < sqrt(d) + b  <=>  2|a| - b < 0  or  (2|a| - b)^2 < d
    int64_t m = twoa - q.b;
    if (m >= 0 && m * m >= d) return false;
    return true;
}

// b' = 2cm - b with m = sign(c) * floor((b + sqrt(d)) / (2|c|)); for a
// reduced source this lands b' in the window (sqrt(d) - 2|c|, sqrt(d)).
static int64_t neighbor_m(int64_t b, int64_t c, int64_t sqrt_d) {
    int64_t ac = c < 0 ? -c : c;
    int64_t m = (b + sqrt_d) / (2 * ac);
    if (b + sqrt_d < 0) {  // floor for negative numerators
        if ((b + sqrt_d) % (2 * ac) != 0) m -= 1;
    }
    return c < 0 ? -m : m;
}

QuadForm reduce_form(QuadForm q) {
    int64_t d = q.disc();
    if (d <= 0 || is_perfect_square(d))
        throw SquareDiscriminant("reduce_form needs positive non-square discriminant");
    int64_t sd = isqrt_floor(d);
    for (int iter = 0; iter < 100000; ++iter) {
        if (is_reduced(q)) return q;
        if (q.c == 0) throw SquareDiscriminant("degenerate form");
        int64_t ac = q.c < 0 ? -q.c : q.c;
        int64_t b2;
        if (ac > sd) {
            // normalize: -|c| < b' <= |c|
            b2 = -q.b % (2 * ac);
            if (b2 > ac) b2 -= 2 * ac;
            if (b2 <= -ac) b2 += 2 * ac;
        } else {
            int64_t m = neighbor_m(q.b, q.c, sd);
            b2 = 2 * checked_mul(q.c, m) - q.b;
        }
        int64_t c2 = (checked_mul(b2, b2) - d) / (4 * q.c);
        q = {q.c, b2, c2};
    }
    throw NumericalError("reduce_form did not terminate");
}

QuadForm rho_step(const QuadForm& q, Mat2* step) {
    if (!is_reduced(q)) throw NotReduced("rho_step requires a reduced form");
    int64_t d = q.disc();
    int64_t sd = isqrt_floor(d);
    int64_t m = neighbor_m(q.b, q.c, sd);
    int64_t b2 = checked_sub(checked_mul(2, checked_mul(q.c, m)), q.b);
    int64_t c2 = (checked_mul(b2, b2) - d) / (4 * q.c);
    if (step) *step = Mat2{m, -1, 1, 0};
    return {q.c, b2, c2};
}

std::vector<QuadForm> reduced_forms(int64_t d, bool primitive_only) {
    require_discriminant(d);
    std::vector<QuadForm> out;
    int64_t sd = isqrt_floor(d);
    for (int64_t b = (d % 2 == 0) ? 2 : 1; b <= sd; b += 2) {
        int64_t n = (d - b * b) / 4;  // = |a c|, positive since b < sqrt(d)
        if (n <= 0) continue;
        for (int64_t aa = 1; aa * aa <= n; ++aa) {
            if (n % aa) continue;
            const int64_t divs[2] = {aa, n / aa};
            const int ndiv = (aa == n / aa) ? 1 : 2;
            for (int i = 0; i < ndiv; ++i) {
                QuadForm q1{divs[i], b, -(n / divs[i])};
                if (!is_reduced(q1)) continue;
                if (primitive_only && !q1.is_primitive()) continue;
                out.push_back(q1);
                out.push_back({-q1.a, b, -q1.c});
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::vector<QuadForm>> rho_cycles(int64_t d) {
    std::vector<QuadForm> forms = reduced_forms(d, true);
    std::set<QuadForm> pending(forms.begin(), forms.end());
    std::vector<std::vector<QuadForm>> cycles;
    while (!pending.empty()) {
        QuadForm start = *pending.begin();
        std::vector<QuadForm> cyc;
        QuadForm q = start;
        do {
            cyc.push_back(q);
            pending.erase(q);
            q = rho_step(q);
        } while (q != start);
        // canonical rotation: begin at the smallest member
        auto minit = std::min_element(cyc.begin(), cyc.end());
        std::rotate(cyc.begin(), minit, cyc.end());
        cycles.push_back(std::move(cyc));
    }
    std::sort(cycles.begin(), cycles.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    return cycles;
}

QuadForm principal_form(int64_t d) {
    require_discriminant(d);
    if (d % 4 == 0) return {1, 0, -d / 4};
    return {1, 1, (1 - d) / 4};
}

CycleWalk cycle_walk(const QuadForm& q) {
    CycleWalk walk;
    QuadForm q0 = reduce_form(q);
    QuadForm cur = q0;
    for (int iter = 0;; ++iter) {
        if (iter > 2000000) throw NumericalError("cycle_walk did not close");
        walk.forms.push_back(cur);
        Mat2 step;
        cur = rho_step(cur, &step);
        walk.steps.push_back(step);
        if (cur == q0) break;
    }
    return walk;
}

namespace {

struct BigMat2 {
    BigInt m00, m01, m10, m11;
    BigMat2 mul(const Mat2& o) const {
        return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
    }
};

}  // namespace

PellSolution pell_fundamental(int64_t d) {
    require_discriminant(d);
    CycleWalk walk = cycle_walk(principal_form(d));
    BigMat2 prod{1, 0, 0, 1};
    for (const Mat2& n : walk.steps) prod = prod.mul(n);
    // prod is +-(inverse fundamental automorph) of walk.forms[0] = [a0,b0,c0];
    // gamma(f)^{-1} = [(t+bu)/2, -au; cu, (t-bu)/2].
    BigInt tr = prod.m00 + prod.m11;
    if (tr < 0) {
        prod.m00 = -prod.m00, prod.m01 = -prod.m01;
        prod.m10 = -prod.m10, prod.m11 = -prod.m11;
        tr = -tr;
    }
    const QuadForm& f0 = walk.forms.front();
    BigInt u = -prod.m01 / f0.a;
    if (u < 0) u = -u;
    PellSolution sol;
    sol.d = d;
    sol.t = tr;
    sol.u = u;
    if (sol.t * sol.t - d * sol.u * sol.u != 4 || sol.u <= 0)
        throw NumericalError("pell automorph check failed for d=" + std::to_string(d));
    BigFloat tf(sol.t), uf(sol.u);
    sol.epsilon = (tf + uf * sqrt(BigFloat(d))) / 2;
    sol.length = 2 * log(sol.epsilon);
    return sol;
}

ClassList enumerate_classes(int64_t d) {
    require_discriminant(d);
    ClassList cl;
    cl.d = d;
    for (int64_t l = 1; l * l <= d; ++l) {
        if (d % (l * l) != 0) continue;
        int64_t d0 = d / (l * l);
        if (d0 % 4 != 0 && d0 % 4 != 1) continue;
        for (const auto& cyc : rho_cycles(d0)) {
            const QuadForm& r = cyc.front();
            cl.reps.push_back({r.a * l, r.b * l, r.c * l});
        }
    }
    std::sort(cl.reps.begin(), cl.reps.end(),
              [](const QuadForm& x, const QuadForm& y) {
                  auto cx = x.content(), cy = y.content();
                  return std::tie(cx, x.a, x.b, x.c) < std::tie(cy, y.a, y.b, y.c);
              });
    cl.H = static_cast<int64_t>(cl.reps.size());
    return cl;
}

int64_t hurwitz_class_number(int64_t d) { return enumerate_classes(d).H; }

}  // namespace qforms
}  // namespace gvlab
