#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gvlab/geodesics.hpp"

using namespace gvlab;
using namespace gvlab::qforms;
using namespace gvlab::geodesics;

namespace {

// Mobius action at 50-digit precision, real and complex variants.
BigFloat mobius_real(const HyperbolicMatrix& m, const BigFloat& x) {
    return (BigFloat(m.m00) * x + BigFloat(m.m01)) / (BigFloat(m.m10) * x + BigFloat(m.m11));
}

struct CBig {
    BigFloat re, im;
};

CBig mobius_cplx(const HyperbolicMatrix& m, const CBig& z) {
    BigFloat a(m.m00), b(m.m01), c(m.m10), d(m.m11);
    BigFloat nr = a * z.re + b, ni = a * z.im;
    BigFloat dr = c * z.re + d, di = c * z.im;
    BigFloat den = dr * dr + di * di;
    return {(nr * dr + ni * di) / den, (ni * dr - nr * di) / den};
}

}  // namespace

TEST_CASE("matrix_of_form: spec examples") {
    auto m5 = matrix_of_form({1, 1, -1}, pell_fundamental(5));
    CHECK(m5 == HyperbolicMatrix{1, 1, 1, 2});
    CHECK(m5.trace() == 3);

    auto m12 = matrix_of_form({2, 2, -1}, pell_fundamental(12));
    CHECK(m12 == HyperbolicMatrix{1, 2, 1, 3});

    CHECK_THROWS_AS(matrix_of_form({1, 1, -1}, pell_fundamental(8)), DomainError);
}

TEST_CASE("form_of_matrix: paper identities") {
    HyperbolicMatrix g{1, 1, 1, 2};
    CHECK(form_of_matrix(g) == QuadForm{1, 1, -1});

    HyperbolicMatrix ginv = g.inverse();
    QuadForm neg = form_of_matrix(ginv);
    CHECK(neg == QuadForm{-1, -1, 1});  // B(g^-1) = -B(g)

    HyperbolicMatrix mg{-1, -1, -1, -2};
    CHECK(form_of_matrix(mg) == QuadForm{1, 1, -1});  // B(-g) = B(g)

    CHECK_THROWS_AS(form_of_matrix(HyperbolicMatrix{1, 1, 0, 1}), NotHyperbolic);
    CHECK_THROWS_AS(form_of_matrix(HyperbolicMatrix{2, 0, 0, 2}), NotHyperbolic);
}

TEST_CASE("round trip on primitive reduced forms, d <= 500") {
    for (int64_t d = 5; d <= 500; ++d) {
        if (!is_discriminant(d).valid) continue;
        auto p = pell_fundamental(d);
        for (const auto& q : reduced_forms(d, true)) {
            CHECK(form_of_matrix(matrix_of_form(q, p)) == q);
        }
    }
}

TEST_CASE("conjugation covariance under random unimodular changes") {
    std::mt19937 rng(777);
    std::uniform_int_distribution<int64_t> small(-4, 4);
    auto p = pell_fundamental(145);
    auto forms = reduced_forms(145, true);
    int done = 0;
    while (done < 50) {
        Mat2 g{small(rng), small(rng), small(rng), small(rng)};
        if (g.det() != 1) continue;
        const QuadForm& q = forms[done % forms.size()];
        // left action g.q := mobius_action(q, g^{-1}) so that
        // gamma(g.q) = g gamma(q) g^{-1}
        QuadForm gq = mobius_action(q, g.inverse());
        HyperbolicMatrix lhs = matrix_of_form(gq, p);
        HyperbolicMatrix gamma = matrix_of_form(q, p);
        HyperbolicMatrix gb{g.m00, g.m01, g.m10, g.m11};
        HyperbolicMatrix rhs = gb.mul(gamma).mul(gb.inverse());
        CHECK(lhs == rhs);
        ++done;
    }
}

TEST_CASE("geodesic arc: endpoints and flow length for [1,1,-1]") {
    auto arc = geodesic_arc({1, 1, -1}, 5);
    // roots of 1 - z - z^2, i.e. (b +- sqrt5)/(2c) with c = -1
    CHECK(static_cast<double>(arc.w_plus) == doctest::Approx(-1.6180339887498949).epsilon(1e-12));
    CHECK(static_cast<double>(arc.w_minus) == doctest::Approx(0.6180339887498949).epsilon(1e-12));
    CHECK(static_cast<double>(arc.flow_length) == doctest::Approx(1.9248473002384139).epsilon(1e-12));
    CHECK(arc.wraps == 1);
    CHECK(arc.base_point.real() == doctest::Approx(-0.5));
    CHECK(arc.base_point.imag() == doctest::Approx(std::sqrt(5.0) / 2));

    // endpoints are fixed points of the matrix at 50-digit precision
    for (const BigFloat& w : {arc.w_minus, arc.w_plus}) {
        BigFloat res = mobius_real(arc.matrix, w) - w;
        CHECK(abs(res) < BigFloat("1e-30"));
    }
}

TEST_CASE("geodesic arc: ambient wrapping") {
    // [1,1,-1] traversed with the d=20 unit wraps 3 times (eps_20 = eps_5^3)
    auto arc = geodesic_arc({1, 1, -1}, 20);
    CHECK(arc.wraps == 3);
    CHECK(static_cast<double>(arc.flow_length) ==
          doctest::Approx(3 * 1.9248473002384139).epsilon(1e-12));
    CHECK(arc.matrix.trace() == 18);

    // imprimitive form of disc 20 with its own discriminant as ambient
    auto arc2 = geodesic_arc({2, 2, -2}, 20);
    CHECK(arc2.wraps == 3);
    CHECK(arc2.matrix == arc.matrix);

    CHECK_THROWS_AS(geodesic_arc({1, 1, -1}, 8), DomainError);
}

TEST_CASE("flow closure: z(flow_length) = gamma z(0) at high precision") {
    for (int64_t d : {5, 13, 44}) {
        auto q = reduce_form(principal_form(d));
        auto arc = geodesic_arc(q, d);
        // z(t) = x0 + rho (sigma tanh t + i sech t), sigma = -sign(c)
        BigFloat sd = sqrt(BigFloat(d));
        BigFloat x0 = BigFloat(q.b) / (2 * q.c);
        BigFloat rho = sd / (2 * abs(BigFloat(q.c)));
        BigFloat sigma = q.c < 0 ? 1 : -1;
        auto point = [&](const BigFloat& t) -> CBig {
            return {x0 + rho * sigma * tanh(t), rho / cosh(t)};
        };
        CBig z0 = point(0);
        CBig zl = point(arc.flow_length);
        CBig gz0 = mobius_cplx(arc.matrix, z0);
        BigFloat err = abs(zl.re - gz0.re) + abs(zl.im - gz0.im);
        BigFloat scale = abs(gz0.re) + abs(gz0.im);
        CHECK(err / scale < BigFloat("1e-25"));
    }
}

TEST_CASE("fundamental domain reduction") {
    using std::complex;
    auto r1 = reduce_to_fundamental_domain({0.0, 1.0});
    CHECK(r1.z == complex<double>(0.0, 1.0));
    CHECK(r1.g == Mat2::identity());

    auto r2 = reduce_to_fundamental_domain({5.0, 1.0});
    CHECK(r2.z.real() == doctest::Approx(0.0));
    CHECK(r2.z.imag() == doctest::Approx(1.0));
    CHECK(r2.g == Mat2{1, -5, 0, 1});

    auto r3 = reduce_to_fundamental_domain({0.3, 0.001});
    CHECK(r3.z.imag() >= std::sqrt(3.0) / 2 * (1 - 1e-12));
    CHECK(std::abs(r3.z.real()) <= 0.5 + 1e-12);
    CHECK(std::abs(r3.z) >= 1.0 - 1e-12);
    // g applied to the input reproduces the reduced point
    auto img = mobius(r3.g, {0.3, 0.001});
    CHECK(std::abs(img - r3.z) < 1e-9);

    std::mt19937 rng(99);
    std::uniform_real_distribution<double> ux(-8, 8), uy(1e-4, 5);
    for (int i = 0; i < 200; ++i) {
        complex<double> z{ux(rng), uy(rng)};
        auto r = reduce_to_fundamental_domain(z);
        CHECK(r.g.det() == 1);
        CHECK(std::abs(r.z.real()) <= 0.5 + 1e-9);
        CHECK(std::abs(r.z) >= 1.0 - 1e-9);
        CHECK(std::abs(mobius(r.g, z) - r.z) < 1e-8);
    }
}
