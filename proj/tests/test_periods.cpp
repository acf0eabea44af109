#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <random>

#include "gvlab/lfun.hpp"
#include "gvlab/periods.hpp"

using namespace gvlab;
using namespace gvlab::periods;
using namespace gvlab::qforms;
using gvlab::modforms::holomorphic_eigenform;
using gvlab::modforms::load_maass_form;
using doctest::Approx;

#ifndef GVLAB_DATA_DIR
#define GVLAB_DATA_DIR "data"
#endif

namespace {
const std::string kEven = std::string(GVLAB_DATA_DIR) + "/maass_even_R13.779751.dat";
const std::string kOdd = std::string(GVLAB_DATA_DIR) + "/maass_odd_R9.533695.dat";
}

TEST_CASE("trip pieces tile the primitive geodesic") {
    for (int64_t d : {5, 12, 40, 229, 1756}) {
        auto q0 = reduce_form(principal_form(d));
        auto pieces = trip_pieces(q0);
        CHECK(pieces.size() % 2 == 0);
        double total = 0;
        for (const auto& p : pieces) {
            CHECK(p.t_end < 0);
            total += -p.t_end;
        }
        double len = static_cast<double>(pell_fundamental(d).length);
        CHECK(total == Approx(len).epsilon(1e-9));
    }
}

TEST_CASE("wraps between discriminants") {
    CHECK(wraps_between(5, 5) == 1);
    CHECK(wraps_between(5, 20) == 3);   // eps_20 = eps_5^3
    CHECK(wraps_between(5, 45) == 2);   // eps_45 = (7+3sqrt5)/2 = eps_5^2
    CHECK(wraps_between(8, 32) == 1);   // eps_32 = 3 + 2 sqrt(2) = eps_8 already
    CHECK(wraps_between(12, 48) == 2);  // eps_48 = (2+sqrt3)^2
    CHECK_THROWS_AS(wraps_between(5, 8), DomainError);
}

TEST_CASE("holomorphic period: class function, start-point free") {
    auto f = holomorphic_eigenform(12, 64);
    QuadForm q{1, 1, -1};
    auto base = period_holomorphic(f, q, 5);
    CHECK(std::abs(base.value) > 1e-12);  // nonzero period for Delta at d=5

    // rotating the cycle start (same class, different reduced representative)
    auto rot = period_holomorphic(f, rho_step(reduce_form(q)), 5);
    CHECK(std::abs(rot.value - base.value) < 1e-12 + 1e-10 * std::abs(base.value));

    // equivalent forms under random unimodular substitutions
    std::mt19937 rng(5150);
    std::uniform_int_distribution<int64_t> small(-3, 3);
    int done = 0;
    while (done < 8) {
        Mat2 g{small(rng), small(rng), small(rng), small(rng)};
        if (g.det() != 1) continue;
        auto moved = period_holomorphic(f, mobius_action(q, g), 5);
        CHECK(std::abs(moved.value - base.value) < 1e-8 * std::abs(base.value));
        ++done;
    }
}

TEST_CASE("holomorphic period: dilation invariance at fixed ambient") {
    auto f = holomorphic_eigenform(12, 64);
    auto a = period_holomorphic(f, {1, 1, -1}, 20);
    auto b = period_holomorphic(f, {2, 2, -2}, 20);
    CHECK(std::abs(a.value - b.value) < 1e-10 * std::abs(a.value));
    // and the wrapped period is 3x the primitive one
    auto prim = period_holomorphic(f, {1, 1, -1}, 5);
    CHECK(std::abs(a.value - 3.0 * prim.value) < 1e-10 * std::abs(a.value));
}

TEST_CASE("quadrature error estimates: doubling nodes stays within 10x estimate") {
    auto f = holomorphic_eigenform(12, 64);
    auto phi = load_maass_form(kOdd);
    for (int64_t d : {5, 13, 44, 145}) {
        auto c = enumerate_classes(d);
        for (const auto& rep : c.reps) {
            auto v1 = period_holomorphic(f, rep, d);
            auto v2 = period_holomorphic(f, rep, d, 2.0);
            CHECK(std::abs(v1.value - v2.value) <= 10 * v1.err + 1e-14);
            auto m1 = period_maass(phi, rep, d);
            auto m2 = period_maass(phi, rep, d, 2.0);
            CHECK(std::abs(m1.value - m2.value) <= 10 * m1.err + 1e-14);
        }
    }
}

TEST_CASE("mu_d is real for weight 0 mod 4 and invariant under class inversion") {
    auto f = holomorphic_eigenform(12, 64);
    for (int64_t d : {5, 8, 13, 40, 145}) {
        auto rec = mu_for_disc(Form(f), d);
        CHECK(std::abs(rec.value_im) <= 1e-8 * (std::abs(rec.value_re) + 1e-12));

        // orientation flip: the inverse-class set gives the same mu_d
        auto classes = enumerate_classes(d);
        Cplx flipped = 0;
        for (const auto& rep : classes.reps) {
            QuadForm inv{-rep.a, -rep.b, -rep.c};
            flipped += period_holomorphic(f, inv, d).value;
        }
        CHECK(std::abs(flipped - Cplx(rec.value_re, rec.value_im)) <
              1e-8 * (std::abs(rec.value_re) + 1e-12));
    }
}

TEST_CASE("weight 18 measures vanish (symmetry class 2 mod 4)") {
    auto f18 = holomorphic_eigenform(18, 64);
    for (int64_t d : {5, 8, 12, 13, 17, 40, 104, 229}) {
        auto rec = mu_for_disc(Form(f18), d);
        double norm = std::abs(Cplx(rec.value_re, rec.value_im)) /
                      std::pow(static_cast<double>(d), 0.25);
        CAPTURE(d);
        CHECK(norm < 1e-8);
    }
}

TEST_CASE("odd Maass form: class-summed periods vanish") {
    auto odd = load_maass_form(kOdd);
    for (int64_t d : {5, 8, 12, 13}) {
        auto rec = mu_for_disc(Form(odd), d);
        double mass = static_cast<double>(rec.H) *
                      2.0 * std::log(std::sqrt(static_cast<double>(d)));
        CAPTURE(d);
        CHECK(std::abs(rec.value_re) < 1e-6 * std::max(1.0, mass));
        CHECK(rec.value_im == 0.0);
    }
}

TEST_CASE("maass periods: equivalence invariance and reality") {
    auto even = load_maass_form(kEven);
    QuadForm q{1, 1, -1};
    auto base = period_maass(even, q, 5);
    auto moved = period_maass(even, mobius_action(q, Mat2{1, 1, 0, 1}), 5);
    CHECK(std::abs(moved.value - base.value) < 1e-8 * (std::abs(base.value) + 1e-12));
    CHECK(base.value.imag() == 0.0);
}

TEST_CASE("Kohnen-Zagier ratio is constant across discriminants (weight 12)") {
    // |mu_d(f)|^2 / (sqrt(d) L(1/2, f x chi_d)) must not depend on d.
    auto f = holomorphic_eigenform(12, 2048);
    auto ratio = [&](int64_t d) {
        auto rec = mu_for_disc(Form(f), d);
        auto lv = lfun::central_value_twisted(f, d);
        double mu2 = rec.value_re * rec.value_re + rec.value_im * rec.value_im;
        return mu2 / (std::sqrt(static_cast<double>(d)) * lv.value);
    };
    double r5 = ratio(5), r13 = ratio(13), r17 = ratio(17);
    CHECK(r5 == Approx(r13).epsilon(1e-3));
    CHECK(r5 == Approx(r17).epsilon(1e-3));
    CHECK(r5 > 0);
}

TEST_CASE("mu_batch: caching, rerun hits, failure recording") {
    auto f = holomorphic_eigenform(12, 64);
    std::remove("tmp_periods_cache.txt");
    cache::PeriodCache cache("tmp_periods_cache.txt");
    auto res = mu_batch(Form(f), 5, 60, cache, 2);
    CHECK(res.computed > 0);
    CHECK(res.failures.empty());
    size_t n = cache.size();

    auto res2 = mu_batch(Form(f), 5, 60, cache, 2);
    CHECK(res2.computed == 0);
    CHECK(res2.cached == n);
    CHECK(cache.size() == n);

    // reload from disk and compare a record
    cache::PeriodCache reload("tmp_periods_cache.txt");
    CHECK(reload.size() == n);
    cache::Record a, b;
    CHECK(cache.lookup(f.id(), 5, &a));
    CHECK(reload.lookup(f.id(), 5, &b));
    CHECK(a.value_re == b.value_re);
    CHECK(a.normalized == b.normalized);
    CHECK(a.t == 3);
    CHECK(a.u == 1);
    CHECK(a.H == 1);
    std::remove("tmp_periods_cache.txt");
}

TEST_CASE("cache file round trip, verify, compact") {
    cache::Record r;
    r.form_id = "hol12.deadbeef0123";
    r.d = 119000;  // large Pell data
    r.H = 4;
    r.t = BigInt("123456789012345678901234567890");
    r.u = BigInt("98765432109876543210");
    r.value_re = -1.234567890123456e-3;
    r.value_im = 3.14e-17;
    r.normalized = -6.63e-5;
    r.quad_err = 2e-13;
    std::string line = cache::format_record(r);
    auto back = cache::parse_record(line);
    CHECK(back.form_id == r.form_id);
    CHECK(back.t == r.t);
    // 15 significant digits survive the text round trip
    CHECK(back.value_re == Approx(r.value_re).epsilon(1e-14));
    // a second round trip is the identity
    CHECK(cache::format_record(back) == line);

    CHECK_THROWS_AS(cache::parse_record(line.substr(0, line.size() - 2) + "ff"), CacheCorrupt);

    std::remove("tmp_cache2.txt");
    {
        cache::PeriodCache c("tmp_cache2.txt");
        c.append(r);
        r.quad_err = 1e-13;  // duplicate key, newer value
        c.append(r);
    }
    CHECK(cache::verify_file("tmp_cache2.txt") == 2);
    CHECK(cache::compact_file("tmp_cache2.txt") == 1);
    CHECK(cache::verify_file("tmp_cache2.txt") == 1);
    {
        cache::PeriodCache c("tmp_cache2.txt");
        cache::Record got;
        CHECK(c.lookup(r.form_id, r.d, &got));
        CHECK(got.quad_err == 1e-13);
    }
    auto st = cache::stats_file("tmp_cache2.txt");
    REQUIRE(st.size() == 1);
    CHECK(st[0].records == 1);
    CHECK(st[0].d_min == 119000);
    std::remove("tmp_cache2.txt");
}
