#include "gvlab/variance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "gvlab/specfun.hpp"

namespace gvlab::variance {

using specfun::gamma_abs_sq;

double v_sym_spherical(double spectral_R, double norm) {
    const double r = spectral_R / 2.0;
    const double num = gamma_abs_sq({0.25, r});
    const double den = gamma_abs_sq({0.5, 2 * r});
    return num * num / (2 * M_PI * den) * norm;
}

double v_sym_discrete(int weight) {
    if (weight % 2 != 0) throw DomainError("weight must be even");
    if (weight % 4 == 2) return 0.0;
    return 0.5 * std::pow(2.0, weight) * specfun::beta(weight / 2.0, weight / 2.0);
}

Cplx ladder_ratio(const LadderSpec& spec, int64_t n) {
    if (n % 2 != 0) throw OutOfLadder("weights are even");
    if (spec.kind == LadderSpec::spherical) {
        const int64_t m = std::llabs(n);  // eta(phi_n) = eta(phi_-n)
        if (m % 4 == 2) return 0.0;
        Cplx ratio = 1.0;
        for (int64_t i = 0; 4 * i < m; ++i)
            ratio *= (Cplx(4 * i + 1) - spec.s) / (Cplx(4 * i + 3) + spec.s);
        return ratio;
    }
    if (spec.m0 <= 0 || spec.m0 % 2 != 0) throw OutOfLadder("discrete m0 must be even positive");
    const int64_t m = std::llabs(n);
    if (m < spec.m0) throw OutOfLadder("weight below the lowest weight");
    const int64_t k = m - spec.m0;
    if (k % 4 == 2) return 0.0;
    double ratio = 1.0;
    for (int64_t j = 0; 4 * j < k; ++j)
        ratio *= static_cast<double>(2 * j + 1) / static_cast<double>(spec.m0 + 2 * j + 1);
    return ratio;
}

namespace {

struct Target {
    double c = 0, lvalue = 0, vsym = 0, pet = 0, dict = 1, value = 0;
};

Target make_target(const periods::Form& f1, const periods::Form& f2, const RunOptions& opt) {
    Target t;
    if (f1.id() != f2.id()) return t;  // distinct subspaces: B = 0
    if (f1.is_holomorphic()) {
        const auto& f = *f1.hol;
        t.c = 1.0 / M_PI;
        t.dict = opt.dict_holomorphic;
        t.vsym = v_sym_discrete(f.weight);
        if (t.vsym == 0) return t;
        // L(1/2) belongs to the Hecke eigenvalues: normalize away a(1)
        t.lvalue = lfun::central_value_holomorphic(f).value / f.a(1);
        t.pet = modforms::petersson_norm(f);
    } else {
        const auto& phi = *f1.maass;
        t.c = 6.0 / M_PI;
        t.dict = opt.dict_maass;
        if (!phi.even) return t;
        t.vsym = v_sym_spherical(phi.spectral_R, 1.0);
        // L(1/2) from the completed value: Lambda = pi^{-1/2} |Gamma(1/4+iR/2)|^2 L
        const double lam = lfun::completed_central_maass(phi).value / phi.a(1);
        t.lvalue = lam * std::sqrt(M_PI) / gamma_abs_sq({0.25, phi.spectral_R / 2});
        t.pet = std::isnan(phi.norm) ? modforms::petersson_norm(phi) : phi.norm;
    }
    t.value = t.c * t.lvalue * t.vsym * t.pet * t.dict;
    return t;
}

std::vector<int64_t> log_grid(int64_t y_max, int per_decade) {
    std::vector<int64_t> ys;
    for (int j = 0;; ++j) {
        auto y = static_cast<int64_t>(std::llround(std::pow(10.0, 2.0 + double(j) / per_decade)));
        if (y >= y_max) break;
        if (y >= 10) ys.push_back(y);
    }
    ys.push_back(y_max);
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    return ys;
}

}  // namespace

VarianceReport variance_run(const periods::Form& f1, const periods::Form& f2, int64_t y_max,
                            cache::PeriodCache& cache, const RunOptions& opt) {
    VarianceReport rep;
    rep.form1 = f1.id();
    rep.form2 = f2.id();

    periods::mu_batch(f1, 5, y_max, cache, opt.threads, opt.node_scale, opt.progress);
    if (f2.id() != f1.id())
        periods::mu_batch(f2, 5, y_max, cache, opt.threads, opt.node_scale, opt.progress);

    Target tgt = make_target(f1, f2, opt);
    rep.c_const = tgt.c;
    rep.lvalue = tgt.lvalue;
    rep.vsym_unit = tgt.vsym;
    rep.petersson = tgt.pet;
    rep.dict = tgt.dict;
    rep.target = tgt.value;

    auto recs1 = cache.records_for(f1.id());
    std::map<int64_t, cache::Record> recs2;
    for (auto& r : cache.records_for(f2.id())) recs2[r.d] = std::move(r);

    auto grid = log_grid(y_max, opt.grid_per_decade);
    size_t gi = 0;
    Cplx acc = 0, mean_acc = 0;
    int64_t count = 0;
    auto flush_rows_upto = [&](int64_t y_limit) {
        while (gi < grid.size() && grid[gi] <= y_limit) {
            VarianceRow row;
            row.y = grid[gi];
            row.count = count;
            row.b_sharp = count ? acc.real() / count : 0.0;
            row.b_flat = acc.real() / static_cast<double>(row.y);
            row.target = tgt.value;
            row.ratio_sharp = tgt.value != 0 ? row.b_sharp / tgt.value : 0.0;
            row.ratio_flat = tgt.value != 0 ? row.b_flat / tgt.value : 0.0;
            row.mean = count ? mean_acc.real() / count : 0.0;
            rep.rows.push_back(row);
            ++gi;
        }
    };
    for (const auto& r1 : recs1) {
        if (r1.d > y_max) break;
        flush_rows_upto(r1.d - 1);
        auto it2 = recs2.find(r1.d);
        if (it2 == recs2.end())
            throw DataError("cache is missing d=" + std::to_string(r1.d) + " for " + f2.id());
        const double dq = std::pow(static_cast<double>(r1.d), 0.25);
        const Cplx z1 = Cplx(r1.value_re, r1.value_im) / dq;
        const Cplx z2 = Cplx(it2->second.value_re, it2->second.value_im) / dq;
        acc += z1 * std::conj(z2);
        mean_acc += z1;
        ++count;
    }
    flush_rows_upto(y_max);
    rep.b_sharp_final = count ? acc / static_cast<double>(count) : Cplx(0);
    rep.b_flat_final = acc / static_cast<double>(y_max);

    // convergence diagnostics over the last decade
    double lo = 1e300, hi = -1e300;
    std::vector<double> window;
    for (const auto& row : rep.rows) {
        if (row.y * 10 < y_max) continue;
        if (tgt.value != 0) {
            lo = std::min(lo, row.ratio_flat);
            hi = std::max(hi, row.ratio_flat);
        }
        window.push_back(row.ratio_flat);
    }
    if (tgt.value != 0 && !window.empty() && lo > 0) rep.last_decade_spread = hi / lo - 1.0;
    if (window.size() > 1) {
        double m = 0;
        for (double v : window) m += v;
        m /= window.size();
        double s2 = 0;
        for (double v : window) s2 += (v - m) * (v - m);
        rep.block_fluctuation = std::sqrt(s2 / (window.size() - 1));
    }
    return rep;
}

std::vector<MeanRow> mean_run(const periods::Form& f, int64_t y_max, cache::PeriodCache& cache,
                              const RunOptions& opt) {
    periods::mu_batch(f, 5, y_max, cache, opt.threads, opt.node_scale, opt.progress);
    auto recs = cache.records_for(f.id());
    auto grid = log_grid(y_max, opt.grid_per_decade);
    std::vector<MeanRow> rows;
    size_t gi = 0;
    double acc = 0;
    int64_t count = 0;
    auto flush = [&](int64_t y_limit) {
        while (gi < grid.size() && grid[gi] <= y_limit) {
            MeanRow row;
            row.y = grid[gi];
            row.count = count;
            row.mean = count ? acc / count : 0.0;
            row.partial = acc;
            rows.push_back(row);
            ++gi;
        }
    };
    for (const auto& r : recs) {
        if (r.d > y_max) break;
        flush(r.d - 1);
        acc += r.value_re / std::pow(static_cast<double>(r.d), 0.25);
        ++count;
    }
    flush(y_max);
    return rows;
}

double RankinReport::max_resid() const {
    return std::max({resid_ratio, resid_digamma, resid_residue, resid_cross_plus,
                     resid_cross_minus, resid_sq_plus, resid_sq_minus});
}

RankinReport rankin_identity_suite(double r) {
    if (!(r > 0)) throw DomainError("rankin suite needs r > 0");
    RankinReport rep;
    rep.r = r;
    const Cplx mu(0, r);
    const double sh = std::sinh(2 * M_PI * r);
    const double g14 = gamma_abs_sq({0.25, r});
    const double g34 = gamma_abs_sq({0.75, r});
    const double g74 = gamma_abs_sq({1.75, r});
    const double g12 = gamma_abs_sq({0.5, 2 * r});

    // cross integrals int W_{5/4} W_{1/4} dy/y and the (-) pair
    specfun::MellinWhittakerEvaluator cp(1.25, 0.25, mu, mu, 4.0);
    specfun::MellinWhittakerEvaluator cm(-1.25, -0.25, mu, mu, 4.0);
    const double ip = cp.value(Cplx(1, 0)).value.real();
    const double im = cm.value(Cplx(1, 0)).value.real();
    const double ip_closed = 2 * r * M_PI / (sh * g14);
    const double im_closed = 2 * r * M_PI / (sh * g74);
    rep.resid_cross_plus = std::abs(ip / ip_closed - 1.0);
    rep.resid_cross_minus = std::abs(im / im_closed - 1.0);

    // (a) ((3/4)^2 + r^2) I_- R^- = I_+ R^+  =>  R^+/R^- from quadrature
    const double ratio_quad = (0.5625 + r * r) * im / ip;
    const double ratio_closed = g14 / g34;
    rep.resid_ratio = std::abs(ratio_quad / ratio_closed - 1.0);

    // (b) psi chain
    const Cplx chain = specfun::digamma({0.25, r}) - specfun::digamma({0.25, -r}) +
                       specfun::digamma({0.75, r}) - specfun::digamma({0.75, -r});
    const Cplx chain_closed = Cplx(0, 2) * sh * g12;
    rep.resid_digamma = std::abs(chain - chain_closed) / std::abs(chain_closed);

    // (c) residue bookkeeping with <F,F> = 1:
    //   2 = R+ J+ + R- J-, R+ = g14/(pi g12), R- = R+ g34/g14
    specfun::MellinWhittakerEvaluator sp(0.25, 0.25, mu, mu, 4.0);
    specfun::MellinWhittakerEvaluator sm(-0.25, -0.25, mu, mu, 4.0);
    const double jp = sp.value(Cplx(1, 0)).value.real();
    const double jm = sm.value(Cplx(1, 0)).value.real();
    const double rplus = g14 / (M_PI * g12);
    const double rminus = rplus * g34 / g14;
    rep.resid_residue = std::abs(rplus * jp + rminus * jm - 2.0) / 2.0;

    // the square integrals against their digamma closed forms
    const Cplx psi_p = specfun::digamma({0.25, r}) - specfun::digamma({0.25, -r});
    const Cplx psi_m = specfun::digamma({0.75, r}) - specfun::digamma({0.75, -r});
    const Cplx jp_closed = M_PI / (Cplx(0, 1) * sh) * psi_p / g14;
    const Cplx jm_closed = M_PI / (Cplx(0, 1) * sh) * psi_m / g34;
    rep.resid_sq_plus = std::abs(jp / jp_closed.real() - 1.0);
    rep.resid_sq_minus = std::abs(jm / jm_closed.real() - 1.0);
    return rep;
}

namespace {
void csv_num(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    os << buf;
}
}  // namespace

void write_variance_csv(const VarianceReport& rep, std::ostream& os) {
    os << "Y,count,B_emp_sharp,B_emp_flat,target,ratio_sharp,ratio_flat,mean\n";
    for (const auto& row : rep.rows) {
        os << row.y << ',' << row.count << ',';
        csv_num(os, row.b_sharp);
        os << ',';
        csv_num(os, row.b_flat);
        os << ',';
        csv_num(os, row.target);
        os << ',';
        csv_num(os, row.ratio_sharp);
        os << ',';
        csv_num(os, row.ratio_flat);
        os << ',';
        csv_num(os, row.mean);
        os << '\n';
    }
}

void write_mean_csv(const std::vector<MeanRow>& rows, std::ostream& os) {
    os << "Y,count,mean,partial_sum\n";
    for (const auto& row : rows) {
        os << row.y << ',' << row.count << ',';
        csv_num(os, row.mean);
        os << ',';
        csv_num(os, row.partial);
        os << '\n';
    }
}

}  // namespace gvlab::variance
