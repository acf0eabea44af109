// gvlab: periods of Hecke eigenforms along closed geodesics, their
// discriminant-averaged variance, and the special-function identity suites.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <random>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gvlab/geodesics.hpp"
#include "gvlab/lfun.hpp"
#include "gvlab/periods.hpp"
#include "gvlab/variance.hpp"

using json = nlohmann::json;
using namespace gvlab;

namespace {

struct FormBox {
    std::shared_ptr<modforms::HolomorphicEigenform> hol;
    std::shared_ptr<modforms::MaassForm> maass;
    periods::Form form() const {
        return hol ? periods::Form(*hol) : periods::Form(*maass);
    }
};

FormBox make_form(const std::string& sel, int64_t n_coeffs) {
    FormBox box;
    if (sel == "delta" || sel == "hol12") {
        box.hol = std::make_shared<modforms::HolomorphicEigenform>(
            modforms::holomorphic_eigenform(12, n_coeffs));
    } else if (sel.rfind("hol", 0) == 0) {
        int w = 0;
        try {
            w = std::stoi(sel.substr(3));
        } catch (...) {
            throw ConfigError("bad form selector: " + sel);
        }
        box.hol = std::make_shared<modforms::HolomorphicEigenform>(
            modforms::holomorphic_eigenform(w, n_coeffs));
    } else if (sel.rfind("maass:", 0) == 0) {
        box.maass = std::make_shared<modforms::MaassForm>(
            modforms::load_maass_form(sel.substr(6)));
    } else {
        throw ConfigError("unknown form selector: " + sel +
                          " (use delta, hol16, hol18, hol20, hol22, hol26, maass:<path>)");
    }
    return box;
}

std::vector<std::string> split_forms(const std::string& forms) {
    std::vector<std::string> out;
    std::stringstream ss(forms);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    if (out.empty()) throw ConfigError("empty --forms");
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

// atomic file emission: write a temp file, then rename over the target
void emit_text(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::string tmp = out_path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::trunc | std::ios::binary);
        if (!os) throw DataError("cannot write " + tmp);
        os << text;
    }
    if (std::rename(tmp.c_str(), out_path.c_str()) != 0)
        throw DataError("atomic rename to " + out_path + " failed");
}

struct Options {
    int64_t disc = 0;
    std::string forms;
    int64_t dmax = 1000;
    int precision = 15;
    double tol = 1e-9;
    std::string cache_path;
    std::string out;
    bool as_json = false;
    int threads = 1;
    std::string suite = "rankin";
    double r = 1.0;
    int64_t twist = 0;
    std::string admin_cmd;
};

int run_classes(const Options& o) {
    auto cl = qforms::enumerate_classes(o.disc);
    auto p = qforms::pell_fundamental(o.disc);
    if (o.as_json) {
        json j;
        j["d"] = o.disc;
        j["H"] = cl.H;
        std::ostringstream ts, us;
        ts << p.t;
        us << p.u;
        j["t"] = ts.str();
        j["u"] = us.str();
        j["length"] = static_cast<double>(p.length);
        j["classes"] = json::array();
        for (const auto& r : cl.reps) j["classes"].push_back({r.a, r.b, r.c});
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "discriminant " << o.disc << ": H = " << cl.H << ", pell (t,u) = (" << p.t
              << "," << p.u << "), 2 log eps = " << fmt(static_cast<double>(p.length)) << "\n";
    std::cout << "  class  a  b  c  content\n";
    for (size_t i = 0; i < cl.reps.size(); ++i) {
        const auto& r = cl.reps[i];
        std::cout << "  " << i + 1 << "  [" << r.a << "," << r.b << "," << r.c << "]  "
                  << r.content() << "\n";
    }
    return 0;
}

int run_pell(const Options& o) {
    auto p = qforms::pell_fundamental(o.disc);
    if (o.as_json) {
        json j;
        std::ostringstream ts, us, es;
        ts << p.t;
        us << p.u;
        es << std::setprecision(40) << p.epsilon;
        j["d"] = o.disc;
        j["t"] = ts.str();
        j["u"] = us.str();
        j["epsilon"] = es.str();
        j["length"] = static_cast<double>(p.length);
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "d = " << o.disc << "\nt = " << p.t << "\nu = " << p.u
              << "\nepsilon = " << std::setprecision(40) << p.epsilon
              << "\n2 log epsilon = " << p.length << "\n";
    return 0;
}

int run_period(const Options& o) {
    auto sels = split_forms(o.forms);
    auto box = make_form(sels.at(0), 256);
    auto F = box.form();
    auto cl = qforms::enumerate_classes(o.disc);
    json j;
    j["d"] = o.disc;
    j["form"] = F.id();
    j["classes"] = json::array();
    std::complex<double> mu = 0;
    for (const auto& rep : cl.reps) {
        auto pv = periods::period(F, rep, o.disc);
        mu += pv.value;
        if (o.as_json) {
            j["classes"].push_back({{"form", {rep.a, rep.b, rep.c}},
                                    {"re", pv.value.real()},
                                    {"im", pv.value.imag()},
                                    {"quad_err", pv.err}});
        } else {
            std::cout << "class [" << rep.a << "," << rep.b << "," << rep.c
                      << "]: period = " << fmt(pv.value.real()) << " + " << fmt(pv.value.imag())
                      << "i   (err ~ " << fmt(pv.err) << ")\n";
        }
    }
    double dq = std::pow(static_cast<double>(o.disc), 0.25);
    if (o.as_json) {
        j["mu_re"] = mu.real();
        j["mu_im"] = mu.imag();
        j["normalized"] = mu.real() / dq;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "mu_d = " << fmt(mu.real()) << " + " << fmt(mu.imag())
                  << "i,  mu_d/d^(1/4) = " << fmt(mu.real() / dq) << "\n";
    }
    return 0;
}

int run_mu(const Options& o) {
    auto sels = split_forms(o.forms);
    auto box = make_form(sels.at(0), 256);
    cache::PeriodCache cache(o.cache_path);
    auto progress = [](size_t done, size_t total) {
        std::fprintf(stderr, "\r%zu/%zu", done, total);
        if (done == total) std::fprintf(stderr, "\n");
    };
    auto res = periods::mu_batch(box.form(), 5, o.dmax, cache, o.threads, 1.0, progress);
    std::cout << "form " << box.form().id() << ": computed " << res.computed << ", cache hits "
              << res.cached << ", failures " << res.failures.size() << "\n";
    for (const auto& [d, why] : res.failures)
        std::cerr << "  d = " << d << ": " << why << "\n";
    return res.failures.empty() ? 0 : 1;
}

int run_variance(const Options& o) {
    auto sels = split_forms(o.forms);
    if (sels.size() != 2) throw ConfigError("variance needs --forms F1,F2");
    auto b1 = make_form(sels[0], 256);
    auto b2 = make_form(sels[1], 256);
    cache::PeriodCache cache(o.cache_path);
    variance::RunOptions ro;
    ro.threads = o.threads;
    ro.progress = [](size_t done, size_t total) {
        std::fprintf(stderr, "\r%zu/%zu", done, total);
        if (done == total) std::fprintf(stderr, "\n");
    };
    auto rep = variance::variance_run(b1.form(), b2.form(), o.dmax, cache, ro);
    std::ostringstream os;
    variance::write_variance_csv(rep, os);
    emit_text(o.out, os.str());
    std::cerr << "target = c * L(1/2) * Vsym * <f,f> * dict = " << fmt(rep.c_const) << " * "
              << fmt(rep.lvalue) << " * " << fmt(rep.vsym_unit) << " * " << fmt(rep.petersson)
              << " * " << fmt(rep.dict) << " = " << fmt(rep.target) << "\n";
    std::cerr << "B_flat(Y) = " << fmt(rep.b_flat_final.real()) << ", B_sharp(Y) = "
              << fmt(rep.b_sharp_final.real()) << ", last-decade flat-ratio spread = "
              << fmt(rep.last_decade_spread) << "\n";
    return 0;
}

int run_mean(const Options& o) {
    auto sels = split_forms(o.forms);
    auto box = make_form(sels.at(0), 256);
    cache::PeriodCache cache(o.cache_path);
    variance::RunOptions ro;
    ro.threads = o.threads;
    auto rows = variance::mean_run(box.form(), o.dmax, cache, ro);
    std::ostringstream os;
    variance::write_mean_csv(rows, os);
    emit_text(o.out, os.str());
    return 0;
}

int run_lvalue(const Options& o) {
    auto sels = split_forms(o.forms);
    lfun::CentralValue cv;
    std::string what;
    if (sels.at(0).rfind("maass:", 0) == 0) {
        auto box = make_form(sels.at(0), 0);
        cv = lfun::completed_central_maass(*box.maass);
        what = "Lambda(1/2, phi)";
    } else {
        int64_t need = o.twist > 0 ? 10 * o.twist + 64 : 256;
        auto box = make_form(sels.at(0), need);
        cv = o.twist > 0 ? lfun::central_value_twisted(*box.hol, o.twist)
                         : lfun::central_value_holomorphic(*box.hol);
        what = o.twist > 0 ? "L(1/2, f x chi_" + std::to_string(o.twist) + ")" : "L(1/2, f)";
    }
    if (o.as_json) {
        json j;
        j["quantity"] = what;
        j["value"] = cv.value;
        j["error_estimate"] = cv.error_estimate;
        j["method"] = cv.method;
        j["cutoffs"] = {cv.cutoff1, cv.cutoff2};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << what << " = " << fmt(cv.value) << "  (err <= " << fmt(cv.error_estimate)
                  << "; " << cv.method << ")\n";
    }
    return 0;
}

int run_verify(const Options& o) {
    int failures = 0;
    auto line = [&](const std::string& name, double resid, double tol) {
        bool ok = resid < tol;
        if (!ok) ++failures;
        std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "  residual " << fmt(resid)
                  << "  (tol " << fmt(tol) << ")\n";
    };
    const double tol = o.tol > 0 ? o.tol : 1e-6;
    if (o.suite == "rankin") {
        auto rep = variance::rankin_identity_suite(o.r);
        line("R+/R- gamma ratio from Whittaker cross integrals", rep.resid_ratio, tol);
        line("digamma chain = 2i sinh(2 pi r)|Gamma(1/2+2ir)|^2", rep.resid_digamma, tol);
        line("residue bookkeeping 2<F,F> = R+ J+ + R- J-", rep.resid_residue, tol);
        line("cross integral closed form (+)", rep.resid_cross_plus, tol);
        line("cross integral closed form (-)", rep.resid_cross_minus, tol);
    } else if (o.suite == "specfun") {
        using specfun::Cplx;
        const double r = o.r;
        Cplx w = specfun::whittaker_w(0.0, Cplx(0.5, 0), 2.0);
        line("W_{0,1/2}(2) = e^{-1}", std::abs(w.real() - std::exp(-1.0)), tol);
        specfun::MellinWhittakerEvaluator ev(0.25, 0.25, Cplx(0, 0.7), Cplx(0, 0.7), 6.0);
        Cplx s(1.5, 0);
        Cplx lhs = (s + 1.0) * ev.value(s + 2.0).value -
                   0.5 * (2.0 * s + 1.0) * ev.value(s + 1.0).value;
        Cplx mu(0, 0.7), nu(0, 0.7);
        Cplx rhs = (s * s - (mu + nu) * (mu + nu)) * (s * s - (mu - nu) * (mu - nu)) / s *
                   ev.value(s).value;
        line("Mellin recurrence at s=1.5", std::abs(lhs - rhs) / std::abs(rhs), tol);
        Cplx chain = specfun::digamma({0.25, r}) - specfun::digamma({0.25, -r}) +
                     specfun::digamma({0.75, r}) - specfun::digamma({0.75, -r});
        Cplx closed = Cplx(0, 2) * std::sinh(2 * M_PI * r) * specfun::gamma_abs_sq({0.5, 2 * r});
        line("digamma chain", std::abs(chain - closed) / std::abs(closed), tol);
    } else if (o.suite == "ladder") {
        std::mt19937 rng(1);
        std::uniform_real_distribution<double> ui(0.05, 3.0);
        std::uniform_int_distribution<int> un(2, 20);
        double worst = 0;
        for (int i = 0; i < 100; ++i) {
            variance::LadderSpec spec{variance::LadderSpec::spherical, {0, ui(rng)}, 0};
            int64_t n = 2 * un(rng);
            auto lhs = (std::complex<double>(n) - spec.s - 1.0) * variance::ladder_ratio(spec, n - 2);
            auto rhs = (std::complex<double>(n) + spec.s + 1.0) * variance::ladder_ratio(spec, n + 2);
            worst = std::max(worst, std::abs(lhs - rhs) / (std::abs(rhs) + 1e-300));
        }
        line("spherical ladder recurrence (100 samples)", worst, 1e-12);
        bool zeros_ok = true;
        for (int64_t n = 2; n <= 100; n += 4)
            zeros_ok = zeros_ok &&
                       variance::ladder_ratio({variance::LadderSpec::spherical, {0, 1.0}, 0}, n) ==
                           std::complex<double>(0);
        line("spherical zero pattern n = 2 mod 4", zeros_ok ? 0.0 : 1.0, 0.5);
    } else {
        throw ConfigError("unknown suite: " + o.suite + " (rankin|specfun|ladder)");
    }
    return failures == 0 ? 0 : 1;
}

int run_cache_admin(const Options& o) {
    if (o.cache_path.empty()) throw ConfigError("cache admin needs --cache <path>");
    if (o.admin_cmd == "verify") {
        size_t n = cache::verify_file(o.cache_path);
        std::cout << "cache OK: " << n << " records, 0 bad lines\n";
    } else if (o.admin_cmd == "compact") {
        size_t removed = cache::compact_file(o.cache_path);
        std::cout << "compacted: removed " << removed << " duplicate records\n";
    } else if (o.admin_cmd == "stats") {
        auto st = cache::stats_file(o.cache_path);
        for (const auto& s : st) {
            std::cout << s.form_id << ": " << s.records << " records, d in [" << s.d_min << ", "
                      << s.d_max << "]\n  coverage:";
            for (auto [lo, hi] : s.coverage) std::cout << " [" << lo << "," << hi << "]";
            std::cout << "\n";
        }
    } else {
        throw ConfigError("cache admin verb must be verify, compact or stats");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gvlab: arithmetic measures on the modular surface"};
    app.set_config("--config", "", "plain-text `key = value` configuration file");
    app.fallthrough();
    Options o;
    if (const char* env = std::getenv("GVLAB_CACHE")) o.cache_path = env;

    // every flag lives on the top-level app so that it can follow the
    // subcommand on the command line and appear bare in a config file
    app.add_option("--disc", o.disc, "discriminant");
    app.add_option("--forms", o.forms, "form selector(s)");
    app.add_option("--dmax", o.dmax, "largest discriminant");
    app.add_option("--precision", o.precision, "working precision in digits (15..50)")
        ->check(CLI::Range(15, 50));
    app.add_option("--tol", o.tol, "identity-suite tolerance");
    app.add_option("--cache", o.cache_path, "period cache file (default $GVLAB_CACHE)");
    app.add_option("--out", o.out, "output file (default stdout)");
    app.add_flag("--json", o.as_json, "JSON output");
    app.add_option("--threads", o.threads, "worker threads for batch computation")
        ->check(CLI::Range(1, 256));
    app.add_option("--suite", o.suite, "verification suite: rankin|specfun|ladder");
    app.add_option("--r", o.r, "spectral parameter for the identity suites");
    app.add_option("--twist", o.twist, "positive fundamental twist discriminant");

    auto* classes = app.add_subcommand("classes", "class list and Pell data for one discriminant");
    auto* pell = app.add_subcommand("pell", "fundamental Pell solution");
    auto* period = app.add_subcommand("period", "per-class periods at one discriminant");
    auto* mu = app.add_subcommand("mu", "fill the period table up to dmax");
    auto* var = app.add_subcommand("variance", "running variance statistics (CSV)");
    auto* mean = app.add_subcommand("mean", "running mean statistics (CSV)");
    auto* lv = app.add_subcommand("lvalue", "central L-values");
    auto* verify = app.add_subcommand("verify", "special-function identity suites");
    auto* cacheadm = app.add_subcommand("cache", "cache administration");
    cacheadm->add_option("verb", o.admin_cmd, "verify|compact|stats")->required();
    for (CLI::App* sub : {classes, pell, period, mu, var, mean, lv, verify, cacheadm})
        sub->fallthrough();

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        auto need_disc = [&] {
            if (o.disc == 0) throw ConfigError("missing required --disc");
        };
        auto need_forms = [&] {
            if (o.forms.empty()) throw ConfigError("missing required --forms");
        };
        if (classes->parsed() || pell->parsed() || period->parsed()) need_disc();
        if (period->parsed() || mu->parsed() || var->parsed() || mean->parsed() ||
            lv->parsed())
            need_forms();
        if ((mu->parsed() || var->parsed() || mean->parsed()) && o.dmax < 5)
            throw ConfigError("--dmax must be at least 5");
        if (classes->parsed()) return run_classes(o);
        if (pell->parsed()) return run_pell(o);
        if (period->parsed()) return run_period(o);
        if (mu->parsed()) return run_mu(o);
        if (var->parsed()) return run_variance(o);
        if (mean->parsed()) return run_mean(o);
        if (lv->parsed()) return run_lvalue(o);
        if (verify->parsed()) return run_verify(o);
        if (cacheadm->parsed()) return run_cache_admin(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
