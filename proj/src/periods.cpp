#include "gvlab/periods.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <unordered_map>

#include "gvlab/geodesics.hpp"
#include "gvlab/quadrature.hpp"

namespace gvlab::periods {

namespace {

const qforms::PellSolution& pell_cached(int64_t d) {
    static thread_local std::unordered_map<int64_t, qforms::PellSolution> memo;
    auto it = memo.find(d);
    if (it == memo.end()) it = memo.emplace(d, qforms::pell_fundamental(d)).first;
    return it->second;
}

struct Circle {
    double x0, rho, sigma;  // z(t) = x0 + rho (sigma tanh t + i sech t)
    explicit Circle(const QuadForm& q) {
        x0 = static_cast<double>(q.b) / (2.0 * q.c);
        rho = std::sqrt(static_cast<double>(q.disc())) / (2.0 * std::abs(double(q.c)));
        sigma = q.c < 0 ? 1.0 : -1.0;
    }
    Cplx apex() const { return {x0, rho}; }
    // flow time of a point known to lie on the circle; cosh t = rho / Im z is
    // well conditioned far down the arc, where tanh t = +-(1 - eps) is not
    double time_of(Cplx z) const {
        double mag = std::acosh(std::max(1.0, rho / z.imag()));
        double side = sigma * (z.real() - x0);
        return side < 0 ? -mag : mag;
    }
};

}  // namespace

std::vector<TripPiece> trip_pieces(const QuadForm& q_in) {
    QuadForm q0 = qforms::reduce_form(q_in.primitive_part());
    auto walk = qforms::cycle_walk(q0);
    const size_t L = walk.forms.size();
    std::vector<TripPiece> pieces(L);
    double total = 0;
    for (size_t j = 0; j < L; ++j) {
        const QuadForm& prev = walk.forms[j];
        const QuadForm& next = walk.forms[(j + 1) % L];
        Circle cp(prev);
        Cplx wend = geodesics::mobius(walk.steps[j], Circle(next).apex());
        double t_end = cp.time_of(wend);
        if (!(t_end < 0))
            throw NumericalError("rho-cycle piece runs with the flow; orientation bug");
        pieces[j] = {prev, t_end};
        total += -t_end;
    }
    const double len = static_cast<double>(pell_cached(q0.disc()).length);
    if (std::abs(total - len) > 1e-9 * len + 1e-10 * static_cast<double>(L))
        throw NumericalError("trip length mismatch: pieces sum " + std::to_string(total) +
                             " vs 2 log eps = " + std::to_string(len));
    return pieces;
}

int64_t wraps_between(int64_t d0, int64_t d_ambient) {
    if (d_ambient == d0) return 1;
    if (d_ambient % d0 != 0) throw DomainError("ambient discriminant incompatible");
    int64_t ratio = d_ambient / d0;
    int64_t l = isqrt_floor(ratio);
    if (l * l != ratio) throw DomainError("ambient/primitive discriminant not a square");
    const auto& p0 = pell_cached(d0);
    const auto& pa = pell_cached(d_ambient);
    BigInt T = p0.t, U = p0.u;
    const BigInt Ta = pa.t, Ua = pa.u * l;
    int64_t m = 1;
    while (!(T == Ta && U == Ua)) {
        BigInt Tn = (p0.t * T + d0 * p0.u * U) / 2;
        BigInt Un = (p0.t * U + p0.u * T) / 2;
        T = Tn;
        U = Un;
        if (++m > 4096) throw NumericalError("ambient unit is not a power of eps_d0");
    }
    return m;
}

namespace {

// integral over one piece with a GL rule of the given order
template <typename Integrand>
Cplx piece_integral(const TripPiece& piece, double nodes_per_unit, int order,
                    Integrand&& fn) {
    const auto& gl = GaussLegendre::order(order);
    const double len = -piece.t_end;
    const int npanels = std::max<int>(1, static_cast<int>(std::ceil(len * nodes_per_unit / 16.0)));
    const double h = len / npanels;
    Cplx acc = 0;
    for (int p = 0; p < npanels; ++p) {
        const double a = piece.t_end + p * h;
        const double mid = a + 0.5 * h;
        for (size_t i = 0; i < gl.x.size(); ++i)
            acc += gl.w[i] * fn(mid + 0.5 * h * gl.x[i]);
    }
    return acc * (0.5 * h);
}

struct HolIntegrand {
    const modforms::HolomorphicEigenform& f;
    const QuadForm& q;
    Circle c;
    double dc2;  // disc / (2c)
    int k;

    HolIntegrand(const modforms::HolomorphicEigenform& f_, const QuadForm& q_)
        : f(f_), q(q_), c(q_), dc2(q_.disc() / (2.0 * q_.c)), k(f_.weight / 2) {}

    Cplx operator()(double t) const {
        const double ch = std::cosh(t);
        const double sh = 1.0 / ch;         // sech
        const double th = std::tanh(t);
        const Cplx z(c.x0 + c.rho * c.sigma * th, c.rho * sh);
        const Cplx Q = dc2 * sh * Cplx(-sh, c.sigma * th);
        const Cplx dz = c.rho * sh * Cplx(c.sigma * sh, -th);
        Cplx qp = 1.0;
        for (int i = 0; i < k - 1; ++i) qp *= Q;
        return modforms::eval_holomorphic(f, z, 1e-12) * qp * dz;
    }
};

struct MaassIntegrand {
    const modforms::MaassForm& phi;
    Circle c;
    MaassIntegrand(const modforms::MaassForm& phi_, const QuadForm& q_) : phi(phi_), c(q_) {}
    Cplx operator()(double t) const {
        const double sh = 1.0 / std::cosh(t);
        const double th = std::tanh(t);
        const Cplx z(c.x0 + c.rho * c.sigma * th, c.rho * sh);
        return modforms::eval_maass(phi, z, 1e-11);
    }
};

template <typename MakeIntegrand>
PeriodValue period_generic(const QuadForm& q, int64_t d_ambient, double nodes_per_unit,
                           MakeIntegrand&& make) {
    QuadForm q0 = qforms::reduce_form(q.primitive_part());
    auto pieces = trip_pieces(q0);
    const int64_t m = wraps_between(q0.disc(), d_ambient);
    Cplx fine = 0, coarse = 0;
    for (const auto& piece : pieces) {
        auto fn = make(piece.q);
        fine += piece_integral(piece, nodes_per_unit, 16, fn);
        coarse += piece_integral(piece, nodes_per_unit, 8, fn);
    }
    PeriodValue pv;
    pv.value = static_cast<double>(m) * fine;
    pv.err = static_cast<double>(m) * std::abs(fine - coarse);
    return pv;
}

}  // namespace

PeriodValue period_holomorphic(const modforms::HolomorphicEigenform& f, const QuadForm& q,
                               int64_t d_ambient, double node_scale) {
    qforms::require_discriminant(d_ambient);
    const double npu = node_scale * std::max(10.0, 1.3 * (f.weight + 2.0));
    PeriodValue pv = period_generic(q, d_ambient, npu,
                                    [&](const QuadForm& qq) { return HolIntegrand(f, qq); });
    // J(B) = disc^{-(k-1)/2} int f(z) B(1,-z)^{k-1} dz, primitive-cycle disc
    QuadForm q0 = qforms::reduce_form(q.primitive_part());
    const double norm = std::pow(static_cast<double>(q0.disc()), (f.k_half - 1) / 2.0);
    pv.value /= norm;
    pv.err /= norm;
    return pv;
}

PeriodValue period_maass(const modforms::MaassForm& phi, const QuadForm& q, int64_t d_ambient,
                         double node_scale) {
    qforms::require_discriminant(d_ambient);
    const double npu = node_scale * std::max(10.0, 1.3 * (phi.spectral_R + 2.0));
    PeriodValue pv = period_generic(q, d_ambient, npu,
                                    [&](const QuadForm& qq) { return MaassIntegrand(phi, qq); });
    if (std::abs(pv.value.imag()) > 1e-12 + 1e-6 * std::abs(pv.value.real()))
        throw NumericalError("Maass period acquired an imaginary part");
    return pv;
}

PeriodValue period(const Form& F, const QuadForm& q, int64_t d_ambient, double node_scale) {
    return F.is_holomorphic() ? period_holomorphic(*F.hol, q, d_ambient, node_scale)
                              : period_maass(*F.maass, q, d_ambient, node_scale);
}

cache::Record mu_for_disc(const Form& F, int64_t d, double node_scale) {
    auto classes = qforms::enumerate_classes(d);
    Cplx mu = 0;
    double err = 0;
    for (const auto& rep : classes.reps) {
        PeriodValue pv = period(F, rep, d, node_scale);
        mu += pv.value;
        err += pv.err;
    }
    const auto& p = pell_cached(d);
    cache::Record r;
    r.form_id = F.id();
    r.d = d;
    r.H = classes.H;
    r.t = p.t;
    r.u = p.u;
    r.value_re = mu.real();
    r.value_im = mu.imag();
    r.normalized = mu.real() / std::pow(static_cast<double>(d), 0.25);
    r.quad_err = err;
    return r;
}

BatchResult mu_batch(const Form& F, int64_t d_lo, int64_t d_hi, cache::PeriodCache& cache,
                     int threads, double node_scale,
                     const std::function<void(size_t, size_t)>& progress) {
    std::vector<int64_t> todo;
    BatchResult result;
    const std::string id = F.id();
    for (int64_t d = std::max<int64_t>(5, d_lo); d <= d_hi; ++d) {
        if (!qforms::is_discriminant(d).valid) continue;
        if (cache.has(id, d)) {
            ++result.cached;
            continue;
        }
        todo.push_back(d);
    }
    std::atomic<size_t> next{0};
    std::atomic<size_t> done{0};
    std::mutex result_mu;
    const size_t total = todo.size();
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= total) return;
            int64_t d = todo[i];
            try {
                cache::Record r = mu_for_disc(F, d, node_scale);
                cache.append(r);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(result_mu);
                result.failures.emplace_back(d, e.what());
            }
            size_t k = done.fetch_add(1) + 1;
            if (progress && (k % 256 == 0 || k == total)) {
                std::lock_guard<std::mutex> lock(result_mu);
                progress(k, total);
            }
        }
    };
    threads = std::max(1, threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    result.computed = total - result.failures.size();
    return result;
}

}  // namespace gvlab::periods
