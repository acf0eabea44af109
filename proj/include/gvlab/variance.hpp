#ifndef GVLAB_VARIANCE_HPP
#define GVLAB_VARIANCE_HPP

#include <iosfwd>
#include <optional>

#include "gvlab/lfun.hpp"
#include "gvlab/periods.hpp"

namespace gvlab::variance {

using Cplx = std::complex<double>;

// V^sym on the unit spherical vector: |Gamma(1/4+ir)|^4 / (2 pi
// |Gamma(1/2+2ir)|^2) * norm, with r = R/2 (Laplace eigenvalue 1/4 + R^2).
double v_sym_spherical(double spectral_R, double norm);

// V^sym on the unit lowest-weight vector: (1/2) 2^w B(w/2, w/2) for
// w = 0 mod 4; exactly 0 for w = 2 mod 4.
double v_sym_discrete(int weight);

struct LadderSpec {
    enum Kind { spherical, discrete } kind = spherical;
    Cplx s{0, 0};  // spherical parameter, on iR or in (-1,1)
    int m0 = 12;   // discrete lowest weight, even
};

// eta(phi_n) / eta(phi_minimal) for the A- and time-reversal-invariant
// functional; zero on the weights killed by time reversal.
Cplx ladder_ratio(const LadderSpec& spec, int64_t n);

struct VarianceRow {
    int64_t y = 0;
    int64_t count = 0;        // #{valid d <= y}
    double b_sharp = 0;       // (1/count) sum Re(z1 conj z2)
    double b_flat = 0;        // (1/y) sum
    double target = 0;        // c(k) L(1/2) V^sym
    double ratio_sharp = 0;   // b_sharp / target (0 when target = 0)
    double ratio_flat = 0;
    double mean = 0;          // running mean of Re z1
};

struct VarianceReport {
    std::string form1, form2;
    std::vector<VarianceRow> rows;
    double c_const = 0;       // c(k): 6/pi spherical, 1/pi holomorphic
    double lvalue = 0;        // L(1/2, f) (analytic normalization)
    double vsym_unit = 0;     // V^sym on the unit minimal vector
    double petersson = 0;     // <f,f>
    double dict = 1;          // Petersson-dictionary constant (reported, not absorbed)
    double target = 0;        // c * L * vsym_unit * petersson * dict
    Cplx b_sharp_final, b_flat_final;
    double last_decade_spread = 0;  // max/min - 1 of ratio_flat over [ymax/10, ymax]
    double block_fluctuation = 0;   // rms of window-restricted flat ratios
};

struct RunOptions {
    int threads = 1;
    double node_scale = 1.0;
    double dict_holomorphic = 1.0;
    double dict_maass = 1.0;
    int grid_per_decade = 12;
    std::function<void(size_t, size_t)> progress;
};

// Running variance statistics of mu_d(F1) conj(mu_d(F2)) / sqrt(d) up to
// y_max, under both averaging conventions. Fills missing periods through
// the cache.
VarianceReport variance_run(const periods::Form& f1, const periods::Form& f2, int64_t y_max,
                            cache::PeriodCache& cache, const RunOptions& opt = {});

struct MeanRow {
    int64_t y = 0;
    int64_t count = 0;
    double mean = 0;      // running mean of mu_d / d^{1/4}
    double partial = 0;   // running sum (for the N^{1/2+eps} diagnostic)
};

std::vector<MeanRow> mean_run(const periods::Form& f, int64_t y_max,
                              cache::PeriodCache& cache, const RunOptions& opt = {});

// Rankin-Selberg identity suite at spectral parameter r: (a) the R+/R-
// Gamma-ratio reconstructed from cross-Whittaker integrals, (b) the digamma
// chain, (c) the residue bookkeeping with <F,F> symbolic; also the two
// cross-integral closed forms themselves.
struct RankinReport {
    double r = 0;
    double resid_ratio = 0;     // (a)
    double resid_digamma = 0;   // (b)
    double resid_residue = 0;   // (c)
    double resid_cross_plus = 0;   // quadrature vs closed form, + pair
    double resid_cross_minus = 0;  // quadrature vs closed form, - pair
    double resid_sq_plus = 0;      // int W_{1/4}^2 dy/y vs digamma closed form
    double resid_sq_minus = 0;     // int W_{-1/4}^2 dy/y vs digamma closed form
    double max_resid() const;
};

RankinReport rankin_identity_suite(double r);

// CSV per the external interface:
// Y,count,B_emp_sharp,B_emp_flat,target,ratio_sharp,ratio_flat,mean
void write_variance_csv(const VarianceReport& rep, std::ostream& os);
void write_mean_csv(const std::vector<MeanRow>& rows, std::ostream& os);

}  // namespace gvlab::variance

#endif
