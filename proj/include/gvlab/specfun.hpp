#ifndef GVLAB_SPECFUN_HPP
#define GVLAB_SPECFUN_HPP

#include <complex>
#include <vector>

#include "gvlab/errors.hpp"

namespace gvlab::specfun {

using Cplx = std::complex<double>;

// Principal-branch log Gamma via Stirling with argument shift; relative
// error < 1e-13 for |z| <= 100. Throws PoleAt on non-positive integers.
Cplx log_gamma(Cplx z);

Cplx gamma(Cplx z);

// |Gamma(z)|^2 = exp(2 Re log_gamma(z)), branch-free.
double gamma_abs_sq(Cplx z);

Cplx digamma(Cplx z);

// Euler Beta for positive real arguments.
double beta(double a, double b);

// K_{iR}(x) for real order parameter R and x > 0, via the cosh-transform
// integral. Relative accuracy degrades like e^{pi R/2} * 1e-19 at small x
// (cancellation); ample for R up to ~25. Underflow far in the exponential
// tail returns exact 0 and sets *underflow.
double bessel_k_imag(double R, double x, bool* underflow = nullptr);

// Precomputed-grid variant for many evaluations at a fixed R.
class BesselKiR {
  public:
    explicit BesselKiR(double R);
    double operator()(double x, bool* underflow = nullptr) const;
    double order() const { return r_; }

  private:
    void extend(double tmax) const;
    double r_;
    long double h_;
    mutable std::vector<long double> cosh_;
    mutable std::vector<long double> cos_;
};

// Whittaker W_{kappa,mu}(y), normalized as W ~ y^kappa e^{-y/2} at infinity.
// Integral representation for kappa < 1/2 - |Re mu|, upward recurrence in
// kappa otherwise.
Cplx whittaker_w(double kappa, Cplx mu, double y);

struct MellinResult {
    Cplx value;
    double error = 0;  // quadrature-difference estimate plus endpoint tail bound
};

// M(s) = int_0^infty W_{k1,mu}(y) W_{k2,nu}(y) y^{s-2} dy, Re s > 0.
// W values are cached on a fixed log-y grid, so repeated s evaluations are
// cheap. imag_budget bounds the |Im s| the grid must resolve. For large
// |Im s| the value is exponentially small by stationary-phase cancellation;
// a contour rotation y = u e^{i rotation} (0 <= rotation < pi/2) pulls the
// small factor out analytically and keeps the quadrature well conditioned.
class MellinWhittakerEvaluator {
  public:
    MellinWhittakerEvaluator(double k1, double k2, Cplx mu, Cplx nu,
                             double imag_budget = 8.0, double rotation = 0.0);
    MellinResult value(Cplx s) const;

  private:
    std::vector<double> logy_, jac_;
    std::vector<Cplx> prod_;
    std::vector<double> logy_lo_, jac_lo_;  // coarser companion grid for the
    std::vector<Cplx> prod_lo_;             // quadrature error estimate
    double y_min_;
    double rotation_ = 0.0;
};

// Single-shot M_k(s) with k1 = k2 = k (the paper's Mellin transform).
MellinResult mellin_whittaker_pair(double k, Cplx mu, Cplx nu, Cplx s);

}  // namespace gvlab::specfun

#endif
