#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "mmcoop/errors.hpp"

namespace mmcoop::specfun {

using Complex = std::complex<double>;

/*! Gauss hypergeometric function 2F1(a,b;c;z), principal branch (cut on [1,inf)).
 *
 * Evaluation routes through the Maclaurin series for |z| <= 0.9 (with an Euler
 * transformation when it shrinks the parameters), the z/(z-1) transformation,
 * and the 1/z transformation including the logarithmic limit formulas required
 * when a-b is an integer. Accuracy is ~1e-10 relative or better for z bounded
 * away from the unit circle.
 */
Complex hyp2f1(double a, double b, double c, Complex z);

/*! Real-argument convenience overload; requires z < 1. */
double hyp2f1(double a, double b, double c, double z);

/*! Regularized lower incomplete gamma P(k,x) = gamma(k,x)/Gamma(k). */
double reg_lower_gamma(double k, double x);

/*! Digamma function, real argument, poles excluded. */
double digamma(double x);

enum class QuadratureKind { GaussLaguerre, GaussLegendre };

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    QuadratureKind kind;
};

/*! n-point rule for integral over (0,inf) with weight exp(-x). */
QuadratureRule gauss_laguerre(int n);

/*! n-point rule for integral over (-1,1) with unit weight. */
QuadratureRule gauss_legendre(int n);

struct GilPelaezControl {
    double omega_max = 0.0; // 0 = pick adaptively from the decay of char_fn
    int max_panels = 2000;
    double abs_tol = 1e-9;
};

struct GilPelaezResult {
    double value = 0.0;          // CDF estimate, clamped to [0,1] once converged
    double tail_estimate = 0.0;  // bound on the neglected tail
    int panels = 0;
    bool truncated = false;      // tail had not decayed when integration stopped
};

/*! CDF recovery from a characteristic function phi(omega) = E[exp(j*omega*X)]:
 *
 *   F(t) = 1/2 - (1/pi) * Int_0^inf Im{exp(-j*omega*t) * phi(omega)} / omega d(omega)
 *
 * integrated on log-spaced Gauss-Legendre panels whose width is capped at half
 * an oscillation period, with averaged partial sums for slowly decaying tails.
 */
GilPelaezResult gil_pelaez_cdf(const std::function<Complex(double)> &char_fn, double t,
                               const GilPelaezControl &ctrl = {});

} // namespace mmcoop::specfun
