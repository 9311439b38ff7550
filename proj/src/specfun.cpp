#include "mmcoop/specfun.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

namespace mmcoop::specfun {

namespace {

constexpr int kMaxIter = 10000;
constexpr double kSeriesTol = 1e-15;
// Below this distance a-b (or c-a) is treated as the exact integer: the generic
// transformation formulas lose all significance from Gamma-pole cancellation.
constexpr double kIntTol = 1e-8;

bool is_nonpos_int(double x) { return x == std::trunc(x) && x <= 0.0; }

bool is_neg_int(double x) { return x == std::trunc(x) && x < 0.0; }

double gammasgn(double x) {
    if (x > 0.0) {
        return 1.0;
    }
    return std::sin(M_PI * x) >= 0.0 ? 1.0 : -1.0;
}

/*! 1/Gamma(x) as an entire function: zero at the poles of Gamma. */
double rgamma(double x) {
    if (is_nonpos_int(x)) {
        return 0.0;
    }
    if (std::abs(x) < 170.0) {
        double g = std::tgamma(x);
        if (std::isfinite(g) && g != 0.0) {
            return 1.0 / g;
        }
    }
    return gammasgn(x) * std::exp(-std::lgamma(x));
}

double poch(double x, int m) {
    double out = 1.0;
    for (int j = 0; j < m; ++j) {
        out *= x + j;
    }
    return out;
}

/*! Gamma(u)*Gamma(v) / (Gamma(w)*Gamma(x)), poles in the numerator rejected. */
double four_gammas(double u, double v, double w, double x) {
    if (is_nonpos_int(u) || is_nonpos_int(v)) {
        throw NumericalError("hyp2f1: gamma pole in transformation prefactor");
    }
    if (std::abs(u) <= 100.0 && std::abs(v) <= 100.0 && std::abs(w) <= 100.0 &&
        std::abs(x) <= 100.0) {
        double r = std::tgamma(u) * std::tgamma(v) * rgamma(w) * rgamma(x);
        if (std::isfinite(r)) {
            return r;
        }
    }
    double sign = gammasgn(u) * gammasgn(v) * gammasgn(w) * gammasgn(x);
    return sign * std::exp(std::lgamma(u) + std::lgamma(v) - std::lgamma(w) - std::lgamma(x));
}

std::string fmt_ctx(double a, double b, double c, Complex z) {
    std::ostringstream os;
    os << "2F1(a=" << a << ", b=" << b << ", c=" << c << ", z=" << z.real();
    if (z.imag() >= 0.0) {
        os << "+" << z.imag() << "j)";
    } else {
        os << z.imag() << "j)";
    }
    return os.str();
}

/*! Maclaurin series, converged when two consecutive terms are negligible. */
Complex maclaurin(double a, double b, double c, Complex z) {
    Complex term = 1.0;
    Complex sum = 1.0;
    int small = 0;
    for (int k = 0; k < kMaxIter; ++k) {
        term *= (a + k) * (b + k) / ((k + 1.0) * (c + k)) * z;
        sum += term;
        if (std::abs(term) <= kSeriesTol * std::abs(sum)) {
            if (++small >= 2) {
                return sum;
            }
        } else {
            small = 0;
        }
    }
    throw NumericalError("series cap exceeded in " + fmt_ctx(a, b, c, z));
}

Complex maclaurin_fixed(double a, double b, double c, Complex z, int nterms) {
    Complex term = 1.0;
    Complex sum = 1.0;
    for (int k = 0; k + 1 < nterms; ++k) {
        term *= (a + k) * (b + k) / ((k + 1.0) * (c + k)) * z;
        sum += term;
    }
    return sum;
}

/*! 1/z transformation in the limit a - b -> m >= 0 (DLMF 15.8.8 rearranged). */
Complex inverse_degenerate(double a, double b, double c, int m, Complex z) {
    Complex result = 0.0;
    if (m > 0) {
        double term = std::tgamma(m) * rgamma(c - b);
        Complex s = 0.0;
        Complex zk = 1.0;
        for (int k = 0; k < m; ++k) {
            s += term * zk;
            if (k + 1 < m) {
                term *= (b + k) * (c - b - k - 1) / ((k + 1.0) * (m - k - 1.0));
                zk /= z;
            }
        }
        result += std::tgamma(c) * rgamma(a) * std::pow(-z, -b) * s;
    }

    Complex prefactor = std::tgamma(c) * rgamma(a) * rgamma(c - b) * std::pow(-z, -a);
    Complex lz = std::log(-z);
    double n_real = c - a;
    bool n_int = std::abs(n_real - std::round(n_real)) < kIntTol && std::round(n_real) > 0.0;

    double factor0 = poch(b, m) * poch(1.0 - c + b, m) * rgamma(m + 1.0);
    double d1 = digamma(1.0);
    double d2 = digamma(1.0 + m);
    double d3 = digamma(a);
    Complex s = 0.0;
    int small = 0;

    if (n_int) {
        // psi(c-a-k) develops poles once k >= n = c-a; the series continues with
        // the finite psi/Gamma limit terms, which lose the logarithm.
        int n = static_cast<int>(std::round(n_real));
        double d4 = digamma(static_cast<double>(n));
        Complex factor = factor0;
        for (int k = 0; k < kMaxIter; ++k) {
            Complex term;
            if (k < n) {
                term = (d1 + d2 - d3 - d4 + lz) * factor;
                d1 += 1.0 / (1.0 + k);
                d2 += 1.0 / (1.0 + m + k);
                d3 += 1.0 / (a + k);
                if (k < n - 1) {
                    d4 -= 1.0 / (n - k - 1.0);
                }
                factor *= (b + m + k) * (1.0 - c + b + m + k) / ((k + 1.0) * (m + k + 1.0));
                factor /= z;
            } else {
                if (k == n) {
                    double sign = (n % 2 == 0) ? 1.0 : -1.0;
                    factor = sign * std::tgamma(static_cast<double>(n)) * poch(b, m) *
                             poch(1.0 - m - n, m) * rgamma(m + 1.0) * poch(a, n) *
                             rgamma(n + 1.0) / poch(m + 1.0, n);
                    factor *= std::pow(z, -static_cast<double>(n));
                }
                term = factor;
                factor *= (b + m + k) * (k + a - c + 1.0) / ((k + 1.0) * (m + k + 1.0));
                factor /= z;
            }
            s += term;
            if (std::abs(term) <= kSeriesTol * std::abs(s)) {
                if (++small >= 2 && k >= n) {
                    return result + prefactor * s;
                }
            } else {
                small = 0;
            }
        }
        throw NumericalError("series cap exceeded in " + fmt_ctx(a, b, c, z));
    }

    double d4 = digamma(c - a);
    Complex factor = factor0;
    for (int k = 0; k < kMaxIter; ++k) {
        Complex term = (d1 + d2 - d3 - d4 + lz) * factor;
        s += term;
        if (std::abs(term) <= kSeriesTol * std::abs(s)) {
            if (++small >= 2) {
                return result + prefactor * s;
            }
        } else {
            small = 0;
        }
        d1 += 1.0 / (1.0 + k);
        d2 += 1.0 / (1.0 + m + k);
        d3 += 1.0 / (a + k);
        d4 -= 1.0 / (c - a - k - 1.0);
        factor *= (b + m + k) * (1.0 - c + b + m + k) / ((k + 1.0) * (m + k + 1.0));
        factor /= z;
    }
    throw NumericalError("series cap exceeded in " + fmt_ctx(a, b, c, z));
}

Complex inverse_transform(double a, double b, double c, Complex z) {
    double d = a - b;
    if (std::abs(d - std::round(d)) < kIntTol) {
        if (b > a) {
            std::swap(a, b);
        }
        return inverse_degenerate(a, b, c, static_cast<int>(std::round(std::abs(d))), z);
    }
    Complex w = 1.0 / z;
    Complex f1 = four_gammas(c, b - a, b, c - a) * std::pow(-z, -a);
    Complex f2 = four_gammas(c, a - b, a, c - b) * std::pow(-z, -b);
    return f1 * maclaurin(a, a - c + 1.0, a - b + 1.0, w) +
           f2 * maclaurin(b, b - c + 1.0, b - a + 1.0, w);
}

Complex pfaff_transform(double a, double b, double c, Complex z) {
    if (std::abs(b) < std::abs(a)) {
        std::swap(a, b);
    }
    return std::pow(1.0 - z, -a) * maclaurin(a, c - b, c, z / (z - 1.0));
}

Complex series_direct(double a, double b, double c, Complex z) {
    if (c - a < a && c - b < b) {
        return std::pow(1.0 - z, c - a - b) * maclaurin(c - a, c - b, c, z);
    }
    return maclaurin(a, b, c, z);
}

} // namespace

double digamma(double x) {
    if (is_nonpos_int(x)) {
        throw DomainError("digamma pole at nonpositive integer");
    }
    if (x < 0.0) {
        return digamma(1.0 - x) - M_PI / std::tan(M_PI * x);
    }
    double result = 0.0;
    while (x < 10.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    double inv = 1.0 / x;
    double inv2 = inv * inv;
    result += std::log(x) - 0.5 * inv -
              inv2 * (1.0 / 12.0 -
                      inv2 * (1.0 / 120.0 -
                              inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
    return result;
}

Complex hyp2f1(double a, double b, double c, Complex z) {
    if (is_nonpos_int(c)) {
        throw DomainError("hyp2f1: c is a nonpositive integer in " + fmt_ctx(a, b, c, z));
    }
    if (a == 0.0 || b == 0.0 || z == Complex(0.0)) {
        return 1.0;
    }
    if (is_neg_int(a) || is_neg_int(b)) {
        // terminating polynomial; stop at the smaller-magnitude negative integer
        double deg;
        if (is_neg_int(a) && is_neg_int(b)) {
            deg = -std::max(a, b);
        } else if (is_neg_int(a)) {
            deg = -a;
        } else {
            deg = -b;
        }
        return maclaurin_fixed(a, b, c, z, static_cast<int>(deg) + 1);
    }
    if (c == a) {
        return std::pow(1.0 - z, -b);
    }
    if (c == b) {
        return std::pow(1.0 - z, -a);
    }
    if (is_neg_int(c - a) || is_neg_int(c - b)) {
        // Euler transformation turns these into a polynomial
        double deg = is_neg_int(c - b) ? -(c - b) : -(c - a);
        return std::pow(1.0 - z, c - a - b) *
               maclaurin_fixed(c - a, c - b, c, z, static_cast<int>(deg) + 2);
    }

    double az = std::abs(z);
    double aw = std::abs(z / (z - 1.0));
    double ainv = 1.0 / az;

    if (az <= 0.9) {
        return series_direct(a, b, c, z);
    }
    if (aw <= 0.9) {
        return pfaff_transform(a, b, c, z);
    }
    if (ainv <= 0.9) {
        return inverse_transform(a, b, c, z);
    }
    if (az < 0.99) {
        return series_direct(a, b, c, z);
    }
    if (aw < 0.99) {
        return pfaff_transform(a, b, c, z);
    }
    if (ainv < 0.99) {
        return inverse_transform(a, b, c, z);
    }
    throw NumericalError("no convergent expansion near the unit circle for " +
                         fmt_ctx(a, b, c, z));
}

double hyp2f1(double a, double b, double c, double z) {
    if (z >= 1.0) {
        throw DomainError("real-argument hyp2f1 requires z < 1");
    }
    return hyp2f1(a, b, c, Complex(z, 0.0)).real();
}

double reg_lower_gamma(double k, double x) {
    if (!(k > 0.0)) {
        throw DomainError("reg_lower_gamma requires k > 0");
    }
    if (!(x >= 0.0)) {
        throw DomainError("reg_lower_gamma requires x >= 0");
    }
    if (x == 0.0) {
        return 0.0;
    }
    double log_prefix = k * std::log(x) - x - std::lgamma(k);
    if (x < k + 1.0) {
        // lower series
        double ap = k;
        double del = 1.0 / k;
        double sum = del;
        for (int i = 0; i < kMaxIter; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-16) {
                return sum * std::exp(log_prefix);
            }
        }
        throw NumericalError("reg_lower_gamma series cap");
    }
    // Lentz continued fraction for the upper tail
    const double tiny = 1e-300;
    double b = x + 1.0 - k;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = -i * (i - k);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) {
            return 1.0 - std::exp(log_prefix) * h;
        }
    }
    throw NumericalError("reg_lower_gamma continued fraction cap");
}

namespace {

QuadratureRule golub_welsch(int n, QuadratureKind kind) {
    auto diag = [kind](int i) {
        return kind == QuadratureKind::GaussLaguerre ? 2.0 * i + 1.0 : 0.0;
    };
    auto offdiag = [kind](int i) {
        if (kind == QuadratureKind::GaussLaguerre) {
            return i + 1.0;
        }
        double k = i + 1.0;
        return k / std::sqrt(4.0 * k * k - 1.0);
    };
    double mu0 = kind == QuadratureKind::GaussLaguerre ? 1.0 : 2.0;

    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        jacobi(i, i) = diag(i);
        if (i + 1 < n) {
            jacobi(i, i + 1) = jacobi(i + 1, i) = offdiag(i);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);

    QuadratureRule rule;
    rule.kind = kind;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // w_i = mu0 / sum_k p_k(x_i)^2 over the orthonormal polynomials; the
        // eigenvector route loses tiny Laguerre weights to rounding noise.
        double x = solver.eigenvalues()(i);
        double p_prev = 0.0;
        double p_cur = 1.0;
        double ssum = 1.0;
        double log_rescale = 0.0;
        for (int k = 1; k < n; ++k) {
            double p_next = ((x - diag(k - 1)) * p_cur - (k > 1 ? offdiag(k - 2) : 0.0) * p_prev) /
                            offdiag(k - 1);
            p_prev = p_cur;
            p_cur = p_next;
            ssum += p_cur * p_cur;
            if (std::abs(p_cur) > 1e120) {
                p_prev *= 1e-120;
                p_cur *= 1e-120;
                ssum *= 1e-240;
                log_rescale += std::log(1e120);
            }
        }
        double logw = std::log(mu0) - (2.0 * log_rescale + std::log(ssum));
        double w = std::exp(logw);
        if (w == 0.0) {
            // weights beyond ~e^-745 underflow double precision; keep them
            // strictly positive instead of silently dropping the node
            w = std::numeric_limits<double>::denorm_min();
        }
        rule.nodes[i] = x;
        rule.weights[i] = w;
    }
    return rule;
}

} // namespace

QuadratureRule gauss_laguerre(int n) {
    if (n < 1 || n > 256) {
        throw DomainError("gauss_laguerre order must be in [1, 256]");
    }
    return golub_welsch(n, QuadratureKind::GaussLaguerre);
}

QuadratureRule gauss_legendre(int n) {
    if (n < 1 || n > 256) {
        throw DomainError("gauss_legendre order must be in [1, 256]");
    }
    return golub_welsch(n, QuadratureKind::GaussLegendre);
}

namespace {

const QuadratureRule &panel_rule() {
    static const QuadratureRule rule = gauss_legendre(32);
    return rule;
}

/*! Repeated pairwise averaging of the recent partial sums; for an alternating
 * sequence of panel contributions this converges like an Euler transform. */
double averaged(const std::deque<double> &window) {
    std::vector<double> v(window.begin(), window.end());
    while (v.size() > 1) {
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            v[i] = 0.5 * (v[i] + v[i + 1]);
        }
        v.pop_back();
    }
    return v.front();
}

} // namespace

GilPelaezResult gil_pelaez_cdf(const std::function<Complex(double)> &char_fn, double t,
                               const GilPelaezControl &ctrl) {
    // decay scale of |phi|: first omega with |phi| <= 1/2 on a geometric scan
    double omega_d = 0.0;
    double probe = 1e-8;
    for (int i = 0; i < 110; ++i) {
        if (std::abs(char_fn(probe)) <= 0.5) {
            omega_d = probe;
            break;
        }
        probe *= 2.0;
    }
    if (omega_d == 0.0) {
        omega_d = std::max(1.0, std::abs(t));
    }
    // small-omega rotation rate of the integrand e^{-jwt} phi(w); for
    // characteristic functions of signed mixtures this bounds the asymptotic
    // rate, which settles toward |t|
    double delta_probe = omega_d * 1e-3;
    double mu_hat = std::abs(std::arg(char_fn(delta_probe))) / delta_probe;
    double rate_cap = std::abs(t) + mu_hat;

    const QuadratureRule &gl = panel_rule();
    const double tol_gate = 0.5 * M_PI * ctrl.abs_tol;
    double lo = 0.0;
    double width = omega_d / 16.0;
    if (rate_cap > 0.0) {
        width = std::min(width, 0.25 * M_PI / rate_cap);
    }
    Complex h_lo(1.0, 0.0);
    double integral = 0.0;
    double comp = 0.0; // Kahan correction
    std::deque<double> window;
    double prev_avg = 0.0;
    bool have_avg = false;
    int converged_osc = 0;
    int converged_abs = 0;
    double rate_run = rate_cap;
    GilPelaezResult out;

    for (int panel = 0; panel < ctrl.max_panels; ++panel) {
        double hi = lo + width;
        double half = 0.5 * width;
        double mid = lo + half;
        double contrib = 0.0;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            double w = mid + half * gl.nodes[i];
            Complex phi = char_fn(w);
            double g = std::imag(std::exp(Complex(0.0, -w * t)) * phi) / w;
            contrib += gl.weights[i] * g;
        }
        contrib *= half;
        double y = contrib - comp;
        double tt = integral + y;
        comp = (tt - integral) - y;
        integral = tt;
        out.panels = panel + 1;

        Complex h_hi = std::exp(Complex(0.0, -hi * t)) * char_fn(hi);
        double abs_phi_hi = std::abs(h_hi);
        double dpsi = 0.0;
        if (abs_phi_hi > 0.0 && std::abs(h_lo) > 0.0) {
            dpsi = std::abs(std::arg(h_hi / h_lo));
        }
        bool oscillatory = dpsi >= 0.5;
        lo = hi;
        h_lo = h_hi;

        if (ctrl.omega_max > 0.0 && lo >= ctrl.omega_max) {
            out.truncated = !(std::abs(contrib) <= tol_gate && abs_phi_hi / lo < 1e-10);
            out.tail_estimate = std::abs(contrib) / M_PI;
            double est = (have_avg && oscillatory) ? prev_avg : integral;
            out.value = 0.5 - est / M_PI;
            if (!out.truncated) {
                out.value = std::clamp(out.value, 0.0, 1.0);
            }
            return out;
        }

        if (oscillatory) {
            window.push_back(integral);
            if (window.size() > 24) {
                window.pop_front();
            }
            double avg = averaged(window);
            if (have_avg && window.size() >= 6) {
                double delta = std::abs(avg - prev_avg);
                if (delta <= tol_gate) {
                    if (++converged_osc >= 2) {
                        out.tail_estimate = (delta + 0.1 * std::abs(contrib)) / M_PI;
                        out.value = std::clamp(0.5 - avg / M_PI, 0.0, 1.0);
                        return out;
                    }
                } else {
                    converged_osc = 0;
                }
            }
            prev_avg = avg;
            have_avg = true;
            converged_abs = 0;
        } else {
            if (std::abs(contrib) <= tol_gate &&
                (abs_phi_hi / lo < 1e-10 || abs_phi_hi <= ctrl.abs_tol)) {
                if (++converged_abs >= 2) {
                    out.tail_estimate = std::abs(contrib) / M_PI;
                    out.value = std::clamp(0.5 - integral / M_PI, 0.0, 1.0);
                    return out;
                }
            } else {
                converged_abs = 0;
            }
        }

        // steer the panel width toward ~0.9 pi of measured phase rotation so
        // consecutive contributions alternate and the averaging locks on; the
        // |t| floor keeps a panel under one half-turn even if the rotation
        // rate later rises back toward |t|
        double next = 2.0 * width;
        if (dpsi > 0.05) {
            double measured_rate = dpsi / width;
            rate_run = std::max(measured_rate, std::abs(t));
            next = std::min(next, 2.8 / rate_run);
        } else if (rate_run > 0.0) {
            // flat phase: the remembered rate is stale, and the only rotation
            // still guaranteed ahead is the e^{-jwt} factor; relax toward it
            // so the cap cannot pin the width for slowly decaying moduli
            rate_run = std::max(0.5 * rate_run, std::abs(t));
            next = std::min(next, 2.8 / rate_run);
        }
        if (dpsi > 2.82) {
            next = std::min(next, width * 2.4 / dpsi);
        }
        next = std::min(next, 0.7 * (lo + omega_d));
        if (std::abs(t) > 0.0) {
            next = std::min(next, M_PI / std::abs(t));
        }
        width = next;
    }
    throw NumericalError("gil_pelaez_cdf: panel cap exceeded before convergence");
}

} // namespace mmcoop::specfun
