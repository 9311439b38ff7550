#include "mmcoop/analytic.hpp"

#include "mmcoop/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <numbers>
#include <vector>

namespace mmcoop {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_zero(Complex z) { return z.real() == 0.0 && z.imag() == 0.0; }

Complex clog1p(Complex w) {
    if (std::abs(w) < 1e-8)
        return w * (1.0 - w * (0.5 - w / 3.0));
    return std::log(1.0 + w);
}

Complex cexpm1(Complex u) {
    if (std::abs(u) < 1e-8)
        return u * (1.0 + u * (0.5 + u / 6.0));
    return std::exp(u) - 1.0;
}

[[noreturn]] void rethrow_with(const NumericalError &e, const char *where, Lobe mu, LinkState nu,
                               Complex z, double x, double y) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), " [%s mu=%c nu=%c z=(%g,%g) x=%g y=%g]", where,
                  mu == Lobe::Main ? 'M' : 'S', nu == LinkState::LOS ? 'L' : 'N', z.real(),
                  z.imag(), x, y);
    throw NumericalError(std::string(e.what()) + buf);
}

struct LinkConsts {
    double a, alpha, n;
};

LinkConsts link_consts(const LtContext &ctx, Lobe mu, LinkState nu) {
    return {ctx.a(mu, nu), ctx.channel.alpha(nu), ctx.channel.nakagami(nu)};
}

} // namespace

LtContext make_lt_context(const ChannelParams &channel, const AntennaPattern &pattern,
                          double p_tx_watts, const NetworkGeometry &geometry) {
    if (!(p_tx_watts > 0.0))
        throw DomainError("make_lt_context: p_tx_watts must be positive");
    auto bad = channel_violations(channel);
    auto bad2 = antenna_violations(pattern);
    bad.insert(bad.end(), bad2.begin(), bad2.end());
    auto bad3 = geometry_violations(geometry);
    bad.insert(bad.end(), bad3.begin(), bad3.end());
    if (!bad.empty())
        throw DomainError("make_lt_context: " + bad.front());
    LtContext ctx;
    ctx.channel = channel;
    ctx.pattern = pattern;
    ctx.p_tx = p_tx_watts;
    ctx.lambda_b = geometry.lambda_b;
    ctx.d_e = geometry.d_e;
    ctx.a_ml = p_tx_watts * pattern.g_m * channel.c_l;
    ctx.a_mn = p_tx_watts * pattern.g_m * channel.c_n;
    ctx.a_sl = p_tx_watts * pattern.g_s * channel.c_l;
    ctx.a_sn = p_tx_watts * pattern.g_s * channel.c_n;
    ctx.p_m = pattern.p_main();
    ctx.p_s = 1.0 - ctx.p_m;
    ctx.p_l = channel.p_l;
    ctx.p_n = 1.0 - channel.p_l;
    return ctx;
}

LtContext make_lt_context(const ScenarioPoint &pt) {
    return make_lt_context(pt.channel, pt.pattern, pt.p_tx_watts, pt.geometry);
}

Complex lambda_fn(const LtContext &ctx, Lobe mu, LinkState nu, Complex z, double x, double y) {
    if (!(y > 0.0) || !(x >= y))
        throw DomainError("lambda_fn: requires x >= y > 0");
    const double area = x * x - y * y;
    if (x == y)
        return 0.0;
    const auto [a, alpha, n] = link_consts(ctx, mu, nu);
    if (is_zero(z) || a == 0.0)
        return area;
    const Complex s = z * (a / n);
    try {
        const Complex pref = (2.0 / (2.0 + alpha * n)) * std::pow(s, -n);
        auto delta = [&](double t) {
            const Complex arg = -std::pow(t, alpha) / s;
            return std::pow(t, alpha * n + 2.0) *
                   specfun::hyp2f1(n, n + 2.0 / alpha, n + 2.0 / alpha + 1.0, arg);
        };
        return pref * (delta(x) - delta(y));
    } catch (const NumericalError &e) {
        rethrow_with(e, "lambda_fn", mu, nu, z, x, y);
    }
}

Complex xi_fn(const LtContext &ctx, Lobe mu, Complex z, double x) {
    if (!(x > 0.0))
        throw DomainError("xi_fn: requires x > 0");
    const auto [a, alpha, n] = link_consts(ctx, mu, LinkState::NLOS);
    if (is_zero(z) || a == 0.0)
        return 0.0;
    const Complex w = z * (a / n) * std::pow(x, -alpha);
    try {
        const Complex beta = (x * x) * cexpm1(-n * clog1p(w));
        const Complex tail = a * z * alpha * std::pow(x, 2.0 - alpha) / (alpha - 2.0) *
                             specfun::hyp2f1(1.0 - 2.0 / alpha, 1.0 + n, 2.0 - 2.0 / alpha, -w);
        return beta + tail;
    } catch (const NumericalError &e) {
        rethrow_with(e, "xi_fn", mu, LinkState::NLOS, z, x, x);
    }
}

Complex theta_fn(const LtContext &ctx, Lobe mu, LinkState nu, Complex z, double x) {
    const double d = ctx.channel.d_los;
    if (!(x > 0.0) || !(x <= d))
        throw DomainError("theta_fn: requires 0 < x <= d_los");
    return d * d - x * x - lambda_fn(ctx, mu, nu, z, d, x);
}

Complex lt_signal_fnc(const LtContext &ctx, int m, double r, Complex z) {
    if (m < 1)
        throw DomainError("lt_signal_fnc: m must be >= 1");
    if (!(r > ctx.d_e))
        throw DomainError("lt_signal_fnc: r must exceed d_e");
    const double d = ctx.channel.d_los;
    const double d_e = ctx.d_e;
    const double rd = std::min(r, d);
    Complex num = 0.0;
    if (rd > d_e)
        num += ctx.p_l * lambda_fn(ctx, Lobe::Main, LinkState::LOS, z, rd, d_e) +
               ctx.p_n * lambda_fn(ctx, Lobe::Main, LinkState::NLOS, z, rd, d_e);
    if (r > d)
        num += lambda_fn(ctx, Lobe::Main, LinkState::NLOS, z, r, std::max(d, d_e));
    const Complex lk = num / (r * r - d_e * d_e);
    Complex out = 1.0;
    for (int i = 0; i < m; ++i)
        out *= lk;
    return out;
}

Complex lt_interference_fnc(const LtContext &ctx, double r, Complex z) {
    if (!(r > ctx.d_e))
        throw DomainError("lt_interference_fnc: r must exceed d_e");
    const double d = ctx.channel.d_los;
    const Lobe lobes[2] = {Lobe::Main, Lobe::Side};
    const LinkState states[2] = {LinkState::LOS, LinkState::NLOS};
    // the nearest interfering BS sits exactly at radius r
    Complex i1 = 0.0;
    for (Lobe mu : lobes) {
        if (r <= d) {
            for (LinkState nu : states) {
                const auto [a, alpha, n] = link_consts(ctx, mu, nu);
                const double p_nu = nu == LinkState::LOS ? ctx.p_l : ctx.p_n;
                i1 += ctx.lobe_prob(mu) * p_nu *
                      std::pow(1.0 + z * (a / n) * std::pow(r, -alpha), -n);
            }
        } else {
            const auto [a, alpha, n] = link_consts(ctx, mu, LinkState::NLOS);
            i1 += ctx.lobe_prob(mu) * std::pow(1.0 + z * (a / n) * std::pow(r, -alpha), -n);
        }
    }
    // the field of interferers beyond r
    Complex expo = 0.0;
    for (Lobe mu : lobes) {
        Complex inner = xi_fn(ctx, mu, z, std::max(d, r));
        if (r <= d)
            for (LinkState nu : states) {
                const double p_nu = nu == LinkState::LOS ? ctx.p_l : ctx.p_n;
                inner += p_nu * theta_fn(ctx, mu, nu, z, r);
            }
        expo += ctx.lobe_prob(mu) * inner;
    }
    return i1 * std::exp(-kPi * ctx.lambda_b * expo);
}

Complex lt_signal_frc(const LtContext &ctx, double d_co, Complex z) {
    if (!(d_co > ctx.d_e))
        throw DomainError("lt_signal_frc: d_co must exceed d_e");
    const double d = ctx.channel.d_los;
    const double d_e = ctx.d_e;
    const double rd = std::min(d_co, d);
    Complex acc = 0.0;
    if (rd > d_e)
        acc += ctx.p_l * lambda_fn(ctx, Lobe::Main, LinkState::LOS, z, rd, d_e) +
               ctx.p_n * lambda_fn(ctx, Lobe::Main, LinkState::NLOS, z, rd, d_e);
    if (d_co > d)
        acc += lambda_fn(ctx, Lobe::Main, LinkState::NLOS, z, d_co, std::max(d, d_e));
    const double area = d_co * d_co - d_e * d_e;
    return std::exp(kPi * ctx.lambda_b * (acc - area));
}

Complex lt_interference_frc(const LtContext &ctx, double d_co, Complex z) {
    if (!(d_co > ctx.d_e))
        throw DomainError("lt_interference_frc: d_co must exceed d_e");
    const double d = ctx.channel.d_los;
    const Lobe lobes[2] = {Lobe::Main, Lobe::Side};
    const LinkState states[2] = {LinkState::LOS, LinkState::NLOS};
    Complex expo = 0.0;
    for (Lobe mu : lobes) {
        Complex inner = xi_fn(ctx, mu, z, std::max(d, d_co));
        if (d_co <= d)
            for (LinkState nu : states) {
                const double p_nu = nu == LinkState::LOS ? ctx.p_l : ctx.p_n;
                inner += p_nu * theta_fn(ctx, mu, nu, z, d_co);
            }
        expo += ctx.lobe_prob(mu) * inner;
    }
    return std::exp(-kPi * ctx.lambda_b * expo);
}

double average_over_dm1(double lambda_b, double d_e, int m, double d_split,
                        const std::function<double(double)> &fn, int order, bool parallel) {
    if (m < 1)
        throw DomainError("average_over_dm1: m must be >= 1");
    if (order < 1 || order > 256)
        throw DomainError("average_over_dm1: order out of range");
    if (!(lambda_b > 0.0) || !(d_e > 0.0))
        throw DomainError("average_over_dm1: invalid geometry");
    const double lp = kPi * lambda_b;
    const double x_d = d_split > d_e ? lp * (d_split * d_split - d_e * d_e) : 0.0;
    // d_(m+1) maps to an Erlang(m+1) area coordinate: density x^m e^-x / m!
    const double lg = std::lgamma(m + 1.0);
    std::vector<double> xs, coefs;
    if (x_d > 0.0) {
        const int panels = std::max(2, static_cast<int>(std::ceil(x_d * order / 512.0)));
        const auto gl = specfun::gauss_legendre(16);
        for (int p = 0; p < panels; ++p) {
            const double a = x_d * p / panels;
            const double b = x_d * (p + 1) / panels;
            const double half = 0.5 * (b - a);
            const double mid = 0.5 * (a + b);
            for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
                const double x = mid + half * gl.nodes[i];
                const double lc = std::log(half * gl.weights[i]) - x - lg + m * std::log(x);
                xs.push_back(x);
                coefs.push_back(std::exp(lc));
            }
        }
    }
    const auto lag = specfun::gauss_laguerre(order);
    for (std::size_t i = 0; i < lag.nodes.size(); ++i) {
        const double x = x_d + lag.nodes[i];
        const double lc = std::log(lag.weights[i]) - x_d - lg + m * std::log(x);
        xs.push_back(x);
        coefs.push_back(std::exp(lc));
    }
    double csum = 0.0;
    for (double c : coefs)
        csum += c;
    // nodes with negligible mass are skipped; fn stays bounded on this scale
    const double cutoff = 1e-16 * csum;
    std::vector<double> vals(xs.size(), 0.0);
    std::exception_ptr first_error = nullptr;
    std::atomic<bool> failed{false};
    const int count = static_cast<int>(xs.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int i = 0; i < count; ++i) {
        if (failed.load(std::memory_order_relaxed) || coefs[static_cast<std::size_t>(i)] < cutoff)
            continue;
        try {
            const double r = std::sqrt(d_e * d_e + xs[static_cast<std::size_t>(i)] / lp);
            vals[static_cast<std::size_t>(i)] = fn(r);
        } catch (...) {
#pragma omp critical(mmcoop_node_error)
            if (!first_error)
                first_error = std::current_exception();
            failed.store(true, std::memory_order_relaxed);
        }
    }
    if (first_error)
        std::rethrow_exception(first_error);
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double y = coefs[i] * vals[i] - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

namespace {

/*! Transform-domain rate integral over z = e^u; the dz/z measure is absorbed
 * by the substitution, so the z->0 end decays like z*E[T] with no singular
 * limit to take. */
double rate_z_integral(const std::function<Complex(Complex)> &lt_t,
                       const std::function<Complex(Complex)> &lt_i, double n0,
                       const RateIntegralControls &ctrl) {
    auto integrand = [&](double u) {
        const double z = std::exp(u);
        if (n0 * z > 700.0)
            return 0.0;
        const double damp = std::exp(-n0 * z);
        const double lt = lt_t(Complex(z, 0.0)).real();
        const double li = lt_i(Complex(z, 0.0)).real();
        return (1.0 - lt) * li * damp;
    };
    const double center = -std::log(n0);
    const double scan_lo = center - 55.0;
    const double scan_hi = center + 10.0;
    const int scan_n = static_cast<int>(scan_hi - scan_lo) + 1;
    std::vector<double> scan(static_cast<std::size_t>(scan_n));
    double max_abs = 0.0;
    for (int i = 0; i < scan_n; ++i) {
        scan[static_cast<std::size_t>(i)] = integrand(scan_lo + i);
        max_abs = std::max(max_abs, std::abs(scan[static_cast<std::size_t>(i)]));
    }
    // 1 - lt is a subtraction from 1, so a scan that never clears the noise
    // floor means the rate is zero at double precision
    if (max_abs <= 1e-13)
        return 0.0;
    const double threshold = ctrl.z_tail_threshold * max_abs;
    int lo = 0, hi = scan_n - 1;
    while (lo < scan_n - 1 && std::abs(scan[static_cast<std::size_t>(lo)]) < threshold)
        ++lo;
    while (hi > 0 && std::abs(scan[static_cast<std::size_t>(hi)]) < threshold)
        --hi;
    double u_lo = scan_lo + lo, u_hi = scan_lo + hi;
    for (int k = 0; k < 60 && std::abs(integrand(u_lo - 1.0)) >= threshold; ++k)
        u_lo -= 1.0;
    for (int k = 0; k < 60 && std::abs(integrand(u_hi + 1.0)) >= threshold; ++k)
        u_hi += 1.0;
    u_lo -= 1.0;
    u_hi += 1.0;
    const auto gl = specfun::gauss_legendre(32);
    auto composite = [&](int panels) {
        double sum = 0.0, comp = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double a = u_lo + (u_hi - u_lo) * p / panels;
            const double b = u_lo + (u_hi - u_lo) * (p + 1) / panels;
            const double half = 0.5 * (b - a);
            const double mid = 0.5 * (a + b);
            for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
                const double y = half * gl.weights[i] * integrand(mid + half * gl.nodes[i]) - comp;
                const double t = sum + y;
                comp = (t - sum) - y;
                sum = t;
            }
        }
        return sum;
    };
    int panels = std::max(4, static_cast<int>(std::ceil((u_hi - u_lo) / 2.5)));
    double prev = composite(panels);
    for (int round = 0; round < ctrl.z_max_refine; ++round) {
        panels *= 2;
        const double next = composite(panels);
        const double diff = std::abs(next - prev);
        prev = next;
        if (diff <= ctrl.z_rel_tol * std::abs(next) + 1e-14)
            return std::max(next, 0.0);
    }
    throw NumericalError("rate_z_integral: refinement cap exceeded before convergence");
}

double gil_pelaez_outage(const std::function<Complex(double)> &char_fn, double t,
                         const RateIntegralControls &ctrl, const char *where) {
    const auto res = specfun::gil_pelaez_cdf(char_fn, t, ctrl.gil_pelaez);
    if (res.truncated && res.tail_estimate > 1e-6)
        throw NumericalError(std::string(where) + ": inversion truncated with tail estimate " +
                             std::to_string(res.tail_estimate));
    return std::clamp(res.value, 0.0, 1.0);
}

} // namespace

double avg_rate_fnc(const LtContext &ctx, int m, const NoiseModel &noise,
                    const RateIntegralControls &ctrl) {
    auto fn = [&](double r) {
        return rate_z_integral([&](Complex z) { return lt_signal_fnc(ctx, m, r, z); },
                               [&](Complex z) { return lt_interference_fnc(ctx, r, z); },
                               noise.n0_watts, ctrl);
    };
    return average_over_dm1(ctx.lambda_b, ctx.d_e, m, ctx.channel.d_los, fn, ctrl.laguerre_order,
                            ctrl.parallel_nodes);
}

double avg_rate_frc(const LtContext &ctx, double d_co, const NoiseModel &noise,
                    const RateIntegralControls &ctrl) {
    return rate_z_integral([&](Complex z) { return lt_signal_frc(ctx, d_co, z); },
                           [&](Complex z) { return lt_interference_frc(ctx, d_co, z); },
                           noise.n0_watts, ctrl);
}

double outage_fnc_exact(const LtContext &ctx, int m, const NoiseModel &noise, double tau,
                        const RateIntegralControls &ctrl) {
    if (!(tau > 0.0))
        throw DomainError("outage_fnc_exact: tau must be positive");
    const double t = tau * noise.n0_watts;
    auto fn = [&](double r) {
        auto cf = [&](double w) {
            return lt_signal_fnc(ctx, m, r, Complex(0.0, -w)) *
                   lt_interference_fnc(ctx, r, Complex(0.0, w * tau));
        };
        return gil_pelaez_outage(cf, t, ctrl, "outage_fnc_exact");
    };
    const double p = average_over_dm1(ctx.lambda_b, ctx.d_e, m, ctx.channel.d_los, fn,
                                      ctrl.laguerre_order, ctrl.parallel_nodes);
    return std::clamp(p, 0.0, 1.0);
}

double outage_frc_exact(const LtContext &ctx, double d_co, const NoiseModel &noise, double tau,
                        const RateIntegralControls &ctrl) {
    if (!(tau > 0.0))
        throw DomainError("outage_frc_exact: tau must be positive");
    const double t = tau * noise.n0_watts;
    if (!(d_co > ctx.d_e))
        throw DomainError("outage_frc_exact: d_co must exceed d_e");
    const double area = d_co * d_co - ctx.d_e * ctx.d_e;
    const double p_empty = std::exp(-kPi * ctx.lambda_b * area);
    if (1.0 - p_empty < 1e-12)
        return p_empty;
    // condition out the empty-region atom at T = 0 so the characteristic
    // function decays; the atom contributes outage mass p_empty for any tau > 0
    auto cf = [&](double w) {
        const Complex lt = lt_signal_frc(ctx, d_co, Complex(0.0, -w));
        const Complex li = lt_interference_frc(ctx, d_co, Complex(0.0, w * tau));
        return (lt - p_empty) / (1.0 - p_empty) * li;
    };
    const double f = gil_pelaez_outage(cf, t, ctrl, "outage_frc_exact");
    return std::clamp(p_empty + (1.0 - p_empty) * f, 0.0, 1.0);
}

} // namespace mmcoop
