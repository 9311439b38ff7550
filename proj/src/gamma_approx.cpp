#include "mmcoop/gamma_approx.hpp"

#include "mmcoop/analytic.hpp"
#include "mmcoop/errors.hpp"
#include "mmcoop/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mmcoop {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kOuterOrder = 64;

/*! LOS probability of one cooperator given the (m+1)-th neighbor at r. */
double member_los_prob(const NetworkGeometry &g, const ChannelParams &c, double r) {
    if (r <= c.d_los)
        return c.p_l;
    if (c.d_los <= g.d_e)
        return 0.0;
    return c.p_l * (c.d_los * c.d_los - g.d_e * g.d_e) / (r * r - g.d_e * g.d_e);
}

/*! Area-measure moment: integral of 2x * x^-q over (a, b], with the q = 2
 * logarithmic branch. */
double area_pow_integral(double q, double a, double b) {
    if (!(b > a))
        return 0.0;
    if (std::abs(q - 2.0) < 1e-12)
        return 2.0 * std::log(b / a);
    return 2.0 * (std::pow(b, 2.0 - q) - std::pow(a, 2.0 - q)) / (2.0 - q);
}

double gamma_cdf_from_moments(const MomentPair &mom, double y) {
    if (!(mom.mean > 0.0))
        throw DomainError("gamma_cdf_from_moments: mean must be positive");
    if (y <= 0.0)
        return 0.0;
    // degenerate spread collapses to a step at the mean
    if (mom.variance <= 1e-12 * mom.mean * mom.mean)
        return y >= mom.mean ? 1.0 : 0.0;
    const GammaApprox g = match_gamma(mom.mean, mom.variance);
    return specfun::reg_lower_gamma(g.kappa, y / g.rho_scale);
}

bool is_point_mass(const MomentPair &mom) {
    return mom.variance <= 1e-12 * mom.mean * mom.mean;
}

/*! Convolution CDF term P{X_L + X_N <= y} for independent approximants. */
double gamma_sum_cdf(const MomentPair &los, const MomentPair &nlos, double y) {
    if (y <= 0.0)
        return 0.0;
    if (is_point_mass(los))
        return gamma_cdf_from_moments(nlos, y - los.mean);
    if (is_point_mass(nlos))
        return gamma_cdf_from_moments(los, y - nlos.mean);
    const GammaApprox gl = match_gamma(los.mean, los.variance);
    const GammaApprox gn = match_gamma(nlos.mean, nlos.variance);
    // Deep upper tail: the sum exceeds y only if one part exceeds y/2, and
    // that union bound dies long before the quadrature below (limited by the
    // pdf endpoint singularity) could certify 1 to the same accuracy.
    const double tail_bound =
        (1.0 - specfun::reg_lower_gamma(gl.kappa, 0.5 * y / gl.rho_scale)) +
        (1.0 - specfun::reg_lower_gamma(gn.kappa, 0.5 * y / gn.rho_scale));
    if (tail_bound < 1e-10)
        return 1.0;
    const auto rule = specfun::gauss_legendre(32);
    // kappa_l < 1 has an integrable pdf singularity at t = 0; the power
    // substitution t = y * u^(1/kappa_l) flattens it
    const bool substituted = gl.kappa < 1.0;
    double log_pref = 0.0;
    if (substituted)
        log_pref = gl.kappa * std::log(y / gl.rho_scale) - std::lgamma(gl.kappa + 1.0);
    auto integrand = [&](double u) {
        if (substituted) {
            const double t = y * std::pow(u, 1.0 / gl.kappa);
            return std::exp(log_pref - t / gl.rho_scale) *
                   specfun::reg_lower_gamma(gn.kappa, std::max(0.0, y - t) / gn.rho_scale);
        }
        const double logf = (gl.kappa - 1.0) * std::log(u) - u / gl.rho_scale -
                            std::lgamma(gl.kappa) - gl.kappa * std::log(gl.rho_scale);
        return std::exp(logf) *
               specfun::reg_lower_gamma(gn.kappa, std::max(0.0, y - u) / gn.rho_scale);
    };
    const double hi = substituted ? 1.0 : y;
    auto composite = [&](int panels) {
        double sum = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double a = hi * p / panels;
            const double b = hi * (p + 1) / panels;
            const double half = 0.5 * (b - a);
            const double mid = 0.5 * (a + b);
            for (std::size_t i = 0; i < rule.nodes.size(); ++i)
                sum += half * rule.weights[i] * integrand(mid + half * rule.nodes[i]);
        }
        return sum;
    };
    int panels = 8;
    double prev = composite(panels);
    for (int round = 0; round < 10; ++round) {
        panels *= 2;
        const double next = composite(panels);
        const double diff = std::abs(next - prev);
        prev = next;
        if (diff <= 1e-9)
            return std::clamp(next, 0.0, 1.0);
    }
    throw NumericalError("gamma_sum_cdf: refinement cap exceeded before convergence");
}

} // namespace

GammaApprox match_gamma(double mean, double variance) {
    if (!(mean > 0.0) || !(variance > 0.0))
        throw DomainError("match_gamma: mean and variance must be positive");
    return {mean * mean / variance, variance / mean};
}

double p_nl(const NetworkGeometry &geometry, const ChannelParams &channel, int m) {
    if (m < 1)
        throw DomainError("p_nl: m must be >= 1");
    auto fn = [&](double r) {
        return std::pow(1.0 - member_los_prob(geometry, channel, r), m);
    };
    const double p = average_over_dm1(geometry.lambda_b, geometry.d_e, m, channel.d_los, fn,
                                      kOuterOrder, false);
    return std::clamp(p, 0.0, 1.0);
}

double s_l_pmf(const NetworkGeometry &geometry, const ChannelParams &channel, int m, double r,
               int count) {
    if (m < 1 || count < 1 || count > m)
        throw DomainError("s_l_pmf: requires 1 <= count <= m");
    if (!(r > geometry.d_e))
        throw DomainError("s_l_pmf: r must exceed d_e");
    const double w = member_los_prob(geometry, channel, r);
    if (!(w > 0.0))
        throw DomainError("s_l_pmf: no LOS mass at this radius");
    const double norm = -std::expm1(m * std::log1p(-w));
    const double logc = std::lgamma(m + 1.0) - std::lgamma(count + 1.0) -
                        std::lgamma(m - count + 1.0);
    const double logp = logc + count * std::log(w) + (m - count) * std::log1p(-w);
    return std::exp(logp) / norm;
}

MomentPair fnc_los_moments(const NetworkGeometry &geometry, const ChannelParams &channel,
                           const AntennaPattern &pattern, double p_tx, int m) {
    if (m < 1)
        throw DomainError("fnc_los_moments: m must be >= 1");
    const double a = p_tx * pattern.g_m * channel.c_l;
    const double d_e = geometry.d_e;
    auto m1 = [&](double r) {
        const double el = std::min(r, channel.d_los);
        if (!(el > d_e))
            return 0.0;
        return a * area_pow_integral(channel.alpha_l, d_e, el) / (el * el - d_e * d_e);
    };
    auto m2 = [&](double r) {
        const double el = std::min(r, channel.d_los);
        if (!(el > d_e))
            return 0.0;
        return a * a * (channel.n_l + 1.0) / channel.n_l *
               area_pow_integral(2.0 * channel.alpha_l, d_e, el) / (el * el - d_e * d_e);
    };
    const double p1 = 1.0 - p_nl(geometry, channel, m);
    if (!(p1 > 0.0))
        throw DomainError("fnc_los_moments: LOS cooperators have zero probability");
    auto mean_fn = [&](double r) { return member_los_prob(geometry, channel, r) * m1(r); };
    auto second_fn = [&](double r) {
        const double w = member_los_prob(geometry, channel, r);
        double s = m * w * m2(r);
        if (m > 1)
            s += m * (m - 1.0) * w * w * m1(r) * m1(r);
        return s;
    };
    const double mean = m *
                        average_over_dm1(geometry.lambda_b, d_e, m, channel.d_los, mean_fn,
                                         kOuterOrder, false) /
                        p1;
    const double second = average_over_dm1(geometry.lambda_b, d_e, m, channel.d_los, second_fn,
                                           kOuterOrder, false) /
                          p1;
    return {mean, second - mean * mean};
}

MomentPair fnc_nlos_moments(const NetworkGeometry &geometry, const ChannelParams &channel,
                            const AntennaPattern &pattern, double p_tx, int m) {
    if (m < 1)
        throw DomainError("fnc_nlos_moments: m must be >= 1");
    const double a = p_tx * pattern.g_m * channel.c_n;
    const double d_e = geometry.d_e;
    const double d = channel.d_los;
    const double pnl = p_nl(geometry, channel, m);
    if (!(pnl > 0.0))
        throw DomainError("fnc_nlos_moments: all-NLOS event has zero probability");
    // raw sums of 2x x^-q over the NLOS-weighted annulus, before normalizing
    auto raw = [&](double q, double r) {
        const double el = std::max(std::min(r, d), d_e);
        double s = (1.0 - channel.p_l) * area_pow_integral(q, d_e, el);
        if (r > std::max(d, d_e))
            s += area_pow_integral(q, std::max(d, d_e), r);
        return s;
    };
    auto mean_fn = [&](double r) {
        const double w = member_los_prob(geometry, channel, r);
        const double area = r * r - d_e * d_e;
        return m * std::pow(1.0 - w, m - 1) * a * raw(channel.alpha_n, r) / area;
    };
    auto second_fn = [&](double r) {
        const double w = member_los_prob(geometry, channel, r);
        const double area = r * r - d_e * d_e;
        const double r1 = a * raw(channel.alpha_n, r) / area;
        const double r2 = a * a * (channel.n_n + 1.0) / channel.n_n *
                          raw(2.0 * channel.alpha_n, r) / area;
        double s = m * std::pow(1.0 - w, m - 1) * r2;
        if (m > 1)
            s += m * (m - 1.0) * std::pow(1.0 - w, m - 2) * r1 * r1;
        return s;
    };
    const double mean = average_over_dm1(geometry.lambda_b, d_e, m, d, mean_fn, kOuterOrder,
                                         false) /
                        pnl;
    const double second = average_over_dm1(geometry.lambda_b, d_e, m, d, second_fn, kOuterOrder,
                                           false) /
                          pnl;
    return {mean, second - mean * mean};
}

double frc_empty_prob(const NetworkGeometry &geometry, const ChannelParams &channel, double d_co,
                      LinkState nu) {
    if (!(d_co > geometry.d_e))
        throw DomainError("frc_empty_prob: d_co must exceed d_e");
    const double d_e = geometry.d_e;
    const double d = channel.d_los;
    const double hi1 = std::max(std::min(d_co, d), d_e);
    double mu;
    if (nu == LinkState::LOS) {
        mu = channel.p_l * geometry.lambda_b * kPi * (hi1 * hi1 - d_e * d_e);
    } else {
        mu = (1.0 - channel.p_l) * geometry.lambda_b * kPi * (hi1 * hi1 - d_e * d_e);
        const double lo2 = std::max(d, d_e);
        if (d_co > lo2)
            mu += geometry.lambda_b * kPi * (d_co * d_co - lo2 * lo2);
    }
    return std::exp(-mu);
}

MomentPair frc_moments(const NetworkGeometry &geometry, const ChannelParams &channel,
                       const AntennaPattern &pattern, double p_tx, double d_co, LinkState nu) {
    if (!(d_co > geometry.d_e))
        throw DomainError("frc_moments: d_co must exceed d_e");
    const double d_e = geometry.d_e;
    const double d = channel.d_los;
    const double lp = geometry.lambda_b * kPi;
    const double a = p_tx * pattern.g_m * channel.c(nu);
    const double alpha = channel.alpha(nu);
    const double n = channel.nakagami(nu);
    const double hi1 = std::max(std::min(d_co, d), d_e);
    double i1 = 0.0, i2 = 0.0, mu = 0.0;
    if (nu == LinkState::LOS) {
        i1 = channel.p_l * area_pow_integral(alpha, d_e, hi1);
        i2 = channel.p_l * area_pow_integral(2.0 * alpha, d_e, hi1);
        mu = channel.p_l * lp * (hi1 * hi1 - d_e * d_e);
    } else {
        i1 = (1.0 - channel.p_l) * area_pow_integral(alpha, d_e, hi1);
        i2 = (1.0 - channel.p_l) * area_pow_integral(2.0 * alpha, d_e, hi1);
        mu = (1.0 - channel.p_l) * lp * (hi1 * hi1 - d_e * d_e);
        const double lo2 = std::max(d, d_e);
        if (d_co > lo2) {
            i1 += area_pow_integral(alpha, lo2, d_co);
            i2 += area_pow_integral(2.0 * alpha, lo2, d_co);
            mu += lp * (d_co * d_co - lo2 * lo2);
        }
    }
    const double nonempty = -std::expm1(-mu);
    if (!(nonempty > 0.0))
        throw DomainError("frc_moments: the requested state has zero mass in the region");
    const double mean_unc = a * lp * i1;
    const double var_unc = (n + 1.0) / n * a * a * lp * i2;
    const double mean = mean_unc / nonempty;
    const double second = (var_unc + mean_unc * mean_unc) / nonempty;
    return {mean, second - mean * mean};
}

double outage_fnc_approx(const NetworkGeometry &geometry, const ChannelParams &channel,
                         const AntennaPattern &pattern, double p_tx, const NoiseModel &noise,
                         int m, double tau) {
    if (!(tau > 0.0))
        throw DomainError("outage_fnc_approx: tau must be positive");
    const double y = tau * noise.n0_watts;
    const double pnl = p_nl(geometry, channel, m);
    double acc = 0.0;
    if (1.0 - pnl > 1e-12)
        acc += (1.0 - pnl) *
               gamma_cdf_from_moments(fnc_los_moments(geometry, channel, pattern, p_tx, m), y);
    if (pnl > 1e-12)
        acc += pnl *
               gamma_cdf_from_moments(fnc_nlos_moments(geometry, channel, pattern, p_tx, m), y);
    return std::clamp(acc, 0.0, 1.0);
}

double outage_frc_approx(const NetworkGeometry &geometry, const ChannelParams &channel,
                         const AntennaPattern &pattern, double p_tx, const NoiseModel &noise,
                         double d_co, double tau) {
    if (!(tau > 0.0))
        throw DomainError("outage_frc_approx: tau must be positive");
    const double y = tau * noise.n0_watts;
    const double p0l = frc_empty_prob(geometry, channel, d_co, LinkState::LOS);
    const double p0n = frc_empty_prob(geometry, channel, d_co, LinkState::NLOS);
    double acc = p0l * p0n;
    MomentPair ml, mn;
    const bool has_l = 1.0 - p0l > 1e-12;
    const bool has_n = 1.0 - p0n > 1e-12;
    if (has_l)
        ml = frc_moments(geometry, channel, pattern, p_tx, d_co, LinkState::LOS);
    if (has_n)
        mn = frc_moments(geometry, channel, pattern, p_tx, d_co, LinkState::NLOS);
    if (has_l)
        acc += (1.0 - p0l) * p0n * gamma_cdf_from_moments(ml, y);
    if (has_n)
        acc += p0l * (1.0 - p0n) * gamma_cdf_from_moments(mn, y);
    if (has_l && has_n)
        acc += (1.0 - p0l) * (1.0 - p0n) * gamma_sum_cdf(ml, mn, y);
    return std::clamp(acc, 0.0, 1.0);
}

} // namespace mmcoop
