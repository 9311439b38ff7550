#pragma once

#include "mmcoop/channel.hpp"
#include "mmcoop/geometry.hpp"
#include "mmcoop/scenario.hpp"
#include "mmcoop/specfun.hpp"

#include <functional>

namespace mmcoop {

using specfun::Complex;

enum class Lobe { Main, Side };

/*! Immutable bundle of channel/antenna/power constants entering every
 * transform: a(mu,nu) = p_tx * gain(mu) * intercept(nu). */
struct LtContext {
    ChannelParams channel;
    AntennaPattern pattern;
    double p_tx = 0.0;
    double lambda_b = 0.0;
    double d_e = 0.0;
    double a_ml = 0.0, a_mn = 0.0, a_sl = 0.0, a_sn = 0.0;
    double p_m = 0.0, p_s = 0.0, p_l = 0.0, p_n = 0.0;

    double a(Lobe mu, LinkState nu) const {
        if (mu == Lobe::Main)
            return nu == LinkState::LOS ? a_ml : a_mn;
        return nu == LinkState::LOS ? a_sl : a_sn;
    }
    double lobe_prob(Lobe mu) const { return mu == Lobe::Main ? p_m : p_s; }
};

LtContext make_lt_context(const ChannelParams &channel, const AntennaPattern &pattern,
                          double p_tx_watts, const NetworkGeometry &geometry);
LtContext make_lt_context(const ScenarioPoint &pt);

struct RateIntegralControls {
    int laguerre_order = 64;
    double z_rel_tol = 1e-6;
    double z_tail_threshold = 1e-12;
    int z_max_refine = 4;
    bool parallel_nodes = true;
    specfun::GilPelaezControl gil_pelaez{};
};

/*! Area-measure transform of one cooperative link over the annulus (y, x]:
 * integral of 2t * E[exp(-z a h t^-alpha)] dt in closed hypergeometric form. */
Complex lambda_fn(const LtContext &ctx, Lobe mu, LinkState nu, Complex z, double x, double y);

/*! Far-field interference exponent beyond radius x (NLOS path loss). */
Complex xi_fn(const LtContext &ctx, Lobe mu, Complex z, double x);

/*! Annulus (x, d_los] interference exponent, by the area identity. */
Complex theta_fn(const LtContext &ctx, Lobe mu, LinkState nu, Complex z, double x);

Complex lt_signal_fnc(const LtContext &ctx, int m, double r, Complex z);
Complex lt_interference_fnc(const LtContext &ctx, double r, Complex z);
Complex lt_signal_frc(const LtContext &ctx, double d_co, Complex z);
Complex lt_interference_frc(const LtContext &ctx, double d_co, Complex z);

/*! Expectation of fn(r) under the (m+1)-th neighbor distance density, mapped
 * to the unit-rate Gamma(m+1) measure and split at d_split where the integrand
 * may change branch. */
double average_over_dm1(double lambda_b, double d_e, int m, double d_split,
                        const std::function<double(double)> &fn, int order, bool parallel = true);

double avg_rate_fnc(const LtContext &ctx, int m, const NoiseModel &noise,
                    const RateIntegralControls &ctrl = {});
double avg_rate_frc(const LtContext &ctx, double d_co, const NoiseModel &noise,
                    const RateIntegralControls &ctrl = {});

double outage_fnc_exact(const LtContext &ctx, int m, const NoiseModel &noise, double tau,
                        const RateIntegralControls &ctrl = {});
double outage_frc_exact(const LtContext &ctx, double d_co, const NoiseModel &noise, double tau,
                        const RateIntegralControls &ctrl = {});

} // namespace mmcoop
