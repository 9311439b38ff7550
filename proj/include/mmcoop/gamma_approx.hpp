#pragma once

#include "mmcoop/channel.hpp"
#include "mmcoop/geometry.hpp"

namespace mmcoop {

/*! Two-parameter Gamma surrogate for a conditional signal-power sum. */
struct GammaApprox {
    double kappa = 0.0;
    double rho_scale = 0.0;
};

struct MomentPair {
    double mean = 0.0;
    double variance = 0.0;
};

GammaApprox match_gamma(double mean, double variance);

/*! Probability that every cooperative BS is NLOS (FNC, m nearest). */
double p_nl(const NetworkGeometry &geometry, const ChannelParams &channel, int m);

/*! Mass of the LOS cooperator count at `count`, conditioned on at least one
 * LOS cooperator, given the (m+1)-th neighbor at r. */
double s_l_pmf(const NetworkGeometry &geometry, const ChannelParams &channel, int m, double r,
               int count);

/*! Mean/variance of the LOS signal part conditioned on >= 1 LOS cooperator. */
MomentPair fnc_los_moments(const NetworkGeometry &geometry, const ChannelParams &channel,
                           const AntennaPattern &pattern, double p_tx, int m);

/*! Mean/variance of the all-NLOS signal conditioned on zero LOS cooperators. */
MomentPair fnc_nlos_moments(const NetworkGeometry &geometry, const ChannelParams &channel,
                            const AntennaPattern &pattern, double p_tx, int m);

/*! Probability of no cooperative BS of the given link state in the region. */
double frc_empty_prob(const NetworkGeometry &geometry, const ChannelParams &channel, double d_co,
                      LinkState nu);

/*! Campbell mean/variance of the per-state FRC signal part, conditioned on
 * the state's point set being nonempty. */
MomentPair frc_moments(const NetworkGeometry &geometry, const ChannelParams &channel,
                       const AntennaPattern &pattern, double p_tx, double d_co, LinkState nu);

double outage_fnc_approx(const NetworkGeometry &geometry, const ChannelParams &channel,
                         const AntennaPattern &pattern, double p_tx, const NoiseModel &noise,
                         int m, double tau);

double outage_frc_approx(const NetworkGeometry &geometry, const ChannelParams &channel,
                         const AntennaPattern &pattern, double p_tx, const NoiseModel &noise,
                         double d_co, double tau);

} // namespace mmcoop
