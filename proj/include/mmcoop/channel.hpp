#pragma once

#include "mmcoop/errors.hpp"
#include "mmcoop/rng.hpp"

#include <string>
#include <vector>

namespace mmcoop {

enum class LinkState { LOS, NLOS };

/*! Sectored antenna: main lobe of width theta_t at gain g_m, side gain g_s. */
struct AntennaPattern {
    double g_m = 1.0;
    double g_s = 1.0;
    double theta_t = 2.0 * 3.14159265358979323846;

    double p_main() const { return theta_t / (2.0 * 3.14159265358979323846); }
};

/*! Dual-slope path loss with LOS-ball blockage and Nakagami fading shapes. */
struct ChannelParams {
    double alpha_l = 2.0;
    double alpha_n = 4.0;
    double c_l = 1.0;
    double c_n = 0.1;
    double n_l = 3.0;
    double n_n = 1.0;
    double p_l = 0.2;
    double d_los = 200.0;

    double alpha(LinkState s) const { return s == LinkState::LOS ? alpha_l : alpha_n; }
    double c(LinkState s) const { return s == LinkState::LOS ? c_l : c_n; }
    double nakagami(LinkState s) const { return s == LinkState::LOS ? n_l : n_n; }
};

struct NoiseModel {
    double bandwidth_hz = 0.0;
    double noise_figure_db = 0.0;
    double n0_watts = 0.0;
};

double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/*! Thermal noise floor: N0(dBm) = -174 + 10 log10(BW) + F, stored in watts. */
NoiseModel make_noise(double bandwidth_hz, double noise_figure_db);

double los_probability(const ChannelParams &params, double d);

double path_loss(const ChannelParams &params, double d, LinkState state);

/*! Unit-mean Nakagami power fading: Gamma(N, 1/N) draw. */
double sample_fading(const ChannelParams &params, LinkState state, Rng &rng);

/*! Interferer beam alignment: g_m with probability theta_t/2pi, else g_s. */
double sample_interferer_gain(const AntennaPattern &pattern, Rng &rng);

struct UlaApproximation {
    AntennaPattern pattern;
    bool degenerate_full_lobe = false;
};

/*! Sectored-model fit to a K-element uniform linear array. */
UlaApproximation ula_approximation(int k);

std::vector<std::string> antenna_violations(const AntennaPattern &pattern);
std::vector<std::string> channel_violations(const ChannelParams &params);

} // namespace mmcoop
