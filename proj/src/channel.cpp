#include "mmcoop/channel.hpp"

#include <cmath>
#include <sstream>

namespace mmcoop {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

NoiseModel make_noise(double bandwidth_hz, double noise_figure_db) {
    if (!(bandwidth_hz > 0.0)) {
        throw DomainError("noise bandwidth must be positive");
    }
    NoiseModel noise;
    noise.bandwidth_hz = bandwidth_hz;
    noise.noise_figure_db = noise_figure_db;
    double n0_dbm = -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
    noise.n0_watts = dbm_to_watts(n0_dbm);
    return noise;
}

double los_probability(const ChannelParams &params, double d) {
    if (d < 0.0) {
        throw DomainError("los_probability: negative distance");
    }
    return d <= params.d_los ? params.p_l : 0.0;
}

double path_loss(const ChannelParams &params, double d, LinkState state) {
    if (!(d > 0.0)) {
        throw DomainError("path_loss: distance must be positive");
    }
    return params.c(state) * std::pow(d, -params.alpha(state));
}

double sample_fading(const ChannelParams &params, LinkState state, Rng &rng) {
    double n = params.nakagami(state);
    std::gamma_distribution<double> gamma(n, 1.0 / n);
    return gamma(rng);
}

double sample_interferer_gain(const AntennaPattern &pattern, Rng &rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    return unif(rng) < pattern.p_main() ? pattern.g_m : pattern.g_s;
}

UlaApproximation ula_approximation(int k) {
    if (k < 2) {
        throw DomainError("ula_approximation: need at least 2 elements");
    }
    double kk = static_cast<double>(k);
    UlaApproximation out;
    out.pattern.g_m = kk;
    out.pattern.theta_t = 4.0 * (M_PI / 2.0 - std::acos(2.0 / kk));
    out.degenerate_full_lobe = k == 2;

    // side gain: largest secondary peak of sin^2(K pi x / 2) / sin^2(pi x / 2)
    // over the window (2/K, 4/K), dense grid then local parabolic refinement
    auto f = [kk](double x) {
        double num = std::sin(kk * M_PI * x / 2.0);
        double den = std::sin(M_PI * x / 2.0);
        return num * num / (den * den);
    };
    double lo = 2.0 / kk;
    double hi = 4.0 / kk;
    const int grid = 20001;
    double best_x = 0.0;
    double best = -1.0;
    for (int i = 0; i < grid; ++i) {
        double x = lo + (hi - lo) * (i + 0.5) / grid;
        double v = f(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    double h = (hi - lo) / grid;
    double a = best_x - h;
    double b = best_x + h;
    for (int iter = 0; iter < 200; ++iter) {
        double m1 = a + (b - a) / 3.0;
        double m2 = b - (b - a) / 3.0;
        if (f(m1) < f(m2)) {
            a = m1;
        } else {
            b = m2;
        }
    }
    out.pattern.g_s = f(0.5 * (a + b));
    return out;
}

std::vector<std::string> antenna_violations(const AntennaPattern &pattern) {
    std::vector<std::string> v;
    if (!(pattern.g_m > pattern.g_s)) {
        v.push_back("antenna: g_m must exceed g_s");
    }
    if (!(pattern.g_s > 0.0)) {
        v.push_back("antenna: g_s must be positive");
    }
    if (!(pattern.theta_t > 0.0) || !(pattern.theta_t < 2.0 * M_PI)) {
        v.push_back("antenna: theta_t must lie in (0, 2pi)");
    }
    return v;
}

std::vector<std::string> channel_violations(const ChannelParams &params) {
    std::vector<std::string> v;
    if (!(params.alpha_l >= 2.0)) {
        v.push_back("channel: alpha_l must be >= 2");
    }
    if (!(params.alpha_l < params.alpha_n)) {
        v.push_back("channel: alpha_l must be < alpha_n");
    }
    if (!(params.c_l > params.c_n)) {
        v.push_back("channel: c_l must exceed c_n");
    }
    if (!(params.c_n > 0.0)) {
        v.push_back("channel: c_n must be positive");
    }
    if (!(params.n_l >= 1.0) || !(params.n_n >= 1.0)) {
        v.push_back("channel: Nakagami shapes must be >= 1");
    }
    if (!(params.p_l >= 0.0) || !(params.p_l <= 1.0)) {
        v.push_back("channel: p_l must lie in [0, 1]");
    }
    if (!(params.d_los > 0.0)) {
        v.push_back("channel: d_los must be positive");
    }
    return v;
}

} // namespace mmcoop
