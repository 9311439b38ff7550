#include "mmcoop/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace mmcoop {

std::string engine_name(Engine e) {
    switch (e) {
    case Engine::Simulation:
        return "simulation";
    case Engine::Analytic:
        return "analytic";
    case Engine::GammaApprox:
        return "gamma-approx";
    }
    return "?";
}

std::string metric_name(Metric m) {
    return m == Metric::AvgRateNats ? "avg_rate_nats" : "outage_prob";
}

std::string axis_name(SweepAxis a) {
    switch (a) {
    case SweepAxis::Rho:
        return "rho_m";
    case SweepAxis::TauDb:
        return "tau_db";
    case SweepAxis::CoopSize:
        return "coop_size";
    case SweepAxis::PLos:
        return "p_l";
    }
    return "?";
}

Engine parse_engine(const std::string &s) {
    if (s == "simulation" || s == "sim")
        return Engine::Simulation;
    if (s == "analytic")
        return Engine::Analytic;
    if (s == "gamma-approx" || s == "approx")
        return Engine::GammaApprox;
    throw ValidationError("unknown engine '" + s + "'", {"engines must be drawn from simulation|analytic|gamma-approx"});
}

SweepAxis parse_axis(const std::string &s) {
    if (s == "rho" || s == "rho_m")
        return SweepAxis::Rho;
    if (s == "tau_db")
        return SweepAxis::TauDb;
    if (s == "coop_size" || s == "m")
        return SweepAxis::CoopSize;
    if (s == "p_l")
        return SweepAxis::PLos;
    throw ValidationError("unknown sweep axis '" + s + "'", {"sweep axis must be rho|tau_db|coop_size|p_l"});
}

std::vector<std::string> config_violations(const ScenarioConfig &config) {
    std::vector<std::string> bad;
    if (config.id.empty())
        bad.push_back("id must be set");
    if (config.sweep.axis != SweepAxis::Rho && !(config.rho_m > 0.0))
        bad.push_back("rho_m must be positive");
    if (!(config.chi > 0.0))
        bad.push_back("chi must be positive");
    if (!(config.d_infinity_m > 0.0))
        bad.push_back("d_infinity_m must be positive");
    for (auto &v : channel_violations(config.channel))
        bad.push_back("channel: " + v);
    if (!(config.channel.alpha_n > 2.0))
        bad.push_back("channel: alpha_n must exceed 2");
    for (auto &v : antenna_violations(config.pattern))
        bad.push_back("antenna: " + v);
    if (!(config.bandwidth_hz > 0.0))
        bad.push_back("bandwidth_hz must be positive");
    if (!std::isfinite(config.p_tx_dbm))
        bad.push_back("p_tx_dbm must be finite");
    switch (config.scheme.kind) {
    case CoopScheme::Kind::FNC:
        if (config.scheme.m < 1)
            bad.push_back("scheme: fnc requires m >= 1");
        break;
    case CoopScheme::Kind::FRC:
        if (config.sweep.axis == SweepAxis::CoopSize) {
            break; // the axis supplies the mean count
        }
        if (config.scheme.by_mean) {
            if (!(config.scheme.m_bar > 0.0))
                bad.push_back("scheme: frc requires m_bar > 0");
        } else if (!(config.scheme.d_co_m > 0.0)) {
            bad.push_back("scheme: frc requires d_co_m > 0 or m_bar");
        }
        break;
    case CoopScheme::Kind::NonCooperative:
        break;
    }
    if (config.engines.empty())
        bad.push_back("engines must not be empty");
    if (config.user == UserKind::General) {
        for (Engine e : config.engines)
            if (e != Engine::Simulation)
                bad.push_back("general-user scenarios support only the simulation engine");
    }
    if (config.trials < 1)
        bad.push_back("trials must be >= 1");
    if (config.sweep.values.empty())
        bad.push_back("sweep values must not be empty");
    for (double v : config.sweep.values) {
        if (!std::isfinite(v)) {
            bad.push_back("sweep values must be finite");
            break;
        }
    }
    switch (config.sweep.axis) {
    case SweepAxis::Rho:
        for (double v : config.sweep.values)
            if (!(v > 0.0)) {
                bad.push_back("rho sweep values must be positive");
                break;
            }
        break;
    case SweepAxis::PLos:
        for (double v : config.sweep.values)
            if (v < 0.0 || v > 1.0) {
                bad.push_back("p_l sweep values must lie in [0,1]");
                break;
            }
        break;
    case SweepAxis::CoopSize:
        if (config.scheme.kind == CoopScheme::Kind::NonCooperative)
            bad.push_back("coop_size sweep requires an fnc or frc scheme");
        for (double v : config.sweep.values)
            if (!(v > 0.0)) {
                bad.push_back("coop_size sweep values must be positive");
                break;
            }
        break;
    case SweepAxis::TauDb:
        if (config.metric != Metric::OutageProb)
            bad.push_back("tau_db sweep requires the outage metric");
        break;
    }
    // FRC region must clear the exclusion radius at every coordinate
    if (config.scheme.kind == CoopScheme::Kind::FRC && !config.scheme.by_mean &&
        config.scheme.d_co_m > 0.0) {
        double rho_max = config.rho_m;
        if (config.sweep.axis == SweepAxis::Rho)
            for (double v : config.sweep.values)
                rho_max = std::max(rho_max, v);
        if (rho_max > 0.0 && !(config.scheme.d_co_m > config.chi * rho_max))
            bad.push_back("scheme: frc requires d_co_m > chi * rho at every sweep coordinate");
    }
    return bad;
}

void validate_config(const ScenarioConfig &config) {
    auto bad = config_violations(config);
    if (!bad.empty())
        throw ValidationError("invalid scenario '" + config.id + "'", bad);
}

ScenarioPoint materialize(const ScenarioConfig &config, double coordinate) {
    ScenarioPoint pt;
    double rho = config.rho_m;
    double p_l = config.channel.p_l;
    double tau_db = config.tau_db;
    int m = config.scheme.m;
    double m_bar = config.scheme.m_bar;
    switch (config.sweep.axis) {
    case SweepAxis::Rho:
        rho = coordinate;
        break;
    case SweepAxis::TauDb:
        tau_db = coordinate;
        break;
    case SweepAxis::CoopSize:
        m = static_cast<int>(std::lround(coordinate));
        m_bar = coordinate;
        break;
    case SweepAxis::PLos:
        p_l = coordinate;
        break;
    }
    pt.geometry = make_geometry(rho, config.chi, config.d_infinity_m);
    pt.channel = config.channel;
    pt.channel.p_l = p_l;
    pt.pattern = config.pattern;
    pt.noise = make_noise(config.bandwidth_hz, config.noise_figure_db);
    pt.p_tx_watts = dbm_to_watts(config.p_tx_dbm);
    switch (config.scheme.kind) {
    case CoopScheme::Kind::FNC:
        pt.scheme = CoopScheme::fnc(m);
        break;
    case CoopScheme::Kind::NonCooperative:
        pt.scheme = CoopScheme::non_cooperative();
        break;
    case CoopScheme::Kind::FRC: {
        double d_co = config.scheme.d_co_m;
        if (config.scheme.by_mean || config.sweep.axis == SweepAxis::CoopSize) {
            // mean count over the annulus: m_bar = lambda*pi*(d_co^2 - d_e^2)
            const double d_e = pt.geometry.d_e;
            d_co = std::sqrt(d_e * d_e + m_bar * rho * rho);
        }
        pt.scheme = CoopScheme::frc(d_co);
        break;
    }
    }
    pt.metric = config.metric;
    pt.tau_linear = db_to_linear(tau_db);
    pt.user = config.user;
    return pt;
}

} // namespace mmcoop
