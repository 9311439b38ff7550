#pragma once

#include "mmcoop/channel.hpp"
#include "mmcoop/errors.hpp"
#include "mmcoop/geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mmcoop {

enum class Engine { Simulation, Analytic, GammaApprox };
enum class Metric { AvgRateNats, OutageProb };
enum class UserKind { CellEdge, General };
enum class SweepAxis { Rho, TauDb, CoopSize, PLos };

std::string engine_name(Engine e);
std::string metric_name(Metric m);
std::string axis_name(SweepAxis a);
Engine parse_engine(const std::string &s);
SweepAxis parse_axis(const std::string &s);

struct Sweep {
    SweepAxis axis = SweepAxis::Rho;
    std::vector<double> values;
};

/*! Scheme request as configured; FRC given either a fixed radius or a mean
 * cooperator count that maps to a radius once the density is known. */
struct SchemeSpec {
    CoopScheme::Kind kind = CoopScheme::Kind::NonCooperative;
    int m = 1;
    double d_co_m = 0.0;
    double m_bar = 0.0;
    bool by_mean = false;
};

struct ScenarioConfig {
    std::string id;
    double rho_m = 0.0;
    double chi = 1.0;
    double d_infinity_m = 2000.0;
    ChannelParams channel;
    AntennaPattern pattern;
    double p_tx_dbm = 0.0;
    double bandwidth_hz = 0.0;
    double noise_figure_db = 0.0;
    SchemeSpec scheme;
    Metric metric = Metric::AvgRateNats;
    double tau_db = 0.0;
    UserKind user = UserKind::CellEdge;
    std::vector<Engine> engines;
    int trials = 10000;
    std::uint64_t seed = 1;
    Sweep sweep;
};

/*! One sweep coordinate resolved to concrete parameters. */
struct ScenarioPoint {
    NetworkGeometry geometry;
    ChannelParams channel;
    AntennaPattern pattern;
    NoiseModel noise;
    double p_tx_watts = 0.0;
    CoopScheme scheme;
    Metric metric = Metric::AvgRateNats;
    double tau_linear = 1.0;
    UserKind user = UserKind::CellEdge;
};

std::vector<std::string> config_violations(const ScenarioConfig &config);

/*! Throws ValidationError listing every violation at once. */
void validate_config(const ScenarioConfig &config);

ScenarioPoint materialize(const ScenarioConfig &config, double coordinate);

} // namespace mmcoop
