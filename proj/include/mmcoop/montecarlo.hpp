#pragma once

#include "mmcoop/channel.hpp"
#include "mmcoop/geometry.hpp"
#include "mmcoop/rng.hpp"
#include "mmcoop/scenario.hpp"

#include <vector>

namespace mmcoop {

/*! One sampled deployment with link states, fading, and interferer gains,
 * all indexed against the distance-sorted deployment order. */
struct NetworkRealization {
    BsDeployment deployment;
    CoopPartition partition;
    std::vector<LinkState> states;
    std::vector<double> fading;
    std::vector<double> gains; // cooperative entries fixed at the main-lobe gain
};

struct SinrSample {
    double t_watts = 0.0;
    double i_watts = 0.0;
    double n0_watts = 0.0;
    double sinr() const { return t_watts / (i_watts + n0_watts); }
};

struct MetricResult {
    double value = 0.0;
    double std_error = 0.0;
    int n_trials = 0;
    Engine method = Engine::Simulation;
    Metric metric = Metric::AvgRateNats;
    double runtime_s = 0.0;
};

struct SimControl {
    bool parallel = true;
};

NetworkRealization simulate_network(const ScenarioPoint &pt, Rng &rng);

SinrSample sinr_from(const NetworkRealization &real, const ScenarioPoint &pt);

SinrSample simulate_realization(const ScenarioPoint &pt, Rng &rng);

MetricResult estimate_rate(const ScenarioPoint &pt, int n_trials, Rng &rng,
                           const SimControl &ctrl = {});

MetricResult estimate_outage(const ScenarioPoint &pt, double tau, int n_trials, Rng &rng,
                             const SimControl &ctrl = {});

/*! One shared trial set evaluated at every threshold (common random numbers). */
std::vector<MetricResult> estimate_outage_grid(const ScenarioPoint &pt,
                                               const std::vector<double> &taus, int n_trials,
                                               Rng &rng, const SimControl &ctrl = {});

/*! Unconditioned user at the origin: cooperation only when the nearest BS is
 * farther than the edge-trigger distance d_e, otherwise nearest-BS service. */
MetricResult estimate_general_user(const ScenarioPoint &pt, int n_trials, Rng &rng,
                                   const SimControl &ctrl = {});

} // namespace mmcoop
