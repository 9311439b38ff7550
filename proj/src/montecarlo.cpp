#include "mmcoop/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>

namespace mmcoop {

namespace {

constexpr double kPi = std::numbers::pi;

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/*! Unconditioned HPPP on the disc B(o, d_infinity); same draw order as the
 * annulus sampler: count, then (r, angle) pairs, then a stable distance sort. */
BsDeployment sample_disc_deployment(const NetworkGeometry &geometry, Rng &rng) {
    const double d_inf2 = geometry.d_infinity * geometry.d_infinity;
    std::poisson_distribution<int> count_dist(geometry.lambda_b * kPi * d_inf2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = count_dist(rng);
    BsDeployment dep;
    dep.geometry = geometry;
    dep.points.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double r = geometry.d_infinity * std::sqrt(unit(rng));
        const double theta = -kPi + 2.0 * kPi * unit(rng);
        dep.points.push_back({r, theta});
    }
    std::stable_sort(dep.points.begin(), dep.points.end(),
                     [](const BsPoint &a, const BsPoint &b) { return a.distance_m < b.distance_m; });
    return dep;
}

/*! States and fading for every BS, then the partition, then interferer gains,
 * always in sorted order so the draw sequence is scheme-independent up front. */
NetworkRealization finish_realization(BsDeployment dep, const ScenarioPoint &pt,
                                      const CoopScheme &scheme, Rng &rng) {
    NetworkRealization real;
    real.deployment = std::move(dep);
    const std::size_t n = real.deployment.points.size();
    real.states.resize(n);
    real.fading.resize(n);
    real.gains.assign(n, pt.pattern.g_m);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = real.deployment.points[i].distance_m;
        real.states[i] = unit(rng) < los_probability(pt.channel, d) ? LinkState::LOS : LinkState::NLOS;
        real.fading[i] = sample_fading(pt.channel, real.states[i], rng);
    }
    real.partition = select_cooperators(real.deployment, scheme);
    std::vector<bool> is_coop(n, false);
    for (int idx : real.partition.coop)
        is_coop[static_cast<std::size_t>(idx)] = true;
    for (std::size_t i = 0; i < n; ++i)
        if (!is_coop[i])
            real.gains[i] = sample_interferer_gain(pt.pattern, rng);
    return real;
}

struct TrialStats {
    std::vector<double> values;
    double runtime_s = 0.0;
};

double kahan_sum(const std::vector<double> &v) {
    double sum = 0.0, comp = 0.0;
    for (double x : v) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

MetricResult mean_result(const std::vector<double> &vals, Metric metric, double runtime_s) {
    const int n = static_cast<int>(vals.size());
    const double mean = kahan_sum(vals) / n;
    std::vector<double> sq(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
        sq[i] = (vals[i] - mean) * (vals[i] - mean);
    const double var = n > 1 ? kahan_sum(sq) / (n - 1.0) : 0.0;
    MetricResult res;
    res.value = mean;
    res.std_error = std::sqrt(var / n);
    res.n_trials = n;
    res.method = Engine::Simulation;
    res.metric = metric;
    res.runtime_s = runtime_s;
    return res;
}

/*! Runs fn(trial_rng) for every trial on independent streams; the output
 * vector (and therefore every reduction) is identical for the serial and
 * parallel paths. */
template <typename Fn>
std::vector<double> run_trials(int n_trials, Rng &rng, bool parallel, Fn &&fn) {
    const std::uint64_t base = rng();
    std::vector<double> vals(static_cast<std::size_t>(n_trials));
    std::exception_ptr first_error = nullptr;
    std::atomic<bool> failed{false};
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
    for (int t = 0; t < n_trials; ++t) {
        if (failed.load(std::memory_order_relaxed))
            continue;
        try {
            Rng trial_rng = make_stream(base, static_cast<std::uint64_t>(t));
            vals[static_cast<std::size_t>(t)] = fn(trial_rng);
        } catch (...) {
#pragma omp critical(mmcoop_trial_error)
            if (!first_error)
                first_error = std::current_exception();
            failed.store(true, std::memory_order_relaxed);
        }
    }
    if (first_error)
        std::rethrow_exception(first_error);
    return vals;
}

} // namespace

NetworkRealization simulate_network(const ScenarioPoint &pt, Rng &rng) {
    return finish_realization(sample_deployment(pt.geometry, rng), pt, pt.scheme, rng);
}

SinrSample sinr_from(const NetworkRealization &real, const ScenarioPoint &pt) {
    SinrSample s;
    s.n0_watts = pt.noise.n0_watts;
    for (int idx : real.partition.coop) {
        const auto i = static_cast<std::size_t>(idx);
        const double d = real.deployment.points[i].distance_m;
        s.t_watts += pt.p_tx_watts * pt.pattern.g_m * real.fading[i] *
                     path_loss(pt.channel, d, real.states[i]);
    }
    for (int idx : real.partition.interferers) {
        const auto i = static_cast<std::size_t>(idx);
        const double d = real.deployment.points[i].distance_m;
        s.i_watts += pt.p_tx_watts * real.gains[i] * real.fading[i] *
                     path_loss(pt.channel, d, real.states[i]);
    }
    return s;
}

SinrSample simulate_realization(const ScenarioPoint &pt, Rng &rng) {
    const NetworkRealization real = simulate_network(pt, rng);
    return sinr_from(real, pt);
}

MetricResult estimate_rate(const ScenarioPoint &pt, int n_trials, Rng &rng, const SimControl &ctrl) {
    if (n_trials < 1)
        throw DomainError("estimate_rate: n_trials must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();
    auto vals = run_trials(n_trials, rng, ctrl.parallel, [&](Rng &trial_rng) {
        return std::log1p(simulate_realization(pt, trial_rng).sinr());
    });
    return mean_result(vals, Metric::AvgRateNats, elapsed_s(t0));
}

MetricResult estimate_outage(const ScenarioPoint &pt, double tau, int n_trials, Rng &rng,
                             const SimControl &ctrl) {
    auto grid = estimate_outage_grid(pt, {tau}, n_trials, rng, ctrl);
    return grid.front();
}

std::vector<MetricResult> estimate_outage_grid(const ScenarioPoint &pt,
                                               const std::vector<double> &taus, int n_trials,
                                               Rng &rng, const SimControl &ctrl) {
    if (n_trials < 1)
        throw DomainError("estimate_outage_grid: n_trials must be >= 1");
    for (double tau : taus)
        if (!(tau > 0.0))
            throw DomainError("estimate_outage_grid: tau must be positive");
    const auto t0 = std::chrono::steady_clock::now();
    auto sinrs = run_trials(n_trials, rng, ctrl.parallel, [&](Rng &trial_rng) {
        return simulate_realization(pt, trial_rng).sinr();
    });
    const double total = elapsed_s(t0);
    std::vector<MetricResult> out;
    out.reserve(taus.size());
    for (double tau : taus) {
        int count = 0;
        for (double s : sinrs)
            if (s <= tau)
                ++count;
        const double p = static_cast<double>(count) / n_trials;
        MetricResult res;
        res.value = p;
        res.std_error = std::sqrt(p * (1.0 - p) / n_trials);
        res.n_trials = n_trials;
        res.method = Engine::Simulation;
        res.metric = Metric::OutageProb;
        res.runtime_s = total / static_cast<double>(taus.size());
        out.push_back(res);
    }
    return out;
}

MetricResult estimate_general_user(const ScenarioPoint &pt, int n_trials, Rng &rng,
                                   const SimControl &ctrl) {
    if (n_trials < 1)
        throw DomainError("estimate_general_user: n_trials must be >= 1");
    const bool rate = pt.metric == Metric::AvgRateNats;
    const double tau = pt.tau_linear;
    if (!rate && !(tau > 0.0))
        throw DomainError("estimate_general_user: tau must be positive");
    const auto t0 = std::chrono::steady_clock::now();
    auto vals = run_trials(n_trials, rng, ctrl.parallel, [&](Rng &trial_rng) {
        BsDeployment dep = sample_disc_deployment(pt.geometry, trial_rng);
        const bool edge =
            dep.points.empty() || dep.points.front().distance_m > pt.geometry.d_e;
        const CoopScheme scheme = edge ? pt.scheme : CoopScheme::non_cooperative();
        SinrSample s;
        if (dep.points.empty()) {
            s.n0_watts = pt.noise.n0_watts;
        } else {
            const NetworkRealization real =
                finish_realization(std::move(dep), pt, scheme, trial_rng);
            s = sinr_from(real, pt);
        }
        return rate ? std::log1p(s.sinr()) : (s.sinr() <= tau ? 1.0 : 0.0);
    });
    auto res = mean_result(vals, rate ? Metric::AvgRateNats : Metric::OutageProb, elapsed_s(t0));
    if (!rate)
        res.std_error = std::sqrt(res.value * (1.0 - res.value) / n_trials);
    return res;
}

} // namespace mmcoop
