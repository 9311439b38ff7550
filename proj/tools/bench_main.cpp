// Compares the OpenMP paths against the serial reference on identical inputs.
// Values must agree bit for bit; the point of the run is the timing table.

#include "mmcoop/analytic.hpp"
#include "mmcoop/montecarlo.hpp"
#include "mmcoop/rng.hpp"
#include "mmcoop/scenario.hpp"

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace mmcoop;

namespace {

constexpr double kPi = 3.14159265358979323846;

ScenarioPoint bench_point() {
    ScenarioPoint pt;
    pt.geometry = make_geometry(90.0);
    pt.channel.alpha_l = 2.0;
    pt.channel.alpha_n = 2.92;
    pt.channel.c_l = db_to_linear(-61.4);
    pt.channel.c_n = db_to_linear(-72.0);
    pt.channel.n_l = 3.0;
    pt.channel.n_n = 1.0;
    pt.channel.p_l = 0.2;
    pt.channel.d_los = 200.0;
    pt.pattern.g_m = db_to_linear(15.0);
    pt.pattern.g_s = db_to_linear(-3.0);
    pt.pattern.theta_t = 15.0 * kPi / 180.0;
    pt.noise = make_noise(1e9, 5.0);
    pt.p_tx_watts = dbm_to_watts(20.0);
    pt.scheme = CoopScheme::fnc(3);
    pt.metric = Metric::OutageProb;
    pt.tau_linear = 1.0;
    return pt;
}

template <typename F> double timed(F &&fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

} // namespace

int main() {
    const ScenarioPoint pt = bench_point();
    int failures = 0;

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled at build time\n\n");
#endif

    {
        const int trials = 20000;
        MetricResult serial, parallel;
        Rng rng_s = make_stream(42, 0), rng_p = make_stream(42, 0);
        double ts = timed([&] { serial = estimate_outage(pt, pt.tau_linear, trials, rng_s,
                                                         SimControl{false}); });
        double tp = timed([&] { parallel = estimate_outage(pt, pt.tau_linear, trials, rng_p,
                                                           SimControl{true}); });
        bool same = serial.value == parallel.value && serial.std_error == parallel.std_error;
        std::printf("simulated outage, %d trials\n", trials);
        std::printf("  serial   %8.3fs  value %.10g\n", ts, serial.value);
        std::printf("  parallel %8.3fs  value %.10g\n", tp, parallel.value);
        std::printf("  speedup %.2fx, values %s\n\n", ts / tp, same ? "identical" : "DIFFER");
        if (!same) ++failures;
    }

    {
        LtContext ctx = make_lt_context(pt);
        RateIntegralControls serial_ctrl, parallel_ctrl;
        serial_ctrl.parallel_nodes = false;
        parallel_ctrl.parallel_nodes = true;
        double vs = 0.0, vp = 0.0;
        double ts = timed([&] { vs = outage_fnc_exact(ctx, pt.scheme.m, pt.noise, pt.tau_linear,
                                                      serial_ctrl); });
        double tp = timed([&] { vp = outage_fnc_exact(ctx, pt.scheme.m, pt.noise, pt.tau_linear,
                                                      parallel_ctrl); });
        bool same = vs == vp;
        std::printf("analytic outage, outer quadrature nodes\n");
        std::printf("  serial   %8.3fs  value %.10g\n", ts, vs);
        std::printf("  parallel %8.3fs  value %.10g\n", tp, vp);
        std::printf("  speedup %.2fx, values %s\n\n", ts / tp, same ? "identical" : "DIFFER");
        if (!same) ++failures;
    }

    {
        LtContext ctx = make_lt_context(pt);
        RateIntegralControls serial_ctrl, parallel_ctrl;
        serial_ctrl.parallel_nodes = false;
        parallel_ctrl.parallel_nodes = true;
        double vs = 0.0, vp = 0.0;
        double ts = timed([&] { vs = avg_rate_fnc(ctx, pt.scheme.m, pt.noise, serial_ctrl); });
        double tp = timed([&] { vp = avg_rate_fnc(ctx, pt.scheme.m, pt.noise, parallel_ctrl); });
        bool same = vs == vp;
        std::printf("analytic rate, outer quadrature nodes\n");
        std::printf("  serial   %8.3fs  value %.10g\n", ts, vs);
        std::printf("  parallel %8.3fs  value %.10g\n", tp, vp);
        std::printf("  speedup %.2fx, values %s\n", ts / tp, same ? "identical" : "DIFFER");
        if (!same) ++failures;
    }

    if (failures) {
        std::printf("\n%d comparison(s) FAILED\n", failures);
        return 1;
    }
    return 0;
}
