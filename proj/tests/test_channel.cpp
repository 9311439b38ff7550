#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mmcoop/channel.hpp"
#include "mmcoop/rng.hpp"

#include <cmath>

using namespace mmcoop;

namespace {

constexpr double kPi = 3.14159265358979323846;

ChannelParams reference_channel() {
    ChannelParams ch;
    ch.alpha_l = 2.0;
    ch.alpha_n = 2.92;
    ch.c_l = db_to_linear(-61.4);
    ch.c_n = db_to_linear(-72.0);
    ch.n_l = 3.0;
    ch.n_n = 1.0;
    ch.p_l = 0.2;
    ch.d_los = 200.0;
    return ch;
}

} // namespace

TEST_CASE("unit conversions round-trip") {
    CHECK(db_to_linear(0.0) == doctest::Approx(1.0));
    CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
    CHECK(db_to_linear(-3.0) == doctest::Approx(0.501187).epsilon(1e-6));
    CHECK(linear_to_db(db_to_linear(-61.4)) == doctest::Approx(-61.4).epsilon(1e-12));
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0));
    CHECK(dbm_to_watts(20.0) == doctest::Approx(0.1));
    CHECK(watts_to_dbm(dbm_to_watts(17.3)) == doctest::Approx(17.3).epsilon(1e-12));
}

TEST_CASE("noise floor at 1 GHz with 5 dB noise figure") {
    NoiseModel noise = make_noise(1e9, 5.0);
    // -174 + 90 + 5 = -79 dBm
    CHECK(noise.n0_watts == doctest::Approx(1.2589254118e-11).epsilon(1e-10));
    CHECK(watts_to_dbm(noise.n0_watts) == doctest::Approx(-79.0).epsilon(1e-12));
}

TEST_CASE("LOS probability is a ball indicator scaled by p_l") {
    ChannelParams ch = reference_channel();
    CHECK(los_probability(ch, 0.0) == doctest::Approx(0.2));
    CHECK(los_probability(ch, 150.0) == doctest::Approx(0.2));
    CHECK(los_probability(ch, 200.0) == doctest::Approx(0.2));
    CHECK(los_probability(ch, 200.0 + 1e-9) == 0.0);
    CHECK(los_probability(ch, 1e6) == 0.0);
}

TEST_CASE("path loss closed forms and ordering") {
    ChannelParams ch = reference_channel();
    CHECK(path_loss(ch, 1.0, LinkState::LOS) == doctest::Approx(ch.c_l).epsilon(1e-14));
    CHECK(path_loss(ch, 1.0, LinkState::NLOS) == doctest::Approx(ch.c_n).epsilon(1e-14));
    CHECK(path_loss(ch, 100.0, LinkState::LOS) == doctest::Approx(7.2444e-11).epsilon(1e-4));
    CHECK_THROWS_AS(path_loss(ch, 0.0, LinkState::LOS), DomainError);

    double prev_l = path_loss(ch, 1.0, LinkState::LOS);
    double prev_n = path_loss(ch, 1.0, LinkState::NLOS);
    for (double d = 2.0; d < 3000.0; d *= 1.7) {
        double cur_l = path_loss(ch, d, LinkState::LOS);
        double cur_n = path_loss(ch, d, LinkState::NLOS);
        CHECK(cur_l < prev_l);
        CHECK(cur_n < prev_n);
        CHECK(cur_n < cur_l);
        prev_l = cur_l;
        prev_n = cur_n;
    }
}

TEST_CASE("fading draws have unit mean, 1/N variance, and the Gamma LT") {
    ChannelParams ch = reference_channel();
    Rng rng = make_stream(1234, 0);
    const int n = 1000000;

    SUBCASE("exponential case N=1") {
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
            sum += sample_fading(ch, LinkState::NLOS, rng);
        CHECK(sum / n == doctest::Approx(1.0).epsilon(0.005));
    }

    SUBCASE("N=3 variance and Laplace transform at z=1") {
        double sum = 0.0, sumsq = 0.0, lt = 0.0;
        for (int i = 0; i < n; ++i) {
            double h = sample_fading(ch, LinkState::LOS, rng);
            sum += h;
            sumsq += h * h;
            lt += std::exp(-h);
        }
        double mean = sum / n;
        double var = sumsq / n - mean * mean;
        CHECK(mean == doctest::Approx(1.0).epsilon(0.005));
        CHECK(var == doctest::Approx(1.0 / 3.0).epsilon(0.02));
        CHECK(lt / n == doctest::Approx(std::pow(1.0 + 1.0 / 3.0, -3.0)).epsilon(1e-3 * 4));
    }
}

TEST_CASE("interferer beam alignment frequency") {
    AntennaPattern pat;
    pat.g_m = db_to_linear(15.0);
    pat.g_s = db_to_linear(-3.0);
    pat.theta_t = 15.0 * kPi / 180.0;
    CHECK(pat.p_main() == doctest::Approx(15.0 / 360.0).epsilon(1e-12));

    Rng rng = make_stream(99, 3);
    const int n = 1000000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        double g = sample_interferer_gain(pat, rng);
        if (g == pat.g_m)
            ++hits;
        else
            CHECK(g == pat.g_s);
    }
    double p = 15.0 / 360.0;
    double sigma = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::fabs(double(hits) / n - p) < 3.0 * sigma);

    AntennaPattern full = pat;
    full.theta_t = 2.0 * kPi * (1.0 - 1e-15);
    for (int i = 0; i < 1000; ++i)
        CHECK(sample_interferer_gain(full, rng) == full.g_m);
}

TEST_CASE("sectored fit to a uniform linear array") {
    SUBCASE("K=2 degenerates to a full main lobe") {
        UlaApproximation fit = ula_approximation(2);
        CHECK(fit.degenerate_full_lobe);
        CHECK(fit.pattern.g_m == doctest::Approx(2.0));
        CHECK(fit.pattern.theta_t == doctest::Approx(2.0 * kPi));
    }

    SUBCASE("K=16 beamwidth and side-lobe level") {
        UlaApproximation fit = ula_approximation(16);
        CHECK_FALSE(fit.degenerate_full_lobe);
        CHECK(fit.pattern.g_m == doctest::Approx(16.0));
        CHECK(fit.pattern.theta_t ==
              doctest::Approx(4.0 * (kPi / 2.0 - std::acos(2.0 / 16.0))).epsilon(1e-12));
        CHECK(fit.pattern.theta_t == doctest::Approx(0.5014).epsilon(1e-3));

        // dense grid oracle for the side-lobe maximum over (2/K, 4/K)
        const int k = 16;
        double best = 0.0;
        for (int i = 1; i < 100000; ++i) {
            double x = 2.0 / k + (2.0 / k) * i / 100000.0;
            double num = std::sin(k * kPi * x / 2.0);
            double den = std::sin(kPi * x / 2.0);
            best = std::max(best, num * num / (den * den));
        }
        CHECK(fit.pattern.g_s == doctest::Approx(best).epsilon(1e-6));
        CHECK(fit.pattern.g_s < fit.pattern.g_m);
    }
}

TEST_CASE("violation reporting") {
    AntennaPattern pat;
    pat.g_m = 1.0;
    pat.g_s = 2.0; // side above main
    pat.theta_t = 7.0;  // wider than 2 pi
    auto bad = antenna_violations(pat);
    CHECK(bad.size() >= 2);

    ChannelParams ch = reference_channel();
    ch.alpha_l = 3.0; // above alpha_n
    ch.p_l = 1.5;
    auto worse = channel_violations(ch);
    CHECK(worse.size() >= 2);
    CHECK(channel_violations(reference_channel()).empty());
}
