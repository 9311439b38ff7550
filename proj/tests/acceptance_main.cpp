// End-to-end acceptance gate: one pass/fail line per criterion, exit code
// counts the failures. Tolerances are pinned here, not configurable.
#include "mmcoop/analytic.hpp"
#include "mmcoop/gamma_approx.hpp"
#include "mmcoop/montecarlo.hpp"
#include "mmcoop/runner.hpp"
#include "mmcoop/specfun.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace mmcoop;
using specfun::Complex;

namespace {

constexpr double kPi = 3.14159265358979323846;

double now_s() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::map<std::string, std::vector<ResultRow>> g_tables;

const std::vector<ResultRow> &table(const std::string &recipe) {
    auto it = g_tables.find(recipe);
    if (it == g_tables.end()) {
        ScenarioConfig cfg = load_config(resolve_config_path(recipe));
        it = g_tables.emplace(recipe, run_scenario(cfg)).first;
    }
    return it->second;
}

const ResultRow &row_at(const std::vector<ResultRow> &rows, Engine engine, double coordinate) {
    for (const auto &r : rows)
        if (r.engine == engine && std::fabs(r.coordinate - coordinate) < 1e-9)
            return r;
    throw std::runtime_error("missing row for coordinate " + std::to_string(coordinate));
}

struct Outcome {
    bool pass = true;
    std::string detail;
};

// ---- criterion 1: rate anchors by both engines --------------------------

Outcome criterion_rate_anchors() {
    struct Anchor {
        const char *recipe;
        double rho, target;
    };
    const Anchor anchors[] = {
        {"fig2a", 50.0, 1.46},         {"fig2a", 130.0, 0.29},
        {"fig2b", 50.0, 1.44},         {"fig2b", 130.0, 0.29},
        {"fig2a_noncoop", 50.0, 0.43}, {"fig2a_noncoop", 130.0, 0.18},
    };
    const double t0 = now_s();
    double worst_rel = 0.0, worst_gap = 0.0;
    bool pass = true;
    for (const auto &a : anchors) {
        const auto &rows = table(a.recipe);
        const ResultRow &sim = row_at(rows, Engine::Simulation, a.rho);
        const ResultRow &ana = row_at(rows, Engine::Analytic, a.rho);
        for (double v : {sim.value, ana.value}) {
            const double rel = std::fabs(v - a.target) / a.target;
            worst_rel = std::max(worst_rel, rel);
            if (rel > 0.07)
                pass = false;
        }
        const double sigma = std::sqrt(sim.std_error * sim.std_error +
                                       ana.std_error * ana.std_error);
        const double gap = std::fabs(sim.value - ana.value) / std::max(sigma, 1e-12);
        worst_gap = std::max(worst_gap, gap);
        if (gap > 3.0)
            pass = false;
    }
    const double elapsed = now_s() - t0;
    if (elapsed >= 600.0)
        pass = false;
    std::ostringstream d;
    d.precision(3);
    d << "max rel dev " << 100.0 * worst_rel << "% vs 7%, max gap " << worst_gap
      << " sigma vs 3, " << elapsed << "s vs 600s";
    return {pass, d.str()};
}

// ---- criterion 2: exact outage tracks simulation ------------------------

Outcome criterion_outage_exactness() {
    const double t0 = now_s();
    double worst = 0.0;
    int points = 0;
    for (const char *recipe : {"fig3a", "fig3a_frc"}) {
        ScenarioConfig cfg = load_config(resolve_config_path(recipe));
        const auto &rows = table(recipe);
        for (double tau_db : cfg.sweep.values) {
            const double sim = row_at(rows, Engine::Simulation, tau_db).value;
            const double ana = row_at(rows, Engine::Analytic, tau_db).value;
            worst = std::max(worst, std::fabs(sim - ana));
            ++points;
        }
    }
    const double elapsed = now_s() - t0;
    const bool pass = worst <= 0.02 && points == 16 && elapsed < 900.0;
    std::ostringstream d;
    d.precision(3);
    d << "max |analytic - sim| " << worst << " vs 0.02 over " << points << " thresholds, "
      << elapsed << "s vs 900s";
    return {pass, d.str()};
}

// ---- criterion 3: gamma approximation accuracy and speed ----------------

Outcome criterion_approx_accuracy() {
    double worst = 0.0, sim_time = 0.0, approx_time = 0.0;
    for (const char *recipe : {"fig5", "fig5_frc"}) {
        ScenarioConfig cfg = load_config(resolve_config_path(recipe));
        const auto &rows = table(recipe);
        for (double tau_db : cfg.sweep.values) {
            const ResultRow &sim = row_at(rows, Engine::Simulation, tau_db);
            const ResultRow &apx = row_at(rows, Engine::GammaApprox, tau_db);
            worst = std::max(worst, std::fabs(sim.value - apx.value));
            sim_time += sim.runtime_s;
            approx_time += apx.runtime_s;
        }
    }
    const double speedup = sim_time / std::max(approx_time, 1e-12);
    const bool pass = worst <= 0.05 && speedup >= 10.0;
    std::ostringstream d;
    d.precision(3);
    d << "max |approx - sim| " << worst << " vs 0.05, speedup " << speedup << "x vs 10x";
    return {pass, d.str()};
}

// ---- criterion 4: FRC outage floor at deep thresholds -------------------

Outcome criterion_frc_floor() {
    ScenarioConfig cfg;
    cfg.id = "frc_floor";
    cfg.rho_m = 50.0;
    cfg.chi = 1.0;
    cfg.d_infinity_m = 2000.0;
    cfg.channel.alpha_l = 2.0;
    cfg.channel.alpha_n = 2.92;
    cfg.channel.c_l = db_to_linear(-61.4);
    cfg.channel.c_n = db_to_linear(-72.0);
    cfg.channel.n_l = 4.0;
    cfg.channel.n_n = 1.0;
    cfg.channel.p_l = 0.2;
    cfg.channel.d_los = 205.0;
    cfg.pattern.g_m = db_to_linear(15.0);
    cfg.pattern.g_s = db_to_linear(-3.0);
    cfg.pattern.theta_t = 15.0 * kPi / 180.0;
    cfg.p_tx_dbm = 20.0;
    cfg.bandwidth_hz = 1e9;
    cfg.noise_figure_db = 5.0;
    cfg.scheme.kind = CoopScheme::Kind::FRC;
    cfg.scheme.m_bar = 3.0;
    cfg.scheme.by_mean = true;
    cfg.metric = Metric::OutageProb;
    cfg.user = UserKind::CellEdge;
    cfg.engines = {Engine::Simulation, Engine::Analytic, Engine::GammaApprox};
    cfg.trials = 10000;
    cfg.seed = 424242;
    cfg.sweep.axis = SweepAxis::TauDb;
    cfg.sweep.values = {-30.0};
    validate_config(cfg);

    const ScenarioPoint pt = materialize(cfg, -30.0);
    const double area = pt.scheme.d_co * pt.scheme.d_co - pt.geometry.d_e * pt.geometry.d_e;
    const double atom = std::exp(-kPi * pt.geometry.lambda_b * area);

    const auto rows = run_scenario(cfg);
    double worst = 0.0;
    for (const auto &r : rows)
        worst = std::max(worst, std::fabs(r.value - atom));
    const bool pass = worst <= 0.01 && rows.size() == 3;
    std::ostringstream d;
    d.precision(3);
    d << "empty-region mass " << atom << ", max |engine - mass| " << worst << " vs 0.01";
    return {pass, d.str()};
}

// ---- criterion 5: self-contained oracle suite ---------------------------

Complex one_minus_pow(Complex w, double n) {
    if (std::abs(w) < 1e-6) {
        Complex l = w * (1.0 - w * (0.5 - w / 3.0));
        Complex u = -n * l;
        return -(u * (1.0 + u * (0.5 + u / 6.0)));
    }
    return 1.0 - std::pow(1.0 + w, -n);
}

Complex lam_quad(double a, double alpha, double n, Complex z, double x, double y) {
    const Complex s = z * (a / n);
    const auto gl = specfun::gauss_legendre(32);
    const int panels = 16;
    const double ratio = std::pow(x / y, 1.0 / panels);
    Complex acc = 0.0;
    double lo = y;
    for (int p = 0; p < panels; ++p) {
        const double hi = p + 1 == panels ? x : lo * ratio;
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double t = mid + half * gl.nodes[i];
            acc += half * gl.weights[i] * 2.0 * t * std::pow(1.0 + s * std::pow(t, -alpha), -n);
        }
        lo = hi;
    }
    return acc;
}

Complex xi_quad(double a, double alpha, double n, Complex z, double x) {
    const Complex s = z * (a / n);
    const double cap = std::pow(x, -alpha);
    const double u0 = cap * 1e-30;
    const auto gl = specfun::gauss_legendre(24);
    const int panels = 90;
    const double ratio = std::pow(cap / u0, 1.0 / panels);
    Complex acc = n * s * (2.0 / alpha) * std::pow(u0, 1.0 - 2.0 / alpha) / (1.0 - 2.0 / alpha);
    double lo = u0;
    for (int p = 0; p < panels; ++p) {
        const double hi = p + 1 == panels ? cap : lo * ratio;
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double u = mid + half * gl.nodes[i];
            acc += half * gl.weights[i] * one_minus_pow(s * u, n) * (2.0 / alpha) *
                   std::pow(u, -2.0 / alpha - 1.0);
        }
        lo = hi;
    }
    return acc;
}

LtContext oracle_ctx() {
    ChannelParams ch;
    ch.alpha_l = 2.0;
    ch.alpha_n = 2.92;
    ch.c_l = db_to_linear(-61.4);
    ch.c_n = db_to_linear(-72.0);
    ch.n_l = 3.0;
    ch.n_n = 1.0;
    ch.p_l = 0.2;
    ch.d_los = 205.0;
    AntennaPattern pat;
    pat.g_m = db_to_linear(15.0);
    pat.g_s = db_to_linear(-3.0);
    pat.theta_t = 15.0 * kPi / 180.0;
    return make_lt_context(ch, pat, dbm_to_watts(20.0), make_geometry(90.0));
}

double transform_oracles_max_rel() {
    LtContext ctx = oracle_ctx();
    std::mt19937_64 gen(246810);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double shapes[] = {1.0, 2.0, 2.5, 3.0, 4.0};
    double worst = 0.0;
    auto bump = [&](Complex got, Complex want, double floor_abs) {
        const double denom = std::max(std::abs(want), floor_abs);
        worst = std::max(worst, std::abs(got - want) / denom);
    };
    for (int trial = 0; trial < 40; ++trial) { // annulus transform
        const double a = std::pow(10.0, -9.0 + 5.0 * uni(gen));
        const double alpha = trial % 5 == 0 ? 2.0 : 2.05 + 1.75 * uni(gen);
        const double n = shapes[trial % 5];
        const double y = 20.0 + 280.0 * uni(gen);
        const double x = y * (1.0 + 3.0 * uni(gen));
        const double mag = std::pow(10.0, 2.0 + 8.0 * uni(gen));
        const Complex z = trial % 3 == 0 ? Complex(mag, 0.0)
                                         : Complex(0.0, trial % 3 == 1 ? mag : -mag);
        ctx.a_ml = a;
        ctx.channel.alpha_l = alpha;
        ctx.channel.n_l = n;
        bump(lambda_fn(ctx, Lobe::Main, LinkState::LOS, z, x, y), lam_quad(a, alpha, n, z, x, y),
             1e-10 * (x * x - y * y));
    }
    for (int trial = 0; trial < 30; ++trial) { // far-field exponent
        const double a = std::pow(10.0, -10.0 + 5.0 * uni(gen));
        const double alpha = 2.2 + 1.4 * uni(gen);
        const double n = shapes[trial % 3];
        const double x = 50.0 + 450.0 * uni(gen);
        const double mag = std::pow(10.0, 2.0 + 8.0 * uni(gen));
        const Complex z = trial % 3 == 0 ? Complex(mag, 0.0)
                                         : Complex(0.0, trial % 3 == 1 ? mag : -mag);
        ctx.a_mn = a;
        ctx.channel.alpha_n = alpha;
        ctx.channel.n_n = n;
        bump(xi_fn(ctx, Lobe::Main, z, x), xi_quad(a, alpha, n, z, x), 1e-12 * x * x);
    }
    ctx = oracle_ctx();
    const double d = ctx.channel.d_los;
    for (int trial = 0; trial < 30; ++trial) { // blend-annulus exponent
        const double a = std::pow(10.0, -9.0 + 4.0 * uni(gen));
        const double alpha = trial % 2 == 0 ? 2.0 : 2.3 + uni(gen);
        const double n = 1.0 + (trial % 4);
        const double x = 30.0 + (d - 40.0) * uni(gen);
        const double mag = std::pow(10.0, 3.0 + 7.0 * uni(gen));
        const Complex z = trial % 2 == 0 ? Complex(mag, 0.0) : Complex(0.0, mag);
        ctx.a_ml = a;
        ctx.channel.alpha_l = alpha;
        ctx.channel.n_l = n;
        // the subtraction leaves machine noise at the area scale, so the
        // relative check floors there
        bump(theta_fn(ctx, Lobe::Main, LinkState::LOS, z, x),
             (d * d - x * x) - lam_quad(a, alpha, n, z, d, x), 1e-5 * (d * d - x * x));
    }
    return worst;
}

double gil_pelaez_gamma_max_err() {
    double worst = 0.0;
    for (double k : {0.7, 1.0, 2.5, 8.0}) {
        for (double theta : {0.5, 2.0}) {
            auto cf = [&](double w) { return std::pow(Complex(1.0, -w * theta), -k); };
            for (double scale : {0.3, 1.0, 2.5}) {
                const double t = scale * k * theta;
                const auto res = specfun::gil_pelaez_cdf(cf, t);
                const double want = specfun::reg_lower_gamma(k, t / theta);
                worst = std::max(worst, std::fabs(res.value - want));
            }
        }
    }
    return worst;
}

double ks_distance_uniform(std::vector<double> &u) {
    std::sort(u.begin(), u.end());
    const double n = static_cast<double>(u.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double hi = (i + 1.0) / n - u[i];
        const double lo = u[i] - i / n;
        ks = std::max(ks, std::max(hi, lo));
    }
    return ks;
}

struct DensityChecks {
    double norm_err = 0.0;
    double ks = 0.0;
};

DensityChecks density_oracles() {
    NetworkGeometry geom = make_geometry(90.0, 1.0, 800.0);
    DensityChecks out;

    const auto gl = specfun::gauss_legendre(32);
    auto seg = [&](double lo, double hi, auto &&fn) {
        double acc = 0.0;
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        for (std::size_t i = 0; i < gl.nodes.size(); ++i)
            acc += half * gl.weights[i] * fn(mid + half * gl.nodes[i]);
        return acc;
    };
    for (int m : {1, 3, 8}) {
        const double r_hi = std::sqrt(geom.d_e * geom.d_e + 90.0 / (kPi * geom.lambda_b));
        double mass = 0.0;
        double lo = geom.d_e;
        const int panels = 120;
        for (int p = 0; p < panels; ++p) {
            const double hi = geom.d_e + (r_hi - geom.d_e) * (p + 1.0) / panels;
            mass += seg(lo, hi, [&](double r) { return pdf_dm1(geom, m, r); });
            lo = hi;
        }
        out.norm_err = std::max(out.norm_err, std::fabs(mass - 1.0));
    }
    for (double r : {150.0, 260.0}) {
        const double mass =
            seg(geom.d_e, r, [&](double x) { return conditional_coop_distance_pdf(geom, r, x); });
        out.norm_err = std::max(out.norm_err, std::fabs(mass - 1.0));
    }

    // probability transforms of sampled neighbors against both distance laws
    std::mt19937_64 gen(1357911);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double big_a = geom.d_infinity * geom.d_infinity - geom.d_e * geom.d_e;
    std::poisson_distribution<int> cnt(kPi * geom.lambda_b * big_a);
    const int m = 3, trials = 100000;
    std::vector<double> u_outer;
    std::vector<double> u_inner;
    u_outer.reserve(trials);
    u_inner.reserve(static_cast<std::size_t>(trials) * m);
    std::vector<double> areas;
    for (int t = 0; t < trials; ++t) {
        int k = cnt(gen);
        while (k < m + 1)
            k = cnt(gen);
        areas.resize(static_cast<std::size_t>(k));
        for (auto &v : areas)
            v = uni(gen) * big_a;
        std::partial_sort(areas.begin(), areas.begin() + m + 1, areas.end());
        const double r = std::sqrt(geom.d_e * geom.d_e + areas[static_cast<std::size_t>(m)]);
        u_outer.push_back(cdf_dm1(geom, m, r));
        for (int i = 0; i < m; ++i)
            u_inner.push_back(areas[static_cast<std::size_t>(i)] /
                              areas[static_cast<std::size_t>(m)]);
    }
    out.ks = std::max(ks_distance_uniform(u_outer), ks_distance_uniform(u_inner));
    return out;
}

double moment_oracles_max_rel() {
    NetworkGeometry geom = make_geometry(90.0, 1.0, 800.0);
    ChannelParams ch;
    ch.alpha_l = 2.0;
    ch.alpha_n = 2.92;
    ch.c_l = db_to_linear(-61.4);
    ch.c_n = db_to_linear(-72.0);
    ch.n_l = 3.0;
    ch.n_n = 1.0;
    ch.p_l = 0.2;
    ch.d_los = 205.0;
    AntennaPattern pat;
    pat.g_m = db_to_linear(15.0);
    pat.g_s = db_to_linear(-3.0);
    pat.theta_t = 15.0 * kPi / 180.0;
    const double p_tx = dbm_to_watts(20.0);
    const double a_l = p_tx * pat.g_m * ch.c_l;
    const double a_n = p_tx * pat.g_m * ch.c_n;
    double worst = 0.0;
    auto bump = [&](double got, double want) {
        worst = std::max(worst, std::fabs(got - want) / std::fabs(want));
    };

    {
        const int m = 3, trials = 1500000;
        std::mt19937_64 gen(8675309);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        const double big_a = geom.d_infinity * geom.d_infinity - geom.d_e * geom.d_e;
        std::poisson_distribution<int> cnt(kPi * geom.lambda_b * big_a);
        std::gamma_distribution<double> gam_l(ch.n_l, 1.0 / ch.n_l);
        std::gamma_distribution<double> gam_n(ch.n_n, 1.0 / ch.n_n);
        double sl = 0.0, sl2 = 0.0, sn = 0.0, sn2 = 0.0;
        long cl = 0, cn = 0;
        std::vector<double> areas;
        for (int t = 0; t < trials; ++t) {
            int k = cnt(gen);
            while (k < m + 1)
                k = cnt(gen);
            areas.resize(static_cast<std::size_t>(k));
            for (auto &v : areas)
                v = uni(gen) * big_a;
            std::partial_sort(areas.begin(), areas.begin() + m, areas.end());
            double s_l = 0.0, s_n = 0.0;
            int n_los = 0;
            for (int i = 0; i < m; ++i) {
                const double x =
                    std::sqrt(geom.d_e * geom.d_e + areas[static_cast<std::size_t>(i)]);
                if (x <= ch.d_los && uni(gen) < ch.p_l) {
                    ++n_los;
                    s_l += a_l * gam_l(gen) * std::pow(x, -ch.alpha_l);
                } else {
                    s_n += a_n * gam_n(gen) * std::pow(x, -ch.alpha_n);
                }
            }
            if (n_los > 0) {
                sl += s_l;
                sl2 += s_l * s_l;
                ++cl;
            } else {
                sn += s_n;
                sn2 += s_n * s_n;
                ++cn;
            }
        }
        const MomentPair ml = fnc_los_moments(geom, ch, pat, p_tx, m);
        const MomentPair mn = fnc_nlos_moments(geom, ch, pat, p_tx, m);
        const double mean_l = sl / cl, mean_n = sn / cn;
        bump(ml.mean, mean_l);
        bump(ml.variance, sl2 / cl - mean_l * mean_l);
        bump(mn.mean, mean_n);
        bump(mn.variance, sn2 / cn - mean_n * mean_n);
    }

    for (double d_co : {180.0, 250.0}) {
        const int trials = 2000000;
        std::mt19937_64 gen(975310 + static_cast<unsigned>(d_co));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        const double area = d_co * d_co - geom.d_e * geom.d_e;
        std::poisson_distribution<int> cnt(kPi * geom.lambda_b * area);
        std::gamma_distribution<double> gam_l(ch.n_l, 1.0 / ch.n_l);
        std::gamma_distribution<double> gam_n(ch.n_n, 1.0 / ch.n_n);
        double sl = 0.0, sl2 = 0.0, sn = 0.0, sn2 = 0.0;
        long cl = 0, cn = 0;
        for (int t = 0; t < trials; ++t) {
            const int k = cnt(gen);
            double s_l = 0.0, s_n = 0.0;
            int n_los = 0, n_nlos = 0;
            for (int i = 0; i < k; ++i) {
                const double x = std::sqrt(geom.d_e * geom.d_e + uni(gen) * area);
                if (x <= ch.d_los && uni(gen) < ch.p_l) {
                    ++n_los;
                    s_l += a_l * gam_l(gen) * std::pow(x, -ch.alpha_l);
                } else {
                    ++n_nlos;
                    s_n += a_n * gam_n(gen) * std::pow(x, -ch.alpha_n);
                }
            }
            if (n_los > 0) {
                sl += s_l;
                sl2 += s_l * s_l;
                ++cl;
            }
            if (n_nlos > 0) {
                sn += s_n;
                sn2 += s_n * s_n;
                ++cn;
            }
        }
        const MomentPair ml = frc_moments(geom, ch, pat, p_tx, d_co, LinkState::LOS);
        const MomentPair mn = frc_moments(geom, ch, pat, p_tx, d_co, LinkState::NLOS);
        const double mean_l = sl / cl, mean_n = sn / cn;
        bump(ml.mean, mean_l);
        bump(ml.variance, sl2 / cl - mean_l * mean_l);
        bump(mn.mean, mean_n);
        bump(mn.variance, sn2 / cn - mean_n * mean_n);
    }
    return worst;
}

Outcome criterion_oracles() {
    const double t0 = now_s();
    const double lt_rel = transform_oracles_max_rel();
    const double gp_err = gil_pelaez_gamma_max_err();
    const DensityChecks dens = density_oracles();
    const double mom_rel = moment_oracles_max_rel();
    const double elapsed = now_s() - t0;
    const bool pass = lt_rel <= 1e-7 && gp_err <= 1e-6 && dens.norm_err <= 1e-8 &&
                      dens.ks < 0.01 && mom_rel <= 0.02 && elapsed < 300.0;
    std::ostringstream d;
    d.precision(3);
    d << "transforms " << lt_rel << " vs 1e-7, inversion " << gp_err << " vs 1e-6, density norm "
      << dens.norm_err << " vs 1e-8, KS " << dens.ks << " vs 0.01, moments "
      << 100.0 * mom_rel << "% vs 2%, " << elapsed << "s vs 300s";
    return {pass, d.str()};
}

// ---- criterion 6: monotonicity and normalization over every recipe ------

Outcome criterion_recipe_sweep() {
    std::ostringstream why;
    bool pass = true;
    auto fail = [&](const std::string &msg) {
        if (!pass)
            return;
        pass = false;
        why << msg;
    };

    for (const auto &recipe : bundled_recipes()) {
        ScenarioConfig cfg = load_config(resolve_config_path(recipe));
        const auto &rows = table(recipe);

        for (const auto &r : rows) {
            if (!std::isfinite(r.value) || r.std_error < 0.0)
                fail(recipe + ": non-finite value or negative stderr");
            if (r.metric == Metric::OutageProb && (r.value < 0.0 || r.value > 1.0))
                fail(recipe + ": outage outside [0,1]");
            if (r.metric == Metric::AvgRateNats && r.value < 0.0)
                fail(recipe + ": negative rate");
        }

        for (Engine engine : cfg.engines) {
            std::vector<const ResultRow *> line;
            for (const auto &r : rows)
                if (r.engine == engine)
                    line.push_back(&r);
            for (std::size_t i = 1; i < line.size(); ++i) {
                const ResultRow &a = *line[i - 1], &b = *line[i];
                if (cfg.sweep.axis == SweepAxis::TauDb && cfg.metric == Metric::OutageProb) {
                    // shared trial set makes the simulated curve exactly monotone
                    if (b.value < a.value - 1e-9)
                        fail(recipe + ": outage not monotone in tau (" + engine_name(engine) + ")");
                }
                if (cfg.sweep.axis == SweepAxis::Rho && cfg.metric == Metric::AvgRateNats) {
                    const double slack = engine == Engine::Simulation
                                             ? 3.0 * (a.std_error + b.std_error)
                                             : 1e-9;
                    if (b.value > a.value + slack)
                        fail(recipe + ": rate not decreasing in rho (" + engine_name(engine) + ")");
                }
            }
        }

        for (double coord : cfg.sweep.values) {
            const ScenarioPoint pt = materialize(cfg, coord);
            const LtContext ctx = make_lt_context(pt);
            const Complex zero(0.0, 0.0);
            if (pt.scheme.kind == CoopScheme::Kind::FRC) {
                const double d_co = pt.scheme.d_co;
                if (std::abs(lt_signal_frc(ctx, d_co, zero) - 1.0) > 1e-12 ||
                    std::abs(lt_interference_frc(ctx, d_co, zero) - 1.0) > 1e-12)
                    fail(recipe + ": FRC transform not unit at z=0");
            } else {
                const int m = std::max(1, pt.scheme.m);
                for (double r : {ctx.d_e * 1.25, ctx.d_e + 150.0}) {
                    if (std::abs(lt_signal_fnc(ctx, m, r, zero) - 1.0) > 1e-12 ||
                        std::abs(lt_interference_fnc(ctx, r, zero) - 1.0) > 1e-12)
                        fail(recipe + ": FNC transform not unit at z=0");
                }
            }
        }
    }
    std::ostringstream d;
    d << g_tables.size() << " recipe tables swept";
    if (!pass)
        d << "; first failure: " << why.str();
    return {pass, d.str()};
}

} // namespace

int main() {
    struct Entry {
        int id;
        const char *label;
        Outcome (*fn)();
    };
    const Entry entries[] = {
        {1, "rate anchors, simulation + analytic", criterion_rate_anchors},
        {2, "exact outage vs simulation", criterion_outage_exactness},
        {3, "gamma approximation accuracy and speed", criterion_approx_accuracy},
        {4, "FRC outage floor", criterion_frc_floor},
        {5, "oracle suite", criterion_oracles},
        {6, "recipe-wide monotonicity and normalization", criterion_recipe_sweep},
    };
    int failures = 0;
    for (const auto &e : entries) {
        Outcome out;
        try {
            out = e.fn();
        } catch (const std::exception &ex) {
            out.pass = false;
            out.detail = std::string("exception: ") + ex.what();
        }
        if (!out.pass)
            ++failures;
        std::printf("criterion %d (%s): %s (%s)\n", e.id, e.label, out.pass ? "PASS" : "FAIL",
                    out.detail.c_str());
        std::fflush(stdout);
    }
    return failures;
}
