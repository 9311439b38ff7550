#include "mmcoop/geometry.hpp"

#include "mmcoop/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace mmcoop {

namespace {

constexpr double kPi = std::numbers::pi;

double annulus_mean(const NetworkGeometry &g, double r_out) {
    return g.lambda_b * kPi * (r_out * r_out - g.d_e * g.d_e);
}

} // namespace

NetworkGeometry make_geometry(double rho, double chi, double d_infinity) {
    if (!(rho > 0.0))
        throw DomainError("make_geometry: rho must be positive");
    NetworkGeometry g;
    g.rho = rho;
    g.chi = chi;
    g.lambda_b = 1.0 / (kPi * rho * rho);
    g.d_e = chi * rho;
    g.d_infinity = d_infinity;
    auto bad = geometry_violations(g);
    if (!bad.empty())
        throw DomainError("make_geometry: " + bad.front());
    return g;
}

NetworkGeometry make_geometry_from_density(double lambda_b, double chi, double d_infinity) {
    if (!(lambda_b > 0.0))
        throw DomainError("make_geometry_from_density: lambda_b must be positive");
    return make_geometry(std::sqrt(1.0 / (kPi * lambda_b)), chi, d_infinity);
}

CoopScheme CoopScheme::fnc(int m) {
    if (m < 1)
        throw DomainError("CoopScheme::fnc: m must be >= 1");
    CoopScheme s;
    s.kind = Kind::FNC;
    s.m = m;
    return s;
}

CoopScheme CoopScheme::frc(double d_co) {
    if (!(d_co > 0.0))
        throw DomainError("CoopScheme::frc: d_co must be positive");
    CoopScheme s;
    s.kind = Kind::FRC;
    s.d_co = d_co;
    return s;
}

CoopScheme CoopScheme::non_cooperative() {
    CoopScheme s;
    s.kind = Kind::NonCooperative;
    s.m = 1;
    return s;
}

BsDeployment sample_deployment(const NetworkGeometry &geometry, Rng &rng) {
    auto bad = geometry_violations(geometry);
    if (!bad.empty())
        throw DomainError("sample_deployment: " + bad.front());
    const double d_e2 = geometry.d_e * geometry.d_e;
    const double d_inf2 = geometry.d_infinity * geometry.d_infinity;
    const double mean = geometry.lambda_b * kPi * (d_inf2 - d_e2);
    std::poisson_distribution<int> count_dist(mean);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = count_dist(rng);
    BsDeployment dep;
    dep.geometry = geometry;
    dep.points.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double u = unit(rng);
        const double r = std::sqrt(d_e2 + u * (d_inf2 - d_e2));
        const double theta = -kPi + 2.0 * kPi * unit(rng);
        dep.points.push_back({r, theta});
    }
    std::stable_sort(dep.points.begin(), dep.points.end(),
                     [](const BsPoint &a, const BsPoint &b) { return a.distance_m < b.distance_m; });
    return dep;
}

double frc_count_pmf(const NetworkGeometry &geometry, double d_co, int n) {
    if (!(d_co > geometry.d_e))
        throw DomainError("frc_count_pmf: d_co must exceed the exclusion radius");
    if (n < 0)
        throw DomainError("frc_count_pmf: n must be nonnegative");
    const double mu = annulus_mean(geometry, d_co);
    return std::exp(n * std::log(mu) - mu - std::lgamma(n + 1.0));
}

double pdf_dm1(const NetworkGeometry &geometry, int m, double r) {
    if (m < 1)
        throw DomainError("pdf_dm1: m must be >= 1");
    if (r <= geometry.d_e)
        return 0.0;
    const double lp = geometry.lambda_b * kPi;
    const double area = r * r - geometry.d_e * geometry.d_e;
    // lambda*pi*(r^2 - d_e^2) is Erlang(m+1): the void makes the (m+1)-th
    // neighbor the (m+1)-th arrival of a unit-rate process in the area
    // coordinate. Log-domain keeps m ~ 50 and large r finite.
    const double logf = std::log(2.0) + (m + 1.0) * std::log(lp) -
                        std::lgamma(m + 1.0) + std::log(r) + m * std::log(area) - lp * area;
    return std::exp(logf);
}

double cdf_dm1(const NetworkGeometry &geometry, int m, double r) {
    if (m < 1)
        throw DomainError("cdf_dm1: m must be >= 1");
    if (r <= geometry.d_e)
        return 0.0;
    const double lp = geometry.lambda_b * kPi;
    const double area = r * r - geometry.d_e * geometry.d_e;
    return specfun::reg_lower_gamma(m + 1.0, lp * area);
}

double conditional_coop_distance_pdf(const NetworkGeometry &geometry, double r, double x) {
    if (!(r > geometry.d_e))
        throw DomainError("conditional_coop_distance_pdf: r must exceed the exclusion radius");
    if (x <= geometry.d_e || x > r)
        return 0.0;
    return 2.0 * x / (r * r - geometry.d_e * geometry.d_e);
}

CoopPartition select_cooperators(const BsDeployment &deployment, const CoopScheme &scheme) {
    const int n = static_cast<int>(deployment.points.size());
    CoopPartition part;
    switch (scheme.kind) {
    case CoopScheme::Kind::FNC:
    case CoopScheme::Kind::NonCooperative: {
        const int m = scheme.kind == CoopScheme::Kind::FNC ? scheme.m : 1;
        if (n < m)
            throw InsufficientDeployment("select_cooperators: fewer than m BSs deployed");
        part.coop.reserve(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i)
            part.coop.push_back(i);
        part.interferers.reserve(static_cast<std::size_t>(n - m));
        for (int i = m; i < n; ++i)
            part.interferers.push_back(i);
        break;
    }
    case CoopScheme::Kind::FRC: {
        if (!(scheme.d_co > deployment.geometry.d_e))
            throw DomainError("select_cooperators: d_co must exceed the exclusion radius");
        for (int i = 0; i < n; ++i) {
            if (deployment.points[static_cast<std::size_t>(i)].distance_m <= scheme.d_co)
                part.coop.push_back(i);
            else
                part.interferers.push_back(i);
        }
        break;
    }
    }
    return part;
}

std::vector<std::string> geometry_violations(const NetworkGeometry &geometry) {
    std::vector<std::string> bad;
    if (!(geometry.lambda_b > 0.0))
        bad.push_back("lambda_b must be positive");
    if (!(geometry.rho > 0.0))
        bad.push_back("rho must be positive");
    if (!(geometry.chi > 0.0))
        bad.push_back("chi must be positive");
    if (!(geometry.d_e > 0.0))
        bad.push_back("d_e must be positive");
    if (!(geometry.d_infinity > geometry.d_e))
        bad.push_back("d_infinity must exceed d_e");
    if (geometry.rho > 0.0) {
        const double lam = 1.0 / (kPi * geometry.rho * geometry.rho);
        if (std::abs(geometry.lambda_b - lam) > 1e-9 * lam)
            bad.push_back("lambda_b inconsistent with rho");
        if (std::abs(geometry.d_e - geometry.chi * geometry.rho) > 1e-9 * geometry.rho)
            bad.push_back("d_e inconsistent with chi * rho");
    }
    return bad;
}

std::vector<std::string> scheme_violations(const CoopScheme &scheme, const NetworkGeometry &geometry) {
    std::vector<std::string> bad;
    switch (scheme.kind) {
    case CoopScheme::Kind::FNC:
        if (scheme.m < 1)
            bad.push_back("FNC requires m >= 1");
        break;
    case CoopScheme::Kind::NonCooperative:
        break;
    case CoopScheme::Kind::FRC:
        if (!(scheme.d_co > geometry.d_e))
            bad.push_back("FRC requires d_co > d_e");
        if (!(scheme.d_co < geometry.d_infinity))
            bad.push_back("FRC requires d_co < d_infinity");
        break;
    }
    return bad;
}

} // namespace mmcoop
