#pragma once

#include "mmcoop/errors.hpp"
#include "mmcoop/rng.hpp"

#include <string>
#include <vector>

namespace mmcoop {

/*! Annular deployment region around a cell-edge user at the origin: BSs form
 * an HPPP of density lambda_b outside the exclusion ball d_e = chi * rho. */
struct NetworkGeometry {
    double lambda_b = 0.0;
    double rho = 0.0;
    double chi = 1.0;
    double d_e = 0.0;
    double d_infinity = 2000.0;
};

NetworkGeometry make_geometry(double rho, double chi = 1.0, double d_infinity = 2000.0);
NetworkGeometry make_geometry_from_density(double lambda_b, double chi = 1.0,
                                           double d_infinity = 2000.0);

struct BsPoint {
    double distance_m = 0.0;
    double angle_rad = 0.0;
};

struct BsDeployment {
    std::vector<BsPoint> points; // sorted ascending by distance
    NetworkGeometry geometry;
};

struct CoopScheme {
    enum class Kind { FNC, FRC, NonCooperative };
    Kind kind = Kind::NonCooperative;
    int m = 1;         // FNC cooperator count
    double d_co = 0.0; // FRC region radius

    static CoopScheme fnc(int m);
    static CoopScheme frc(double d_co);
    static CoopScheme non_cooperative();
};

BsDeployment sample_deployment(const NetworkGeometry &geometry, Rng &rng);

/*! Poisson mass for the FRC cooperator count, mean lambda*pi*(d_co^2-d_e^2). */
double frc_count_pmf(const NetworkGeometry &geometry, double d_co, int n);

/*! Density of the (m+1)-th nearest BS distance. */
double pdf_dm1(const NetworkGeometry &geometry, int m, double r);

/*! CDF companion of pdf_dm1, a regularized lower gamma in the mapped area. */
double cdf_dm1(const NetworkGeometry &geometry, int m, double r);

/*! Distance density of one cooperator given the (m+1)-th neighbor is at r. */
double conditional_coop_distance_pdf(const NetworkGeometry &geometry, double r, double x);

struct CoopPartition {
    std::vector<int> coop;
    std::vector<int> interferers;
};

CoopPartition select_cooperators(const BsDeployment &deployment, const CoopScheme &scheme);

std::vector<std::string> geometry_violations(const NetworkGeometry &geometry);
std::vector<std::string> scheme_violations(const CoopScheme &scheme, const NetworkGeometry &geometry);

} // namespace mmcoop
