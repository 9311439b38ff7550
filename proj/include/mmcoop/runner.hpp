#pragma once

#include "mmcoop/scenario.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mmcoop {

struct ResultRow {
    std::string scenario;
    std::string axis;
    double coordinate = 0.0;
    Engine engine = Engine::Simulation;
    Metric metric = Metric::AvgRateNats;
    double value = 0.0;
    double std_error = 0.0;
    double runtime_s = 0.0;
    std::uint64_t seed = 0;
};

/*! Key-value/table config text -> validated ScenarioConfig. */
ScenarioConfig parse_config(const std::string &text, const std::string &fallback_id);
ScenarioConfig load_config(const std::string &path);

std::vector<ResultRow> run_scenario(const ScenarioConfig &config);

void write_csv(const std::vector<ResultRow> &rows, std::ostream &os);
std::vector<ResultRow> read_csv(std::istream &is);

struct CompareDelta {
    std::string axis;
    double coordinate = 0.0;
    std::string metric;
    std::string engine_a, engine_b;
    double value_a = 0.0, value_b = 0.0;
    double abs_delta = 0.0;
    double allowance = 0.0; // tol_abs + 3 * combined stderr
    bool pass = true;
};

struct CompareReport {
    std::vector<CompareDelta> deltas;
    double max_abs_delta = 0.0;
    bool pass = true;
};

/*! Joins on (axis, coordinate, metric); throws ValidationError when the
 * tables cover different coordinates. */
CompareReport compare_tables(const std::vector<ResultRow> &a, const std::vector<ResultRow> &b,
                             double tol_abs);

std::string recipe_dir();
std::vector<std::string> bundled_recipes();
std::string resolve_config_path(const std::string &arg);

} // namespace mmcoop
