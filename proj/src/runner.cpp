#include "mmcoop/runner.hpp"

#include "mmcoop/analytic.hpp"
#include "mmcoop/errors.hpp"
#include "mmcoop/gamma_approx.hpp"
#include "mmcoop/montecarlo.hpp"
#include "mmcoop/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <variant>

namespace mmcoop {

namespace {

// ------------------------------------------------------------------
// Minimal TOML-ish config reader: [section], key = value, # comments.
// Values: number, "string", true/false, [v, v, ...].
// ------------------------------------------------------------------

struct ConfigValue {
    enum class Kind { Number, String, Boolean, NumberList, StringList } kind;
    double num = 0.0;
    std::string str;
    bool flag = false;
    std::vector<double> nums;
    std::vector<std::string> strs;
    int line = 0;
};

using ConfigMap = std::map<std::string, ConfigValue>;

std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string &line) {
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (c == '"') in_str = !in_str;
        else if (c == '#' && !in_str) return line.substr(0, i);
    }
    return line;
}

bool parse_number(const std::string &tok, double &out) {
    if (tok.empty()) return false;
    char *end = nullptr;
    out = std::strtod(tok.c_str(), &end);
    return end == tok.c_str() + tok.size();
}

ConfigValue parse_value(const std::string &raw, int line, std::vector<std::string> &errors) {
    ConfigValue v;
    v.line = line;
    std::string tok = trim(raw);
    if (tok.empty()) {
        errors.push_back("line " + std::to_string(line) + ": missing value");
        v.kind = ConfigValue::Kind::Number;
        return v;
    }
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"') {
            errors.push_back("line " + std::to_string(line) + ": unterminated string");
        }
        v.kind = ConfigValue::Kind::String;
        v.str = tok.substr(1, tok.size() >= 2 ? tok.size() - 2 : 0);
        return v;
    }
    if (tok == "true" || tok == "false") {
        v.kind = ConfigValue::Kind::Boolean;
        v.flag = (tok == "true");
        return v;
    }
    if (tok.front() == '[') {
        if (tok.back() != ']') {
            errors.push_back("line " + std::to_string(line) + ": unterminated array");
            v.kind = ConfigValue::Kind::NumberList;
            return v;
        }
        std::string body = tok.substr(1, tok.size() - 2);
        std::vector<std::string> items;
        std::string cur;
        bool in_str = false;
        for (char c : body) {
            if (c == '"') in_str = !in_str;
            if (c == ',' && !in_str) {
                items.push_back(trim(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!trim(cur).empty()) items.push_back(trim(cur));
        bool any_string = false;
        for (const auto &it : items)
            if (!it.empty() && it.front() == '"') any_string = true;
        if (any_string) {
            v.kind = ConfigValue::Kind::StringList;
            for (const auto &it : items) {
                if (it.size() >= 2 && it.front() == '"' && it.back() == '"')
                    v.strs.push_back(it.substr(1, it.size() - 2));
                else
                    errors.push_back("line " + std::to_string(line) + ": mixed array types");
            }
        } else {
            v.kind = ConfigValue::Kind::NumberList;
            for (const auto &it : items) {
                double d;
                if (parse_number(it, d)) v.nums.push_back(d);
                else errors.push_back("line " + std::to_string(line) + ": bad array element '" + it + "'");
            }
        }
        return v;
    }
    double d;
    if (parse_number(tok, d)) {
        v.kind = ConfigValue::Kind::Number;
        v.num = d;
        return v;
    }
    errors.push_back("line " + std::to_string(line) + ": cannot parse value '" + tok + "'");
    v.kind = ConfigValue::Kind::Number;
    return v;
}

ConfigMap parse_toml_subset(const std::string &text, std::vector<std::string> &errors) {
    ConfigMap out;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string s = trim(strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') {
                errors.push_back("line " + std::to_string(lineno) + ": malformed section header");
                continue;
            }
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty())
                errors.push_back("line " + std::to_string(lineno) + ": empty section name");
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        std::string key = trim(s.substr(0, eq));
        if (key.empty()) {
            errors.push_back("line " + std::to_string(lineno) + ": empty key");
            continue;
        }
        std::string full = section.empty() ? key : section + "." + key;
        if (out.count(full))
            errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + full + "'");
        out[full] = parse_value(s.substr(eq + 1), lineno, errors);
    }
    return out;
}

// Tracks consumed keys so leftovers surface as unknown-key violations.
struct ConfigReader {
    const ConfigMap &map;
    std::vector<std::string> &errors;
    std::set<std::string> used;

    const ConfigValue *find(const std::string &key) {
        auto it = map.find(key);
        if (it == map.end()) return nullptr;
        used.insert(key);
        return &it->second;
    }

    double number(const std::string &key, double fallback, bool *present = nullptr) {
        const ConfigValue *v = find(key);
        if (present) *present = (v != nullptr);
        if (!v) return fallback;
        if (v->kind != ConfigValue::Kind::Number) {
            errors.push_back(key + ": expected a number");
            return fallback;
        }
        return v->num;
    }

    std::string text(const std::string &key, const std::string &fallback, bool *present = nullptr) {
        const ConfigValue *v = find(key);
        if (present) *present = (v != nullptr);
        if (!v) return fallback;
        if (v->kind != ConfigValue::Kind::String) {
            errors.push_back(key + ": expected a string");
            return fallback;
        }
        return v->str;
    }

    std::vector<double> numbers(const std::string &key) {
        const ConfigValue *v = find(key);
        if (!v) return {};
        if (v->kind == ConfigValue::Kind::NumberList) return v->nums;
        if (v->kind == ConfigValue::Kind::Number) return {v->num};
        errors.push_back(key + ": expected an array of numbers");
        return {};
    }

    std::vector<std::string> texts(const std::string &key) {
        const ConfigValue *v = find(key);
        if (!v) return {};
        if (v->kind == ConfigValue::Kind::StringList) return v->strs;
        if (v->kind == ConfigValue::Kind::String) return {v->str};
        errors.push_back(key + ": expected an array of strings");
        return {};
    }

    void report_unused() {
        for (const auto &[key, value] : map)
            if (!used.count(key))
                errors.push_back("unknown key '" + key + "' (line " + std::to_string(value.line) + ")");
    }
};

constexpr double kPi = 3.14159265358979323846;

} // namespace

ScenarioConfig parse_config(const std::string &text, const std::string &fallback_id) {
    std::vector<std::string> errors;
    ConfigMap map = parse_toml_subset(text, errors);
    ConfigReader r{map, errors, {}};

    ScenarioConfig cfg;
    cfg.id = r.text("id", fallback_id);

    cfg.rho_m = r.number("geometry.rho_m", 0.0);
    cfg.chi = r.number("geometry.chi", 1.0);
    cfg.d_infinity_m = r.number("geometry.d_infinity_m", 2000.0);

    cfg.channel.alpha_l = r.number("channel.alpha_l", 2.0);
    cfg.channel.alpha_n = r.number("channel.alpha_n", 2.92);
    cfg.channel.c_l = db_to_linear(r.number("channel.c_l_db", -61.4));
    cfg.channel.c_n = db_to_linear(r.number("channel.c_n_db", -72.0));
    cfg.channel.n_l = r.number("channel.n_l", 3.0);
    cfg.channel.n_n = r.number("channel.n_n", 1.0);
    cfg.channel.p_l = r.number("channel.p_l", 0.11);
    cfg.channel.d_los = r.number("channel.d_los_m", 200.0);

    cfg.pattern.g_m = db_to_linear(r.number("antenna.g_m_db", 15.0));
    cfg.pattern.g_s = db_to_linear(r.number("antenna.g_s_db", -3.0));
    cfg.pattern.theta_t = r.number("antenna.theta_t_deg", 15.0) * kPi / 180.0;

    cfg.p_tx_dbm = r.number("radio.p_tx_dbm", 20.0);
    cfg.bandwidth_hz = r.number("radio.bandwidth_hz", 1e9);
    cfg.noise_figure_db = r.number("radio.noise_figure_db", 5.0);

    std::string kind = r.text("scheme.kind", "fnc");
    if (kind == "fnc") cfg.scheme.kind = CoopScheme::Kind::FNC;
    else if (kind == "frc") cfg.scheme.kind = CoopScheme::Kind::FRC;
    else if (kind == "noncoop") cfg.scheme.kind = CoopScheme::Kind::NonCooperative;
    else errors.push_back("scheme.kind: expected \"fnc\", \"frc\" or \"noncoop\", got \"" + kind + "\"");
    cfg.scheme.m = static_cast<int>(r.number("scheme.m", 1.0));
    bool have_dco = false, have_mbar = false;
    cfg.scheme.d_co_m = r.number("scheme.d_co_m", 0.0, &have_dco);
    cfg.scheme.m_bar = r.number("scheme.m_bar", 0.0, &have_mbar);
    cfg.scheme.by_mean = have_mbar;
    if (cfg.scheme.kind == CoopScheme::Kind::FRC && have_dco && have_mbar)
        errors.push_back("scheme: give either d_co_m or m_bar, not both");

    std::string metric = r.text("run.metric", "avg_rate");
    if (metric == "avg_rate") cfg.metric = Metric::AvgRateNats;
    else if (metric == "outage") cfg.metric = Metric::OutageProb;
    else errors.push_back("run.metric: expected \"avg_rate\" or \"outage\", got \"" + metric + "\"");
    cfg.tau_db = r.number("run.tau_db", 0.0);
    std::string user = r.text("run.user", "edge");
    if (user == "edge") cfg.user = UserKind::CellEdge;
    else if (user == "general") cfg.user = UserKind::General;
    else errors.push_back("run.user: expected \"edge\" or \"general\", got \"" + user + "\"");
    cfg.engines.clear();
    for (const auto &name : r.texts("run.engines")) {
        try {
            cfg.engines.push_back(parse_engine(name));
        } catch (const ValidationError &e) {
            errors.push_back(std::string("run.engines: ") + e.what());
        }
    }
    cfg.trials = static_cast<int>(r.number("run.trials", 10000.0));
    cfg.seed = static_cast<std::uint64_t>(r.number("run.seed", 1.0));

    bool have_axis = false;
    std::string axis = r.text("sweep.axis", "", &have_axis);
    if (have_axis) {
        try {
            cfg.sweep.axis = parse_axis(axis);
        } catch (const ValidationError &e) {
            errors.push_back(std::string("sweep.axis: ") + e.what());
        }
        cfg.sweep.values = r.numbers("sweep.values");
    } else {
        errors.push_back("sweep.axis: required");
    }

    r.report_unused();
    if (!errors.empty()) throw ValidationError("config parse failed", errors);
    validate_config(cfg);
    return cfg;
}

ScenarioConfig load_config(const std::string &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("cannot open config", {"cannot open '" + path + "'"});
    std::ostringstream ss;
    ss << is.rdbuf();
    std::string stem = std::filesystem::path(path).stem().string();
    return parse_config(ss.str(), stem);
}

namespace {

struct EngineOutcome {
    double value = 0.0;
    double std_error = 0.0;
    double runtime_s = 0.0;
};

EngineOutcome run_simulation(const ScenarioPoint &pt, int trials, Rng &rng) {
    MetricResult res;
    if (pt.user == UserKind::General) {
        res = estimate_general_user(pt, trials, rng);
    } else if (pt.metric == Metric::AvgRateNats) {
        res = estimate_rate(pt, trials, rng);
    } else {
        res = estimate_outage(pt, pt.tau_linear, trials, rng);
    }
    return {res.value, res.std_error, res.runtime_s};
}

EngineOutcome run_analytic(const ScenarioPoint &pt) {
    auto t0 = std::chrono::steady_clock::now();
    LtContext ctx = make_lt_context(pt);
    double value = 0.0;
    const bool frc = pt.scheme.kind == CoopScheme::Kind::FRC;
    if (pt.metric == Metric::AvgRateNats) {
        value = frc ? avg_rate_frc(ctx, pt.scheme.d_co, pt.noise)
                    : avg_rate_fnc(ctx, pt.scheme.m, pt.noise);
    } else {
        value = frc ? outage_frc_exact(ctx, pt.scheme.d_co, pt.noise, pt.tau_linear)
                    : outage_fnc_exact(ctx, pt.scheme.m, pt.noise, pt.tau_linear);
    }
    auto t1 = std::chrono::steady_clock::now();
    return {value, 0.0, std::chrono::duration<double>(t1 - t0).count()};
}

EngineOutcome run_gamma_approx(const ScenarioPoint &pt) {
    auto t0 = std::chrono::steady_clock::now();
    double value = 0.0;
    if (pt.scheme.kind == CoopScheme::Kind::FRC) {
        value = outage_frc_approx(pt.geometry, pt.channel, pt.pattern, pt.p_tx_watts, pt.noise,
                                  pt.scheme.d_co, pt.tau_linear);
    } else {
        value = outage_fnc_approx(pt.geometry, pt.channel, pt.pattern, pt.p_tx_watts, pt.noise,
                                  pt.scheme.m, pt.tau_linear);
    }
    auto t1 = std::chrono::steady_clock::now();
    return {value, 0.0, std::chrono::duration<double>(t1 - t0).count()};
}

std::string format_coordinate(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

} // namespace

std::vector<ResultRow> run_scenario(const ScenarioConfig &config) {
    validate_config(config);
    std::vector<ResultRow> rows;
    const std::string axis = axis_name(config.sweep.axis);
    const std::size_t n_coords = config.sweep.values.size();

    // Outage sweeps reuse one set of simulated networks across the whole
    // threshold grid, so simulated outage curves are monotone by construction.
    const bool shared_tau_sim = config.sweep.axis == SweepAxis::TauDb &&
                                config.user == UserKind::CellEdge;

    for (Engine engine : config.engines) {
        if (engine == Engine::Simulation && shared_tau_sim) {
            ScenarioPoint pt = materialize(config, config.sweep.values.front());
            std::vector<double> taus;
            taus.reserve(n_coords);
            for (double tau_db : config.sweep.values) taus.push_back(db_to_linear(tau_db));
            Rng rng = make_stream(config.seed, 0);
            std::vector<MetricResult> res = estimate_outage_grid(pt, taus, config.trials, rng);
            for (std::size_t c = 0; c < n_coords; ++c) {
                rows.push_back({config.id, axis, config.sweep.values[c], engine, config.metric,
                                res[c].value, res[c].std_error, res[c].runtime_s, config.seed});
            }
            continue;
        }
        for (std::size_t c = 0; c < n_coords; ++c) {
            const double coord = config.sweep.values[c];
            ScenarioPoint pt = materialize(config, coord);
            EngineOutcome out;
            try {
                if (engine == Engine::Simulation) {
                    Rng rng = make_stream(config.seed, static_cast<std::uint64_t>(c));
                    out = run_simulation(pt, config.trials, rng);
                } else if (engine == Engine::Analytic) {
                    out = run_analytic(pt);
                } else {
                    out = run_gamma_approx(pt);
                }
            } catch (const NumericalError &e) {
                throw NumericalError(std::string(e.what()) + " [scenario " + config.id + ", " +
                                     axis + "=" + format_coordinate(coord) + ", engine " +
                                     engine_name(engine) + "]");
            }
            rows.push_back({config.id, axis, coord, engine, config.metric, out.value,
                            out.std_error, out.runtime_s, config.seed});
        }
    }
    return rows;
}

static const char *kCsvHeader = "scenario,axis,coordinate,engine,metric,value,stderr,runtime_s,seed";

void write_csv(const std::vector<ResultRow> &rows, std::ostream &os) {
    os << kCsvHeader << "\n";
    char buf[512];
    for (const auto &row : rows) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%.10g,%s,%s,%.10g,%.10g,%.10g,%llu",
                      row.scenario.c_str(), row.axis.c_str(), row.coordinate,
                      engine_name(row.engine).c_str(), metric_name(row.metric).c_str(), row.value,
                      row.std_error, row.runtime_s,
                      static_cast<unsigned long long>(row.seed));
        os << buf << "\n";
    }
}

std::vector<ResultRow> read_csv(std::istream &is) {
    std::vector<std::string> errors;
    std::string line;
    if (!std::getline(is, line)) throw ValidationError("empty csv", {"missing header row"});
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader)
        throw ValidationError("bad csv header", {"expected '" + std::string(kCsvHeader) + "'"});

    std::vector<ResultRow> rows;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<std::string> cells;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                cells.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        cells.push_back(cur);
        if (cells.size() != 9) {
            errors.push_back("line " + std::to_string(lineno) + ": expected 9 columns, got " +
                             std::to_string(cells.size()));
            continue;
        }
        ResultRow row;
        row.scenario = cells[0];
        row.axis = cells[1];
        try {
            row.coordinate = std::stod(cells[2]);
            row.engine = parse_engine(cells[3]);
            if (cells[4] == "avg_rate_nats") row.metric = Metric::AvgRateNats;
            else if (cells[4] == "outage_prob") row.metric = Metric::OutageProb;
            else throw DomainError("unknown metric '" + cells[4] + "'");
            row.value = std::stod(cells[5]);
            row.std_error = std::stod(cells[6]);
            row.runtime_s = std::stod(cells[7]);
            row.seed = std::stoull(cells[8]);
        } catch (const std::exception &e) {
            errors.push_back("line " + std::to_string(lineno) + ": " + e.what());
            continue;
        }
        rows.push_back(row);
    }
    if (!errors.empty()) throw ValidationError("csv parse failed", errors);
    return rows;
}

CompareReport compare_tables(const std::vector<ResultRow> &a, const std::vector<ResultRow> &b,
                             double tol_abs) {
    if (tol_abs < 0.0) throw DomainError("tol_abs must be >= 0");
    using Key = std::tuple<std::string, double, std::string>;
    auto key_of = [](const ResultRow &r) {
        return Key{r.axis, r.coordinate, metric_name(r.metric)};
    };
    std::map<Key, std::vector<const ResultRow *>> lhs, rhs;
    for (const auto &row : a) lhs[key_of(row)].push_back(&row);
    for (const auto &row : b) rhs[key_of(row)].push_back(&row);

    std::vector<std::string> structural;
    for (const auto &[key, rows_at] : lhs)
        if (!rhs.count(key))
            structural.push_back("coordinate " + std::get<0>(key) + "=" +
                                 format_coordinate(std::get<1>(key)) + " only in first table");
    for (const auto &[key, rows_at] : rhs)
        if (!lhs.count(key))
            structural.push_back("coordinate " + std::get<0>(key) + "=" +
                                 format_coordinate(std::get<1>(key)) + " only in second table");
    if (!structural.empty()) throw ValidationError("tables do not align", structural);

    CompareReport report;
    for (const auto &[key, rows_a] : lhs) {
        for (const ResultRow *ra : rows_a) {
            for (const ResultRow *rb : rhs[key]) {
                CompareDelta d;
                d.axis = ra->axis;
                d.coordinate = ra->coordinate;
                d.metric = metric_name(ra->metric);
                d.engine_a = engine_name(ra->engine);
                d.engine_b = engine_name(rb->engine);
                d.value_a = ra->value;
                d.value_b = rb->value;
                d.abs_delta = std::fabs(ra->value - rb->value);
                double combined = std::sqrt(ra->std_error * ra->std_error +
                                            rb->std_error * rb->std_error);
                d.allowance = tol_abs + 3.0 * combined;
                d.pass = d.abs_delta <= d.allowance;
                report.max_abs_delta = std::max(report.max_abs_delta, d.abs_delta);
                report.pass = report.pass && d.pass;
                report.deltas.push_back(d);
            }
        }
    }
    return report;
}

std::string recipe_dir() {
#ifdef MMCOOP_RECIPE_DIR
    return MMCOOP_RECIPE_DIR;
#else
    return "recipes";
#endif
}

std::vector<std::string> bundled_recipes() {
    std::vector<std::string> names;
    std::error_code ec;
    for (const auto &entry : std::filesystem::directory_iterator(recipe_dir(), ec)) {
        if (entry.path().extension() == ".toml") names.push_back(entry.path().stem().string());
    }
    std::sort(names.begin(), names.end());
    return names;
}

std::string resolve_config_path(const std::string &arg) {
    namespace fs = std::filesystem;
    if (fs::exists(arg)) return arg;
    fs::path in_dir = fs::path(recipe_dir()) / arg;
    if (fs::exists(in_dir)) return in_dir.string();
    fs::path with_ext = fs::path(recipe_dir()) / (arg + ".toml");
    if (fs::exists(with_ext)) return with_ext.string();
    throw ValidationError("config not found",
                          {"'" + arg + "' is neither a file nor a bundled recipe"});
}

} // namespace mmcoop
