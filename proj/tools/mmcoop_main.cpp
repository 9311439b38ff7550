#include "CLI11.hpp"

#include "mmcoop/errors.hpp"
#include "mmcoop/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace mmcoop;

std::vector<Engine> parse_engine_list(const std::string &csv) {
    std::vector<Engine> engines;
    std::vector<std::string> errors;
    std::string cur;
    auto flush = [&] {
        auto b = cur.find_first_not_of(" \t");
        auto e = cur.find_last_not_of(" \t");
        std::string name = b == std::string::npos ? "" : cur.substr(b, e - b + 1);
        cur.clear();
        if (name.empty()) return;
        try {
            engines.push_back(parse_engine(name));
        } catch (const ValidationError &err) {
            errors.push_back(err.what());
        }
    };
    for (char c : csv) {
        if (c == ',') flush();
        else cur += c;
    }
    flush();
    if (!errors.empty()) throw ValidationError("bad --engines", errors);
    return engines;
}

int do_run(const std::string &config_arg, const std::string &out_dir,
           const std::string &engines_csv, long trials_override, bool have_trials,
           unsigned long long seed_override, bool have_seed) {
    ScenarioConfig cfg = load_config(resolve_config_path(config_arg));
    if (!engines_csv.empty()) cfg.engines = parse_engine_list(engines_csv);
    if (have_trials) cfg.trials = static_cast<int>(trials_override);
    if (have_seed) cfg.seed = seed_override;
    validate_config(cfg);

    std::vector<ResultRow> rows = run_scenario(cfg);

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    fs::path out_path = fs::path(out_dir) / (cfg.id + ".csv");
    {
        std::ofstream os(out_path, std::ios::binary);
        if (!os) throw ValidationError("cannot write output",
                                       {"cannot open '" + out_path.string() + "'"});
        write_csv(rows, os);
        os.flush();
        if (!os) throw ValidationError("cannot write output",
                                       {"write to '" + out_path.string() + "' failed"});
    }

    std::printf("%-14s %10s  %-12s %-14s %14s %12s %10s\n", "axis", "coordinate", "engine",
                "metric", "value", "stderr", "runtime");
    for (const auto &row : rows) {
        std::printf("%-14s %10.6g  %-12s %-14s %14.8g %12.4g %9.3fs\n", row.axis.c_str(),
                    row.coordinate, engine_name(row.engine).c_str(),
                    metric_name(row.metric).c_str(), row.value, row.std_error, row.runtime_s);
    }
    std::printf("wrote %s (%zu rows)\n", out_path.string().c_str(), rows.size());
    return 0;
}

int do_compare(const std::string &path_a, const std::string &path_b, double tol_abs) {
    auto read_table = [](const std::string &path) {
        std::ifstream is(path, std::ios::binary);
        if (!is) throw ValidationError("cannot open csv", {"cannot open '" + path + "'"});
        return read_csv(is);
    };
    std::vector<ResultRow> a = read_table(path_a);
    std::vector<ResultRow> b = read_table(path_b);
    CompareReport report = compare_tables(a, b, tol_abs);
    for (const auto &d : report.deltas) {
        std::printf("%-10s %10.6g  %-14s %-12s vs %-12s %14.8g %14.8g  |d|=%-12.4g %s\n",
                    d.axis.c_str(), d.coordinate, d.metric.c_str(), d.engine_a.c_str(),
                    d.engine_b.c_str(), d.value_a, d.value_b, d.abs_delta,
                    d.pass ? "ok" : "FAIL");
    }
    std::printf("max |delta| = %.6g over %zu pairs, tol_abs = %.6g: %s\n", report.max_abs_delta,
                report.deltas.size(), tol_abs, report.pass ? "PASS" : "FAIL");
    return report.pass ? 0 : 3;
}

int do_recipes(const std::string &op) {
    if (op != "list")
        throw ValidationError("unknown recipes operation", {"expected 'list', got '" + op + "'"});
    for (const auto &name : bundled_recipes()) std::printf("%s\n", name.c_str());
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Average rate and outage of cell-edge users under BS cooperation "
                 "in mmWave cellular networks"};
    app.require_subcommand(1);

    std::string config_arg, out_dir = ".", engines_csv;
    long trials_override = 0;
    unsigned long long seed_override = 0;
    auto *run = app.add_subcommand("run", "Run a scenario config and write a result CSV");
    run->add_option("config", config_arg, "Config file path or bundled recipe name")->required();
    run->add_option("--out", out_dir, "Output directory (default .)");
    run->add_option("--engines", engines_csv, "Comma-separated engine override");
    run->add_option("--trials", trials_override, "Simulation trial count override");
    run->add_option("--seed", seed_override, "Base seed override");

    std::string csv_a, csv_b;
    double tol_abs = 0.0;
    auto *cmp = app.add_subcommand("compare", "Compare two result CSVs coordinate by coordinate");
    cmp->add_option("first", csv_a, "First CSV")->required();
    cmp->add_option("second", csv_b, "Second CSV")->required();
    cmp->add_option("--tol-abs", tol_abs, "Absolute tolerance on top of 3x combined stderr");

    std::string rec_op;
    auto *rec = app.add_subcommand("recipes", "Operate on bundled recipe configs");
    rec->add_option("op", rec_op, "Operation (list)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 1;
    }

    try {
        if (run->parsed())
            return do_run(config_arg, out_dir, engines_csv, trials_override,
                          run->count("--trials") > 0, seed_override, run->count("--seed") > 0);
        if (cmp->parsed()) return do_compare(csv_a, csv_b, tol_abs);
        if (rec->parsed()) return do_recipes(rec_op);
    } catch (const ValidationError &e) {
        std::cerr << "validation error: " << e.what() << "\n";
        for (const auto &v : e.violations()) std::cerr << "  - " << v << "\n";
        return 1;
    } catch (const DomainError &e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError &e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
