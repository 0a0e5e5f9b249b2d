// wavepacket-lab: runs one named experiment from a flat key=value config and
// writes a CSV table plus a JSON summary.
//
//   wavepacket-lab <experiment> [--config path] [--seed N] [--out path]
//                  [--workers N] [--check]
//   wavepacket-lab defaults [experiment]
//
// Exit codes: 0 success, 2 precondition failure, 3 check violation with --check.
#include <CLI11.hpp>

#include <iostream>

#include "wpl/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"wave packet frame laboratory"};
    app.require_subcommand(0, 1);

    std::string config_path, out_path = "report.csv";
    std::uint64_t seed = 0;
    bool have_seed = false;
    int workers = 0;
    bool check = false;

    std::string experiment;
    app.add_option("experiment", experiment, "experiment name or 'defaults'");
    app.add_option("--config", config_path, "path to a key = value config file");
    app.add_option("--seed", seed, "override the config seed")->each([&](const std::string&) {
        have_seed = true;
    });
    app.add_option("--out", out_path, "output CSV path (JSON summary written alongside)");
    app.add_option("--workers", workers, "worker thread count (0 = hardware)");
    app.add_flag("--check", check, "evaluate acceptance thresholds; exit 3 on violation");

    CLI11_PARSE(app, argc, argv);

    if (experiment.empty()) {
        std::cerr << "usage: wavepacket-lab <experiment> [options]\nexperiments:";
        for (const auto& n : wpl::experiment_names()) std::cerr << " " << n;
        std::cerr << "\n";
        return 2;
    }

    try {
        if (experiment == "defaults") {
            // print effective defaults, either for one experiment or all
            std::vector<std::string> targets = wpl::experiment_names();
            for (const auto& name : targets) {
                std::cout << "# " << name << "\n";
                for (const auto& [k, v] : wpl::experiment_defaults(name)) {
                    std::cout << k << " = " << v << "\n";
                }
                std::cout << "\n";
            }
            return 0;
        }

        wpl::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = wpl::ExperimentConfig::from_file(config_path);
        wpl::RunOptions opts;
        if (have_seed) opts.seed = seed;
        opts.workers = workers;
        opts.check = check;

        wpl::ScalingReport rep = wpl::run_experiment(experiment, cfg, opts);

        wpl::write_text_file(out_path, rep.table.to_csv());
        std::string json_path = out_path;
        const auto dot = json_path.rfind('.');
        if (dot != std::string::npos) json_path = json_path.substr(0, dot);
        json_path += ".json";
        wpl::write_text_file(json_path, rep.summary.dump(2) + "\n");

        std::cout << rep.experiment << ": " << rep.table.rows.size() << " rows -> " << out_path
                  << ", summary -> " << json_path << "\n";
        for (const auto& c : rep.checks) {
            std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " (value "
                      << wpl::format_cell(c.value) << ", threshold " << c.threshold << ")\n";
        }
        if (check && !rep.checks_passed()) return 3;
        return 0;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "precondition failure: " << ex.what() << "\n";
        return 2;
    } catch (const std::domain_error& ex) {
        std::cerr << "precondition failure: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}
