// Command-line harness: seeded trial sweeps, paired algorithm comparisons,
// and replay verification of stored result CSVs.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "topq/bench.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_override,
            std::optional<std::uint64_t> seed_override,
            std::optional<std::size_t> trials_override, int jobs) {
    topq::ExperimentConfig cfg =
        topq::ExperimentConfig::from_json_file(config_path);
    if (seed_override) cfg.seed = *seed_override;
    if (trials_override) cfg.trials = *trials_override;
    if (!out_override.empty()) cfg.out = out_override;
    cfg.validate();

    const std::vector<topq::TrialRecord> records = topq::run_sweep(cfg, jobs);
    const std::string csv = topq::write_csv(records);
    if (!cfg.out.empty()) {
        std::ofstream out(cfg.out, std::ios::binary);
        if (!out) throw topq::ConfigError("out: cannot write '" + cfg.out + "'");
        out << csv;
        std::cout << "wrote " << records.size() << " rows to " << cfg.out
                  << "\n";
    } else {
        std::cout << csv;
    }
    std::cout << topq::format_summary(cfg, topq::summarize(cfg, records));
    return 0;
}

int cmd_compare(const std::vector<std::string>& config_paths, int jobs) {
    std::vector<topq::ExperimentConfig> configs;
    for (const std::string& path : config_paths)
        configs.push_back(topq::ExperimentConfig::from_json_file(path));
    const topq::CompareReport report = topq::compare_runs(configs, jobs);
    std::cout << topq::format_compare(report);
    return 0;
}

int cmd_verify(const std::string& csv_path, std::optional<double> lambda) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw topq::ConfigError("csv: cannot open '" + csv_path + "'");
    const std::vector<topq::TrialRecord> records = topq::read_csv(in);
    const topq::VerifyReport report = topq::verify_records(records, lambda);
    std::cout << topq::format_verify(report);
    if (!report.replay_ok || !report.pac_ok) return 2;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"topq: top-quantile arm identification benchmark harness"};
    app.require_subcommand(1);

    std::string config_path, out_path, csv_path;
    std::vector<std::string> compare_paths;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<double> lambda;
    int jobs = 0;

    CLI::App* run = app.add_subcommand("run", "run a sweep config, write CSV");
    run->add_option("config", config_path, "JSON config file")->required();
    run->add_option("--out", out_path, "output CSV path (overrides config)");
    run->add_option("--seed", seed, "master seed override");
    run->add_option("--trials", trials, "trials-per-point override");
    run->add_option("--jobs", jobs, "worker threads (0 = all)");

    CLI::App* cmp = app.add_subcommand(
        "compare", "run configs sharing seeds/axis, report sample ratios");
    cmp->add_option("configs", compare_paths, "two or more JSON configs")
        ->required()
        ->expected(-2);
    cmp->add_option("--jobs", jobs, "worker threads (0 = all)");

    CLI::App* ver = app.add_subcommand(
        "verify", "replay a result CSV from stored seeds and re-check PAC");
    ver->add_option("csv", csv_path, "result CSV to verify")->required();
    ver->add_option("--lambda", lambda,
                    "threshold the rows were produced with, if not the "
                    "ground-truth default");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_path, seed, trials, jobs);
        if (cmp->parsed()) return cmd_compare(compare_paths, jobs);
        if (ver->parsed()) return cmd_verify(csv_path, lambda);
    } catch (const topq::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
