// critrec: recognizes criticality phenomena in traffic scenario files and
// relates them to criticality metrics.
//
//   critrec validate fixtures/*.json
//   critrec infer fixtures/cp69.json --out out/
//   critrec stats out/cp69 --a 25 --b 293
//   critrec metrics fixtures/conflict.json --out out/
//   critrec rules

#include <iostream>

#include <CLI11.hpp>

#include "critrec/pipeline.hpp"

namespace {

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const critrec::io::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const critrec::CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const critrec::dl::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const critrec::dl::CompileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"criticality phenomena recognition for traffic scenarios"};
    app.require_subcommand(1);

    critrec::InferOptions infer;
    CLI::App* cmd_infer = app.add_subcommand("infer", "recognize phenomena in scenario files");
    cmd_infer->add_option("scenarios", infer.scenario_paths, "scenario files")->required();
    cmd_infer->add_option("--config", infer.config_path, "config JSON");
    cmd_infer->add_option("--set", infer.overrides, "config override key=value");
    cmd_infer->add_option("--out", infer.out_dir, "output directory")->required();
    cmd_infer->add_option("--rules", infer.rules_path, "phenomena rules file (default: embedded)");
    cmd_infer->add_option("--phenomena", infer.phenomena_filter, "only emit these phenomenon ids")
        ->delimiter(',');
    cmd_infer->add_flag("--scene-level-only", infer.scene_level_only,
                        "skip the temporal pass (scene-level phenomena only)");
    cmd_infer->add_option("--sample-rate", infer.sample_rate_hz, "resample scenes to this rate (Hz)");
    cmd_infer->add_option("--jobs", infer.jobs, "parallel scenario pipelines")->default_val(1);

    critrec::StatsOptions stats;
    CLI::App* cmd_stats = app.add_subcommand("stats", "association statistics over inferred runs");
    cmd_stats->add_option("runs", stats.run_dirs, "inferred run directories");
    cmd_stats->add_option("--a", stats.cp_a, "first phenomenon id");
    cmd_stats->add_option("--b", stats.cp_b, "second phenomenon id");
    cmd_stats->add_option("--table", stats.table, "direct contingency counts n11,n10,n01,n00");
    cmd_stats->add_flag("--rates", stats.rates, "also print per-partition occurrence rates");

    critrec::MetricsOptions metrics;
    CLI::App* cmd_metrics = app.add_subcommand("metrics", "TTC / required acceleration series");
    cmd_metrics->add_option("scenarios", metrics.scenario_paths, "scenario files")->required();
    cmd_metrics->add_option("--config", metrics.config_path, "config JSON");
    cmd_metrics->add_option("--set", metrics.overrides, "config override key=value");
    cmd_metrics->add_option("--out", metrics.out_dir, "output directory")->required();

    std::vector<std::string> validate_paths;
    CLI::App* cmd_validate = app.add_subcommand("validate", "schema-check scenario files");
    cmd_validate->add_option("scenarios", validate_paths, "scenario files")->required();

    CLI::App* cmd_rules = app.add_subcommand("rules", "print the embedded phenomena catalog");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // help text, exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1; // bad arguments are input errors
    }

    if (cmd_infer->parsed()) return guarded([&] { return critrec::run_infer(infer); });
    if (cmd_stats->parsed()) return guarded([&] { return critrec::run_stats(stats, std::cout); });
    if (cmd_metrics->parsed()) return guarded([&] { return critrec::run_metrics(metrics); });
    if (cmd_validate->parsed())
        return guarded([&] { return critrec::run_validate(validate_paths, std::cout); });
    if (cmd_rules->parsed()) {
        std::cout << critrec::default_rules_text();
        return 0;
    }
    return 1;
}
