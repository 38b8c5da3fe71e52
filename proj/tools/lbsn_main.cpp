// Command-line front end for the check-in mobility pipeline.
//
// Exit codes: 0 success, 1 usage/config error, 2 data error, 3 internal error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lbsn/pipeline.hpp"
#include "lbsn/synth.hpp"

namespace {

struct Overrides {
    std::optional<int> threshold_days;
    std::optional<uint64_t> seed;
    std::optional<std::string> output_dir;
};

lbsn::PipelineConfig load_config(const std::string& config_path, const Overrides& ov) {
    lbsn::PipelineConfig config = lbsn::PipelineConfig::load(config_path);
    if (ov.threshold_days) config.threshold_days = *ov.threshold_days;
    if (ov.seed) config.lda.seed = *ov.seed;
    if (ov.output_dir) config.output_dir = *ov.output_dir;
    config.validate();
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Check-in mobility analytics: tourist/resident classification, "
                 "behavioral statistics, mobility metrics, spatiotemporal graph "
                 "centralities, and LDA mobility profiles"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;
    std::string scenario_path;
    std::string synth_out_dir = "synth_out";
    std::optional<uint64_t> synth_seed;

    auto add_pipeline_opts = [&](CLI::App* cmd) {
        cmd->add_option("-c,--config", config_path, "Pipeline config JSON")->required();
        cmd->add_option("--threshold-days", ov.threshold_days,
                        "Override the residence stay threshold (days)");
        cmd->add_option("--seed", ov.seed, "Override the LDA seed");
        cmd->add_option("-o,--output-dir", ov.output_dir, "Override the output directory");
    };

    CLI::App* ingest = app.add_subcommand("ingest-check", "Parse and validate inputs");
    CLI::App* classify = app.add_subcommand("classify", "Assign home cities and labels");
    CLI::App* behavior = app.add_subcommand("behavior", "Behavioral statistics tables");
    CLI::App* mobility = app.add_subcommand("mobility", "Displacement and radius of gyration");
    CLI::App* graph = app.add_subcommand("graph", "Spatiotemporal graph and centralities");
    CLI::App* profiles = app.add_subcommand("profiles", "LDA mobility profiles");
    CLI::App* all = app.add_subcommand("all", "Run every stage and write a manifest");
    for (CLI::App* cmd : {ingest, classify, behavior, mobility, graph, profiles, all})
        add_pipeline_opts(cmd);

    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic scenario");
    synth->add_option("-s,--scenario", scenario_path, "Scenario config JSON")->required();
    synth->add_option("-o,--output-dir", synth_out_dir, "Output directory");
    synth->add_option("--seed", synth_seed, "Override the scenario seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints usage, exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // usage errors share the config-error exit code
    }

    try {
        if (synth->parsed()) {
            lbsn::ScenarioConfig scenario = lbsn::ScenarioConfig::load(scenario_path);
            if (synth_seed) scenario.seed = *synth_seed;
            lbsn::write_dataset(lbsn::generate_dataset(scenario), synth_out_dir);
            return 0;
        }
        const lbsn::PipelineConfig config = load_config(config_path, ov);
        if (ingest->parsed()) lbsn::run_ingest(config);
        else if (classify->parsed()) lbsn::run_classify(config);
        else if (behavior->parsed()) lbsn::run_behavior(config);
        else if (mobility->parsed()) lbsn::run_mobility(config);
        else if (graph->parsed()) lbsn::run_graph(config);
        else if (profiles->parsed()) lbsn::run_profiles(config);
        else if (all->parsed()) lbsn::run_all(config);
        return 0;
    } catch (const lbsn::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const lbsn::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const lbsn::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
