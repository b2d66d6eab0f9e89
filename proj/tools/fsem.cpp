#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "fsem/experiment.hpp"

namespace {

void print_manifest(const fsem::RunManifest& m, const std::filesystem::path& out) {
    std::printf("%zu artifacts in %s\n", m.artifacts.size(), out.string().c_str());
    for (const auto& [stage, seconds] : m.stage_seconds) std::printf("  %-10s %8.2f s\n", stage.c_str(), seconds);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fsem: few-shot embedding experiments"};
    app.set_version_flag("--version", std::string(fsem::kToolkitVersion));
    app.require_subcommand(1);

    std::string config_path, out, stage_name;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "experiment config (INI)")->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", seed, "override the experiment seed");
    app.add_option("--out", out, "override the output directory");

    auto* run = app.add_subcommand("run", "run the full pipeline, or one stage with --stage");
    run->add_option("--stage", stage_name, "single stage to run")
        ->check(CLI::IsMember({"synth", "ingest", "train", "embed", "cluster", "evaluate", "report", "visualize"}));
    for (fsem::Stage s : fsem::all_stages()) app.add_subcommand(fsem::to_string(s), "run the " + fsem::to_string(s) + " stage");
    auto* verify = app.add_subcommand("verify", "check the manifest hashes of an output directory");
    auto* show = app.add_subcommand("config", "print the effective config");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed() && config_path.empty()) {
            if (out.empty()) throw std::invalid_argument("verify needs --out or --config");
        }
        fsem::ExperimentConfig config;
        if (!config_path.empty()) {
            config = fsem::load_config(config_path);
        } else if (!verify->parsed()) {
            throw std::invalid_argument("--config is required");
        }
        if (*seed_opt) config.seed = seed;
        if (!out.empty()) config.output = out;

        if (verify->parsed()) {
            const auto bad = fsem::verify_manifest(config.output);
            for (const std::string& p : bad) std::fprintf(stderr, "mismatch: %s\n", p.c_str());
            std::printf("%s\n", bad.empty() ? "manifest ok" : "manifest FAILED");
            return bad.empty() ? 0 : 1;
        }
        if (show->parsed()) {
            std::fputs(config.to_text().c_str(), stdout);
            return 0;
        }
        if (run->parsed()) {
            const auto m = stage_name.empty() ? fsem::run_experiment(config)
                                              : fsem::run_stage(config, fsem::parse_stage(stage_name));
            print_manifest(m, config.output);
            return 0;
        }
        for (fsem::Stage s : fsem::all_stages()) {
            if (app.got_subcommand(fsem::to_string(s))) {
                print_manifest(fsem::run_stage(config, s), config.output);
                return 0;
            }
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fsem: %s\n", e.what());
        return 1;
    }
    return 0;
}
