#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"

#include "glemb/glemb.h"

namespace {

void print_log(const char* message, void*) { std::fprintf(stderr, "glemb: %s\n", message); }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graphlet-based network embedding and evaluation"};
    app.set_version_flag("--version", glemb_version());

    std::string config_path;
    std::string output;
    unsigned jobs = 0;
    bool resume = false;
    app.add_option("--config", config_path, "Run configuration file")->required()->check(CLI::ExistingFile);
    app.add_option("--output", output, "Output directory (overrides GLEMB_OUTPUT and the config)");
    app.add_option("--jobs", jobs, "Concurrent jobs, 0 = all cores");
    app.add_flag("--resume", resume, "Skip pairs already completed for this config");

    const char* stages[][2] = {
        {"graphlets", "Orbit counts and graphlet coverage only"},
        {"represent", "Build matrix representations and homophily reports"},
        {"embed", "Factorize the representations"},
        {"evaluate", "Embed and run the configured evaluation tasks"},
        {"sweep", "Random partition graph sweep only"},
        {"all", "Every configured task (default)"},
        {"validate", "Check the configuration and print its hash"},
    };
    for (const auto& s : stages) app.add_subcommand(s[0], s[1])->fallthrough();
    app.require_subcommand(0, 1);

    CLI11_PARSE(app, argc, argv);

    std::string stage = "all";
    if (!app.get_subcommands().empty()) stage = app.get_subcommands().front()->get_name();

    glemb_config* config = nullptr;
    if (glemb_config_load(config_path.c_str(), &config) != GLEMB_OK) {
        std::fprintf(stderr, "glemb: invalid configuration %s\n%s\n", config_path.c_str(), glemb_last_error());
        return 2;
    }
    if (stage == "validate") {
        std::printf("%s\n", glemb_config_hash(config));
        glemb_config_free(config);
        return 0;
    }

    if (output.empty())
        if (const char* env = std::getenv("GLEMB_OUTPUT"); env && *env) output = env;

    glemb_run_options options{};
    options.stage = stage.c_str();
    options.output = output.empty() ? nullptr : output.c_str();
    options.jobs = jobs;
    options.resume = resume ? 1 : 0;
    options.log = print_log;

    glemb_run_summary summary{};
    const glemb_status status = glemb_run(config, &options, &summary);
    glemb_config_free(config);
    if (status != GLEMB_OK) {
        std::fprintf(stderr, "glemb: %s: %s\n", glemb_status_string(status), glemb_last_error());
        return 1;
    }
    std::fprintf(stderr, "glemb: %zu done, %zu resumed, %zu excluded, %zu failed\n", summary.pairs_done,
                 summary.pairs_resumed, summary.pairs_excluded, summary.pairs_failed);
    return summary.pairs_failed == 0 && summary.other_failures == 0 ? 0 : 1;
}
