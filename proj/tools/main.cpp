#include <CLI11.hpp>
#include <cstdint>
#include <optional>
#include <string>

#include "iaware/harness.hpp"

namespace {

void add_common(CLI::App* cmd, iaware::CommandArgs& args) {
    cmd->add_option("--config", args.config_path, "run configuration file")->required();
    cmd->add_option("--out", args.out_dir, "output directory (overrides output_dir)");
    cmd->add_option("--seed", args.seed, "seed override (overrides the config seed)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"interaction-aware multi-object tracking toolkit"};
    app.require_subcommand(1);

    iaware::CommandArgs args;

    CLI::App* simulate = app.add_subcommand("simulate", "generate ground truth and scans");
    add_common(simulate, args);

    CLI::App* track = app.add_subcommand("track", "run the filter over a scan file");
    add_common(track, args);
    track->add_option("--scans", args.scans_path, "scan file (frame,zx,zy)")->required();

    CLI::App* evaluate = app.add_subcommand("evaluate", "score tracks against ground truth");
    add_common(evaluate, args);
    evaluate->add_option("--truth", args.truth_path, "ground-truth file")->required();
    evaluate->add_option("--tracks", args.tracks_path, "estimates file")->required();

    CLI::App* compare =
        app.add_subcommand("compare", "paired baseline vs interaction-aware run on shared scans");
    add_common(compare, args);

    CLI11_PARSE(app, argc, argv);

    if (simulate->parsed()) return iaware::cmd_simulate(args);
    if (track->parsed()) return iaware::cmd_track(args);
    if (evaluate->parsed()) return iaware::cmd_evaluate(args);
    return iaware::cmd_compare(args);
}
