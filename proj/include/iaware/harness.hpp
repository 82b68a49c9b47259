#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iaware/config.hpp"
#include "iaware/io.hpp"
#include "iaware/metrics.hpp"

namespace iaware {

/// Per-frame tracker diagnostics.
struct FrameDiagnostics {
    int frame = 0;
    int num_tracks = 0;
    int weight_underflows = 0;
    int interacting_tracks = 0;
};

struct TrackingOutput {
    std::vector<EstimateRow> estimates;
    std::vector<FrameDiagnostics> diagnostics;
    double wall_time_ms = 0.0;
};

struct FrameMetricsRow {
    int frame = 0;
    OspaResult ospa;
    OspaResult ospa2;
    int card_error = 0;
};

// ---- Reusable pipeline pieces (shared by the CLI commands and tests) ----

/// Ground truth for the configured scenario, deterministic in the run seed.
std::vector<GroundTruthTrack> simulate_truth(const RunConfig& run);

/// One scan per frame 0..num_frames-1, deterministic in the run seed.
std::vector<Scan> simulate_scans(const RunConfig& run,
                                 const std::vector<GroundTruthTrack>& truth);

/// The run's birth model: explicit components, or derived from the scenario
/// when filter.birth.auto is set.
BirthModel resolve_birth(const RunConfig& run);

/// Runs the filter over the scans (frames absent from the list are treated
/// as empty). `model_override` replaces the configured interaction model,
/// which is how the baseline pass of a comparison is produced.
TrackingOutput run_filter(const RunConfig& run, const std::vector<Scan>& scans,
                          std::optional<InteractionModel> model_override = std::nullopt);

/// Per-frame OSPA / OSPA^(2) / cardinality error over the truth's frame
/// range. Estimate frames outside that range are an error listing them.
std::vector<FrameMetricsRow> evaluate_tracking(const std::vector<GroundTruthTrack>& truth,
                                               const std::vector<EstimateRow>& estimates,
                                               const OspaParams& params, const ExecPolicy& exec);

/// Column means of a metrics table (absolute value for the cardinality
/// error).
struct MetricsSummary {
    double ospa_total = 0.0;
    double ospa_loc = 0.0;
    double ospa_card = 0.0;
    double ospa2_total = 0.0;
    double ospa2_loc = 0.0;
    double ospa2_card = 0.0;
    double abs_card_error = 0.0;
};
MetricsSummary summarize(const std::vector<FrameMetricsRow>& rows);

// ---- CLI commands. Each returns a process exit status. ----

struct CommandArgs {
    std::string config_path;
    std::optional<std::string> scans_path;
    std::optional<std::string> truth_path;
    std::optional<std::string> tracks_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
};

int cmd_simulate(const CommandArgs& args);
int cmd_track(const CommandArgs& args);
int cmd_evaluate(const CommandArgs& args);
int cmd_compare(const CommandArgs& args);

}  // namespace iaware
