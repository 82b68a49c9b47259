#include "iaware/harness.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "iaware/log.hpp"

namespace iaware {

namespace {

// Top-level stream branches; everything below them derives from the run seed.
constexpr std::uint64_t kSimulateBranch = 0xB1;
constexpr std::uint64_t kScanBranch = 0xB2;
constexpr std::uint64_t kFilterBranch = 0xB3;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

}  // namespace

std::vector<GroundTruthTrack> simulate_truth(const RunConfig& run) {
    ScenarioConfig cfg = run.scenario;
    cfg.seed = run.seed;
    const RandomSource rng = RandomSource(run.seed).child(kSimulateBranch);
    if (cfg.kind == ScenarioConfig::Kind::swarm) return simulate_swarm(cfg, rng);
    return simulate_vehicles(cfg, rng);
}

std::vector<Scan> simulate_scans(const RunConfig& run, const std::vector<GroundTruthTrack>& truth) {
    const RandomSource rng = RandomSource(run.seed).child(kScanBranch);
    std::vector<Scan> scans;
    scans.reserve(static_cast<std::size_t>(run.scenario.num_frames));
    for (int frame = 0; frame < run.scenario.num_frames; ++frame) {
        scans.push_back(generate_scan(truth, frame, run.filter, rng));
    }
    return scans;
}

BirthModel resolve_birth(const RunConfig& run) {
    if (!run.birth_auto) return run.filter.birth;
    return birth_model_from_truth(simulate_truth(run), run.birth_auto_r, run.birth_auto_pos_std,
                                  run.birth_auto_vel_std);
}

TrackingOutput run_filter(const RunConfig& run, const std::vector<Scan>& scans,
                          std::optional<InteractionModel> model_override) {
    RunConfig cfg = run;
    cfg.filter.birth = resolve_birth(run);
    if (model_override) cfg.filter.interaction.model = *model_override;

    int last_frame = run.scenario.num_frames - 1;
    std::map<int, const Scan*> by_frame;
    for (const Scan& s : scans) {
        by_frame[s.frame] = &s;
        last_frame = std::max(last_frame, s.frame);
    }

    const RandomSource rng = RandomSource(run.seed).child(kFilterBranch);
    const auto t0 = std::chrono::steady_clock::now();

    TrackingOutput out;
    FilterState state;
    for (int frame = 0; frame <= last_frame; ++frame) {
        Scan empty;
        empty.frame = frame;
        const Scan* scan = by_frame.count(frame) != 0 ? by_frame.at(frame) : &empty;
        state = step(state, *scan, cfg.filter, rng, cfg.extraction);

        for (const auto& item : state.estimates.items) {
            double r = 0.0;
            for (const BernoulliTrack& t : state.posterior.tracks) {
                if (t.label == item.label) {
                    r = t.r;
                    break;
                }
            }
            out.estimates.push_back({frame, item.label, item.state, r});
        }
        out.diagnostics.push_back({frame, static_cast<int>(state.posterior.tracks.size()),
                                   state.diag.weight_underflows, state.diag.interacting_tracks});
        logging::debug("frame " + std::to_string(frame) + ": " +
                       std::to_string(state.posterior.tracks.size()) + " tracks, " +
                       std::to_string(state.estimates.items.size()) + " estimates");
    }

    const auto t1 = std::chrono::steady_clock::now();
    out.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return out;
}

std::vector<FrameMetricsRow> evaluate_tracking(const std::vector<GroundTruthTrack>& truth,
                                               const std::vector<EstimateRow>& estimates,
                                               const OspaParams& params, const ExecPolicy& exec) {
    int first = 0;
    int last = -1;
    if (!truth.empty()) {
        first = truth.front().birth_frame;
        last = truth.front().death_frame - 1;
        for (const GroundTruthTrack& t : truth) {
            first = std::min(first, t.birth_frame);
            last = std::max(last, t.death_frame - 1);
        }
    } else if (!estimates.empty()) {
        first = last = estimates.front().frame;
        for (const EstimateRow& r : estimates) {
            first = std::min(first, r.frame);
            last = std::max(last, r.frame);
        }
    } else {
        return {};
    }

    std::set<int> stray;
    for (const EstimateRow& r : estimates) {
        if (r.frame < first || r.frame > last) stray.insert(r.frame);
    }
    if (!stray.empty()) {
        std::string frames;
        for (int f : stray) frames += (frames.empty() ? "" : ", ") + std::to_string(f);
        throw std::runtime_error("estimates refer to frames missing from the truth range [" +
                                 std::to_string(first) + ", " + std::to_string(last) +
                                 "]: " + frames);
    }

    TrackSet truth_tracks;
    for (const GroundTruthTrack& t : truth) {
        for (const auto& [frame, s] : t.states) truth_tracks[t.label][frame] = s.position();
    }
    TrackSet est_tracks;
    std::map<int, std::vector<Eigen::Vector2d>> est_points;
    for (const EstimateRow& r : estimates) {
        est_tracks[r.label][r.frame] = r.state.position();
        est_points[r.frame].push_back(r.state.position());
    }

    const int n_frames = last - first + 1;
    std::vector<FrameMetricsRow> rows(static_cast<std::size_t>(n_frames));
    for_index(n_frames, exec, [&](std::int64_t i) {
        const int frame = first + static_cast<int>(i);
        std::vector<Eigen::Vector2d> truth_pts;
        for (const GroundTruthTrack& t : truth) {
            if (t.alive_at(frame)) truth_pts.push_back(t.states.at(frame).position());
        }
        const auto est_it = est_points.find(frame);
        const std::vector<Eigen::Vector2d> est_pts =
            est_it == est_points.end() ? std::vector<Eigen::Vector2d>{} : est_it->second;

        FrameMetricsRow row;
        row.frame = frame;
        row.ospa = ospa(truth_pts, est_pts, params);
        row.ospa2 = ospa2(truth_tracks, est_tracks, frame, params);
        row.card_error = cardinality_error(static_cast<int>(truth_pts.size()),
                                           static_cast<int>(est_pts.size()));
        rows[static_cast<std::size_t>(i)] = row;
    });
    return rows;
}

MetricsSummary summarize(const std::vector<FrameMetricsRow>& rows) {
    MetricsSummary s;
    if (rows.empty()) return s;
    for (const FrameMetricsRow& r : rows) {
        s.ospa_total += r.ospa.total;
        s.ospa_loc += r.ospa.localization;
        s.ospa_card += r.ospa.cardinality;
        s.ospa2_total += r.ospa2.total;
        s.ospa2_loc += r.ospa2.localization;
        s.ospa2_card += r.ospa2.cardinality;
        s.abs_card_error += std::abs(r.card_error);
    }
    const double n = static_cast<double>(rows.size());
    s.ospa_total /= n;
    s.ospa_loc /= n;
    s.ospa_card /= n;
    s.ospa2_total /= n;
    s.ospa2_loc /= n;
    s.ospa2_card /= n;
    s.abs_card_error /= n;
    return s;
}

namespace {

void write_metrics(const std::string& path, const std::vector<FrameMetricsRow>& rows) {
    std::ofstream out = open_out(path);
    out << "frame,ospa_total,ospa_loc,ospa_card,ospa2_total,ospa2_loc,ospa2_card,card_error\n";
    for (const FrameMetricsRow& r : rows) {
        out << r.frame << ',' << format_double(r.ospa.total) << ','
            << format_double(r.ospa.localization) << ',' << format_double(r.ospa.cardinality)
            << ',' << format_double(r.ospa2.total) << ',' << format_double(r.ospa2.localization)
            << ',' << format_double(r.ospa2.cardinality) << ',' << r.card_error << '\n';
    }
}

void write_metrics_summary(const std::string& path, const MetricsSummary& s) {
    std::ofstream out = open_out(path);
    out << "mean_ospa_total,mean_ospa_loc,mean_ospa_card,mean_ospa2_total,mean_ospa2_loc,"
           "mean_ospa2_card,mean_abs_card_error\n";
    out << format_double(s.ospa_total) << ',' << format_double(s.ospa_loc) << ','
        << format_double(s.ospa_card) << ',' << format_double(s.ospa2_total) << ','
        << format_double(s.ospa2_loc) << ',' << format_double(s.ospa2_card) << ','
        << format_double(s.abs_card_error) << '\n';
}

void write_diagnostics(const std::string& dir, const TrackingOutput& tracking) {
    std::ofstream out = open_out(dir + "/diagnostics.csv");
    out << "frame,tracks,weight_underflows,interacting_tracks\n";
    for (const FrameDiagnostics& d : tracking.diagnostics) {
        out << d.frame << ',' << d.num_tracks << ',' << d.weight_underflows << ','
            << d.interacting_tracks << '\n';
    }
    std::ofstream summary = open_out(dir + "/diagnostics_summary.txt");
    summary << "frames = " << tracking.diagnostics.size() << '\n';
    summary << "wall_time_ms = " << format_double(tracking.wall_time_ms) << '\n';
}

std::string prepare_out_dir(const RunConfig& run, const CommandArgs& args) {
    const std::string dir = args.out_dir.value_or(run.output_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

RunConfig load_with_overrides(const CommandArgs& args) {
    RunConfig run = load_run_config(args.config_path);
    if (args.seed) {
        run.seed = *args.seed;
        run.scenario.seed = *args.seed;
    }
    return run;
}

int report_failure(const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
}

}  // namespace

int cmd_simulate(const CommandArgs& args) {
    try {
        const RunConfig run = load_with_overrides(args);
        const std::string dir = prepare_out_dir(run, args);

        const auto truth = simulate_truth(run);
        const auto scans = simulate_scans(run, truth);
        write_truth(dir + "/truth.csv", truth);
        write_scans(dir + "/scans.csv", scans);

        std::size_t measurements = 0;
        for (const Scan& s : scans) measurements += s.measurements.size();
        std::cout << "simulated " << truth.size() << " targets over " << run.scenario.num_frames
                  << " frames, " << measurements << " measurements -> " << dir << '\n';
        return 0;
    } catch (const std::exception& e) {
        return report_failure(e);
    }
}

int cmd_track(const CommandArgs& args) {
    try {
        if (!args.scans_path) throw std::runtime_error("track: --scans is required");
        const RunConfig run = load_with_overrides(args);
        const std::string dir = prepare_out_dir(run, args);

        const auto scans = read_scans(*args.scans_path);
        const TrackingOutput tracking = run_filter(run, scans);
        write_estimates(dir + "/tracks.csv", tracking.estimates);
        write_diagnostics(dir, tracking);

        std::cout << "tracked " << tracking.diagnostics.size() << " frames, "
                  << tracking.estimates.size() << " estimate rows in "
                  << format_double(tracking.wall_time_ms) << " ms -> " << dir << '\n';
        return 0;
    } catch (const std::exception& e) {
        return report_failure(e);
    }
}

int cmd_evaluate(const CommandArgs& args) {
    try {
        if (!args.truth_path) throw std::runtime_error("evaluate: --truth is required");
        if (!args.tracks_path) throw std::runtime_error("evaluate: --tracks is required");
        const RunConfig run = load_with_overrides(args);
        const std::string dir = prepare_out_dir(run, args);

        const auto truth = read_truth(*args.truth_path);
        const auto estimates = read_estimates(*args.tracks_path);
        const auto rows = evaluate_tracking(truth, estimates, run.metrics, run.filter.exec);
        write_metrics(dir + "/metrics.csv", rows);
        const MetricsSummary s = summarize(rows);
        write_metrics_summary(dir + "/metrics_summary.csv", s);

        std::cout << "evaluated " << rows.size() << " frames: mean OSPA "
                  << format_double(s.ospa_total) << ", mean OSPA2 "
                  << format_double(s.ospa2_total) << ", mean |card err| "
                  << format_double(s.abs_card_error) << " -> " << dir << '\n';
        return 0;
    } catch (const std::exception& e) {
        return report_failure(e);
    }
}

int cmd_compare(const CommandArgs& args) {
    try {
        const RunConfig run = load_with_overrides(args);
        const std::string dir = prepare_out_dir(run, args);

        const auto truth = simulate_truth(run);
        const auto scans = simulate_scans(run, truth);
        write_truth(dir + "/truth.csv", truth);
        write_scans(dir + "/scans.csv", scans);

        // Both passes consume the identical scan stream and seed; they differ
        // only in the interaction model.
        const TrackingOutput baseline = run_filter(run, scans, InteractionModel::none);
        const TrackingOutput aware = run_filter(run, scans);
        write_estimates(dir + "/baseline_tracks.csv", baseline.estimates);
        write_estimates(dir + "/interaction_tracks.csv", aware.estimates);

        const auto base_rows = evaluate_tracking(truth, baseline.estimates, run.metrics,
                                                 run.filter.exec);
        const auto aware_rows = evaluate_tracking(truth, aware.estimates, run.metrics,
                                                  run.filter.exec);
        write_metrics(dir + "/baseline_metrics.csv", base_rows);
        write_metrics(dir + "/interaction_metrics.csv", aware_rows);

        std::ofstream paired = open_out(dir + "/compare.csv");
        paired << "frame,base_ospa_total,base_ospa_loc,base_ospa_card,base_ospa2_total,"
                  "base_ospa2_loc,base_ospa2_card,base_card_error,ia_ospa_total,ia_ospa_loc,"
                  "ia_ospa_card,ia_ospa2_total,ia_ospa2_loc,ia_ospa2_card,ia_card_error\n";
        for (std::size_t i = 0; i < base_rows.size(); ++i) {
            const FrameMetricsRow& b = base_rows[i];
            const FrameMetricsRow& a = aware_rows[i];
            paired << b.frame << ',' << format_double(b.ospa.total) << ','
                   << format_double(b.ospa.localization) << ',' << format_double(b.ospa.cardinality)
                   << ',' << format_double(b.ospa2.total) << ','
                   << format_double(b.ospa2.localization) << ','
                   << format_double(b.ospa2.cardinality) << ',' << b.card_error << ','
                   << format_double(a.ospa.total) << ',' << format_double(a.ospa.localization)
                   << ',' << format_double(a.ospa.cardinality) << ','
                   << format_double(a.ospa2.total) << ',' << format_double(a.ospa2.localization)
                   << ',' << format_double(a.ospa2.cardinality) << ',' << a.card_error << '\n';
        }

        const MetricsSummary bs = summarize(base_rows);
        const MetricsSummary as = summarize(aware_rows);
        std::ofstream summary = open_out(dir + "/compare_summary.csv");
        summary << "mean_diff_ospa_total,mean_diff_ospa_loc,mean_diff_ospa_card,"
                   "mean_diff_ospa2_total,mean_diff_ospa2_loc,mean_diff_ospa2_card,"
                   "mean_diff_abs_card_error\n";
        summary << format_double(bs.ospa_total - as.ospa_total) << ','
                << format_double(bs.ospa_loc - as.ospa_loc) << ','
                << format_double(bs.ospa_card - as.ospa_card) << ','
                << format_double(bs.ospa2_total - as.ospa2_total) << ','
                << format_double(bs.ospa2_loc - as.ospa2_loc) << ','
                << format_double(bs.ospa2_card - as.ospa2_card) << ','
                << format_double(bs.abs_card_error - as.abs_card_error) << '\n';

        std::cout << "compared baseline vs interaction-aware over " << base_rows.size()
                  << " frames: mean OSPA diff " << format_double(bs.ospa_total - as.ospa_total)
                  << " (positive favors interaction-aware) -> " << dir << '\n';
        return 0;
    } catch (const std::exception& e) {
        return report_failure(e);
    }
}

}  // namespace iaware
