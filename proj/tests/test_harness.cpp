#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "iaware/harness.hpp"

using namespace iaware;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / fs::path("iaware_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string write_config(const TempDir& dir, const std::string& body) {
    const std::string path = dir.file("run.cfg");
    std::ofstream out(path);
    out << body;
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kVehiclesConfig =
    "scenario.kind = vehicles\n"
    "scenario.num_frames = 15\n"
    "scenario.num_targets = 6\n"
    "scenario.vehicle.brake_frame = 8\n"
    "filter.clutter_rate = 2\n"
    "filter.clutter_region = -150 -50 400 100\n"
    "filter.num_particles = 60\n"
    "filter.birth.auto = true\n"
    "interaction.model = front_vehicle\n"
    "seed = 11\n";

}  // namespace

TEST_CASE("cmd_simulate writes matching truth and scan files") {
    TempDir dir("sim");
    CommandArgs args;
    args.config_path = write_config(dir, kVehiclesConfig);
    args.out_dir = dir.file("out");
    REQUIRE(cmd_simulate(args) == 0);

    const auto truth = read_truth(dir.file("out/truth.csv"));
    CHECK(truth.size() == 6);
    const auto scans = read_scans(dir.file("out/scans.csv"));
    CHECK(!scans.empty());
    CHECK(scans.back().frame < 15);
}

TEST_CASE("cmd_simulate is byte-deterministic for a fixed config and seed") {
    TempDir dir("sim_det");
    CommandArgs args;
    args.config_path = write_config(dir, kVehiclesConfig);

    args.out_dir = dir.file("a");
    REQUIRE(cmd_simulate(args) == 0);
    args.out_dir = dir.file("b");
    REQUIRE(cmd_simulate(args) == 0);
    CHECK(slurp(dir.file("a/truth.csv")) == slurp(dir.file("b/truth.csv")));
    CHECK(slurp(dir.file("a/scans.csv")) == slurp(dir.file("b/scans.csv")));

    // A different seed changes the measurement stream.
    args.out_dir = dir.file("c");
    args.seed = 12;
    REQUIRE(cmd_simulate(args) == 0);
    CHECK(slurp(dir.file("a/scans.csv")) != slurp(dir.file("c/scans.csv")));
}

TEST_CASE("a config error names the offending key and fails the command") {
    TempDir dir("bad_cfg");
    CommandArgs args;
    args.config_path = write_config(dir, "scenario.kind = vehicles\n");
    args.out_dir = dir.file("out");
    CHECK(cmd_simulate(args) == 1);
    CHECK(cmd_track(args) == 1);
}

TEST_CASE("cmd_track over an empty scan file confirms nothing") {
    TempDir dir("empty_scans");
    CommandArgs args;
    args.config_path = write_config(dir, kVehiclesConfig);
    args.out_dir = dir.file("out");
    {
        std::ofstream out(dir.file("scans.csv"));
        out << "frame,zx,zy\n";
    }
    args.scans_path = dir.file("scans.csv");
    REQUIRE(cmd_track(args) == 0);

    // Births at r_b = 0.2 with no detections never cross the 0.5 threshold.
    CHECK(read_estimates(dir.file("out/tracks.csv")).empty());
    // Diagnostics still cover every configured frame.
    const std::string diag = slurp(dir.file("out/diagnostics.csv"));
    CHECK(diag.find("\n14,") != std::string::npos);
}

TEST_CASE("track then evaluate produces a full metrics table") {
    TempDir dir("pipeline");
    CommandArgs args;
    args.config_path = write_config(dir, kVehiclesConfig);
    args.out_dir = dir.file("out");
    REQUIRE(cmd_simulate(args) == 0);
    args.scans_path = dir.file("out/scans.csv");
    REQUIRE(cmd_track(args) == 0);
    args.truth_path = dir.file("out/truth.csv");
    args.tracks_path = dir.file("out/tracks.csv");
    REQUIRE(cmd_evaluate(args) == 0);

    const std::string metrics = slurp(dir.file("out/metrics.csv"));
    CHECK(metrics.find("frame,ospa_total") == 0);
    // One row per frame plus the header.
    CHECK(std::count(metrics.begin(), metrics.end(), '\n') == 16);
    CHECK(slurp(dir.file("out/metrics_summary.csv")).find("mean_ospa_total") == 0);
}

TEST_CASE("evaluating truth against itself yields all-zero errors") {
    TempDir dir("self_eval");
    RunConfig run = load_run_config(write_config(dir, kVehiclesConfig));
    const auto truth = simulate_truth(run);

    std::vector<EstimateRow> rows;
    for (const auto& t : truth) {
        for (const auto& [frame, s] : t.states) rows.push_back({frame, t.label, s, 1.0});
    }
    const auto metrics = evaluate_tracking(truth, rows, run.metrics, ExecPolicy::serial());
    REQUIRE(metrics.size() == 15);
    for (const auto& m : metrics) {
        CHECK(m.ospa.total == doctest::Approx(0.0));
        CHECK(m.ospa2.total == doctest::Approx(0.0));
        CHECK(m.card_error == 0);
    }
}

TEST_CASE("evaluating an empty track set reports the cut-off everywhere") {
    TempDir dir("empty_eval");
    RunConfig run = load_run_config(write_config(dir, kVehiclesConfig));
    const auto truth = simulate_truth(run);
    const auto metrics = evaluate_tracking(truth, {}, run.metrics, ExecPolicy::serial());
    for (const auto& m : metrics) {
        CHECK(m.ospa.total == doctest::Approx(100.0));
        CHECK(m.card_error == 6);
    }
}

TEST_CASE("estimates outside the truth frame range are rejected with the frame list") {
    TempDir dir("mismatch");
    RunConfig run = load_run_config(write_config(dir, kVehiclesConfig));
    const auto truth = simulate_truth(run);
    std::vector<EstimateRow> rows;
    rows.push_back({99, {0, 0}, {}, 1.0});
    try {
        evaluate_tracking(truth, rows, run.metrics, ExecPolicy::serial());
        FAIL("expected a frame-mismatch error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("99") != std::string::npos);
    }
}

TEST_CASE("cmd_compare emits paired metrics from one shared scan stream") {
    TempDir dir("compare");
    CommandArgs args;
    args.config_path = write_config(dir, kVehiclesConfig);
    args.out_dir = dir.file("out");
    REQUIRE(cmd_compare(args) == 0);

    const std::string paired = slurp(dir.file("out/compare.csv"));
    CHECK(paired.find("frame,base_ospa_total") == 0);
    CHECK(std::count(paired.begin(), paired.end(), '\n') == 16);
    CHECK(slurp(dir.file("out/compare_summary.csv")).find("mean_diff_ospa_total") == 0);
    // The shared inputs are also written for reproduction.
    CHECK(fs::exists(dir.file("out/truth.csv")));
    CHECK(fs::exists(dir.file("out/scans.csv")));
    CHECK(fs::exists(dir.file("out/baseline_tracks.csv")));
    CHECK(fs::exists(dir.file("out/interaction_tracks.csv")));
}

TEST_CASE("a flat interaction factor makes compare a perfect tie") {
    TempDir dir("tie");
    // sigma_d so large the swarm factor is constant: both passes coincide
    // bit-for-bit, so every mean difference is exactly zero.
    std::string cfg(kVehiclesConfig);
    const auto pos = cfg.find("interaction.model = front_vehicle");
    cfg.replace(pos, std::string("interaction.model = front_vehicle").size(),
                "interaction.model = swarm");
    cfg += "interaction.sigma_d = 1e15\n";

    CommandArgs args;
    args.config_path = write_config(dir, cfg);
    args.out_dir = dir.file("out");
    REQUIRE(cmd_compare(args) == 0);
    CHECK(slurp(dir.file("out/baseline_tracks.csv")) ==
          slurp(dir.file("out/interaction_tracks.csv")));
    const std::string summary = slurp(dir.file("out/compare_summary.csv"));
    const std::string values = summary.substr(summary.find('\n') + 1);
    std::istringstream in(values);
    std::string cell;
    while (std::getline(in, cell, ',')) CHECK(std::stod(cell) == 0.0);
}
