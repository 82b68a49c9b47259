#pragma once

#include <map>
#include <vector>

#include "iaware/filter.hpp"
#include "iaware/motion.hpp"
#include "iaware/rfs.hpp"
#include "iaware/rng.hpp"

namespace iaware {

/// One synthetic target: states defined exactly on [birth_frame, death_frame).
struct GroundTruthTrack {
    Label label;
    int birth_frame = 0;
    int death_frame = 0;
    std::map<int, StateVector> states;

    [[nodiscard]] bool alive_at(int frame) const {
        return frame >= birth_frame && frame < death_frame;
    }
};

struct SwarmParams {
    double spacing = 30.0;     // grid spacing between targets
    double jitter = 3.0;       // uniform position jitter at spawn
    double vx = 10.0;          // common initial velocity
    double vy = 0.0;
    double gap_gain = 0.3;     // per-frame restore gain toward the spawn spacing
    int birth_stagger = 0;     // frames between consecutive births (0 = all at frame 0)
    int death_stagger = 0;     // frames between consecutive early deaths (0 = none)
};

struct VehicleParams {
    int lanes_same = 2;         // lanes moving +x
    int lanes_opposing = 1;     // lanes moving -x
    double lane_gap = 20.0;     // lateral spacing between lanes
    double initial_gap = 35.0;  // in-lane spacing between consecutive vehicles
    double speed = 10.0;        // common cruise speed
    int brake_frame = -1;       // frame at which lane 0's lead vehicle brakes (-1 = never)
    double brake_fraction = 0.5;  // fraction of speed lost when braking
    double follow_gain = 0.1;   // follower speed correction per unit of gap error
    double accel_limit = 2.5;   // follower speed change bound per second
};

struct ScenarioConfig {
    enum class Kind { swarm, vehicles };
    Kind kind = Kind::swarm;
    int num_frames = 50;
    int num_targets = 9;
    NCVParams motion = make_ncv(1.0, 7.0);
    std::uint64_t seed = 1;
    double max_speed = 100.0;  // hard bound on generated speeds
    SwarmParams swarm;
    VehicleParams vehicle;
};

/// Coordinated-swarm ground truth: jittered grid spawn with common velocity;
/// each target propagates by the linear model plus a correction that restores
/// the distance to its nearest neighbor toward the spawn-time value.
std::vector<GroundTruthTrack> simulate_swarm(const ScenarioConfig& cfg, const RandomSource& rng);

/// Multi-lane straight-road ground truth with platoons, an optional braking
/// event on lane 0's lead vehicle, gap-preserving followers, and opposing
/// traffic.
std::vector<GroundTruthTrack> simulate_vehicles(const ScenarioConfig& cfg, const RandomSource& rng);

/// One simulated scan: independent detections at probability p_d, Gaussian
/// position noise, Poisson-uniform clutter over the clutter region, and
/// shuffled measurement order.
Scan generate_scan(const std::vector<GroundTruthTrack>& truth, int frame, const FilterConfig& cfg,
                   const RandomSource& rng);

/// Birth model standing in for known entry regions: one component per truth
/// target, centered on its spawn state with diagonal covariance.
BirthModel birth_model_from_truth(const std::vector<GroundTruthTrack>& truth, double r_b,
                                  double pos_std, double vel_std);

/// Axis-aligned bounds of every truth position, grown by `margin`.
Rect truth_bounds(const std::vector<GroundTruthTrack>& truth, double margin);

}  // namespace iaware
