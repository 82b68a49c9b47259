#include "iaware/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "iaware/interaction.hpp"

namespace iaware {

namespace {

void check_common(const ScenarioConfig& cfg) {
    if (cfg.num_frames < 1 || cfg.num_targets < 1) {
        throw std::invalid_argument("scenario: num_frames and num_targets must be >= 1");
    }
}

void clamp_speed(StateVector& s, double max_speed) {
    const double speed = std::hypot(s.vx, s.vy);
    if (speed > max_speed && speed > 0.0) {
        const double scale = max_speed / speed;
        s.vx *= scale;
        s.vy *= scale;
    }
}

}  // namespace

std::vector<GroundTruthTrack> simulate_swarm(const ScenarioConfig& cfg, const RandomSource& rng) {
    check_common(cfg);
    if (cfg.kind != ScenarioConfig::Kind::swarm) {
        throw std::invalid_argument("simulate_swarm: scenario kind is not swarm");
    }
    const SwarmParams& sw = cfg.swarm;
    const int n = cfg.num_targets;
    const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));

    std::vector<GroundTruthTrack> truth(static_cast<std::size_t>(n));
    std::vector<int> births_in_frame;
    RandomSource spawn_rng = rng.child(stream::scenario, 0xA0);
    for (int i = 0; i < n; ++i) {
        GroundTruthTrack& t = truth[static_cast<std::size_t>(i)];
        t.birth_frame = std::min(i * sw.birth_stagger, cfg.num_frames - 1);
        t.death_frame = cfg.num_frames - (n - 1 - i) * sw.death_stagger;
        t.death_frame = std::clamp(t.death_frame, t.birth_frame + 1, cfg.num_frames);
        if (static_cast<std::size_t>(t.birth_frame) >= births_in_frame.size()) {
            births_in_frame.resize(static_cast<std::size_t>(t.birth_frame) + 1, 0);
        }
        t.label = {t.birth_frame, births_in_frame[static_cast<std::size_t>(t.birth_frame)]++};

        StateVector s;
        s.px = (i % side) * sw.spacing + (2.0 * spawn_rng.uniform() - 1.0) * sw.jitter;
        s.py = (i / side) * sw.spacing + (2.0 * spawn_rng.uniform() - 1.0) * sw.jitter;
        s.vx = sw.vx;
        s.vy = sw.vy;
        t.states[t.birth_frame] = s;
    }

    // Spawn-time nearest-neighbor distance per target; the interaction the
    // generator exhibits is restoring this distance.
    std::vector<double> ref_dist(static_cast<std::size_t>(n), sw.spacing);
    for (int i = 0; i < n; ++i) {
        const auto& ti = truth[static_cast<std::size_t>(i)];
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const auto& tj = truth[static_cast<std::size_t>(j)];
            if (!tj.alive_at(ti.birth_frame) && tj.birth_frame != ti.birth_frame) continue;
            best = std::min(best,
                            euclidean_distance(ti.states.begin()->second, tj.states.begin()->second));
        }
        if (std::isfinite(best)) ref_dist[static_cast<std::size_t>(i)] = best;
    }

    for (int frame = 1; frame < cfg.num_frames; ++frame) {
        // Propagate everyone alive through the transition, then apply the
        // distance-restoring correction from the post-propagation snapshot.
        std::vector<StateVector> next(static_cast<std::size_t>(n));
        std::vector<bool> alive(static_cast<std::size_t>(n), false);
        for (int i = 0; i < n; ++i) {
            GroundTruthTrack& t = truth[static_cast<std::size_t>(i)];
            if (!t.alive_at(frame)) continue;
            alive[static_cast<std::size_t>(i)] = true;
            if (frame == t.birth_frame) {
                next[static_cast<std::size_t>(i)] = t.states.at(frame);
                continue;
            }
            RandomSource step_rng = rng.child(stream::scenario, static_cast<std::uint64_t>(frame),
                                              static_cast<std::uint64_t>(i));
            next[static_cast<std::size_t>(i)] =
                sample_transition(t.states.at(frame - 1), cfg.motion, step_rng);
        }

        std::vector<StateVector> corrected = next;
        for (int i = 0; i < n; ++i) {
            if (!alive[static_cast<std::size_t>(i)]) continue;
            double best = std::numeric_limits<double>::infinity();
            int nn = -1;
            for (int j = 0; j < n; ++j) {
                if (j == i || !alive[static_cast<std::size_t>(j)]) continue;
                const double d = euclidean_distance(next[static_cast<std::size_t>(i)],
                                                    next[static_cast<std::size_t>(j)]);
                if (d < best) {
                    best = d;
                    nn = j;
                }
            }
            if (nn < 0 || best <= 0.0) continue;
            const double err = best - ref_dist[static_cast<std::size_t>(i)];
            const double ux = (next[static_cast<std::size_t>(nn)].px -
                               next[static_cast<std::size_t>(i)].px) / best;
            const double uy = (next[static_cast<std::size_t>(nn)].py -
                               next[static_cast<std::size_t>(i)].py) / best;
            StateVector& s = corrected[static_cast<std::size_t>(i)];
            const double dx = sw.gap_gain * err * ux;
            const double dy = sw.gap_gain * err * uy;
            s.px += dx;
            s.py += dy;
            s.vx += dx / cfg.motion.T;
            s.vy += dy / cfg.motion.T;
        }

        for (int i = 0; i < n; ++i) {
            GroundTruthTrack& t = truth[static_cast<std::size_t>(i)];
            if (!alive[static_cast<std::size_t>(i)] || frame == t.birth_frame) continue;
            clamp_speed(corrected[static_cast<std::size_t>(i)], cfg.max_speed);
            t.states[frame] = corrected[static_cast<std::size_t>(i)];
        }
    }
    return truth;
}

std::vector<GroundTruthTrack> simulate_vehicles(const ScenarioConfig& cfg,
                                                const RandomSource& /*rng*/) {
    check_common(cfg);
    if (cfg.kind != ScenarioConfig::Kind::vehicles) {
        throw std::invalid_argument("simulate_vehicles: scenario kind is not vehicles");
    }
    const VehicleParams& vp = cfg.vehicle;
    const int lanes = vp.lanes_same + vp.lanes_opposing;
    if (lanes < 1) throw std::invalid_argument("simulate_vehicles: needs at least one lane");
    const int n = cfg.num_targets;

    struct Slot {
        int lane = 0;
        int pos = 0;      // 0 = platoon lead
        double dir = 1.0;  // +1 along +x, -1 along -x
    };
    std::vector<Slot> slots(static_cast<std::size_t>(n));
    std::vector<int> lane_fill(static_cast<std::size_t>(lanes), 0);
    for (int i = 0; i < n; ++i) {
        const int lane = i % lanes;
        slots[static_cast<std::size_t>(i)] = {lane, lane_fill[static_cast<std::size_t>(lane)]++,
                                              lane < vp.lanes_same ? 1.0 : -1.0};
    }

    const double span = cfg.num_frames * vp.speed;
    std::vector<GroundTruthTrack> truth(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Slot& s = slots[static_cast<std::size_t>(i)];
        GroundTruthTrack& t = truth[static_cast<std::size_t>(i)];
        t.label = {0, i};
        t.birth_frame = 0;
        t.death_frame = cfg.num_frames;
        StateVector x;
        x.py = s.lane * vp.lane_gap;
        x.vy = 0.0;
        // Stagger lane heads so adjacent-lane vehicles never sit at the same
        // longitudinal position. The factor is dyadic so in-lane gaps stay
        // exact in floating point.
        const double stagger = 0.375 * vp.initial_gap * s.lane;
        if (s.dir > 0.0) {
            x.px = -s.pos * vp.initial_gap + stagger;
            x.vx = vp.speed;
        } else {
            x.px = 0.75 * span + s.pos * vp.initial_gap + stagger;
            x.vx = -vp.speed;
        }
        t.states[0] = x;
    }

    // Predecessor (the vehicle directly ahead in the same lane) per target.
    std::vector<int> pred(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (slots[static_cast<std::size_t>(j)].lane == slots[static_cast<std::size_t>(i)].lane &&
                slots[static_cast<std::size_t>(j)].pos == slots[static_cast<std::size_t>(i)].pos - 1) {
                pred[static_cast<std::size_t>(i)] = j;
            }
        }
    }

    for (int frame = 1; frame < cfg.num_frames; ++frame) {
        for (int i = 0; i < n; ++i) {
            GroundTruthTrack& t = truth[static_cast<std::size_t>(i)];
            const Slot& s = slots[static_cast<std::size_t>(i)];
            const StateVector prev = t.states.at(frame - 1);
            StateVector x = prev;
            x.px = prev.px + prev.vx * cfg.motion.T;

            double speed = std::abs(prev.vx);
            if (s.pos == 0) {
                // Lead vehicles cruise; lane 0's lead cuts its speed at the
                // braking frame.
                if (s.lane == 0 && vp.brake_frame >= 0 && frame >= vp.brake_frame) {
                    speed = vp.speed * (1.0 - vp.brake_fraction);
                }
            } else {
                // Followers steer their speed toward the predecessor's while
                // restoring the nominal gap, under a finite accel/brake limit.
                const int p = pred[static_cast<std::size_t>(i)];
                const StateVector pstate = truth[static_cast<std::size_t>(p)].states.at(frame - 1);
                const double gap = s.dir * (pstate.px - prev.px);
                double desired = std::abs(pstate.vx) + vp.follow_gain * (gap - vp.initial_gap);
                const double bound = vp.accel_limit * cfg.motion.T;
                desired = std::clamp(desired, speed - bound, speed + bound);
                speed = std::max(0.0, desired);
            }
            x.vx = s.dir * std::min(speed, cfg.max_speed);
            t.states[frame] = x;
        }
    }
    return truth;
}

Scan generate_scan(const std::vector<GroundTruthTrack>& truth, int frame, const FilterConfig& cfg,
                   const RandomSource& rng) {
    RandomSource scan_rng = rng.child(stream::scan, static_cast<std::uint64_t>(frame));
    Scan scan;
    scan.frame = frame;

    const double sigma = std::sqrt(std::max(0.0, cfg.obs_noise_var));
    for (const GroundTruthTrack& t : truth) {
        if (!t.alive_at(frame)) continue;
        if (scan_rng.uniform() >= cfg.p_d) continue;
        const StateVector& s = t.states.at(frame);
        Measurement m;
        m.z = {s.px + sigma * scan_rng.normal(), s.py + sigma * scan_rng.normal()};
        scan.measurements.push_back(m);
    }

    if (cfg.clutter_rate > 0.0) {
        if (!(cfg.clutter_region.area() > 0.0)) {
            throw std::invalid_argument("generate_scan: clutter_region must have positive area");
        }
        const int k = scan_rng.poisson(cfg.clutter_rate);
        for (int i = 0; i < k; ++i) {
            Measurement m;
            m.z = {cfg.clutter_region.x_min + scan_rng.uniform() * cfg.clutter_region.width(),
                   cfg.clutter_region.y_min + scan_rng.uniform() * cfg.clutter_region.height()};
            scan.measurements.push_back(m);
        }
    }

    // Fisher-Yates so the detection/clutter provenance is not implied by order.
    for (std::size_t i = scan.measurements.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(scan_rng.below(i));
        std::swap(scan.measurements[i - 1], scan.measurements[j]);
    }
    return scan;
}

BirthModel birth_model_from_truth(const std::vector<GroundTruthTrack>& truth, double r_b,
                                  double pos_std, double vel_std) {
    BirthModel model;
    model.components.reserve(truth.size());
    for (const GroundTruthTrack& t : truth) {
        BirthComponent comp;
        comp.r_b = r_b;
        comp.mean = t.states.at(t.birth_frame);
        Eigen::Vector4d d{pos_std * pos_std, vel_std * vel_std, pos_std * pos_std,
                          vel_std * vel_std};
        comp.cov = d.asDiagonal();
        model.components.push_back(comp);
    }
    return model;
}

Rect truth_bounds(const std::vector<GroundTruthTrack>& truth, double margin) {
    Rect r{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
           std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    bool any = false;
    for (const GroundTruthTrack& t : truth) {
        for (const auto& [frame, s] : t.states) {
            any = true;
            r.x_min = std::min(r.x_min, s.px);
            r.y_min = std::min(r.y_min, s.py);
            r.x_max = std::max(r.x_max, s.px);
            r.y_max = std::max(r.y_max, s.py);
        }
    }
    if (!any) return Rect{0.0, 0.0, 0.0, 0.0};
    r.x_min -= margin;
    r.y_min -= margin;
    r.x_max += margin;
    r.y_max += margin;
    return r;
}

}  // namespace iaware
