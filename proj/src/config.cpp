#include "iaware/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace iaware {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& name, const std::string& message) {
    throw std::runtime_error(name + ": " + message);
}

/// Key-value store with consumption tracking so leftover keys can be
/// reported as unknown.
class KeyMap {
public:
    KeyMap(const std::string& text, std::string name) : name_(std::move(name)) {
        std::istringstream in(text);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto comment = line.find('#');
            if (comment != std::string::npos) line = line.substr(0, comment);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                fail(name_, "line " + std::to_string(line_no) + " is not a key = value pair");
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) fail(name_, "line " + std::to_string(line_no) + " has an empty key");
            if (values_.count(key) != 0) fail(name_, "duplicate key \"" + key + "\"");
            values_[key] = value;
        }
    }

    [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string require(const std::string& key) {
        const auto it = values_.find(key);
        if (it == values_.end()) fail(name_, "missing required key \"" + key + "\"");
        used_.insert(key);
        return it->second;
    }

    std::string get_string(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        return require(key);
    }

    double get_double(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        return to_double(key, require(key));
    }

    double require_double(const std::string& key) { return to_double(key, require(key)); }

    int get_int(const std::string& key, int fallback) {
        if (!has(key)) return fallback;
        return to_int(key, require(key));
    }

    int require_int(const std::string& key) { return to_int(key, require(key)); }

    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        const std::string v = require(key);
        errno = 0;
        char* end = nullptr;
        const auto out = std::strtoull(v.c_str(), &end, 10);
        if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
            fail(name_, "key \"" + key + "\" is not an unsigned integer: \"" + v + "\"");
        }
        return out;
    }

    bool get_bool(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const std::string v = require(key);
        if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
        if (v == "false" || v == "0" || v == "no" || v == "off") return false;
        fail(name_, "key \"" + key + "\" is not a boolean: \"" + v + "\"");
    }

    std::vector<double> require_doubles(const std::string& key, std::size_t count) {
        const std::string v = require(key);
        std::istringstream in(v);
        std::vector<double> out;
        std::string token;
        while (in >> token) out.push_back(to_double(key, token));
        if (out.size() != count) {
            fail(name_, "key \"" + key + "\" needs " + std::to_string(count) +
                            " space-separated reals, got " + std::to_string(out.size()));
        }
        return out;
    }

    void finish() const {
        for (const auto& [key, value] : values_) {
            if (used_.count(key) == 0) fail(name_, "unknown key \"" + key + "\"");
        }
    }

    [[nodiscard]] const std::string& name() const { return name_; }

private:
    double to_double(const std::string& key, const std::string& v) const {
        errno = 0;
        char* end = nullptr;
        const double out = std::strtod(v.c_str(), &end);
        if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
            fail(name_, "key \"" + key + "\" is not a real number: \"" + v + "\"");
        }
        return out;
    }

    int to_int(const std::string& key, const std::string& v) const {
        errno = 0;
        char* end = nullptr;
        const long out = std::strtol(v.c_str(), &end, 10);
        if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
            fail(name_, "key \"" + key + "\" is not an integer: \"" + v + "\"");
        }
        return static_cast<int>(out);
    }

    std::string name_;
    std::map<std::string, std::string> values_;
    std::set<std::string> used_;
};

void check_range(const std::string& name, const std::string& key, bool ok) {
    if (!ok) fail(name, "key \"" + key + "\" is out of range");
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& name) {
    KeyMap keys(text, name);
    RunConfig run;

    run.seed = keys.get_u64("seed", 1);
    run.output_dir = keys.get_string("output_dir", "out");

    // scenario
    const std::string kind = keys.require("scenario.kind");
    if (kind == "swarm") {
        run.scenario.kind = ScenarioConfig::Kind::swarm;
    } else if (kind == "vehicles") {
        run.scenario.kind = ScenarioConfig::Kind::vehicles;
    } else {
        fail(name, "key \"scenario.kind\" must be swarm or vehicles, got \"" + kind + "\"");
    }
    run.scenario.num_frames = keys.require_int("scenario.num_frames");
    run.scenario.num_targets = keys.require_int("scenario.num_targets");
    check_range(name, "scenario.num_frames", run.scenario.num_frames >= 1);
    check_range(name, "scenario.num_targets", run.scenario.num_targets >= 1);
    run.scenario.max_speed = keys.get_double("scenario.max_speed", run.scenario.max_speed);
    run.scenario.seed = run.seed;

    SwarmParams& sw = run.scenario.swarm;
    sw.spacing = keys.get_double("scenario.swarm.spacing", sw.spacing);
    sw.jitter = keys.get_double("scenario.swarm.jitter", sw.jitter);
    sw.vx = keys.get_double("scenario.swarm.vx", sw.vx);
    sw.vy = keys.get_double("scenario.swarm.vy", sw.vy);
    sw.gap_gain = keys.get_double("scenario.swarm.gap_gain", sw.gap_gain);
    sw.birth_stagger = keys.get_int("scenario.swarm.birth_stagger", sw.birth_stagger);
    sw.death_stagger = keys.get_int("scenario.swarm.death_stagger", sw.death_stagger);

    VehicleParams& vp = run.scenario.vehicle;
    vp.lanes_same = keys.get_int("scenario.vehicle.lanes_same", vp.lanes_same);
    vp.lanes_opposing = keys.get_int("scenario.vehicle.lanes_opposing", vp.lanes_opposing);
    vp.lane_gap = keys.get_double("scenario.vehicle.lane_gap", vp.lane_gap);
    vp.initial_gap = keys.get_double("scenario.vehicle.initial_gap", vp.initial_gap);
    vp.speed = keys.get_double("scenario.vehicle.speed", vp.speed);
    vp.brake_frame = keys.get_int("scenario.vehicle.brake_frame", vp.brake_frame);
    vp.brake_fraction = keys.get_double("scenario.vehicle.brake_fraction", vp.brake_fraction);
    vp.follow_gain = keys.get_double("scenario.vehicle.follow_gain", vp.follow_gain);
    vp.accel_limit = keys.get_double("scenario.vehicle.accel_limit", vp.accel_limit);
    check_range(name, "scenario.vehicle.accel_limit", vp.accel_limit > 0.0);
    check_range(name, "scenario.vehicle.lanes_same", vp.lanes_same >= 0);
    check_range(name, "scenario.vehicle.lanes_opposing", vp.lanes_opposing >= 0);
    check_range(name, "scenario.vehicle.brake_fraction",
                vp.brake_fraction >= 0.0 && vp.brake_fraction <= 1.0);

    // shared motion model
    const double T = keys.get_double("motion.T", 1.0);
    const double sigma_sq = keys.get_double("motion.sigma_sq", 7.0);
    check_range(name, "motion.T", T > 0.0);
    check_range(name, "motion.sigma_sq", sigma_sq >= 0.0);
    run.scenario.motion = make_ncv(T, sigma_sq);
    run.filter.motion = run.scenario.motion;

    // filter
    FilterConfig& f = run.filter;
    f.p_s = keys.get_double("filter.p_s", f.p_s);
    f.p_d = keys.get_double("filter.p_d", f.p_d);
    f.clutter_rate = keys.get_double("filter.clutter_rate", f.clutter_rate);
    f.obs_noise_var = keys.get_double("filter.obs_noise_var", f.obs_noise_var);
    f.num_particles = keys.get_int("filter.num_particles", f.num_particles);
    f.prune_threshold = keys.get_double("filter.prune_threshold", f.prune_threshold);
    f.gate_prob = keys.get_double("filter.gate_prob", f.gate_prob);
    f.interaction_warmup = keys.get_int("filter.interaction_warmup", f.interaction_warmup);
    check_range(name, "filter.p_s", f.p_s > 0.0 && f.p_s <= 1.0);
    check_range(name, "filter.p_d", f.p_d > 0.0 && f.p_d <= 1.0);
    check_range(name, "filter.clutter_rate", f.clutter_rate >= 0.0);
    check_range(name, "filter.obs_noise_var", f.obs_noise_var > 0.0);
    check_range(name, "filter.num_particles", f.num_particles >= 1);
    check_range(name, "filter.prune_threshold",
                f.prune_threshold >= 0.0 && f.prune_threshold < 1.0);
    check_range(name, "filter.gate_prob", f.gate_prob > 0.0 && f.gate_prob < 1.0);
    check_range(name, "filter.interaction_warmup", f.interaction_warmup >= 0);

    if (keys.has("filter.clutter_region")) {
        const auto box = keys.require_doubles("filter.clutter_region", 4);
        f.clutter_region = {box[0], box[1], box[2], box[3]};
    }
    if (f.clutter_rate > 0.0 && !(f.clutter_region.area() > 0.0)) {
        fail(name, "key \"filter.clutter_region\" must span a positive area when "
                   "filter.clutter_rate > 0");
    }

    // birth model
    run.birth_auto = keys.get_bool("filter.birth.auto", false);
    run.birth_auto_r = keys.get_double("filter.birth.auto_r", run.birth_auto_r);
    run.birth_auto_pos_std = keys.get_double("filter.birth.auto_pos_std", run.birth_auto_pos_std);
    run.birth_auto_vel_std = keys.get_double("filter.birth.auto_vel_std", run.birth_auto_vel_std);
    check_range(name, "filter.birth.auto_r", run.birth_auto_r > 0.0 && run.birth_auto_r < 1.0);
    check_range(name, "filter.birth.auto_pos_std", run.birth_auto_pos_std > 0.0);
    check_range(name, "filter.birth.auto_vel_std", run.birth_auto_vel_std > 0.0);
    const int birth_count = keys.get_int("filter.birth.count", 0);
    check_range(name, "filter.birth.count", birth_count >= 0);
    for (int i = 0; i < birth_count; ++i) {
        const std::string prefix = "filter.birth." + std::to_string(i);
        BirthComponent comp;
        comp.r_b = keys.get_double(prefix + ".r", 0.2);
        check_range(name, prefix + ".r", comp.r_b > 0.0 && comp.r_b < 1.0);
        const auto mean = keys.require_doubles(prefix + ".mean", 4);
        comp.mean = {mean[0], mean[1], mean[2], mean[3]};
        const auto std = keys.require_doubles(prefix + ".std", 4);
        Eigen::Vector4d diag;
        for (int k = 0; k < 4; ++k) {
            check_range(name, prefix + ".std", std[static_cast<std::size_t>(k)] > 0.0);
            diag(k) = std[static_cast<std::size_t>(k)] * std[static_cast<std::size_t>(k)];
        }
        comp.cov = diag.asDiagonal();
        f.birth.components.push_back(comp);
    }

    // interaction
    InteractionConfig& ia = f.interaction;
    const std::string model = keys.get_string("interaction.model", "none");
    if (model == "none") {
        ia.model = InteractionModel::none;
    } else if (model == "swarm") {
        ia.model = InteractionModel::swarm;
    } else if (model == "front_vehicle") {
        ia.model = InteractionModel::front_vehicle;
    } else {
        fail(name, "key \"interaction.model\" must be none, swarm, or front_vehicle, got \"" +
                       model + "\"");
    }
    ia.d_th = keys.get_double("interaction.d_th", ia.d_th);
    ia.alpha_th = keys.get_double("interaction.alpha_th", ia.alpha_th);
    ia.beta_th = keys.get_double("interaction.beta_th", ia.beta_th);
    ia.sigma_d = keys.get_double("interaction.sigma_d", ia.sigma_d);
    ia.front_check = keys.get_bool("interaction.front_check", ia.front_check);
    ia.min_speed = keys.get_double("interaction.min_speed", ia.min_speed);
    check_range(name, "interaction.d_th", ia.d_th > 0.0);
    check_range(name, "interaction.alpha_th", ia.alpha_th > 0.0 && ia.alpha_th < 180.0);
    check_range(name, "interaction.beta_th", ia.beta_th > 0.0 && ia.beta_th < 180.0);
    check_range(name, "interaction.sigma_d", ia.sigma_d > 0.0);
    check_range(name, "interaction.min_speed", ia.min_speed >= 0.0);

    // extraction
    const std::string mode = keys.get_string("extraction.mode", "threshold");
    if (mode == "threshold") {
        run.extraction.kind = ExtractionMode::Kind::threshold;
    } else if (mode == "map_cardinality") {
        run.extraction.kind = ExtractionMode::Kind::map_cardinality;
    } else {
        fail(name, "key \"extraction.mode\" must be threshold or map_cardinality, got \"" + mode +
                       "\"");
    }
    run.extraction.threshold = keys.get_double("extraction.threshold", 0.5);
    check_range(name, "extraction.threshold",
                run.extraction.threshold > 0.0 && run.extraction.threshold < 1.0);

    // metrics
    run.metrics.c = keys.get_double("metrics.c", run.metrics.c);
    run.metrics.p = keys.get_double("metrics.p", run.metrics.p);
    run.metrics.window = keys.get_int("metrics.window", run.metrics.window);
    check_range(name, "metrics.c", run.metrics.c > 0.0);
    check_range(name, "metrics.p", run.metrics.p >= 1.0);
    check_range(name, "metrics.window", run.metrics.window >= 1);

    // runtime
    f.exec.parallel = keys.get_bool("runtime.parallel", true);
    f.exec.threads = keys.get_int("runtime.threads", 0);
    check_range(name, "runtime.threads", f.exec.threads >= 0);

    keys.finish();
    return run;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str(), path);
}

}  // namespace iaware
