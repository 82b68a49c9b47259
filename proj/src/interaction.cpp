#include "iaware/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iaware {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
}  // namespace

InteractionContext::InteractionContext(const MultiTargetEstimate& estimates, Label excluded)
    : excluded_(excluded) {
    items_.reserve(estimates.items.size());
    for (const auto& item : estimates.items) {
        if (item.label != excluded) items_.push_back(item);
    }
}

std::optional<StateVector> InteractionContext::state_of(const Label& label) const {
    for (const auto& item : items_) {
        if (item.label == label) return item.state;
    }
    return std::nullopt;
}

double euclidean_distance(const StateVector& a, const StateVector& b) {
    return std::hypot(a.px - b.px, a.py - b.py);
}

std::optional<std::pair<Label, double>> nearest_neighbor(const StateVector& query,
                                                         const InteractionContext& ctx) {
    std::optional<std::pair<Label, double>> best;
    for (const auto& item : ctx.items()) {
        const double d = euclidean_distance(query, item.state);
        if (!best || d < best->second || (d == best->second && item.label < best->first)) {
            best = {item.label, d};
        }
    }
    return best;
}

double swarm_weight_factor(const StateVector& particle, double d_hat,
                           const StateVector& neighbor_pred, double sigma_d) {
    if (!(sigma_d > 0.0)) {
        throw std::invalid_argument("swarm_weight_factor: sigma_d must be positive");
    }
    const double e = d_hat - euclidean_distance(particle, neighbor_pred);
    return kInvSqrt2Pi / sigma_d * std::exp(-0.5 * (e / sigma_d) * (e / sigma_d));
}

double velocity_angle(const Eigen::Vector2d& v1, const Eigen::Vector2d& v2) {
    const double n1 = v1.norm();
    const double n2 = v2.norm();
    if (n1 == 0.0 || n2 == 0.0) {
        throw std::invalid_argument("velocity_angle: zero-norm vector has no direction");
    }
    const double ratio = std::clamp(v1.dot(v2) / (n1 * n2), -1.0, 1.0);
    return std::acos(ratio) * 180.0 / kPi;
}

std::vector<Label> near_set(const Label& subject, const StateVector& subject_state,
                            const InteractionContext& ctx, double d_th) {
    std::vector<Label> out;
    for (const auto& item : ctx.items()) {
        if (item.label == subject) continue;
        if (euclidean_distance(subject_state, item.state) <= d_th) out.push_back(item.label);
    }
    return out;
}

std::vector<Label> filter_same_direction(const Eigen::Vector2d& subject_vel,
                                         const std::vector<Label>& candidates,
                                         const InteractionContext& ctx, double alpha_th) {
    std::vector<Label> out;
    if (subject_vel.norm() == 0.0) return out;
    for (const Label& cand : candidates) {
        const auto state = ctx.state_of(cand);
        if (!state) continue;
        const Eigen::Vector2d v = state->velocity();
        if (v.norm() == 0.0) continue;
        if (velocity_angle(subject_vel, v) <= alpha_th) out.push_back(cand);
    }
    return out;
}

std::vector<Label> filter_in_front(const StateVector& subject_state,
                                   const std::vector<Label>& candidates,
                                   const InteractionContext& ctx, double beta_th) {
    std::vector<Label> out;
    const Eigen::Vector2d vel = subject_state.velocity();
    if (vel.norm() == 0.0) return out;
    for (const Label& cand : candidates) {
        const auto state = ctx.state_of(cand);
        if (!state) continue;
        const Eigen::Vector2d rel = state->position() - subject_state.position();
        if (rel.norm() == 0.0) continue;
        if (velocity_angle(vel, rel) <= beta_th) out.push_back(cand);
    }
    return out;
}

std::optional<Label> front_vehicle(const Label& subject, const StateVector& subject_state,
                                   const InteractionContext& ctx, const InteractionConfig& cfg) {
    if (subject_state.velocity().norm() < cfg.min_speed) return std::nullopt;

    std::vector<Label> candidates = near_set(subject, subject_state, ctx, cfg.d_th);
    candidates = filter_same_direction(subject_state.velocity(), candidates, ctx, cfg.alpha_th);
    if (cfg.front_check) {
        candidates = filter_in_front(subject_state, candidates, ctx, cfg.beta_th);
    }

    std::optional<Label> best;
    double best_dist = 0.0;
    for (const Label& cand : candidates) {
        const auto state = ctx.state_of(cand);
        if (!state) continue;
        const double d = euclidean_distance(subject_state, *state);
        if (!best || d < best_dist || (d == best_dist && cand < *best)) {
            best = cand;
            best_dist = d;
        }
    }
    return best;
}

std::optional<InteractionAnchor> interaction_anchor(const InteractionConfig& cfg,
                                                    const Label& subject,
                                                    const InteractionContext& ctx,
                                                    const NCVParams& motion,
                                                    const StateVector& subject_prev_estimate) {
    if (cfg.model == InteractionModel::none || ctx.empty()) return std::nullopt;

    std::optional<Label> neighbor;
    if (cfg.model == InteractionModel::swarm) {
        if (const auto nn = nearest_neighbor(subject_prev_estimate, ctx)) neighbor = nn->first;
    } else {
        neighbor = front_vehicle(subject, subject_prev_estimate, ctx, cfg);
    }
    if (!neighbor) return std::nullopt;

    const auto state = ctx.state_of(*neighbor);
    if (!state) return std::nullopt;

    InteractionAnchor anchor;
    anchor.neighbor = *neighbor;
    anchor.prior_distance = euclidean_distance(subject_prev_estimate, *state);
    anchor.predicted_state = noise_free_predict(*state, motion);
    return anchor;
}

double interaction_factor(const InteractionConfig& cfg, const Label& subject,
                          const StateVector& particle, const InteractionContext& ctx,
                          const NCVParams& motion, const StateVector& subject_prev_estimate) {
    const auto anchor = interaction_anchor(cfg, subject, ctx, motion, subject_prev_estimate);
    if (!anchor) return 1.0;
    return swarm_weight_factor(particle, anchor->prior_distance, anchor->predicted_state,
                               cfg.sigma_d);
}

}  // namespace iaware
