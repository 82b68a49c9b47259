#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "iaware/motion.hpp"
#include "iaware/rfs.hpp"

namespace iaware {

enum class InteractionModel { none, swarm, front_vehicle };

struct InteractionConfig {
    InteractionModel model = InteractionModel::none;
    double d_th = 50.0;        // near-set distance threshold, scene units
    double alpha_th = 15.0;    // same-direction angle threshold, degrees
    double beta_th = 60.0;     // in-front angle threshold, degrees
    double sigma_d = 5.0;      // distance-change tolerance, scene units
    bool front_check = true;   // the in-front angle filter can be disabled
    // Below this speed a subject has no usable heading and identifies no
    // front vehicle; estimated directions at crawl speeds are noise.
    double min_speed = 1.0;
};

/// Leave-one-out view of the previous multi-target estimate: the subject's
/// own label is removed on construction.
class InteractionContext {
public:
    InteractionContext(const MultiTargetEstimate& estimates, Label excluded);

    [[nodiscard]] const std::vector<MultiTargetEstimate::Item>& items() const { return items_; }
    [[nodiscard]] const Label& excluded() const { return excluded_; }
    [[nodiscard]] bool empty() const { return items_.empty(); }

    /// State of a context member, or nullopt when the label is not present.
    [[nodiscard]] std::optional<StateVector> state_of(const Label& label) const;

private:
    std::vector<MultiTargetEstimate::Item> items_;
    Label excluded_;
};

/// Planar distance between the two position components; velocities ignored.
double euclidean_distance(const StateVector& a, const StateVector& b);

/// Closest context member to the query state and its distance; nullopt on an
/// empty context. Distance ties break toward the smaller label.
std::optional<std::pair<Label, double>> nearest_neighbor(const StateVector& query,
                                                         const InteractionContext& ctx);

/// Distance-keeping factor N(e; 0, sigma_d^2) with
/// e = d_hat - dist(particle, neighbor_pred).
double swarm_weight_factor(const StateVector& particle, double d_hat,
                           const StateVector& neighbor_pred, double sigma_d);

/// Angle between two planar vectors in degrees, in [0, 180]. Rejects
/// zero-norm input.
double velocity_angle(const Eigen::Vector2d& v1, const Eigen::Vector2d& v2);

/// Context labels within d_th of the subject state (inclusive).
std::vector<Label> near_set(const Label& subject, const StateVector& subject_state,
                            const InteractionContext& ctx, double d_th);

/// Keeps candidates whose velocity direction is within alpha_th degrees of
/// the subject's. Zero-velocity candidates are dropped; a zero-velocity
/// subject yields an empty result.
std::vector<Label> filter_same_direction(const Eigen::Vector2d& subject_vel,
                                         const std::vector<Label>& candidates,
                                         const InteractionContext& ctx, double alpha_th);

/// Keeps candidates located ahead of the subject: the angle between the
/// subject velocity and the relative position vector is within beta_th.
std::vector<Label> filter_in_front(const StateVector& subject_state,
                                   const std::vector<Label>& candidates,
                                   const InteractionContext& ctx, double beta_th);

/// Identifies the vehicle driven right in front of the subject:
/// near_set -> filter_same_direction -> filter_in_front (optional) -> argmin
/// distance. Nullopt when the pipeline empties.
std::optional<Label> front_vehicle(const Label& subject, const StateVector& subject_state,
                                   const InteractionContext& ctx, const InteractionConfig& cfg);

/// The neighbor a subject's particles are weighted against: the prior
/// distance to keep and the neighbor's noise-free predicted state.
struct InteractionAnchor {
    Label neighbor;
    double prior_distance = 0.0;
    StateVector predicted_state;
};

/// Resolves the interaction anchor for a subject, or nullopt when the model
/// is none / no interacting target exists. Computed once per track; the
/// per-particle factor is then a single swarm_weight_factor evaluation.
std::optional<InteractionAnchor> interaction_anchor(const InteractionConfig& cfg,
                                                    const Label& subject,
                                                    const InteractionContext& ctx,
                                                    const NCVParams& motion,
                                                    const StateVector& subject_prev_estimate);

/// Importance factor applied to one propagated particle. Exactly 1 when the
/// model is none or no interacting target is identified.
double interaction_factor(const InteractionConfig& cfg, const Label& subject,
                          const StateVector& particle, const InteractionContext& ctx,
                          const NCVParams& motion, const StateVector& subject_prev_estimate);

}  // namespace iaware
