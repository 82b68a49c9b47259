#pragma once

#include <Eigen/Core>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace iaware {

/// Track label: (birth frame, birth component index). Ordering is
/// lexicographic and labels are unique within a density.
struct Label {
    int birth_time = 0;
    int birth_index = 0;

    auto operator<=>(const Label&) const = default;
};

std::string to_string(const Label& label);

/// Single-target state [px vx py vy] in scene units.
struct StateVector {
    double px = 0.0;
    double vx = 0.0;
    double py = 0.0;
    double vy = 0.0;

    [[nodiscard]] Eigen::Vector4d vec() const { return {px, vx, py, vy}; }
    [[nodiscard]] Eigen::Vector2d position() const { return {px, py}; }
    [[nodiscard]] Eigen::Vector2d velocity() const { return {vx, vy}; }

    static StateVector from(const Eigen::Vector4d& v) { return {v(0), v(1), v(2), v(3)}; }

    bool operator==(const StateVector&) const = default;
};

struct Particle {
    StateVector state;
    double weight = 0.0;
};

/// One labeled possibly-existing target: existence probability r and a
/// weighted particle cloud approximating its state density.
struct BernoulliTrack {
    Label label;
    double r = 0.0;
    std::vector<Particle> particles;
};

/// Labeled multi-Bernoulli density: independent Bernoulli components with
/// pairwise distinct labels.
struct LMBDensity {
    std::vector<BernoulliTrack> tracks;
};

/// Extracted multi-target point estimate {(label, state)}.
struct MultiTargetEstimate {
    struct Item {
        Label label;
        StateVector state;
    };
    std::vector<Item> items;
};

/// How point estimates are extracted from an LMB density: either every track
/// whose existence probability exceeds a threshold, or the n tracks with the
/// largest existence probabilities where n is the rounded cardinality sum.
struct ExtractionMode {
    enum class Kind { threshold, map_cardinality };
    Kind kind = Kind::threshold;
    double threshold = 0.5;

    static ExtractionMode thresholded(double tau) { return {Kind::threshold, tau}; }
    static ExtractionMode map_cardinality() { return {Kind::map_cardinality, 0.0}; }
};

inline constexpr double kWeightSumTolerance = 1e-9;

/// True when the track's particle weights are nonnegative, finite, and sum to
/// one within kWeightSumTolerance.
bool weights_normalized(const BernoulliTrack& track, double tol = kWeightSumTolerance);

/// Weighted average of the particle states. Rejects tracks whose weights are
/// not normalized.
StateVector weighted_mean(const BernoulliTrack& track);

/// Sum of all existence probabilities (0 for an empty density).
double estimated_cardinality(const LMBDensity& lmb);

MultiTargetEstimate extract_estimates(const LMBDensity& lmb, const ExtractionMode& mode);

}  // namespace iaware
