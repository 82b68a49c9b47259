#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <vector>

#include "iaware/exec.hpp"
#include "iaware/interaction.hpp"
#include "iaware/motion.hpp"
#include "iaware/rfs.hpp"
#include "iaware/rng.hpp"

namespace iaware {

struct Rect {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    [[nodiscard]] double width() const { return x_max - x_min; }
    [[nodiscard]] double height() const { return y_max - y_min; }
    [[nodiscard]] double area() const { return width() * height(); }
};

struct BirthComponent {
    double r_b = 0.2;
    StateVector mean;
    Eigen::Matrix4d cov = Eigen::Matrix4d::Identity();
};

struct BirthModel {
    std::vector<BirthComponent> components;
};

struct Measurement {
    Eigen::Vector2d z = Eigen::Vector2d::Zero();
};

/// One time step's measurement set: detections plus clutter.
struct Scan {
    int frame = 0;
    std::vector<Measurement> measurements;
};

struct FilterConfig {
    double p_s = 0.99;            // survival probability (constant)
    double p_d = 0.995;           // detection probability (constant)
    double clutter_rate = 10.0;   // expected clutter points per scan
    Rect clutter_region{0.0, 0.0, 1000.0, 1000.0};  // uniform clutter support
    double obs_noise_var = 3.0;   // per-axis measurement noise variance
    int num_particles = 200;      // particles per newborn track
    double prune_threshold = 1e-4;
    double gate_prob = 0.999;
    int interaction_warmup = 5;   // frames before interaction weighting kicks in
    InteractionConfig interaction;
    NCVParams motion = make_ncv(1.0, 7.0);
    BirthModel birth;
    ExecPolicy exec;
    // Exact association enumeration is limited to this group size; beyond it
    // the update refuses rather than approximate.
    int max_group_tracks = 8;
    int max_group_measurements = 10;
};

/// Raised when gating produces an association group larger than the exact
/// enumeration limits.
struct AssociationOverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StepDiagnostics {
    int weight_underflows = 0;    // tracks whose predicted weights degenerated
    int interacting_tracks = 0;   // tracks with a resolved interaction anchor
};

struct FilterState {
    LMBDensity posterior;
    MultiTargetEstimate estimates;  // extraction of `posterior`
    int last_frame = -1;
    int frames_processed = 0;
    StepDiagnostics diag;           // counters from the most recent step
};

/// Interaction-aware prediction: survival scaling r' = p_s * r, stochastic
/// particle propagation, and per-particle interaction reweighting (factors
/// are rescaled by their maximum before normalization, so a constant factor
/// leaves the weights bit-identical to the no-interaction path).
LMBDensity predict(const LMBDensity& prior, const MultiTargetEstimate& prev_estimates,
                   const FilterConfig& cfg, const RandomSource& rng,
                   StepDiagnostics* diag = nullptr);

/// Appends one newborn track per birth component, labeled (frame, index),
/// with particles drawn from the component's Gaussian at uniform weight.
LMBDensity append_birth(LMBDensity predicted, const FilterConfig& cfg, int frame,
                        const RandomSource& rng);

/// Measurement update: elliptical gating on the particle cloud's empirical
/// mean/covariance, connected-component grouping of tracks that share gated
/// measurements, exact association enumeration within each group, and
/// collapse back to one Bernoulli component per label.
LMBDensity update(const LMBDensity& predicted, const Scan& scan, const FilterConfig& cfg);

/// Removes tracks with r < threshold, preserving order.
LMBDensity prune(LMBDensity lmb, double threshold);

/// Systematic resampling to uniform weights; particle count, r, and label are
/// unchanged.
BernoulliTrack resample(const BernoulliTrack& track, RandomSource& rng);

/// One full recursion step: predict (with the previous posterior's
/// extraction as interaction context) -> birth -> update -> prune ->
/// resample -> extract. Rejects out-of-order frames.
FilterState step(const FilterState& state, const Scan& scan, const FilterConfig& cfg,
                 const RandomSource& rng, const ExtractionMode& extraction = {});

}  // namespace iaware
