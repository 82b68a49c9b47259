#include "iaware/filter.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

namespace iaware {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kUnderflowFloor = 1e-300;

void require_normalized(const LMBDensity& lmb, const char* who) {
    for (const BernoulliTrack& t : lmb.tracks) {
        if (t.particles.empty() || !weights_normalized(t)) {
            throw std::invalid_argument(std::string(who) + ": track " + to_string(t.label) +
                                        " violates the particle-weight invariant");
        }
        if (!(t.r >= 0.0 && t.r <= 1.0)) {
            throw std::invalid_argument(std::string(who) + ": track " + to_string(t.label) +
                                        " has existence probability outside [0,1]");
        }
    }
}

}  // namespace

LMBDensity predict(const LMBDensity& prior, const MultiTargetEstimate& prev_estimates,
                   const FilterConfig& cfg, const RandomSource& rng, StepDiagnostics* diag) {
    require_normalized(prior, "predict");
    if (!(cfg.p_s > 0.0 && cfg.p_s <= 1.0)) {
        throw std::invalid_argument("predict: p_s must be in (0,1]");
    }

    const auto n = static_cast<std::int64_t>(prior.tracks.size());
    LMBDensity out;
    out.tracks.resize(prior.tracks.size());
    std::vector<std::uint8_t> underflowed(prior.tracks.size(), 0);
    std::vector<std::uint8_t> interacting(prior.tracks.size(), 0);

    for_index(n, cfg.exec, [&](std::int64_t i) {
        const BernoulliTrack& track = prior.tracks[static_cast<std::size_t>(i)];
        RandomSource track_rng = rng.child(stream::predict,
                                           static_cast<std::uint64_t>(track.label.birth_time),
                                           static_cast<std::uint64_t>(track.label.birth_index));

        const StateVector prev_mean = weighted_mean(track);
        const InteractionContext ctx(prev_estimates, track.label);
        const auto anchor =
            interaction_anchor(cfg.interaction, track.label, ctx, cfg.motion, prev_mean);

        BernoulliTrack next;
        next.label = track.label;
        next.r = cfg.p_s * track.r;
        next.particles.resize(track.particles.size());

        const std::size_t J = track.particles.size();
        for (std::size_t j = 0; j < J; ++j) {
            next.particles[j].state =
                sample_transition(track.particles[j].state, cfg.motion, track_rng);
        }

        std::vector<double> factor(J, 1.0);
        if (anchor) {
            for (std::size_t j = 0; j < J; ++j) {
                factor[j] = swarm_weight_factor(next.particles[j].state, anchor->prior_distance,
                                                anchor->predicted_state, cfg.interaction.sigma_d);
            }
        }

        // Rescale by the largest factor so a constant factor cancels exactly
        // and small sigma_d cannot underflow every weight at once.
        double fmax = 0.0;
        for (double f : factor) fmax = std::max(fmax, f);

        bool degenerate = !(fmax > 0.0) || !std::isfinite(fmax);
        double wsum = 0.0;
        if (!degenerate) {
            for (std::size_t j = 0; j < J; ++j) {
                next.particles[j].weight = track.particles[j].weight * (factor[j] / fmax);
                wsum += next.particles[j].weight;
            }
            degenerate = !(wsum >= kUnderflowFloor) || !std::isfinite(wsum);
        }

        if (degenerate) {
            for (std::size_t j = 0; j < J; ++j) {
                next.particles[j].weight = track.particles[j].weight;
            }
            underflowed[static_cast<std::size_t>(i)] = 1;
        } else {
            for (Particle& p : next.particles) p.weight /= wsum;
        }

        interacting[static_cast<std::size_t>(i)] = anchor ? 1 : 0;
        out.tracks[static_cast<std::size_t>(i)] = std::move(next);
    });

    if (diag) {
        for (std::size_t i = 0; i < prior.tracks.size(); ++i) {
            diag->weight_underflows += underflowed[i];
            diag->interacting_tracks += interacting[i];
        }
    }
    return out;
}

LMBDensity append_birth(LMBDensity predicted, const FilterConfig& cfg, int frame,
                        const RandomSource& rng) {
    if (cfg.num_particles < 1) {
        throw std::invalid_argument("append_birth: num_particles must be positive");
    }
    for (std::size_t c = 0; c < cfg.birth.components.size(); ++c) {
        const BirthComponent& comp = cfg.birth.components[c];
        const Label label{frame, static_cast<int>(c)};
        for (const BernoulliTrack& t : predicted.tracks) {
            if (t.label == label) {
                throw std::invalid_argument("append_birth: label collision on " + to_string(label));
            }
        }
        if (!(comp.r_b > 0.0 && comp.r_b < 1.0)) {
            throw std::invalid_argument("append_birth: birth r must lie in (0,1)");
        }
        Eigen::LLT<Eigen::Matrix4d> llt(comp.cov);
        if (llt.info() != Eigen::Success) {
            throw std::invalid_argument("append_birth: birth covariance is not SPD");
        }
        const Eigen::Matrix4d L = llt.matrixL();

        RandomSource comp_rng = rng.child(stream::birth, c);
        BernoulliTrack track;
        track.label = label;
        track.r = comp.r_b;
        track.particles.resize(static_cast<std::size_t>(cfg.num_particles));
        const double w = 1.0 / cfg.num_particles;
        for (Particle& p : track.particles) {
            Eigen::Vector4d z;
            for (int k = 0; k < 4; ++k) z(k) = comp_rng.normal();
            p.state = StateVector::from(comp.mean.vec() + L * z);
            p.weight = w;
        }
        predicted.tracks.push_back(std::move(track));
    }
    return predicted;
}

namespace {

// ---- Measurement update internals ----

struct Group {
    std::vector<int> tracks;        // indices into predicted.tracks
    std::vector<int> measurements;  // indices into scan.measurements
};

int find_root(std::vector<int>& parent, int i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

/// Exact association enumeration over one group. Each track chooses absent,
/// missed, or one unused measurement; leaf weights are marginalized into
/// per-track, per-choice sums.
class GroupAssociation {
public:
    GroupAssociation(const LMBDensity& predicted, const Scan& scan, const FilterConfig& cfg,
                     const Group& grp, const std::vector<std::vector<int>>& gated)
        : n_(grp.tracks.size()), m_(grp.measurements.size()) {
        const double area = cfg.clutter_region.area();
        kappa_ = cfg.clutter_rate > 0.0 ? cfg.clutter_rate / area : 0.0;
        const double det_scale = kappa_ > 0.0 ? kappa_ : 1.0;
        const double var = cfg.obs_noise_var;
        const double norm = 1.0 / (2.0 * kPi * var);

        opt_absent_.resize(n_);
        opt_miss_.resize(n_);
        opt_det_.assign(n_, std::vector<double>(m_, 0.0));
        particle_det_.assign(n_, {});
        ghat_.assign(n_, std::vector<double>(m_, 0.0));

        for (std::size_t t = 0; t < n_; ++t) {
            const BernoulliTrack& track = predicted.tracks[static_cast<std::size_t>(grp.tracks[t])];
            opt_absent_[t] = 1.0 - track.r;
            opt_miss_[t] = track.r * (1.0 - cfg.p_d);
            particle_det_[t].assign(m_, std::vector<double>(track.particles.size(), 0.0));
            for (std::size_t im = 0; im < m_; ++im) {
                const int meas_idx = grp.measurements[im];
                const auto& g = gated[static_cast<std::size_t>(grp.tracks[t])];
                if (std::find(g.begin(), g.end(), meas_idx) == g.end()) continue;
                const Eigen::Vector2d z = scan.measurements[static_cast<std::size_t>(meas_idx)].z;
                double sum = 0.0;
                for (std::size_t j = 0; j < track.particles.size(); ++j) {
                    const Particle& p = track.particles[j];
                    const double dx = z(0) - p.state.px;
                    const double dy = z(1) - p.state.py;
                    const double lik = norm * std::exp(-0.5 * (dx * dx + dy * dy) / var);
                    particle_det_[t][im][j] = p.weight * lik;
                    sum += p.weight * lik;
                }
                ghat_[t][im] = sum;
                opt_det_[t][im] = track.r * cfg.p_d * sum / det_scale;
            }
        }

        marg_absent_.assign(n_, 0.0);
        marg_miss_.assign(n_, 0.0);
        marg_det_.assign(n_, std::vector<double>(m_, 0.0));
        choice_.assign(n_, kAbsent);
        full_mask_ = m_ == 0 ? 0u : ((1u << m_) - 1u);
        recurse(0, 0u, 1.0);
    }

    /// Writes the collapsed posterior for all group members.
    void collapse(const LMBDensity& predicted, const FilterConfig& cfg, const Group& grp,
                  LMBDensity& posterior) const {
        for (std::size_t t = 0; t < n_; ++t) {
            const auto idx = static_cast<std::size_t>(grp.tracks[t]);
            const BernoulliTrack& prior = predicted.tracks[idx];
            BernoulliTrack post;
            post.label = prior.label;
            post.particles = prior.particles;

            if (!(total_ > 0.0) || !std::isfinite(total_)) {
                // No joint hypothesis had positive probability (possible only
                // with zero clutter and an uncoverable measurement); fall back
                // to the missed-detection update.
                post.r = prior.r * (1.0 - cfg.p_d) / (1.0 - prior.r * cfg.p_d);
                posterior.tracks[idx] = std::move(post);
                continue;
            }

            const double exists = marg_miss_[t] + std::accumulate(marg_det_[t].begin(),
                                                                  marg_det_[t].end(), 0.0);
            post.r = exists / total_;

            std::vector<double> w(prior.particles.size(), 0.0);
            for (std::size_t j = 0; j < w.size(); ++j) {
                // Missed detection keeps the predicted weights (constant p_d).
                w[j] = marg_miss_[t] * prior.particles[j].weight;
            }
            for (std::size_t im = 0; im < m_; ++im) {
                if (marg_det_[t][im] <= 0.0 || !(ghat_[t][im] > 0.0)) continue;
                const double scale = marg_det_[t][im] / ghat_[t][im];
                for (std::size_t j = 0; j < w.size(); ++j) {
                    w[j] += scale * particle_det_[t][im][j];
                }
            }
            const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
            if (wsum > 0.0 && std::isfinite(wsum)) {
                for (std::size_t j = 0; j < w.size(); ++j) post.particles[j].weight = w[j] / wsum;
            }
            posterior.tracks[idx] = std::move(post);
        }
    }

private:
    static constexpr int kAbsent = -2;
    static constexpr int kMiss = -1;

    void recurse(std::size_t t, std::uint32_t used, double weight) {
        if (weight <= 0.0) return;
        if (t == n_) {
            if (kappa_ <= 0.0 && used != full_mask_) return;
            total_ += weight;
            for (std::size_t i = 0; i < n_; ++i) {
                if (choice_[i] == kAbsent) {
                    marg_absent_[i] += weight;
                } else if (choice_[i] == kMiss) {
                    marg_miss_[i] += weight;
                } else {
                    marg_det_[i][static_cast<std::size_t>(choice_[i])] += weight;
                }
            }
            return;
        }
        choice_[t] = kAbsent;
        recurse(t + 1, used, weight * opt_absent_[t]);
        choice_[t] = kMiss;
        recurse(t + 1, used, weight * opt_miss_[t]);
        for (std::size_t im = 0; im < m_; ++im) {
            if (used & (1u << im)) continue;
            if (opt_det_[t][im] <= 0.0) continue;
            choice_[t] = static_cast<int>(im);
            recurse(t + 1, used | (1u << im), weight * opt_det_[t][im]);
        }
        choice_[t] = kAbsent;
    }

    std::size_t n_;
    std::size_t m_;
    double kappa_ = 0.0;
    std::vector<double> opt_absent_, opt_miss_;
    std::vector<std::vector<double>> opt_det_;
    std::vector<std::vector<std::vector<double>>> particle_det_;  // [track][meas][particle]
    std::vector<std::vector<double>> ghat_;
    double total_ = 0.0;
    std::vector<double> marg_absent_, marg_miss_;
    std::vector<std::vector<double>> marg_det_;
    std::vector<int> choice_;
    std::uint32_t full_mask_ = 0;
};

}  // namespace

LMBDensity update(const LMBDensity& predicted, const Scan& scan, const FilterConfig& cfg) {
    require_normalized(predicted, "update");
    if (!(cfg.p_d > 0.0 && cfg.p_d <= 1.0)) {
        throw std::invalid_argument("update: p_d must be in (0,1]");
    }
    if (!(cfg.obs_noise_var > 0.0)) {
        throw std::invalid_argument("update: obs_noise_var must be positive");
    }
    if (cfg.clutter_rate < 0.0) {
        throw std::invalid_argument("update: clutter_rate must be nonnegative");
    }
    if (cfg.clutter_rate > 0.0 && !(cfg.clutter_region.area() > 0.0)) {
        throw std::invalid_argument("update: clutter_region must have positive area");
    }

    const auto n = static_cast<std::int64_t>(predicted.tracks.size());
    const std::size_t m = scan.measurements.size();

    // Gate measurements per track against the cloud's empirical position
    // moments (chi-square quantile with 2 dof has a closed form).
    const double gate = -2.0 * std::log(1.0 - cfg.gate_prob);
    std::vector<std::vector<int>> gated(predicted.tracks.size());
    for_index(n, cfg.exec, [&](std::int64_t i) {
        const BernoulliTrack& track = predicted.tracks[static_cast<std::size_t>(i)];
        Eigen::Vector2d mu = Eigen::Vector2d::Zero();
        for (const Particle& p : track.particles) mu += p.weight * p.state.position();
        Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
        for (const Particle& p : track.particles) {
            const Eigen::Vector2d d = p.state.position() - mu;
            cov += p.weight * (d * d.transpose());
        }
        Eigen::Matrix2d S = cov + cfg.obs_noise_var * Eigen::Matrix2d::Identity();
        const double det = S(0, 0) * S(1, 1) - S(0, 1) * S(1, 0);
        Eigen::Matrix2d Sinv;
        Sinv << S(1, 1), -S(0, 1), -S(1, 0), S(0, 0);
        Sinv /= det;
        for (std::size_t j = 0; j < m; ++j) {
            const Eigen::Vector2d d = scan.measurements[j].z - mu;
            if (d.dot(Sinv * d) <= gate) {
                gated[static_cast<std::size_t>(i)].push_back(static_cast<int>(j));
            }
        }
    });

    // Union tracks that share a gated measurement.
    std::vector<int> parent(predicted.tracks.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<int> meas_owner(m, -1);
    for (std::size_t i = 0; i < predicted.tracks.size(); ++i) {
        for (int j : gated[i]) {
            const int ri = find_root(parent, static_cast<int>(i));
            if (meas_owner[static_cast<std::size_t>(j)] < 0) {
                meas_owner[static_cast<std::size_t>(j)] = ri;
            } else {
                const int ro = find_root(parent, meas_owner[static_cast<std::size_t>(j)]);
                parent[std::max(ri, ro)] = std::min(ri, ro);
            }
        }
    }

    std::vector<Group> groups;
    std::vector<int> group_of(predicted.tracks.size(), -1);
    for (std::size_t i = 0; i < predicted.tracks.size(); ++i) {
        const int root = find_root(parent, static_cast<int>(i));
        if (group_of[static_cast<std::size_t>(root)] < 0) {
            group_of[static_cast<std::size_t>(root)] = static_cast<int>(groups.size());
            groups.emplace_back();
        }
        Group& grp = groups[static_cast<std::size_t>(group_of[static_cast<std::size_t>(root)])];
        grp.tracks.push_back(static_cast<int>(i));
        for (int j : gated[i]) {
            if (std::find(grp.measurements.begin(), grp.measurements.end(), j) ==
                grp.measurements.end()) {
                grp.measurements.push_back(j);
            }
        }
    }
    for (Group& grp : groups) std::sort(grp.measurements.begin(), grp.measurements.end());

    for (const Group& grp : groups) {
        if (static_cast<int>(grp.tracks.size()) > cfg.max_group_tracks ||
            static_cast<int>(grp.measurements.size()) > cfg.max_group_measurements) {
            throw AssociationOverflowError(
                "update: association group with " + std::to_string(grp.tracks.size()) +
                " tracks and " + std::to_string(grp.measurements.size()) +
                " measurements exceeds the exact enumeration limits (" +
                std::to_string(cfg.max_group_tracks) + " tracks, " +
                std::to_string(cfg.max_group_measurements) + " measurements)");
        }
    }

    LMBDensity posterior;
    posterior.tracks.resize(predicted.tracks.size());
    for_index(static_cast<std::int64_t>(groups.size()), cfg.exec, [&](std::int64_t g) {
        const Group& grp = groups[static_cast<std::size_t>(g)];
        GroupAssociation assoc(predicted, scan, cfg, grp, gated);
        assoc.collapse(predicted, cfg, grp, posterior);
    });
    return posterior;
}

LMBDensity prune(LMBDensity lmb, double threshold) {
    if (!(threshold >= 0.0 && threshold < 1.0)) {
        throw std::invalid_argument("prune: threshold must lie in [0,1)");
    }
    std::erase_if(lmb.tracks, [&](const BernoulliTrack& t) { return t.r < threshold; });
    return lmb;
}

BernoulliTrack resample(const BernoulliTrack& track, RandomSource& rng) {
    if (track.particles.empty() || !weights_normalized(track)) {
        throw std::invalid_argument("resample: track " + to_string(track.label) +
                                    " violates the particle-weight invariant");
    }
    const std::size_t J = track.particles.size();
    BernoulliTrack out;
    out.label = track.label;
    out.r = track.r;
    out.particles.resize(J);

    const double step = 1.0 / static_cast<double>(J);
    const double start = rng.uniform() * step;
    std::size_t j = 0;
    double cum = track.particles[0].weight;
    for (std::size_t i = 0; i < J; ++i) {
        const double pos = start + static_cast<double>(i) * step;
        while (pos > cum && j + 1 < J) {
            ++j;
            cum += track.particles[j].weight;
        }
        out.particles[i].state = track.particles[j].state;
        out.particles[i].weight = step;
    }
    return out;
}

FilterState step(const FilterState& state, const Scan& scan, const FilterConfig& cfg,
                 const RandomSource& rng, const ExtractionMode& extraction) {
    if (scan.frame <= state.last_frame) {
        throw std::invalid_argument("step: frame " + std::to_string(scan.frame) +
                                    " is not after frame " + std::to_string(state.last_frame));
    }
    const RandomSource frame_rng = rng.child(stream::frame, static_cast<std::uint64_t>(scan.frame));

    FilterConfig effective = cfg;
    if (state.frames_processed < cfg.interaction_warmup) {
        effective.interaction.model = InteractionModel::none;
    }

    StepDiagnostics diag;
    LMBDensity predicted = predict(state.posterior, state.estimates, effective, frame_rng, &diag);
    predicted = append_birth(std::move(predicted), cfg, scan.frame, frame_rng);
    LMBDensity posterior = prune(update(predicted, scan, cfg), cfg.prune_threshold);

    for_index(static_cast<std::int64_t>(posterior.tracks.size()), cfg.exec, [&](std::int64_t i) {
        BernoulliTrack& track = posterior.tracks[static_cast<std::size_t>(i)];
        RandomSource track_rng = frame_rng.child(stream::resample,
                                                 static_cast<std::uint64_t>(track.label.birth_time),
                                                 static_cast<std::uint64_t>(track.label.birth_index));
        track = resample(track, track_rng);
    });

    FilterState next;
    next.posterior = std::move(posterior);
    next.estimates = extract_estimates(next.posterior, extraction);
    next.last_frame = scan.frame;
    next.frames_processed = state.frames_processed + 1;
    next.diag = diag;
    return next;
}

}  // namespace iaware
