#pragma once

#include <vector>

#include "iaware/rfs.hpp"
#include "iaware/rng.hpp"

namespace iaware::test {

inline BernoulliTrack make_track(Label label, double r,
                                 std::vector<std::pair<StateVector, double>> particles) {
    BernoulliTrack t;
    t.label = label;
    t.r = r;
    for (const auto& [state, weight] : particles) t.particles.push_back({state, weight});
    return t;
}

/// Track with uniformly random states and normalized random weights.
inline BernoulliTrack random_track(Label label, double r, std::size_t J, RandomSource& rng,
                                   double scale = 100.0) {
    BernoulliTrack t;
    t.label = label;
    t.r = r;
    t.particles.resize(J);
    double sum = 0.0;
    for (Particle& p : t.particles) {
        p.state = {scale * (2.0 * rng.uniform() - 1.0), 10.0 * (2.0 * rng.uniform() - 1.0),
                   scale * (2.0 * rng.uniform() - 1.0), 10.0 * (2.0 * rng.uniform() - 1.0)};
        p.weight = rng.uniform() + 1e-6;
        sum += p.weight;
    }
    for (Particle& p : t.particles) p.weight /= sum;
    // Exact renormalization: push rounding drift into one particle.
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < J; ++j) acc += t.particles[j].weight;
    t.particles[J - 1].weight = 1.0 - acc;
    return t;
}

inline LMBDensity random_lmb(std::size_t n_tracks, std::size_t J, RandomSource& rng) {
    LMBDensity lmb;
    for (std::size_t i = 0; i < n_tracks; ++i) {
        lmb.tracks.push_back(random_track({0, static_cast<int>(i)}, rng.uniform(), J, rng));
    }
    return lmb;
}

}  // namespace iaware::test
