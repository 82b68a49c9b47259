#include "iaware/rfs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace iaware {

std::string to_string(const Label& label) {
    return std::to_string(label.birth_time) + ":" + std::to_string(label.birth_index);
}

bool weights_normalized(const BernoulliTrack& track, double tol) {
    double sum = 0.0;
    for (const Particle& p : track.particles) {
        if (!(p.weight >= 0.0) || !std::isfinite(p.weight)) return false;
        sum += p.weight;
    }
    return std::abs(sum - 1.0) <= tol;
}

StateVector weighted_mean(const BernoulliTrack& track) {
    if (track.particles.empty() || !weights_normalized(track)) {
        throw std::invalid_argument("weighted_mean: track " + to_string(track.label) +
                                    " has a non-normalized particle cloud");
    }
    Eigen::Vector4d acc = Eigen::Vector4d::Zero();
    for (const Particle& p : track.particles) {
        acc += p.weight * p.state.vec();
    }
    return StateVector::from(acc);
}

double estimated_cardinality(const LMBDensity& lmb) {
    double sum = 0.0;
    for (const BernoulliTrack& t : lmb.tracks) sum += t.r;
    return sum;
}

MultiTargetEstimate extract_estimates(const LMBDensity& lmb, const ExtractionMode& mode) {
    std::vector<std::size_t> selected;
    if (mode.kind == ExtractionMode::Kind::threshold) {
        for (std::size_t i = 0; i < lmb.tracks.size(); ++i) {
            if (lmb.tracks[i].r > mode.threshold) selected.push_back(i);
        }
    } else {
        // MAP cardinality: round-half-up of the existence sum, then the n
        // largest r, ties broken toward the smaller label.
        const auto n = static_cast<std::size_t>(
            std::max(0.0, std::floor(estimated_cardinality(lmb) + 0.5)));
        std::vector<std::size_t> order(lmb.tracks.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (lmb.tracks[a].r != lmb.tracks[b].r) return lmb.tracks[a].r > lmb.tracks[b].r;
            return lmb.tracks[a].label < lmb.tracks[b].label;
        });
        order.resize(std::min(n, order.size()));
        selected = std::move(order);
        std::sort(selected.begin(), selected.end());
    }

    MultiTargetEstimate out;
    out.items.reserve(selected.size());
    for (std::size_t i : selected) {
        out.items.push_back({lmb.tracks[i].label, weighted_mean(lmb.tracks[i])});
    }
    return out;
}

}  // namespace iaware
