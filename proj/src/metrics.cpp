#include "iaware/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "iaware/assignment.hpp"

namespace iaware {

namespace {

void check_params(const OspaParams& params) {
    if (!(params.c > 0.0) || !(params.p >= 1.0) || params.window < 1) {
        throw std::invalid_argument("ospa: requires c > 0, p >= 1, window >= 1");
    }
}

/// Shared OSPA machinery over a precomputed small-to-large distance matrix.
/// dist(i, j) is the base distance between small-set element i and large-set
/// element j, already truncated to [0, c].
OspaResult ospa_from_distances(const Eigen::MatrixXd& dist, std::size_t n_large,
                               const OspaParams& params) {
    const auto m = static_cast<std::size_t>(dist.rows());
    OspaResult res;
    if (m == 0 && n_large == 0) return res;
    if (m == 0) {
        res.total = params.c;
        res.cardinality = params.c;
        return res;
    }

    Eigen::MatrixXd cost(dist.rows(), dist.cols());
    for (Eigen::Index i = 0; i < dist.rows(); ++i) {
        for (Eigen::Index j = 0; j < dist.cols(); ++j) {
            cost(i, j) = std::pow(dist(i, j), params.p);
        }
    }

    const std::vector<int> match = solve_assignment(cost);
    double loc_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        loc_sum += cost(static_cast<Eigen::Index>(i), match[i]);
    }
    const double card_sum =
        std::pow(params.c, params.p) * static_cast<double>(n_large - m);

    const double inv_n = 1.0 / static_cast<double>(n_large);
    res.localization = std::pow(inv_n * loc_sum, 1.0 / params.p);
    res.cardinality = std::pow(inv_n * card_sum, 1.0 / params.p);
    res.total = std::pow(inv_n * (loc_sum + card_sum), 1.0 / params.p);
    return res;
}

}  // namespace

OspaResult ospa(const std::vector<Eigen::Vector2d>& truth,
                const std::vector<Eigen::Vector2d>& estimates, const OspaParams& params) {
    check_params(params);
    const auto* small = &truth;
    const auto* large = &estimates;
    if (small->size() > large->size()) std::swap(small, large);

    Eigen::MatrixXd dist(small->size(), large->size());
    for (std::size_t i = 0; i < small->size(); ++i) {
        for (std::size_t j = 0; j < large->size(); ++j) {
            dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::min(params.c, ((*small)[i] - (*large)[j]).norm());
        }
    }
    return ospa_from_distances(dist, large->size(), params);
}

namespace {

bool exists_in_window(const PointSeries& series, int first, int last) {
    auto it = series.lower_bound(first);
    return it != series.end() && it->first <= last;
}

/// Track-level base distance over [first, last], per the convention above.
double track_base_distance(const PointSeries& a, const PointSeries& b, int first, int last,
                           double c) {
    double sum = 0.0;
    int frames = 0;
    for (int t = first; t <= last; ++t) {
        const auto ia = a.find(t);
        const auto ib = b.find(t);
        if (ia == a.end() && ib == b.end()) continue;
        ++frames;
        if (ia == a.end() || ib == b.end()) {
            sum += c;
        } else {
            sum += std::min(c, (ia->second - ib->second).norm());
        }
    }
    return frames == 0 ? 0.0 : sum / frames;
}

}  // namespace

OspaResult ospa2(const TrackSet& truth_tracks, const TrackSet& est_tracks, int at_frame,
                 const OspaParams& params) {
    check_params(params);
    const int first = at_frame - params.window + 1;
    const int last = at_frame;

    std::vector<const PointSeries*> truth_active;
    for (const auto& [label, series] : truth_tracks) {
        if (exists_in_window(series, first, last)) truth_active.push_back(&series);
    }
    std::vector<const PointSeries*> est_active;
    for (const auto& [label, series] : est_tracks) {
        if (exists_in_window(series, first, last)) est_active.push_back(&series);
    }

    const auto* small = &truth_active;
    const auto* large = &est_active;
    if (small->size() > large->size()) std::swap(small, large);

    Eigen::MatrixXd dist(small->size(), large->size());
    for (std::size_t i = 0; i < small->size(); ++i) {
        for (std::size_t j = 0; j < large->size(); ++j) {
            dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                track_base_distance(*(*small)[i], *(*large)[j], first, last, params.c);
        }
    }
    return ospa_from_distances(dist, large->size(), params);
}

int cardinality_error(int truth_count, int estimated_count) {
    if (truth_count < 0 || estimated_count < 0) {
        throw std::invalid_argument("cardinality_error: counts must be nonnegative");
    }
    return truth_count - estimated_count;
}

}  // namespace iaware
