#pragma once

#include <Eigen/Core>
#include <map>
#include <vector>

#include "iaware/rfs.hpp"

namespace iaware {

struct OspaParams {
    double c = 100.0;  // cut-off, scene units
    double p = 2.0;    // order
    int window = 5;    // sliding window for the track-level variant
};

struct OspaResult {
    double total = 0.0;
    double localization = 0.0;
    double cardinality = 0.0;
};

/// OSPA distance between two planar point sets. With m = |truth| <= n =
/// |estimates| (swapped otherwise):
///   total^p = (1/n) (min over assignments sum_i min(c, d_i)^p + c^p (n - m))
/// localization and cardinality are the two summands under the same power
/// mean, so every component stays in [0, c]. Both sets empty yields zeros;
/// exactly one empty yields total = cardinality = c.
OspaResult ospa(const std::vector<Eigen::Vector2d>& truth,
                const std::vector<Eigen::Vector2d>& estimates, const OspaParams& params);

/// Per-track position history, indexed by frame.
using PointSeries = std::map<int, Eigen::Vector2d>;
using TrackSet = std::map<Label, PointSeries>;

/// OSPA over tracks at a frame, using the window [at_frame - window + 1,
/// at_frame]. The base distance between two tracks is the average of the
/// per-frame truncated distance over the window frames where either track
/// exists; frames where exactly one exists contribute c. Tracks existing
/// nowhere in the window are excluded from the comparison.
OspaResult ospa2(const TrackSet& truth_tracks, const TrackSet& est_tracks, int at_frame,
                 const OspaParams& params);

/// Signed per-frame cardinality error: truth minus estimated (negative means
/// over-estimation).
int cardinality_error(int truth_count, int estimated_count);

}  // namespace iaware
