#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "iaware/metrics.hpp"
#include "iaware/rng.hpp"

using namespace iaware;

namespace {

std::vector<Eigen::Vector2d> random_points(RandomSource& rng, std::size_t n, double scale) {
    std::vector<Eigen::Vector2d> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back({rng.uniform() * scale, rng.uniform() * scale});
    }
    return out;
}

/// OSPA by brute force over every permutation of the larger set.
OspaResult ospa_permutation_oracle(std::vector<Eigen::Vector2d> truth,
                                   std::vector<Eigen::Vector2d> est, const OspaParams& prm) {
    if (truth.size() > est.size()) std::swap(truth, est);
    const std::size_t m = truth.size();
    const std::size_t n = est.size();
    OspaResult res;
    if (n == 0) return res;
    if (m == 0) {
        res.total = res.cardinality = prm.c;
        return res;
    }
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    double best = std::numeric_limits<double>::infinity();
    do {
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            sum += std::pow(std::min(prm.c, (truth[i] - est[idx[i]]).norm()), prm.p);
        }
        best = std::min(best, sum);
    } while (std::next_permutation(idx.begin(), idx.end()));
    const double card = std::pow(prm.c, prm.p) * static_cast<double>(n - m);
    res.localization = std::pow(best / static_cast<double>(n), 1.0 / prm.p);
    res.cardinality = std::pow(card / static_cast<double>(n), 1.0 / prm.p);
    res.total = std::pow((best + card) / static_cast<double>(n), 1.0 / prm.p);
    return res;
}

}  // namespace

TEST_CASE("ospa of identical sets is zero") {
    RandomSource rng(81);
    const auto pts = random_points(rng, 5, 100.0);
    const OspaResult r = ospa(pts, pts, {});
    CHECK(r.total == doctest::Approx(0.0));
    CHECK(r.localization == doctest::Approx(0.0));
    CHECK(r.cardinality == doctest::Approx(0.0));
}

TEST_CASE("ospa with one empty set is pure cardinality error at the cut-off") {
    RandomSource rng(82);
    const auto pts = random_points(rng, 3, 50.0);
    const OspaResult r = ospa({}, pts, {});
    CHECK(r.total == doctest::Approx(100.0));
    CHECK(r.cardinality == doctest::Approx(100.0));
    CHECK(r.localization == doctest::Approx(0.0));

    const OspaResult both_empty = ospa({}, {}, {});
    CHECK(both_empty.total == 0.0);
}

TEST_CASE("ospa matches the exhaustive permutation oracle") {
    RandomSource rng(83);
    const OspaParams prm{100.0, 2.0, 5};
    for (int trial = 0; trial < 100; ++trial) {
        const auto truth = random_points(rng, 4, 100.0);
        const auto est = random_points(rng, 4, 100.0);
        const OspaResult got = ospa(truth, est, prm);
        const OspaResult expect = ospa_permutation_oracle(truth, est, prm);
        CHECK(std::abs(got.total - expect.total) < 1e-9);
        CHECK(std::abs(got.localization - expect.localization) < 1e-9);
        CHECK(std::abs(got.cardinality - expect.cardinality) < 1e-9);
    }
    // Mixed cardinalities.
    for (int trial = 0; trial < 100; ++trial) {
        const auto truth = random_points(rng, rng.below(7), 120.0);
        const auto est = random_points(rng, rng.below(7), 120.0);
        const OspaResult got = ospa(truth, est, prm);
        const OspaResult expect = ospa_permutation_oracle(truth, est, prm);
        CHECK(std::abs(got.total - expect.total) < 1e-9);
    }
}

TEST_CASE("ospa is symmetric and bounded by the cut-off") {
    RandomSource rng(84);
    const OspaParams prm{100.0, 2.0, 5};
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_points(rng, rng.below(6), 300.0);
        const auto b = random_points(rng, rng.below(6), 300.0);
        const OspaResult ab = ospa(a, b, prm);
        const OspaResult ba = ospa(b, a, prm);
        CHECK(ab.total == doctest::Approx(ba.total).epsilon(1e-12));
        CHECK(ab.total <= prm.c + 1e-12);
        CHECK(ab.localization <= prm.c + 1e-12);
        CHECK(ab.cardinality <= prm.c + 1e-12);
    }
}

TEST_CASE("ospa total is monotone in the cut-off") {
    RandomSource rng(85);
    const auto a = random_points(rng, 4, 200.0);
    const auto b = random_points(rng, 6, 200.0);
    double prev = 0.0;
    for (double c : {10.0, 50.0, 100.0, 200.0, 400.0}) {
        const double total = ospa(a, b, {c, 2.0, 5}).total;
        CHECK(total >= prev - 1e-12);
        prev = total;
    }
}

TEST_CASE("ospa separates equal from unequal sets") {
    const std::vector<Eigen::Vector2d> a{{0, 0}, {10, 10}};
    std::vector<Eigen::Vector2d> b = a;
    CHECK(ospa(a, b, {}).total == doctest::Approx(0.0));
    b[1] = {10, 11};
    CHECK(ospa(a, b, {}).total > 0.0);
}

TEST_CASE("ospa2 with window 1 collapses to per-frame ospa") {
    RandomSource rng(86);
    TrackSet truth, est;
    for (int i = 0; i < 4; ++i) {
        for (int frame = 0; frame < 6; ++frame) {
            truth[{0, i}][frame] = {rng.uniform() * 100, rng.uniform() * 100};
            est[{0, i}][frame] = {rng.uniform() * 100, rng.uniform() * 100};
        }
    }
    OspaParams prm{100.0, 2.0, 1};
    for (int frame = 0; frame < 6; ++frame) {
        std::vector<Eigen::Vector2d> tp, ep;
        for (const auto& [label, series] : truth) tp.push_back(series.at(frame));
        for (const auto& [label, series] : est) ep.push_back(series.at(frame));
        const OspaResult via_tracks = ospa2(truth, est, frame, prm);
        const OspaResult via_points = ospa(tp, ep, prm);
        CHECK(via_tracks.total == doctest::Approx(via_points.total).epsilon(1e-12));
    }
}

TEST_CASE("ospa2 of identical track sets is zero") {
    TrackSet truth;
    truth[{0, 0}] = {{0, {1, 2}}, {1, {3, 4}}, {2, {5, 6}}};
    truth[{0, 1}] = {{1, {9, 9}}, {2, {8, 8}}};
    CHECK(ospa2(truth, truth, 2, {100.0, 2.0, 3}).total == doctest::Approx(0.0));
}

TEST_CASE("ospa2 matches a hand-computed 2x2 five-frame oracle") {
    // Two truth tracks and two estimate tracks over frames 0..4; the second
    // estimate track exists only on frames 2..4.
    TrackSet truth, est;
    for (int f = 0; f < 5; ++f) {
        truth[{0, 0}][f] = {double(f), 0.0};
        truth[{0, 1}][f] = {double(f), 30.0};
        est[{5, 0}][f] = {double(f) + 1.0, 0.0};  // constant offset 1 from truth A
    }
    for (int f = 2; f < 5; ++f) est[{5, 1}][f] = {double(f), 28.0};  // offset 2 from truth B

    const OspaParams prm{100.0, 2.0, 5};
    // Base distances over window frames 0..4 (at_frame=4), averaged over
    // frames where either track exists:
    //   d(A, e0) = 1                          (coexist on all 5 frames)
    //   d(B, e1) = (2*100 + 3*2) / 5 = 41.2   (e1 missing on frames 0, 1)
    const double dA0 = 1.0;
    const double dB1 = (2.0 * 100.0 + 3.0 * 2.0) / 5.0;
    const double expected_total =
        std::sqrt((dA0 * dA0 + dB1 * dB1) / 2.0);  // assignment A->e0, B->e1

    const OspaResult got = ospa2(truth, est, 4, prm);
    CHECK(got.total == doctest::Approx(expected_total).epsilon(1e-9));
    CHECK(got.cardinality == doctest::Approx(0.0));

    // Cross-check the chosen assignment really is optimal.
    const double dA1 = (2.0 * 100.0 + 3.0 * 28.0) / 5.0;
    const double dB0 = std::min(100.0, std::hypot(1.0, 30.0));
    CHECK(dA0 * dA0 + dB1 * dB1 < dA1 * dA1 + dB0 * dB0);
}

TEST_CASE("cardinality_error is the signed truth-minus-estimate difference") {
    CHECK(cardinality_error(5, 5) == 0);
    CHECK(cardinality_error(5, 3) == 2);
    CHECK(cardinality_error(3, 5) == -2);
    CHECK_THROWS_AS(cardinality_error(-1, 0), std::invalid_argument);
}
