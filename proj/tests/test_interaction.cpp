#include <doctest.h>

#include <cmath>
#include <optional>

#include "helpers.hpp"
#include "iaware/interaction.hpp"

using namespace iaware;

namespace {

MultiTargetEstimate estimates_of(std::vector<std::pair<Label, StateVector>> items) {
    MultiTargetEstimate out;
    for (auto& [label, state] : items) out.items.push_back({label, state});
    return out;
}

/// Straight predicate evaluation over every context member, independent of
/// the pipeline implementation.
std::optional<Label> brute_force_front(const StateVector& subject,
                                       const InteractionContext& ctx,
                                       const InteractionConfig& cfg) {
    const Eigen::Vector2d vel = subject.velocity();
    if (vel.norm() < cfg.min_speed) return std::nullopt;
    std::optional<Label> best;
    double best_dist = 0.0;
    for (const auto& item : ctx.items()) {
        const double d = euclidean_distance(subject, item.state);
        if (d > cfg.d_th) continue;
        const Eigen::Vector2d cvel = item.state.velocity();
        if (cvel.norm() == 0.0) continue;
        if (velocity_angle(vel, cvel) > cfg.alpha_th) continue;
        if (cfg.front_check) {
            const Eigen::Vector2d rel = item.state.position() - subject.position();
            if (rel.norm() == 0.0) continue;
            if (velocity_angle(vel, rel) > cfg.beta_th) continue;
        }
        if (!best || d < best_dist || (d == best_dist && item.label < *best)) {
            best = item.label;
            best_dist = d;
        }
    }
    return best;
}

}  // namespace

TEST_CASE("euclidean_distance uses positions only") {
    CHECK(euclidean_distance({1, 5, 2, -7}, {1, 0, 2, 9}) == 0.0);
    CHECK(euclidean_distance({0, 1, 0, 2}, {3, -1, 4, 5}) == doctest::Approx(5.0));

    RandomSource rng(3);
    for (int i = 0; i < 100; ++i) {
        const StateVector a{rng.normal() * 100, 0, rng.normal() * 100, 0};
        const StateVector b{rng.normal() * 100, 0, rng.normal() * 100, 0};
        const double oracle =
            std::sqrt((a.px - b.px) * (a.px - b.px) + (a.py - b.py) * (a.py - b.py));
        CHECK(std::abs(euclidean_distance(a, b) - oracle) < 1e-12);
    }
}

TEST_CASE("interaction context enforces the leave-one-out view") {
    const auto est = estimates_of({{{0, 0}, {1, 0, 0, 0}}, {{0, 1}, {2, 0, 0, 0}}});
    const InteractionContext ctx(est, {0, 0});
    CHECK(ctx.items().size() == 1);
    CHECK(ctx.items()[0].label == Label{0, 1});
    CHECK(!ctx.state_of({0, 0}).has_value());

    // Excluded label absent from the estimate: context is the estimate itself.
    const InteractionContext ctx2(est, {9, 9});
    CHECK(ctx2.items().size() == 2);
}

TEST_CASE("nearest_neighbor picks the closest context member") {
    const InteractionContext empty(MultiTargetEstimate{}, {0, 0});
    CHECK(!nearest_neighbor({0, 0, 0, 0}, empty).has_value());

    const auto est = estimates_of({{{0, 1}, {10, 0, 0, 0}}, {{0, 2}, {20, 0, 0, 0}}});
    const InteractionContext ctx(est, {0, 0});
    const auto nn = nearest_neighbor({0, 0, 0, 0}, ctx);
    REQUIRE(nn.has_value());
    CHECK(nn->first == Label{0, 1});
    CHECK(nn->second == doctest::Approx(10.0));
}

TEST_CASE("nearest_neighbor matches an exhaustive scan") {
    RandomSource rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        MultiTargetEstimate est;
        for (int i = 0; i < 30; ++i) {
            est.items.push_back({{0, i},
                                 {rng.normal() * 50, rng.normal(), rng.normal() * 50,
                                  rng.normal()}});
        }
        const InteractionContext ctx(est, {9, 9});
        const StateVector query{rng.normal() * 50, 0, rng.normal() * 50, 0};
        const auto nn = nearest_neighbor(query, ctx);
        REQUIRE(nn.has_value());

        double best = 1e300;
        Label best_label{};
        for (const auto& item : est.items) {
            const double d = euclidean_distance(query, item.state);
            if (d < best) {
                best = d;
                best_label = item.label;
            }
        }
        CHECK(nn->first == best_label);
        CHECK(nn->second == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("swarm_weight_factor is the Gaussian density of the distance error") {
    const double sigma = 2.5;
    const StateVector neighbor{0, 0, 0, 0};

    // Particle exactly at the preserved distance: density peak.
    const StateVector particle{7, 0, 0, 0};
    CHECK(swarm_weight_factor(particle, 7.0, neighbor, sigma) ==
          doctest::Approx(1.0 / (std::sqrt(2.0 * M_PI) * sigma)).epsilon(1e-12));

    // Smaller |e| always wins.
    const double f1 = swarm_weight_factor({8, 0, 0, 0}, 7.0, neighbor, sigma);
    const double f2 = swarm_weight_factor({10, 0, 0, 0}, 7.0, neighbor, sigma);
    CHECK(f1 > f2);

    // e = sigma evaluates to exp(-1/2) of the peak.
    const double at_sigma = swarm_weight_factor({7.0 + sigma, 0, 0, 0}, 7.0, neighbor, sigma);
    CHECK(std::abs(at_sigma -
                   std::exp(-0.5) / (std::sqrt(2.0 * M_PI) * sigma)) < 1e-12);

    CHECK_THROWS_AS(swarm_weight_factor(particle, 1.0, neighbor, 0.0), std::invalid_argument);
}

TEST_CASE("velocity_angle covers the axis cases and is symmetric") {
    CHECK(velocity_angle({1, 0}, {1, 0}) == doctest::Approx(0.0));
    CHECK(velocity_angle({1, 0}, {0, 1}) == doctest::Approx(90.0));
    CHECK(velocity_angle({1, 0}, {-1, 0}) == doctest::Approx(180.0));
    CHECK_THROWS_AS(velocity_angle({0, 0}, {1, 0}), std::invalid_argument);

    RandomSource rng(41);
    for (int i = 0; i < 50; ++i) {
        const Eigen::Vector2d u{rng.normal(), rng.normal()};
        const Eigen::Vector2d v{rng.normal(), rng.normal()};
        if (u.norm() == 0.0 || v.norm() == 0.0) continue;
        CHECK(velocity_angle(u, v) == doctest::Approx(velocity_angle(v, u)).epsilon(1e-12));
        const double c = 0.1 + rng.uniform();
        // arccos amplifies rounding near ratio +-1; a few micro-degrees is fine.
        CHECK(velocity_angle(u, c * u) < 1e-5);
        CHECK(std::abs(velocity_angle(u, -c * u) - 180.0) < 1e-5);
    }
}

TEST_CASE("near_set keeps members within the threshold, inclusively") {
    const InteractionContext empty(MultiTargetEstimate{}, {0, 0});
    CHECK(near_set({0, 0}, {0, 0, 0, 0}, empty, 10.0).empty());

    // A member at exactly d_th is near.
    const auto est = estimates_of({{{0, 1}, {50, 0, 0, 0}}});
    const InteractionContext ctx(est, {0, 0});
    const auto near = near_set({0, 0}, {0, 0, 0, 0}, ctx, 50.0);
    REQUIRE(near.size() == 1);
    CHECK(near[0] == Label{0, 1});

    RandomSource rng(43);
    for (int trial = 0; trial < 5; ++trial) {
        MultiTargetEstimate scene;
        for (int i = 0; i < 50; ++i) {
            scene.items.push_back({{0, i},
                                   {rng.normal() * 60, 0, rng.normal() * 60, 0}});
        }
        const InteractionContext c(scene, {9, 9});
        const StateVector subject{rng.normal() * 30, 0, rng.normal() * 30, 0};
        const auto got = near_set({9, 9}, subject, c, 40.0);
        std::vector<Label> expect;
        for (const auto& item : scene.items) {
            if (euclidean_distance(subject, item.state) <= 40.0) expect.push_back(item.label);
        }
        CHECK(got == expect);
    }
}

TEST_CASE("same-direction filter drops oncoming and undirected candidates") {
    const auto est = estimates_of({{{0, 1}, {10, -10, 0, 0}},    // oncoming
                                   {{0, 2}, {20, 10, 0, 0}},     // parallel
                                   {{0, 3}, {30, 0, 0, 0}}});    // stationary
    const InteractionContext ctx(est, {0, 0});
    const std::vector<Label> cands{{0, 1}, {0, 2}, {0, 3}};

    const auto kept = filter_same_direction({10, 0}, cands, ctx, 15.0);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0] == Label{0, 2});

    CHECK(filter_same_direction({0, 0}, cands, ctx, 15.0).empty());
}

TEST_CASE("same-direction filter matches brute-force predicate evaluation") {
    RandomSource rng(47);
    for (int trial = 0; trial < 10; ++trial) {
        MultiTargetEstimate scene;
        std::vector<Label> cands;
        for (int i = 0; i < 10; ++i) {
            scene.items.push_back({{0, i},
                                   {rng.normal() * 20, rng.normal() * 5, rng.normal() * 20,
                                    rng.normal() * 5}});
            cands.push_back({0, i});
        }
        const InteractionContext ctx(scene, {9, 9});
        const Eigen::Vector2d vel{rng.normal() * 5, rng.normal() * 5};
        if (vel.norm() == 0.0) continue;
        const auto got = filter_same_direction(vel, cands, ctx, 30.0);
        std::vector<Label> expect;
        for (const auto& item : scene.items) {
            const Eigen::Vector2d v = item.state.velocity();
            if (v.norm() == 0.0) continue;
            if (velocity_angle(vel, v) <= 30.0) expect.push_back(item.label);
        }
        CHECK(got == expect);
    }
}

TEST_CASE("in-front filter keeps ahead, drops behind and lateral") {
    // Subject heading +x from the origin.
    const auto est = estimates_of({{{0, 1}, {-20, 10, 0, 0}},   // directly behind, angle 180
                                   {{0, 2}, {25, 10, 0, 0}},    // directly ahead, angle 0
                                   {{0, 3}, {0, 10, 15, 0}}});  // lateral, angle 90
    const InteractionContext ctx(est, {0, 0});
    const std::vector<Label> cands{{0, 1}, {0, 2}, {0, 3}};
    const StateVector subject{0, 10, 0, 0};

    const auto kept = filter_in_front(subject, cands, ctx, 60.0);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0] == Label{0, 2});

    CHECK(filter_in_front({0, 0, 0, 0}, cands, ctx, 60.0).empty());
}

TEST_CASE("front_vehicle resolves the figure-style three-candidate scene") {
    // Subject heading +x; A same-lane ahead at 30; B oncoming at 20; C behind at 10.
    const auto est = estimates_of({{{0, 1}, {30, 10, 0, 0}},
                                   {{0, 2}, {20, -10, 3, 0}},
                                   {{0, 3}, {-10, 10, 0, 0}}});
    const InteractionContext ctx(est, {0, 0});
    InteractionConfig cfg;
    cfg.model = InteractionModel::front_vehicle;
    cfg.d_th = 50.0;
    cfg.alpha_th = 15.0;
    cfg.beta_th = 60.0;

    const StateVector subject{0, 10, 0, 0};
    const auto front = front_vehicle({0, 0}, subject, ctx, cfg);
    REQUIRE(front.has_value());
    CHECK(*front == Label{0, 1});

    // Everything out of range: absent.
    cfg.d_th = 5.0;
    CHECK(!front_vehicle({0, 0}, subject, ctx, cfg).has_value());
}

TEST_CASE("front_vehicle takes the nearer of two in-front candidates") {
    const auto est = estimates_of({{{0, 1}, {35, 10, 0, 0}}, {{0, 2}, {20, 10, 0, 0}}});
    const InteractionContext ctx(est, {0, 0});
    InteractionConfig cfg;
    cfg.model = InteractionModel::front_vehicle;
    const auto front = front_vehicle({0, 0}, {0, 10, 0, 0}, ctx, cfg);
    REQUIRE(front.has_value());
    CHECK(*front == Label{0, 2});
}

TEST_CASE("front_vehicle equals brute force on random multi-lane scenes") {
    RandomSource rng(53);
    InteractionConfig cfg;
    cfg.model = InteractionModel::front_vehicle;
    for (int trial = 0; trial < 100; ++trial) {
        cfg.front_check = (trial % 2 == 0);
        MultiTargetEstimate scene;
        for (int i = 0; i < 12; ++i) {
            const int lane = static_cast<int>(rng.below(4));
            const double dir = lane < 2 ? 1.0 : -1.0;
            scene.items.push_back({{0, i},
                                   {rng.uniform() * 200, dir * (8.0 + 4.0 * rng.uniform()),
                                    lane * 20.0 + rng.normal(), rng.normal() * 0.5}});
        }
        const InteractionContext ctx(scene, {9, 9});
        const StateVector subject{rng.uniform() * 200, 10.0, 20.0 * rng.below(4) + rng.normal(),
                                  rng.normal() * 0.5};
        const auto got = front_vehicle({9, 9}, subject, ctx, cfg);
        const auto expect = brute_force_front(subject, ctx, cfg);
        CHECK(got == expect);
        if (got) CHECK(*got != Label{9, 9});
    }
}

TEST_CASE("pipeline stages never grow the candidate set") {
    RandomSource rng(59);
    for (int trial = 0; trial < 20; ++trial) {
        MultiTargetEstimate scene;
        for (int i = 0; i < 15; ++i) {
            scene.items.push_back({{0, i},
                                   {rng.normal() * 40, rng.normal() * 8, rng.normal() * 40,
                                    rng.normal() * 8}});
        }
        const InteractionContext ctx(scene, {9, 9});
        const StateVector subject{0, 10, 0, 0};
        const auto near = near_set({9, 9}, subject, ctx, 60.0);
        const auto same = filter_same_direction(subject.velocity(), near, ctx, 25.0);
        const auto front = filter_in_front(subject, same, ctx, 70.0);
        CHECK(same.size() <= near.size());
        CHECK(front.size() <= same.size());
    }
}

TEST_CASE("interaction_factor composes the anchor with the distance factor") {
    InteractionConfig cfg;
    const NCVParams motion = make_ncv(1.0, 7.0);
    const StateVector prev{0, 10, 0, 0};
    const StateVector particle{11, 10, 0.5, 0};

    SUBCASE("model none is always 1") {
        cfg.model = InteractionModel::none;
        const InteractionContext ctx(estimates_of({{{0, 1}, {5, 1, 0, 0}}}), {0, 0});
        CHECK(interaction_factor(cfg, {0, 0}, particle, ctx, motion, prev) == 1.0);
    }
    SUBCASE("swarm with an empty context is 1") {
        cfg.model = InteractionModel::swarm;
        const InteractionContext ctx(MultiTargetEstimate{}, {0, 0});
        CHECK(interaction_factor(cfg, {0, 0}, particle, ctx, motion, prev) == 1.0);
    }
    SUBCASE("swarm with one neighbor equals the hand-composed factor") {
        cfg.model = InteractionModel::swarm;
        const StateVector neighbor{15, -2, 4, 1};
        const InteractionContext ctx(estimates_of({{{0, 1}, neighbor}}), {0, 0});

        const double d_hat = std::sqrt((prev.px - neighbor.px) * (prev.px - neighbor.px) +
                                       (prev.py - neighbor.py) * (prev.py - neighbor.py));
        const StateVector predicted = noise_free_predict(neighbor, motion);
        const double expect = swarm_weight_factor(particle, d_hat, predicted, cfg.sigma_d);
        CHECK(interaction_factor(cfg, {0, 0}, particle, ctx, motion, prev) ==
              doctest::Approx(expect).epsilon(1e-15));
    }
}
