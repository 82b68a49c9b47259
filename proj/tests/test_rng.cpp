#include <doctest.h>

#include <vector>

#include "iaware/rng.hpp"

using namespace iaware;

TEST_CASE("equal seeds reproduce the exact draw sequence") {
    RandomSource a(42);
    RandomSource b(42);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.bits() == b.bits());
        CHECK(a.uniform() == b.uniform());
        CHECK(a.normal() == b.normal());
    }
}

TEST_CASE("child streams depend only on the parent key, not its consumption") {
    RandomSource fresh(7);
    RandomSource drained(7);
    for (int i = 0; i < 50; ++i) drained.bits();

    RandomSource c1 = fresh.child(3, 1);
    RandomSource c2 = drained.child(3, 1);
    for (int i = 0; i < 20; ++i) CHECK(c1.bits() == c2.bits());
}

TEST_CASE("distinct salts derive distinct streams") {
    RandomSource root(9);
    CHECK(root.child(1).key() != root.child(2).key());
    CHECK(root.child(1, 0).key() != root.child(0, 1).key());
    CHECK(root.child(stream::predict, 5).key() != root.child(stream::resample, 5).key());
}

TEST_CASE("uniform draws stay in [0,1) and poisson matches its mean roughly") {
    RandomSource rng(11);
    double sum = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / 10000.0 == doctest::Approx(0.5).epsilon(0.05));

    long total = 0;
    for (int i = 0; i < 2000; ++i) total += rng.poisson(4.0);
    CHECK(static_cast<double>(total) / 2000.0 == doctest::Approx(4.0).epsilon(0.1));
    CHECK(rng.poisson(0.0) == 0);
}
