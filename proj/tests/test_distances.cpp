#include "doctest.h"

#include "comds/distances.hpp"
#include "comds/errors.hpp"
#include "comds/rng.hpp"
#include "support/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using comds::DistanceMatrix;
using comds::Matrix;

namespace {

Matrix random_points(int n, int p, std::uint64_t seed) {
    comds::rng::Generator gen(seed);
    Matrix x(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) x(i, j) = gen.normal();
    return x;
}

}  // namespace

TEST_CASE("pairwise_distances reproduces a 3-4-5 triangle") {
    Matrix x(3, 2);
    x << 0, 0,
         3, 0,
         3, 4;
    DistanceMatrix d = comds::pairwise_distances(x);
    CHECK(d.values(0, 1) == 3.0);
    CHECK(d.values(1, 2) == 4.0);
    CHECK(d.values(0, 2) == 5.0);
    for (int i = 0; i < 3; ++i) CHECK(d.values(i, i) == 0.0);
    CHECK(d.values(1, 0) == d.values(0, 1));
}

TEST_CASE("duplicate rows map to exactly zero distance") {
    Matrix x(3, 3);
    x << 1.5, -2.0, 0.25,
         1.5, -2.0, 0.25,
         0.0,  1.0, 2.0;
    DistanceMatrix d = comds::pairwise_distances(x);
    CHECK(d.values(0, 1) == 0.0);
    CHECK(d.values(0, 2) > 0.0);
}

TEST_CASE("pairwise_distances agrees with a direct per-pair norm") {
    Matrix x = random_points(10, 4, 303);
    DistanceMatrix d = comds::pairwise_distances(x);
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            double want = (x.row(i) - x.row(j)).norm();
            CHECK(d.values(i, j) == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("pairwise distances satisfy the triangle inequality") {
    Matrix x = random_points(12, 3, 777);
    DistanceMatrix d = comds::pairwise_distances(x);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j)
            for (int k = 0; k < 12; ++k)
                CHECK(d.values(i, j) <= d.values(i, k) + d.values(k, j) + 1e-12);
}

TEST_CASE("non-finite coordinates are rejected naming the row") {
    Matrix x = random_points(5, 2, 1);
    x(3, 1) = std::nan("");
    CHECK_THROWS_WITH_AS(comds::pairwise_distances(x),
                         doctest::Contains("row 4"), comds::DataError);
}

TEST_CASE("quantile oracle interpolates between order statistics") {
    // Median of {1,2,3,4} with linear interpolation is 2.5.
    CHECK(oracle::quantile({1.0, 2.0, 3.0, 4.0}, 0.5) == 2.5);
    CHECK(oracle::quantile({1.0, 2.0, 3.0, 4.0}, 1.0) == 4.0);
    CHECK(oracle::quantile({5.0}, 0.25) == 5.0);
}

TEST_CASE("percentile_threshold matches the quantile oracle") {
    Matrix x = random_points(9, 3, 52);
    DistanceMatrix d = comds::pairwise_distances(x);
    std::vector<double> upper;
    for (int i = 0; i < 9; ++i)
        for (int j = i + 1; j < 9; ++j) upper.push_back(d.values(i, j));
    for (double pi : {0.1, 0.25, 0.5, 0.6180339887, 0.9}) {
        CHECK(comds::percentile_threshold(d, pi) ==
              doctest::Approx(oracle::quantile(upper, pi)).epsilon(1e-14));
    }
}

TEST_CASE("percentile 1 admits every pair under a strict test") {
    Matrix x = random_points(8, 2, 99);
    DistanceMatrix d = comds::pairwise_distances(x);
    double thr = comds::percentile_threshold(d, 1.0);
    double dmax = 0.0;
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) dmax = std::max(dmax, d.values(i, j));
    CHECK(thr > dmax);
    CHECK(thr == std::nextafter(dmax, std::numeric_limits<double>::infinity()));

    comds::NeighborhoodMask m = comds::neighborhood_mask(d, 1.0);
    int trues = 0;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            if (m.mask(i, j)) ++trues;
    CHECK(trues == 8 * 7); // all off-diagonal pairs
}

TEST_CASE("percentile outside (0, 1] is rejected") {
    Matrix x = random_points(5, 2, 3);
    DistanceMatrix d = comds::pairwise_distances(x);
    CHECK_THROWS_AS((void)comds::percentile_threshold(d, 0.0), comds::DataError);
    CHECK_THROWS_AS((void)comds::percentile_threshold(d, -0.5), comds::DataError);
    CHECK_THROWS_AS((void)comds::percentile_threshold(d, 1.0001), comds::DataError);
    CHECK_THROWS_AS((void)comds::neighborhood_mask(d, 0.0), comds::DataError);
}

TEST_CASE("collinear points: median threshold keeps only the close pair") {
    // Points at 0, 1, 10 give pair distances {1, 9, 10}; the median is 9 and
    // the strict < rule then keeps only the (0,1) pair.
    Matrix x(3, 1);
    x << 0.0, 1.0, 10.0;
    DistanceMatrix d = comds::pairwise_distances(x);
    comds::NeighborhoodMask m = comds::neighborhood_mask(d, 0.5);
    CHECK(m.mask(0, 1));
    CHECK(m.mask(1, 0));
    CHECK_FALSE(m.mask(0, 2));
    CHECK_FALSE(m.mask(1, 2));
    CHECK(m.percentile == 0.5);
    CHECK(m.threshold == 9.0);
}

TEST_CASE("masks grow monotonically with the percentile") {
    Matrix x = random_points(15, 3, 4242);
    DistanceMatrix d = comds::pairwise_distances(x);
    comds::NeighborhoodMask small = comds::neighborhood_mask(d, 0.2);
    comds::NeighborhoodMask big = comds::neighborhood_mask(d, 0.7);
    for (int i = 0; i < 15; ++i) {
        for (int j = 0; j < 15; ++j) {
            if (small.mask(i, j)) CHECK(big.mask(i, j));
        }
    }
}

TEST_CASE("neighborhood masks are symmetric with a false diagonal") {
    Matrix x = random_points(11, 2, 8);
    DistanceMatrix d = comds::pairwise_distances(x);
    for (double pi : {0.15, 0.5, 0.85, 1.0}) {
        comds::NeighborhoodMask m = comds::neighborhood_mask(d, pi);
        REQUIRE(m.n() == 11);
        for (int i = 0; i < 11; ++i) {
            CHECK_FALSE(m.mask(i, i));
            for (int j = 0; j < 11; ++j) CHECK(m.mask(i, j) == m.mask(j, i));
        }
    }
}

TEST_CASE("knn mask is the symmetric union of nearest-neighbor relations") {
    // Line at 0, 1, 2.2, 6: with k=1 the nearest neighbors are
    // 0->1, 1->0, 2->1, 3->2; the union marks pairs (0,1), (1,2), (2,3).
    Matrix x(4, 1);
    x << 0.0, 1.0, 2.2, 6.0;
    DistanceMatrix d = comds::pairwise_distances(x);
    comds::NeighborhoodMask m = comds::knn_mask(d, 1);
    CHECK(m.mask(0, 1));
    CHECK(m.mask(1, 2));
    CHECK(m.mask(2, 3));
    CHECK_FALSE(m.mask(0, 2));
    CHECK_FALSE(m.mask(0, 3));
    CHECK_FALSE(m.mask(1, 3));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(m.mask(i, j) == m.mask(j, i));
    // Realized fraction: 6 marked cells of 12 off-diagonal.
    CHECK(m.percentile == doctest::Approx(0.5));
}

TEST_CASE("knn mask ranks ties by smaller index") {
    // 0 sits midway between 1 and 2 (both at distance 2), a genuine tie.
    // 1<->3 and 2<->4 are mutual nearest pairs, so neither 1 nor 2 claims 0.
    // The only path to a (0,x) edge is 0's own k=1 pick, which must be 1.
    Matrix x(5, 1);
    x << 0.0, 2.0, -2.0, 2.5, -2.5;
    DistanceMatrix d = comds::pairwise_distances(x);
    comds::NeighborhoodMask m = comds::knn_mask(d, 1);
    CHECK(m.mask(0, 1));
    CHECK_FALSE(m.mask(0, 2));
    CHECK(m.mask(1, 3));
    CHECK(m.mask(2, 4));
    // Marked pairs (0,1), (1,3), (2,4): 6 cells of 20 off-diagonal.
    CHECK(m.percentile == doctest::Approx(0.3));
}
