#include "doctest.h"

#include "comds/rng.hpp"
#include "comds/simulate.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <vector>

using comds::Matrix;

TEST_CASE("gaussian mixture shapes and label blocks") {
    comds::GaussianMixtureData gm = comds::gen_gaussian_mixture(7);
    REQUIRE(gm.data.rows() == 600);
    REQUIRE(gm.data.cols() == 3);
    REQUIRE(gm.labels.size() == 600);
    int counts[4] = {0, 0, 0, 0};
    for (int v : gm.labels) {
        REQUIRE(v >= 1);
        REQUIRE(v <= 3);
        ++counts[v];
    }
    CHECK(counts[1] == 150);
    CHECK(counts[2] == 200);
    CHECK(counts[3] == 250);
    // Blocks are contiguous in label order.
    CHECK(gm.labels[0] == 1);
    CHECK(gm.labels[149] == 1);
    CHECK(gm.labels[150] == 2);
    CHECK(gm.labels[349] == 2);
    CHECK(gm.labels[350] == 3);
    CHECK(gm.labels[599] == 3);
    CHECK(gm.data.allFinite());
}

TEST_CASE("gaussian mixture cluster means match their targets") {
    Matrix means(3, 3);
    means << -3.0, -2.0, 0.0,
              2.0, -4.0, 1.0,
              0.0,  6.0, 6.0;
    const int starts[3] = {0, 150, 350};
    const int sizes[3] = {150, 200, 250};
    // Average over several seeds so a single unlucky draw cannot trip this.
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        comds::GaussianMixtureData gm = comds::gen_gaussian_mixture(seed);
        for (int j = 0; j < 3; ++j) {
            Matrix block = gm.data.middleRows(starts[j], sizes[j]);
            for (int c = 0; c < 3; ++c) {
                double m = block.col(c).mean();
                double sd = std::sqrt((block.col(c).array() - m).square().sum() /
                                      (sizes[j] - 1.0));
                double se = sd / std::sqrt(static_cast<double>(sizes[j]));
                CHECK(std::abs(m - means(j, c)) < 5.0 * se);
            }
        }
    }
}

TEST_CASE("gaussian mixture clusters have full-rank spread") {
    comds::GaussianMixtureData gm = comds::gen_gaussian_mixture(42);
    const int starts[3] = {0, 150, 350};
    const int sizes[3] = {150, 200, 250};
    for (int j = 0; j < 3; ++j) {
        Matrix block = gm.data.middleRows(starts[j], sizes[j]);
        Matrix centered = block.rowwise() - block.colwise().mean();
        Matrix cov = centered.transpose() * centered / (sizes[j] - 1.0);
        Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
        CHECK(eig.eigenvalues().minCoeff() > 0.05);
        // Base covariance has unit diagonal plus a PSD bump, so every
        // coordinate variance should exceed ~1 minus sampling noise.
        for (int c = 0; c < 3; ++c) CHECK(cov(c, c) > 0.5);
    }
}

TEST_CASE("gaussian mixture is deterministic and seed-sensitive") {
    comds::GaussianMixtureData a = comds::gen_gaussian_mixture(11);
    comds::GaussianMixtureData b = comds::gen_gaussian_mixture(11);
    CHECK((a.data - b.data).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.labels == b.labels);
    comds::GaussianMixtureData c = comds::gen_gaussian_mixture(12);
    CHECK((a.data - c.data).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("gaussian mixture covariance matches a replayed draw stream") {
    // Component 2 (0-based 1) draws from substream 2: first the nine factor
    // entries row-major, then three normals per sample. Replaying that
    // stream must reproduce the block exactly.
    const std::uint64_t seed = 31;
    comds::GaussianMixtureData gm = comds::gen_gaussian_mixture(seed);
    comds::rng::Generator gen(comds::rng::substream(seed, 2));
    Matrix z(3, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) z(r, c) = gen.normal();
    Matrix sigma(3, 3);
    sigma << 1.0, 0.3, 0.2,
             0.3, 1.0, 0.4,
             0.2, 0.4, 1.0;
    Matrix cov = sigma + 0.25 * z * z.transpose();
    Eigen::LLT<Matrix> chol(cov);
    REQUIRE(chol.info() == Eigen::Success);
    Matrix l = chol.matrixL();
    Eigen::Vector3d mu(2.0, -4.0, 1.0);
    for (int s = 0; s < 200; ++s) {
        // drawn one statement at a time: constructor arguments would not
        // pin the evaluation order of the three calls
        Eigen::Vector3d eps;
        eps(0) = gen.normal();
        eps(1) = gen.normal();
        eps(2) = gen.normal();
        Eigen::Vector3d want = mu + l * eps;
        for (int c = 0; c < 3; ++c) CHECK(gm.data(150 + s, c) == want(c));
    }
}

TEST_CASE("swiss roll shapes, ranges, and standardization") {
    comds::SwissRollData sr = comds::gen_swiss_roll(5);
    REQUIRE(sr.data.rows() == 1000);
    REQUIRE(sr.data.cols() == 3);
    REQUIRE(sr.intrinsic.rows() == 1000);
    REQUIRE(sr.intrinsic.cols() == 2);

    const double pi = 3.14159265358979323846;
    for (int i = 0; i < 1000; ++i) {
        CHECK(sr.intrinsic(i, 0) > pi);
        CHECK(sr.intrinsic(i, 0) <= 3.4 * pi + 1e-12);
        CHECK(sr.intrinsic(i, 1) > -1.0);
        CHECK(sr.intrinsic(i, 1) <= 1.0);
    }
    for (int c = 0; c < 3; ++c) {
        CHECK(std::abs(sr.data.col(c).mean()) < 1e-10);
        double var = sr.data.col(c).squaredNorm() / 999.0;
        CHECK(var == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("swiss roll is deterministic and seed-sensitive") {
    comds::SwissRollData a = comds::gen_swiss_roll(3);
    comds::SwissRollData b = comds::gen_swiss_roll(3);
    CHECK((a.data - b.data).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.intrinsic - b.intrinsic).cwiseAbs().maxCoeff() == 0.0);
    comds::SwissRollData c = comds::gen_swiss_roll(4);
    CHECK((a.data - c.data).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("noise-free swiss roll satisfies the radius identity") {
    comds::SwissRollData sr = comds::gen_swiss_roll(9, 0.0);
    // Rebuild the raw coordinates from the intrinsic sheet and standardize
    // them the same way; they must match the emitted data.
    Matrix raw(1000, 3);
    for (int i = 0; i < 1000; ++i) {
        double t = sr.intrinsic(i, 0);
        double u = sr.intrinsic(i, 1);
        raw(i, 0) = t * std::cos(t);
        raw(i, 1) = t * std::sin(t);
        raw(i, 2) = u;
        CHECK(std::hypot(raw(i, 0), raw(i, 1)) ==
              doctest::Approx(t).epsilon(1e-12));
    }
    for (int c = 0; c < 3; ++c) {
        double mean = raw.col(c).mean();
        raw.col(c).array() -= mean;
        raw.col(c) /= std::sqrt(raw.col(c).squaredNorm() / 999.0);
    }
    CHECK((raw - sr.data).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("noise level controls departure from the ideal sheet") {
    comds::SwissRollData clean = comds::gen_swiss_roll(21, 0.0);
    comds::SwissRollData noisy = comds::gen_swiss_roll(21, 0.1);
    // Same substreams for t and u, so the intrinsic sheets agree exactly.
    CHECK((clean.intrinsic - noisy.intrinsic).cwiseAbs().maxCoeff() == 0.0);
    // The ambient clouds differ.
    CHECK((clean.data - noisy.data).cwiseAbs().maxCoeff() > 1e-4);
}
