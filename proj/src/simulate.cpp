#include "comds/simulate.hpp"

#include <Eigen/Cholesky>

#include <cmath>

#include "comds/errors.hpp"
#include "comds/rng.hpp"

namespace comds {

GaussianMixtureData gen_gaussian_mixture(std::uint64_t seed) {
    const int sizes[3] = {150, 200, 250};
    Matrix means(3, 3);
    means << -3.0, -2.0, 0.0,
              2.0, -4.0, 1.0,
              0.0,  6.0, 6.0;
    Matrix sigma(3, 3);
    sigma << 1.0, 0.3, 0.2,
             0.3, 1.0, 0.4,
             0.2, 0.4, 1.0;

    GaussianMixtureData out;
    out.data.resize(600, 3);
    out.labels.reserve(600);

    Eigen::Index row = 0;
    for (int j = 0; j < 3; ++j) {
        rng::Generator gen(rng::substream(seed, static_cast<std::uint64_t>(j + 1)));
        Matrix z(3, 3);
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                z(r, c) = gen.normal();
            }
        }
        Matrix cov = sigma + 0.25 * z * z.transpose();
        Eigen::LLT<Matrix> chol(cov);
        if (chol.info() != Eigen::Success) {
            throw NumericalError("component covariance is not positive definite");
        }
        Matrix l = chol.matrixL();
        for (int s = 0; s < sizes[j]; ++s) {
            Vector eps(3);
            eps << gen.normal(), gen.normal(), gen.normal();
            out.data.row(row) = (means.row(j).transpose() + l * eps).transpose();
            out.labels.push_back(j + 1);
            ++row;
        }
    }
    return out;
}

SwissRollData gen_swiss_roll(std::uint64_t seed, double noise_sd) {
    constexpr int n = 1000;
    const double pi = 3.14159265358979323846;

    rng::Generator gen_t(rng::substream(seed, 1));
    rng::Generator gen_u(rng::substream(seed, 2));
    rng::Generator gen_ex(rng::substream(seed, 3));
    rng::Generator gen_ey(rng::substream(seed, 4));
    rng::Generator gen_ez(rng::substream(seed, 5));

    SwissRollData out;
    out.data.resize(n, 3);
    out.intrinsic.resize(n, 2);

    for (int i = 0; i < n; ++i) {
        const double t = gen_t.uniform(pi, 3.4 * pi);
        const double u = gen_u.uniform(-1.0, 1.0);
        const double ex = noise_sd * gen_ex.normal();
        const double ey = noise_sd * gen_ey.normal();
        const double ez = noise_sd * gen_ez.normal();
        out.data(i, 0) = t * std::cos(t) + ex;
        out.data(i, 1) = t * std::sin(t) + ey;
        out.data(i, 2) = u + ez;
        out.intrinsic(i, 0) = t;
        out.intrinsic(i, 1) = u;
    }

    // Standardize each ambient column: zero mean, unit sample variance
    // (divisor n - 1).
    for (int c = 0; c < 3; ++c) {
        const double mean = out.data.col(c).mean();
        out.data.col(c).array() -= mean;
        const double var = out.data.col(c).squaredNorm() / static_cast<double>(n - 1);
        if (var <= 0.0) {
            throw NumericalError("ambient column has zero variance");
        }
        out.data.col(c) /= std::sqrt(var);
    }
    return out;
}

}  // namespace comds
