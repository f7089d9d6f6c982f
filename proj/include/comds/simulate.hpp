#pragma once

#include <cstdint>
#include <vector>

#include "comds/types.hpp"

namespace comds {

struct GaussianMixtureData {
    Matrix data;              // 600 x 3
    std::vector<int> labels;  // values 1..3, sizes 150/200/250
};

// Three-component Gaussian mixture in 3 dimensions. Component j has mean
// mu_j and covariance Sigma + 0.25 * Z_j Z_j', where Sigma has unit diagonal
// and off-diagonals (0.3, 0.2, 0.4) and Z_j is one 3x3 standard-normal draw
// per component. Draw order per component: the 9 entries of Z_j row-major,
// then 3 normals per sample. Substreams: component j uses substream j.
GaussianMixtureData gen_gaussian_mixture(std::uint64_t seed);

struct SwissRollData {
    Matrix data;       // 1000 x 3, columns standardized
    Matrix intrinsic;  // 1000 x 2: (t, u)
};

// Swiss roll: t ~ U(pi, 3.4pi), u ~ U(-1, 1),
//   x = t cos t + ex,  y = t sin t + ey,  z = u + ez,
// noise N(0, noise_sd^2), then each ambient column is standardized to zero
// mean and unit variance. Five substreams, one per variable (t, u, ex, ey,
// ez), each drawn once per sample in row order. noise_sd = 0 is a test hook
// that makes sqrt(x_raw^2 + y_raw^2) = t an exact identity before
// standardization.
SwissRollData gen_swiss_roll(std::uint64_t seed, double noise_sd = 0.1);

}  // namespace comds
