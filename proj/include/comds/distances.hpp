#pragma once

#include "comds/types.hpp"

namespace comds {

// Euclidean distances between rows. Symmetric by construction (the upper
// triangle is computed once and mirrored). Throws DataError on non-finite
// input, naming the first offending row.
DistanceMatrix pairwise_distances(const Matrix& view);

// Quantile of the n(n-1)/2 upper-triangle entries with linear interpolation
// between order statistics. pi = 1 returns the maximum nudged up by one ulp
// so that a strict < test admits every pair. Throws DataError for
// pi outside (0, 1].
double percentile_threshold(const DistanceMatrix& d, double pi);

// mask(i,j) = d(i,j) < percentile_threshold(d, pi); diagonal false.
NeighborhoodMask neighborhood_mask(const DistanceMatrix& d, double pi);

// Alternative neighborhood rule: i and j are neighbors when either is among
// the other's k nearest (symmetric union). Ranks tie-break by smaller index.
// Not used by default; the percentile rule is the primary definition.
NeighborhoodMask knn_mask(const DistanceMatrix& d, int k);

}  // namespace comds
