#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "comds/types.hpp"

namespace comds {

// k nearest neighbor index sets per point (self excluded), ties broken by
// smaller index. Shared by the neighborhood metrics and the tuner.
std::vector<std::vector<int>> knn_sets(const DistanceMatrix& d, int k);

// Fraction of sampled triplets (anchor i; j, k) whose distance ordering
// agrees between the two spaces. The comparison is sign(d(i,j) - d(i,k)) in
// each space; a tie in one space counts as preserved only when both are tied.
// Per anchor, triplets_per_anchor pairs (j, k) are drawn without replacement
// within each triplet (j uniform among the n-1 others, then k among the
// remaining n-2). full_ordering additionally requires the (j,k) leg to keep
// its rank relative to both anchor legs.
double random_triplet_accuracy(const DistanceMatrix& dx,
                               const DistanceMatrix& dz,
                               int triplets_per_anchor, std::uint64_t seed,
                               bool full_ordering = false);

// All n(n-1)(n-2)/2 anchored triplets; n <= 30.
double exhaustive_triplet_accuracy(const DistanceMatrix& dx,
                                   const DistanceMatrix& dz,
                                   bool full_ordering = false);

// Spearman rank correlation over the upper-triangle distances, average ranks
// for ties. Throws DataError when either side has all pairs equal.
double spearman_distance_correlation(const DistanceMatrix& dx,
                                     const DistanceMatrix& dz);

// Unadjusted neighborhood overlap (|NN_k(X) ∩ NN_k(Z)| / (k n)) at each k.
// Default grid: 2, 5, 8, ..., 20.
std::vector<std::pair<int, double>> lcmc_curve(
    const DistanceMatrix& dx, const DistanceMatrix& dz,
    std::vector<int> k_values = {});

// Convenience reduction: the curve's mean score.
double mean_lcmc(const DistanceMatrix& dx, const DistanceMatrix& dz,
                 const std::vector<int>& k_values = {});

struct MantelResult {
    double r = 0.0;
    std::optional<double> p_value;
};

// Pearson correlation of the two upper triangles. With permutations > 0, the
// one-sided p-value is the fraction of simultaneous row/column permutations
// of d2 whose correlation reaches r. All n! permutations are enumerated when
// permutations >= n! and n <= 12; otherwise that many seeded shuffles.
MantelResult mantel_statistic(const DistanceMatrix& d1,
                              const DistanceMatrix& d2,
                              long permutations = 0, std::uint64_t seed = 0);

}  // namespace comds
