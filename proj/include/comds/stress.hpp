#pragma once

#include <utility>
#include <vector>

#include "comds/types.hpp"

namespace comds {

// Global consensus objective:
//   sum_m sum_{i<j} (D^(m)_ij - d(W^(m) Z_i, W^(m) Z_j))^2
// with Euclidean d. Throws DataError on dimension mismatch, naming the view.
double comds_stress(const Matrix& config,
                    const std::vector<DiagonalScaling>& scalings,
                    const std::vector<DistanceMatrix>& distances);

// Local consensus objective: per view, squared residuals over masked pairs
// minus t_m times the summed fitted distance of unmasked pairs. Pairs count
// once (i < j). May be negative; reported as-is.
double locomds_stress(const Matrix& config,
                      const std::vector<DiagonalScaling>& scalings,
                      const std::vector<DistanceMatrix>& distances,
                      const std::vector<NeighborhoodMask>& masks,
                      const std::vector<double>& t);

// Diagnostic decompositions. Per-point entries sum to twice the objective
// (each pair is charged to both endpoints); per-view entries sum to the
// objective. For local fits, pass the masks the fit used; when omitted they
// are rebuilt from local_params->percentile.
Vector stress_per_point(const ConsensusFit& fit,
                        const std::vector<DistanceMatrix>& distances,
                        const std::vector<NeighborhoodMask>& masks = {});

Vector stress_per_view(const ConsensusFit& fit,
                       const std::vector<DistanceMatrix>& distances,
                       const std::vector<NeighborhoodMask>& masks = {});

// Resolves the scale indeterminacy between Z and the W's: centers each
// configuration column, rescales it to unit root-mean-square, multiplies the
// scale into every view's corresponding weight, and takes absolute values of
// the weights (fitted distances depend only on w^2, so signs carry no
// information). Every fitted pairwise distance is preserved. Throws DataError
// on a zero-variance column, identifying it.
std::pair<Matrix, std::vector<DiagonalScaling>> gauge_fix(
    const Matrix& raw_config, std::vector<DiagonalScaling> scalings);

}  // namespace comds
