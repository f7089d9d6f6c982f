#pragma once

#include <optional>
#include <vector>

#include "comds/types.hpp"

namespace comds {

// Quadratic-part blocks of the iteration-majorizer. Global mode: each block
// is nI - J (diagonal n-1, off-diagonal -1), the Laplacian of the complete
// graph. Local mode: the Laplacian of each view's neighborhood graph
// (off-diagonal -mask(i,j), diagonal = row degree). Blocks are independent
// across views; the objective has no cross-view pair terms.
std::vector<Matrix> build_v(Method mode,
                            const std::vector<NeighborhoodMask>* masks,
                            int n, int views);

// Linear-part blocks, rebuilt each iteration from the current per-view
// configurations (stacked_config rows grouped by view: view m owns rows
// [m*n, (m+1)*n)). Off-diagonal entry: -numerator / current distance, zero
// when the current distance is zero; diagonal set so rows sum to zero.
// Global numerator: D_ij. Local numerator: mask*D + (t_m/2)*(1-mask).
std::vector<Matrix> build_b(Method mode, const Matrix& stacked_config,
                            const std::vector<DistanceMatrix>& distances,
                            const std::vector<NeighborhoodMask>* masks,
                            const std::vector<double>* t);

// Unconstrained majorizer minimizer per view: Zbar^(m) = pinv(V^(m)) B^(m)
// Ztilde^(m). The complete-graph block has the closed-form pseudoinverse
// (1/n)(I - J/n); Laplacian blocks use a symmetric eigendecomposition with
// eigenvalues below 1e-10 * lambda_max treated as zero.
Matrix guttman_step(const std::vector<Matrix>& v_blocks,
                    const std::vector<Matrix>& b_blocks,
                    const Matrix& stacked_config);

struct ConstrainedUpdate {
    Matrix z;
    std::vector<DiagonalScaling> w;
    int skipped_weight_updates = 0;  // degenerate-denominator guard hits
};

// Alternating minimization of
//   sum_m tr((Z W^(m) - Zbar^(m))' V^(m) (Z W^(m) - Zbar^(m)))
// over the shared configuration Z and the diagonal scalings. Per dimension a,
// each pass updates every view's weight (w = z'Vzbar / z'Vz) and then the
// shared column (z = pinv(sum_m w^2 V^(m)) sum_m w V^(m) zbar). A weight
// update is skipped, and counted, when its denominator is degenerate
// relative to the column norm; the quadratic form never increases.
//
// linear_targets, when given, supplies the per-view products B^(m) Ztilde^(m)
// to use directly in place of V^(m) Zbar^(m). The two coincide whenever the
// view's graph is connected (B has zero row and column sums); on a
// disconnected graph only the raw products keep the update consistent with
// the objective, because pinv(V) discards the between-component part of
// B Ztilde. fit() always passes them.
ConstrainedUpdate constrained_update(
    const std::vector<Matrix>& guttman_targets,
    const std::vector<Matrix>& v_blocks, const Matrix& current_z,
    const std::vector<DiagonalScaling>& current_w, int inner_iters,
    const std::vector<Matrix>* linear_targets = nullptr);

struct LocalSpec {
    std::vector<NeighborhoodMask> masks;
    std::vector<double> t;
    double tau = 0.0;  // informational echo for reports; 0 if t given directly
};

// Full majorization-minimization loop. Iterates build_b, the per-view
// unconstrained targets, and constrained_update, evaluating the objective
// after each outer iteration. Stops when the relative objective change
// drops below settings.eps, itmax is reached, or a divergence guard fires
// (the local objective is unbounded below whenever any view's neighborhood
// graph is disconnected; see the warnings on the returned fit). The returned
// trace is non-increasing up to 1e-10 relative slack per step.
ConsensusFit fit(const std::vector<DistanceMatrix>& distances,
                 const SolverSettings& settings, Method mode,
                 const std::optional<LocalSpec>& local = std::nullopt);

}  // namespace comds
