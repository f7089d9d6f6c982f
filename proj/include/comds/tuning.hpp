#pragma once

#include <string>
#include <vector>

#include "comds/types.hpp"

namespace comds {

// Repulsion weight for one view: (pi / (1 - pi)) * median of the masked
// upper-triangle distances * tau. pi = 1 makes the formula singular (the
// all-pairs limit has no repulsion set) and throws DataError, as does an
// empty mask.
double t_from_tau(double tau, double pi, const DistanceMatrix& d,
                  const NeighborhoodMask& mask);

// Mean k-nearest-neighbor overlap between the two spaces minus the expected
// overlap of an uninformative embedding, k/(n-1). Range
// [-k/(n-1), 1 - k/(n-1)]; identical spaces score exactly 1 - k/(n-1).
double adjusted_lcmc(const DistanceMatrix& original, const Matrix& embedding,
                     int k);
double adjusted_lcmc(const Matrix& original, const Matrix& embedding, int k);

// {1, 2, 5} plus seven integers log-evenly spaced from 10 to floor(0.7 n),
// deduplicated and sorted. For n < 16 falls back to 1..min(5, n-1).
std::vector<int> default_k_grid(int n);

struct TuningGrid {
    std::vector<double> taus{10, 5, 1, 0.5, 0.1, 0.05, 0.01, 0.005, 0.001};
    std::vector<double> percentiles{0.1, 0.2, 0.3, 0.4, 0.5,
                                    0.6, 0.7, 0.8, 0.9};
    std::vector<int> k_values;  // empty = default_k_grid(n)
};

struct TuningResult {
    std::vector<double> taus;
    std::vector<double> percentiles;
    std::vector<int> k_values;  // after optional truncation
    // scores[tau_index][percentile_index][k_index]; failed cells hold -inf
    std::vector<std::vector<std::vector<double>>> scores;
    // votes[tau_index][percentile_index]: argmax count across k values
    std::vector<std::vector<int>> votes;
    int selected_tau = 0;         // index into taus
    int selected_percentile = 0;  // index into percentiles
    std::vector<std::string> failed_cells;
};

struct TuningOptions {
    // Drop k values past the first strict decrease of the per-k maximum
    // score across cells (one reading of "stop once the curve decreases";
    // the full grid is the default).
    bool truncate_after_first_decrease = false;
    // Grid cells run concurrently; 0 means the COMDS_THREADS environment
    // variable, falling back to the hardware count.
    int threads = 0;
};

// Grid search: fit the local method at every (tau, percentile) cell, score
// the adjusted neighborhood overlap against the reference space at each k,
// give each k one vote for its best cell, select the cell with the most
// votes. Ties prefer smaller percentile, then smaller tau. Cells whose fit
// throws are scored -inf everywhere and recorded in failed_cells.
TuningResult tune(const std::vector<DistanceMatrix>& distances,
                  const DistanceMatrix& original, const TuningGrid& grid,
                  const SolverSettings& settings,
                  const TuningOptions& options = {});
TuningResult tune(const std::vector<DistanceMatrix>& distances,
                  const Matrix& original, const TuningGrid& grid,
                  const SolverSettings& settings,
                  const TuningOptions& options = {});

}  // namespace comds
