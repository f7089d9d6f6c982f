#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "comds/errors.hpp"

namespace comds {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

// The M input embeddings of one dataset. Row i of every view is the same
// sample, identified by sample_ids[i]; views may have different widths.
struct EmbeddingSet {
    std::vector<Matrix> views;
    std::vector<std::string> sample_ids;
    std::vector<std::string> view_labels;

    int n() const { return views.empty() ? 0 : static_cast<int>(views[0].rows()); }
    int m() const { return static_cast<int>(views.size()); }

    // n >= 3, M >= 1, equal row counts, finite entries. Throws DataError.
    void validate() const;
};

// Symmetric nonnegative matrix with zero diagonal.
struct DistanceMatrix {
    Matrix values;

    int n() const { return static_cast<int>(values.rows()); }
    void validate(const std::string& name = "distance matrix") const;
};

// Pair selector: mask(i,j) is true iff the pair's distance fell strictly
// below the realized percentile threshold. Symmetric, diagonal false.
struct NeighborhoodMask {
    BoolMatrix mask;
    double percentile = 1.0;
    double threshold = 0.0;

    int n() const { return static_cast<int>(mask.rows()); }
};

// Per-view, per-dimension scale factors. Nonnegative after gauge fixing.
struct DiagonalScaling {
    Vector weights;
};

enum class Method { CoMDS, LoCoMDS };

struct LocalParams {
    double tau = 0.0;        // 0 when t values were supplied directly
    double percentile = 1.0;
    std::vector<double> t;   // realized per-view repulsion weights
};

// Result of a consensus fit. The configuration is gauge fixed: zero-mean
// columns with unit root-mean-square, all scaling weights nonnegative.
struct ConsensusFit {
    Matrix configuration;
    std::vector<DiagonalScaling> scalings;
    std::vector<double> stress_trace;  // objective at the initial configuration,
                                       // then after each outer iteration
    int iterations = 0;
    bool converged = false;
    Method method = Method::CoMDS;
    std::optional<LocalParams> local_params;
    std::vector<std::string> warnings;
};

enum class InitKind { TorgersonAverage, RandomSeeded };

struct SolverSettings {
    int ndim = 2;
    double eps = 1e-6;
    int itmax = 300;
    InitKind init = InitKind::TorgersonAverage;
    std::uint64_t seed = 0;
    int als_inner_iters = 5;
    double ridge = 0.0;  // optional stabilizer added to graph-Laplacian blocks
};

}  // namespace comds
