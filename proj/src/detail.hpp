#pragma once

// Internal helpers shared between the stress evaluators and the solver.
// Both must measure configuration distances with the exact same floating
// point operations, otherwise the descent guarantee checks would compare
// subtly different quantities.

#include <vector>

#include "comds/types.hpp"

namespace comds::detail {

// Rows of z scaled per coordinate: y = z * diag(w).
inline Matrix weighted_rows(const Matrix& z, const Vector& w) {
    return z * w.asDiagonal();
}

// Distance between two rows of y, computed from the row difference.  The
// Gram-matrix shortcut is avoided on purpose: it loses half the digits for
// nearly coincident points, which is exactly where the solver divides by
// these values.
inline double row_distance(const Matrix& y, Eigen::Index i, Eigen::Index j) {
    return (y.row(i) - y.row(j)).norm();
}

// Connected components of the union of mask graphs.  Returns one component
// id per point, ids contiguous from 0.  An empty mask list means a single
// complete-graph component.
std::vector<int> union_components(const std::vector<NeighborhoodMask>& masks,
                                  Eigen::Index n);

// Connected components of one symmetric boolean adjacency matrix.
int component_count(const BoolMatrix& adjacency);

} // namespace comds::detail
