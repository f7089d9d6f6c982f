#include "comds/distances.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "comds/errors.hpp"

namespace comds {

DistanceMatrix pairwise_distances(const Matrix& view) {
    const Eigen::Index n = view.rows();
    if (n < 2) {
        throw DataError("pairwise distances need at least 2 rows, got " +
                        std::to_string(n));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!view.row(i).allFinite()) {
            throw DataError("non-finite value in row " + std::to_string(i + 1));
        }
    }
    Matrix d = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double dist = (view.row(i) - view.row(j)).norm();
            d(i, j) = dist;
            d(j, i) = dist;
        }
    }
    return DistanceMatrix{std::move(d)};
}

double percentile_threshold(const DistanceMatrix& d, double pi) {
    if (!(pi > 0.0) || !(pi <= 1.0)) {
        throw DataError("percentile must lie in (0, 1], got " + std::to_string(pi));
    }
    const Eigen::Index n = d.values.rows();
    if (n < 2) {
        throw DataError("percentile threshold needs at least 2 points");
    }
    std::vector<double> upper;
    upper.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            upper.push_back(d.values(i, j));
        }
    }
    std::sort(upper.begin(), upper.end());
    if (pi == 1.0) {
        // One ulp above the maximum, so a strict < comparison admits all pairs.
        return std::nextafter(upper.back(), std::numeric_limits<double>::infinity());
    }
    const double h = pi * static_cast<double>(upper.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const double frac = h - static_cast<double>(lo);
    if (lo + 1 >= upper.size()) {
        return upper.back();
    }
    return upper[lo] + frac * (upper[lo + 1] - upper[lo]);
}

NeighborhoodMask neighborhood_mask(const DistanceMatrix& d, double pi) {
    const double threshold = percentile_threshold(d, pi);
    const Eigen::Index n = d.values.rows();
    NeighborhoodMask out;
    out.mask = BoolMatrix::Constant(n, n, false);
    out.percentile = pi;
    out.threshold = threshold;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const bool close = d.values(i, j) < threshold;
            out.mask(i, j) = close;
            out.mask(j, i) = close;
        }
    }
    return out;
}

NeighborhoodMask knn_mask(const DistanceMatrix& d, int k) {
    const Eigen::Index n = d.values.rows();
    if (k < 1 || k > n - 1) {
        throw DataError("neighbor count must lie in [1, n-1], got " +
                        std::to_string(k));
    }
    NeighborhoodMask out;
    out.mask = BoolMatrix::Constant(n, n, false);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n - 1));
    for (Eigen::Index i = 0; i < n; ++i) {
        std::size_t pos = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) order[pos++] = j;
        }
        std::partial_sort(order.begin(), order.begin() + k, order.end(),
                          [&](Eigen::Index a, Eigen::Index b) {
                              const double da = d.values(i, a);
                              const double db = d.values(i, b);
                              if (da != db) return da < db;
                              return a < b;
                          });
        for (int r = 0; r < k; ++r) {
            out.mask(i, order[static_cast<std::size_t>(r)]) = true;
            out.mask(order[static_cast<std::size_t>(r)], i) = true;
        }
    }
    // The percentile slot records the realized masked-pair fraction so that
    // downstream repulsion weights can be derived the same way as for
    // percentile masks. The threshold slot is meaningless here.
    Eigen::Index count = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (out.mask(i, j)) ++count;
        }
    }
    out.percentile = static_cast<double>(count) / static_cast<double>(n * (n - 1));
    out.threshold = std::numeric_limits<double>::quiet_NaN();
    return out;
}

}  // namespace comds
