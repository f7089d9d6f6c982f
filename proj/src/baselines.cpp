#include "comds/baselines.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "comds/errors.hpp"

namespace comds {

Matrix pca_embed(const Matrix& data, int ndim) {
    const Eigen::Index n = data.rows();
    const Eigen::Index p = data.cols();
    if (n < 2) {
        throw DataError("principal components need at least 2 rows, got " +
                        std::to_string(n));
    }
    const Eigen::Index max_dim = std::min(n, p);
    if (ndim < 1 || ndim > max_dim) {
        throw DataError("component count must lie in [1, " +
                        std::to_string(max_dim) + "], got " + std::to_string(ndim));
    }
    if (!data.allFinite()) {
        throw DataError("input matrix contains non-finite values");
    }
    Matrix centered = data.rowwise() - data.colwise().mean();
    Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Matrix scores = svd.matrixU() * svd.singularValues().asDiagonal();
    const Matrix& loadings = svd.matrixV();
    for (int a = 0; a < ndim; ++a) {
        Eigen::Index peak = 0;
        loadings.col(a).cwiseAbs().maxCoeff(&peak);
        if (loadings(peak, a) < 0.0) {
            scores.col(a) = -scores.col(a);
        }
    }
    return scores.leftCols(ndim);
}

Matrix torgerson_mds(const DistanceMatrix& d, int ndim,
                     std::vector<double>* eigenvalues) {
    d.validate();
    const Eigen::Index n = d.values.rows();
    if (ndim < 1 || ndim > n - 1) {
        throw DataError("embedding dimension must lie in [1, n-1], got " +
                        std::to_string(ndim));
    }
    Matrix sq = d.values.array().square();
    Vector row_mean = sq.rowwise().mean();
    const double grand = sq.mean();
    Matrix b(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            b(i, j) = -0.5 * (sq(i, j) - row_mean(i) - row_mean(j) + grand);
        }
    }
    b = 0.5 * (b + b.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Matrix> es(b);
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition of the double-centered matrix failed");
    }
    // Solver returns ascending order; walk from the back for descending.
    std::vector<Eigen::Index> desc(static_cast<std::size_t>(n));
    std::iota(desc.begin(), desc.end(), Eigen::Index{0});
    std::reverse(desc.begin(), desc.end());

    if (eigenvalues) {
        eigenvalues->clear();
        for (Eigen::Index idx : desc) eigenvalues->push_back(es.eigenvalues()(idx));
    }
    if (es.eigenvalues()(desc[static_cast<std::size_t>(ndim - 1)]) < 0.0) {
        std::ostringstream msg;
        msg << "classical scaling needs " << ndim
            << " nonnegative eigenvalues; spectrum (descending):";
        for (Eigen::Index idx : desc) msg << ' ' << es.eigenvalues()(idx);
        throw NumericalError(msg.str());
    }

    Matrix coords(n, ndim);
    for (int a = 0; a < ndim; ++a) {
        const Eigen::Index idx = desc[static_cast<std::size_t>(a)];
        Vector v = es.eigenvectors().col(idx);
        // Deterministic sign: largest-magnitude entry positive.
        Eigen::Index peak = 0;
        v.cwiseAbs().maxCoeff(&peak);
        if (v(peak) < 0.0) v = -v;
        coords.col(a) = v * std::sqrt(es.eigenvalues()(idx));
    }
    return coords;
}

}  // namespace comds
