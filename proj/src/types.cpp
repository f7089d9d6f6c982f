#include "comds/types.hpp"

#include <cmath>
#include <string>

#include "comds/errors.hpp"

namespace comds {

namespace {

std::string view_name(const std::vector<std::string>& labels, std::size_t m) {
    if (m < labels.size() && !labels[m].empty()) {
        return "view '" + labels[m] + "'";
    }
    return "view " + std::to_string(m + 1);
}

} // namespace

void EmbeddingSet::validate() const {
    if (views.empty()) {
        throw DataError("embedding set contains no views");
    }
    const Eigen::Index rows = views.front().rows();
    if (rows < 3) {
        throw DataError("embedding set needs at least 3 samples, got " +
                        std::to_string(rows));
    }
    for (std::size_t m = 0; m < views.size(); ++m) {
        const Matrix& v = views[m];
        if (v.rows() != rows) {
            throw DataError(view_name(view_labels, m) + " has " +
                            std::to_string(v.rows()) + " rows but " +
                            view_name(view_labels, 0) + " has " +
                            std::to_string(rows));
        }
        if (v.cols() < 1) {
            throw DataError(view_name(view_labels, m) + " has no columns");
        }
        if (!v.allFinite()) {
            throw DataError(view_name(view_labels, m) +
                            " contains non-finite values");
        }
    }
    if (!sample_ids.empty() &&
        static_cast<Eigen::Index>(sample_ids.size()) != rows) {
        throw DataError("sample id list has " +
                        std::to_string(sample_ids.size()) + " entries but views have " +
                        std::to_string(rows) + " rows");
    }
}

void DistanceMatrix::validate(const std::string& name) const {
    const std::string who = name.empty() ? "distance matrix" : name;
    if (values.rows() != values.cols()) {
        throw DataError(who + " is not square: " + std::to_string(values.rows()) +
                        "x" + std::to_string(values.cols()));
    }
    const Eigen::Index size = values.rows();
    if (size < 2) {
        throw DataError(who + " must contain at least 2 points, got " +
                        std::to_string(size));
    }
    if (!values.allFinite()) {
        throw DataError(who + " contains non-finite values");
    }
    double scale = values.cwiseAbs().maxCoeff();
    if (scale < 1.0) scale = 1.0;
    const double tol = 1e-12 * scale;
    for (Eigen::Index i = 0; i < size; ++i) {
        if (std::abs(values(i, i)) > tol) {
            throw DataError(who + " has nonzero diagonal entry at row " +
                            std::to_string(i + 1));
        }
        for (Eigen::Index j = i + 1; j < size; ++j) {
            if (values(i, j) < 0.0 || values(j, i) < 0.0) {
                throw DataError(who + " has a negative entry at (" +
                                std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
            }
            if (std::abs(values(i, j) - values(j, i)) > tol) {
                throw DataError(who + " is not symmetric at (" +
                                std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
            }
        }
    }
}

} // namespace comds
