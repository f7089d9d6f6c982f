#include "comds/stress.hpp"

#include <cmath>
#include <string>

#include "comds/distances.hpp"
#include "comds/errors.hpp"
#include "detail.hpp"

namespace comds {

namespace {

void check_shapes(const Matrix& config,
                  const std::vector<DiagonalScaling>& scalings,
                  const std::vector<DistanceMatrix>& distances) {
    if (distances.empty()) {
        throw DataError("no distance matrices supplied");
    }
    if (scalings.size() != distances.size()) {
        throw DataError("got " + std::to_string(scalings.size()) +
                        " scaling vectors for " + std::to_string(distances.size()) +
                        " views");
    }
    for (std::size_t m = 0; m < distances.size(); ++m) {
        const std::string who = "view " + std::to_string(m + 1);
        if (distances[m].values.rows() != config.rows()) {
            throw DataError(who + " has " + std::to_string(distances[m].values.rows()) +
                            " points but the configuration has " +
                            std::to_string(config.rows()) + " rows");
        }
        if (scalings[m].weights.size() != config.cols()) {
            throw DataError(who + " scaling has " +
                            std::to_string(scalings[m].weights.size()) +
                            " weights but the configuration has " +
                            std::to_string(config.cols()) + " columns");
        }
    }
}

} // namespace

double comds_stress(const Matrix& config,
                    const std::vector<DiagonalScaling>& scalings,
                    const std::vector<DistanceMatrix>& distances) {
    check_shapes(config, scalings, distances);
    const Eigen::Index n = config.rows();
    double total = 0.0;
    for (std::size_t m = 0; m < distances.size(); ++m) {
        const Matrix y = detail::weighted_rows(config, scalings[m].weights);
        const Matrix& d = distances[m].values;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double r = d(i, j) - detail::row_distance(y, i, j);
                total += r * r;
            }
        }
    }
    return total;
}

double locomds_stress(const Matrix& config,
                      const std::vector<DiagonalScaling>& scalings,
                      const std::vector<DistanceMatrix>& distances,
                      const std::vector<NeighborhoodMask>& masks,
                      const std::vector<double>& t) {
    check_shapes(config, scalings, distances);
    if (masks.size() != distances.size() || t.size() != distances.size()) {
        throw DataError("masks and repulsion weights must match the view count " +
                        std::to_string(distances.size()));
    }
    const Eigen::Index n = config.rows();
    double total = 0.0;
    for (std::size_t m = 0; m < distances.size(); ++m) {
        if (masks[m].mask.rows() != n) {
            throw DataError("view " + std::to_string(m + 1) + " mask has " +
                            std::to_string(masks[m].mask.rows()) + " points but the configuration has " +
                            std::to_string(n) + " rows");
        }
        const Matrix y = detail::weighted_rows(config, scalings[m].weights);
        const Matrix& d = distances[m].values;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double fitted = detail::row_distance(y, i, j);
                if (masks[m].mask(i, j)) {
                    const double r = d(i, j) - fitted;
                    total += r * r;
                } else {
                    total -= t[m] * fitted;
                }
            }
        }
    }
    return total;
}

namespace {

std::vector<NeighborhoodMask> masks_for(const ConsensusFit& fit,
                                        const std::vector<DistanceMatrix>& distances,
                                        const std::vector<NeighborhoodMask>& masks) {
    if (!masks.empty()) {
        if (masks.size() != distances.size()) {
            throw DataError("got " + std::to_string(masks.size()) + " masks for " +
                            std::to_string(distances.size()) + " views");
        }
        return masks;
    }
    if (!fit.local_params.has_value()) {
        throw DataError("local fit carries no neighborhood parameters and no masks were supplied");
    }
    std::vector<NeighborhoodMask> rebuilt;
    rebuilt.reserve(distances.size());
    for (const auto& d : distances) {
        rebuilt.push_back(neighborhood_mask(d, fit.local_params->percentile));
    }
    return rebuilt;
}

// Accumulates each pair's contribution through cb(i, j, value).
template <typename Fn>
void scan_pairs(const ConsensusFit& fit,
                const std::vector<DistanceMatrix>& distances,
                const std::vector<NeighborhoodMask>& masks_in,
                Fn&& cb) {
    check_shapes(fit.configuration, fit.scalings, distances);
    const Eigen::Index n = fit.configuration.rows();
    const bool local = fit.method == Method::LoCoMDS;
    std::vector<NeighborhoodMask> masks;
    if (local) masks = masks_for(fit, distances, masks_in);
    for (std::size_t m = 0; m < distances.size(); ++m) {
        const Matrix y = detail::weighted_rows(fit.configuration, fit.scalings[m].weights);
        const Matrix& d = distances[m].values;
        const double tm = local ? fit.local_params->t.at(m) : 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double fitted = detail::row_distance(y, i, j);
                double value;
                if (!local || masks[m].mask(i, j)) {
                    const double r = d(i, j) - fitted;
                    value = r * r;
                } else {
                    value = -tm * fitted;
                }
                cb(m, i, j, value);
            }
        }
    }
}

} // namespace

Vector stress_per_point(const ConsensusFit& fit,
                        const std::vector<DistanceMatrix>& distances,
                        const std::vector<NeighborhoodMask>& masks) {
    Vector out = Vector::Zero(fit.configuration.rows());
    scan_pairs(fit, distances, masks,
               [&](std::size_t, Eigen::Index i, Eigen::Index j, double v) {
                   out(i) += v;
                   out(j) += v;
               });
    return out;
}

Vector stress_per_view(const ConsensusFit& fit,
                       const std::vector<DistanceMatrix>& distances,
                       const std::vector<NeighborhoodMask>& masks) {
    Vector out = Vector::Zero(static_cast<Eigen::Index>(distances.size()));
    scan_pairs(fit, distances, masks,
               [&](std::size_t m, Eigen::Index, Eigen::Index, double v) {
                   out(static_cast<Eigen::Index>(m)) += v;
               });
    return out;
}

std::pair<Matrix, std::vector<DiagonalScaling>> gauge_fix(
    const Matrix& raw_config, std::vector<DiagonalScaling> scalings) {
    Matrix z = raw_config;
    const Eigen::Index n = z.rows();
    if (n < 1) {
        throw DataError("empty configuration");
    }
    for (Eigen::Index a = 0; a < z.cols(); ++a) {
        if (z.col(a).maxCoeff() == z.col(a).minCoeff()) {
            throw DataError("configuration column " + std::to_string(a + 1) +
                            " has zero variance");
        }
        z.col(a).array() -= z.col(a).mean();
        const double rms = std::sqrt(z.col(a).squaredNorm() / static_cast<double>(n));
        if (rms == 0.0) {
            throw DataError("configuration column " + std::to_string(a + 1) +
                            " has zero variance");
        }
        z.col(a) /= rms;
        for (auto& s : scalings) {
            if (s.weights.size() != raw_config.cols()) {
                throw DataError("scaling length " + std::to_string(s.weights.size()) +
                                " does not match configuration width " +
                                std::to_string(raw_config.cols()));
            }
            s.weights(a) *= rms;
        }
    }
    for (auto& s : scalings) {
        s.weights = s.weights.cwiseAbs();
    }
    return {std::move(z), std::move(scalings)};
}

}  // namespace comds
