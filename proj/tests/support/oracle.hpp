#pragma once

// Independent reference implementations used only by tests. Everything here
// is deliberately written the "slow and obvious" way, with different
// formulas and different accumulation orders than the library, so that a
// shared bug cannot hide on both sides of a comparison.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "comds/types.hpp"

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// ---- stress objectives -------------------------------------------------

// Fitted distance via sum of w_a^2 (z_ia - z_ja)^2; the library multiplies
// the rows by w first, so the roundoff paths differ.
inline double fitted_distance(const MatrixXd& z, const VectorXd& w,
                              int i, int j) {
    double acc = 0.0;
    for (int a = 0; a < z.cols(); ++a) {
        const double diff = z(i, a) - z(j, a);
        acc += w(a) * w(a) * diff * diff;
    }
    return std::sqrt(acc);
}

inline double comds_stress(const MatrixXd& z, const std::vector<VectorXd>& w,
                           const std::vector<MatrixXd>& d) {
    double total = 0.0;
    for (std::size_t m = 0; m < d.size(); ++m) {
        for (int i = 0; i < z.rows(); ++i) {
            for (int j = i + 1; j < z.rows(); ++j) {
                const double r = d[m](i, j) - fitted_distance(z, w[m], i, j);
                total += r * r;
            }
        }
    }
    return total;
}

inline double locomds_stress(const MatrixXd& z, const std::vector<VectorXd>& w,
                             const std::vector<MatrixXd>& d,
                             const std::vector<Eigen::Matrix<bool, Eigen::Dynamic,
                                                             Eigen::Dynamic>>& masks,
                             const std::vector<double>& t) {
    double total = 0.0;
    for (std::size_t m = 0; m < d.size(); ++m) {
        for (int i = 0; i < z.rows(); ++i) {
            for (int j = i + 1; j < z.rows(); ++j) {
                const double fd = fitted_distance(z, w[m], i, j);
                if (masks[m](i, j)) {
                    const double r = d[m](i, j) - fd;
                    total += r * r;
                } else {
                    total -= t[m] * fd;
                }
            }
        }
    }
    return total;
}

// ---- order statistics ---------------------------------------------------

// Quantile with linear interpolation between order statistics (the same
// convention as numpy's default), written against a sorted copy.
inline double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    if (v.size() == 1) return v[0];
    const double h = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size();
    return m % 2 == 1 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

// ---- neighborhoods ------------------------------------------------------

// Brute-force k nearest neighbors with a full stable sort per row.
inline std::vector<std::set<int>> knn(const MatrixXd& d, int k) {
    const int n = static_cast<int>(d.rows());
    std::vector<std::set<int>> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<double, int>> cand;
        for (int j = 0; j < n; ++j) {
            if (j != i) cand.emplace_back(d(i, j), j);
        }
        std::sort(cand.begin(), cand.end());
        for (int r = 0; r < k; ++r) {
            out[static_cast<std::size_t>(i)].insert(cand[static_cast<std::size_t>(r)].second);
        }
    }
    return out;
}

inline double lcmc_overlap(const MatrixXd& dx, const MatrixXd& dz, int k) {
    const auto sx = knn(dx, k);
    const auto sz = knn(dz, k);
    long long inter = 0;
    for (std::size_t i = 0; i < sx.size(); ++i) {
        for (int j : sx[i]) {
            if (sz[i].count(j)) ++inter;
        }
    }
    return static_cast<double>(inter) /
           (static_cast<double>(k) * static_cast<double>(sx.size()));
}

// ---- correlations -------------------------------------------------------

// Pearson through the raw-moment identity, a different roundoff path than
// the library's centered accumulation.
inline double pearson_raw(const std::vector<double>& x, const std::vector<double>& y) {
    const double m = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    const double cov = sxy - sx * sy / m;
    const double vx = sxx - sx * sx / m;
    const double vy = syy - sy * sy / m;
    return cov / std::sqrt(vx * vy);
}

inline std::vector<double> ranks_with_ties(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> out(v.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t q = i; q <= j; ++q) out[idx[q]] = r;
        i = j + 1;
    }
    return out;
}

inline std::vector<double> upper(const MatrixXd& d) {
    std::vector<double> out;
    for (int i = 0; i < d.rows(); ++i) {
        for (int j = i + 1; j < d.cols(); ++j) out.push_back(d(i, j));
    }
    return out;
}

inline double spearman(const MatrixXd& dx, const MatrixXd& dz) {
    return pearson_raw(ranks_with_ties(upper(dx)), ranks_with_ties(upper(dz)));
}

inline double mantel_r(const MatrixXd& dx, const MatrixXd& dz) {
    return pearson_raw(upper(dx), upper(dz));
}

// One-sided exhaustive permutation p-value: the share of simultaneous
// row/column relabelings of dz whose correlation with dx reaches the
// observed one. Recomputes the full correlation per permutation.
inline double mantel_exhaustive_p(const MatrixXd& dx, const MatrixXd& dz) {
    const int n = static_cast<int>(dx.rows());
    const double observed = mantel_r(dx, dz);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    long long reached = 0, total = 0;
    do {
        MatrixXd shuffled(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                shuffled(i, j) = dz(perm[static_cast<std::size_t>(i)],
                                    perm[static_cast<std::size_t>(j)]);
            }
        }
        if (mantel_r(dx, shuffled) >= observed) ++reached;
        ++total;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(reached) / static_cast<double>(total);
}

// ---- triplets -----------------------------------------------------------

inline int sgn(double a, double b) { return a < b ? -1 : (a > b ? 1 : 0); }

inline double exhaustive_triplets(const MatrixXd& dx, const MatrixXd& dz) {
    const int n = static_cast<int>(dx.rows());
    long long keep = 0, total = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            for (int k = j + 1; k < n; ++k) {
                if (k == i) continue;
                ++total;
                if (sgn(dx(i, j), dx(i, k)) == sgn(dz(i, j), dz(i, k))) ++keep;
            }
        }
    }
    return static_cast<double>(keep) / static_cast<double>(total);
}

// ---- alignment ----------------------------------------------------------

// Similarity-transform alignment (translation, rotation/reflection, scale)
// of a onto b; returns the root mean squared residual.
inline double procrustes_rmse(MatrixXd a, MatrixXd b) {
    a.rowwise() -= a.colwise().mean().eval();
    b.rowwise() -= b.colwise().mean().eval();
    Eigen::JacobiSVD<MatrixXd> svd(a.transpose() * b,
                                   Eigen::ComputeFullU | Eigen::ComputeFullV);
    const MatrixXd rot = svd.matrixU() * svd.matrixV().transpose();
    const double denom = a.squaredNorm();
    const double scale = denom > 0.0 ? svd.singularValues().sum() / denom : 1.0;
    const MatrixXd resid = scale * a * rot - b;
    return std::sqrt(resid.squaredNorm() / static_cast<double>(a.rows()));
}

// ---- clustering ---------------------------------------------------------

struct KMeansFit {
    std::vector<int> labels;
    double inertia = std::numeric_limits<double>::infinity();
};

// Lloyd iterations from k distinct seeded points, best of `restarts` runs.
inline KMeansFit kmeans(const MatrixXd& x, int k, int restarts, std::uint64_t seed) {
    const int n = static_cast<int>(x.rows());
    KMeansFit best;
    std::mt19937_64 eng(seed);
    for (int run = 0; run < restarts; ++run) {
        std::vector<int> start;
        while (static_cast<int>(start.size()) < k) {
            const int c = static_cast<int>(eng() % static_cast<std::uint64_t>(n));
            if (std::find(start.begin(), start.end(), c) == start.end()) {
                start.push_back(c);
            }
        }
        MatrixXd centers(k, x.cols());
        for (int c = 0; c < k; ++c) centers.row(c) = x.row(start[static_cast<std::size_t>(c)]);
        std::vector<int> labels(static_cast<std::size_t>(n), -1);
        for (int iter = 0; iter < 200; ++iter) {
            bool changed = false;
            for (int i = 0; i < n; ++i) {
                int arg = 0;
                double bestd = (x.row(i) - centers.row(0)).squaredNorm();
                for (int c = 1; c < k; ++c) {
                    const double d2 = (x.row(i) - centers.row(c)).squaredNorm();
                    if (d2 < bestd) {
                        bestd = d2;
                        arg = c;
                    }
                }
                if (labels[static_cast<std::size_t>(i)] != arg) {
                    labels[static_cast<std::size_t>(i)] = arg;
                    changed = true;
                }
            }
            if (!changed) break;
            for (int c = 0; c < k; ++c) {
                Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(x.cols());
                int count = 0;
                for (int i = 0; i < n; ++i) {
                    if (labels[static_cast<std::size_t>(i)] == c) {
                        mean += x.row(i);
                        ++count;
                    }
                }
                if (count > 0) centers.row(c) = mean / count;
            }
        }
        double inertia = 0.0;
        for (int i = 0; i < n; ++i) {
            inertia += (x.row(i) - centers.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
        }
        if (inertia < best.inertia) {
            best.inertia = inertia;
            best.labels = labels;
        }
    }
    return best;
}

// Adjusted Rand index from the pair-counting contingency identity.
inline double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    const auto relabel = [](const std::vector<int>& v) {
        std::vector<int> out(v.size());
        std::vector<int> seen;
        for (std::size_t i = 0; i < v.size(); ++i) {
            auto it = std::find(seen.begin(), seen.end(), v[i]);
            if (it == seen.end()) {
                seen.push_back(v[i]);
                out[i] = static_cast<int>(seen.size()) - 1;
            } else {
                out[i] = static_cast<int>(it - seen.begin());
            }
        }
        return std::make_pair(out, static_cast<int>(seen.size()));
    };
    const auto [la, ka] = relabel(a);
    const auto [lb, kb] = relabel(b);
    std::vector<std::vector<long long>> table(static_cast<std::size_t>(ka),
                                              std::vector<long long>(static_cast<std::size_t>(kb), 0));
    for (std::size_t i = 0; i < la.size(); ++i) {
        ++table[static_cast<std::size_t>(la[i])][static_cast<std::size_t>(lb[i])];
    }
    const auto choose2 = [](long long v) { return v * (v - 1) / 2; };
    long long sum_cells = 0, sum_rows = 0, sum_cols = 0;
    for (int r = 0; r < ka; ++r) {
        long long row_total = 0;
        for (int c = 0; c < kb; ++c) {
            sum_cells += choose2(table[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
            row_total += table[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        }
        sum_rows += choose2(row_total);
    }
    for (int c = 0; c < kb; ++c) {
        long long col_total = 0;
        for (int r = 0; r < ka; ++r) {
            col_total += table[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        }
        sum_cols += choose2(col_total);
    }
    const double all_pairs = static_cast<double>(choose2(static_cast<long long>(la.size())));
    const double expected = static_cast<double>(sum_rows) * static_cast<double>(sum_cols) / all_pairs;
    const double maximum = 0.5 * (static_cast<double>(sum_rows) + static_cast<double>(sum_cols));
    return (static_cast<double>(sum_cells) - expected) / (maximum - expected);
}

// ---- exhaustive grid reference for tiny consensus instances -------------

struct GridMin {
    double stress = std::numeric_limits<double>::infinity();
    std::vector<double> z;
};

// Minimum, over all 1-D configurations on the grid {-3 + 0.05 k} for 5
// points, of the summed per-view stress with each view's scalar weight set
// to its closed-form optimum. The objective only sees coordinate
// differences, so any configuration can be shifted until its smallest
// coordinate sits at -3 and the shift stays on the grid; scanning the five
// "coordinate s pinned to -3" slabs therefore covers every distance pattern
// in the full box.
inline GridMin grid_min_consensus_1d(const std::vector<MatrixXd>& d) {
    constexpr int kSteps = 121;
    constexpr int kPoints = 5;
    std::vector<double> values(kSteps);
    for (int s = 0; s < kSteps; ++s) values[static_cast<std::size_t>(s)] = -3.0 + 0.05 * s;
    // |v_a - v_b| table.
    static thread_local std::vector<double> gtab;
    gtab.assign(static_cast<std::size_t>(kSteps) * kSteps, 0.0);
    for (int a = 0; a < kSteps; ++a) {
        for (int b = 0; b < kSteps; ++b) {
            gtab[static_cast<std::size_t>(a) * kSteps + b] =
                std::abs(values[static_cast<std::size_t>(a)] - values[static_cast<std::size_t>(b)]);
        }
    }
    const std::size_t views = d.size();
    std::vector<double> sum_d2(views, 0.0);
    for (std::size_t m = 0; m < views; ++m) {
        for (int i = 0; i < kPoints; ++i) {
            for (int j = i + 1; j < kPoints; ++j) {
                sum_d2[m] += d[m](i, j) * d[m](i, j);
            }
        }
    }

    GridMin best;
    int index[kPoints];
    // Prefix sums over the pair set as coordinates are pinned one by one:
    // level l pins free coordinate l and accounts for its pairs with every
    // coordinate pinned earlier.
    for (int s = 0; s < kPoints; ++s) {
        int order[kPoints];
        order[0] = s;
        int pos = 1;
        for (int i = 0; i < kPoints; ++i) {
            if (i != s) order[pos++] = i;
        }
        index[s] = 0;  // value -3
        double g2_prefix[kPoints] = {0, 0, 0, 0, 0};
        std::vector<double> dg_prefix(static_cast<std::size_t>(kPoints) * views, 0.0);

        const auto enter_level = [&](int level) {
            const int pi = order[level];
            double g2 = g2_prefix[level - 1];
            for (std::size_t m = 0; m < views; ++m) {
                dg_prefix[static_cast<std::size_t>(level) * views + m] =
                    dg_prefix[static_cast<std::size_t>(level - 1) * views + m];
            }
            for (int q = 0; q < level; ++q) {
                const int pj = order[q];
                const double g =
                    gtab[static_cast<std::size_t>(index[pi]) * kSteps + index[pj]];
                g2 += g * g;
                for (std::size_t m = 0; m < views; ++m) {
                    dg_prefix[static_cast<std::size_t>(level) * views + m] +=
                        d[m](pi, pj) * g;
                }
            }
            g2_prefix[level] = g2;
        };

        for (int i1 = 0; i1 < kSteps; ++i1) {
            index[order[1]] = i1;
            enter_level(1);
            for (int i2 = 0; i2 < kSteps; ++i2) {
                index[order[2]] = i2;
                enter_level(2);
                for (int i3 = 0; i3 < kSteps; ++i3) {
                    index[order[3]] = i3;
                    enter_level(3);
                    for (int i4 = 0; i4 < kSteps; ++i4) {
                        index[order[4]] = i4;
                        enter_level(4);
                        const double g2 = g2_prefix[4];
                        double total = 0.0;
                        if (g2 > 0.0) {
                            for (std::size_t m = 0; m < views; ++m) {
                                const double dg = dg_prefix[4 * views + m];
                                total += sum_d2[m] - dg * dg / g2;
                            }
                        } else {
                            for (std::size_t m = 0; m < views; ++m) total += sum_d2[m];
                        }
                        if (total < best.stress) {
                            best.stress = total;
                            best.z.assign(kPoints, 0.0);
                            for (int q = 0; q < kPoints; ++q) {
                                best.z[static_cast<std::size_t>(q)] =
                                    values[static_cast<std::size_t>(index[q])];
                            }
                        }
                    }
                }
            }
        }
    }
    return best;
}

// ---- library-type adapters ------------------------------------------------

// Convenience overloads that unwrap the library structs and forward to the
// raw-Eigen reference implementations above.

inline double comds_stress(const MatrixXd& z,
                           const std::vector<comds::DiagonalScaling>& w,
                           const std::vector<comds::DistanceMatrix>& d) {
    std::vector<VectorXd> weights;
    std::vector<MatrixXd> values;
    for (const auto& s : w) weights.push_back(s.weights);
    for (const auto& m : d) values.push_back(m.values);
    return comds_stress(z, weights, values);
}

inline double locomds_stress(const MatrixXd& z,
                             const std::vector<comds::DiagonalScaling>& w,
                             const std::vector<comds::DistanceMatrix>& d,
                             const std::vector<comds::NeighborhoodMask>& masks,
                             const std::vector<double>& t) {
    std::vector<VectorXd> weights;
    std::vector<MatrixXd> values;
    std::vector<Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>> mk;
    for (const auto& s : w) weights.push_back(s.weights);
    for (const auto& m : d) values.push_back(m.values);
    for (const auto& m : masks) mk.push_back(m.mask);
    return locomds_stress(z, weights, values, mk, t);
}

}  // namespace oracle
