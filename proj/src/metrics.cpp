#include "comds/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "comds/errors.hpp"
#include "comds/rng.hpp"

namespace comds {

namespace {

int sign_of(double a, double b) {
    if (a < b) return -1;
    if (a > b) return 1;
    return 0;
}

bool triplet_preserved(const Matrix& dx, const Matrix& dz, Eigen::Index i,
                       Eigen::Index j, Eigen::Index k, bool full_ordering) {
    if (sign_of(dx(i, j), dx(i, k)) != sign_of(dz(i, j), dz(i, k))) return false;
    if (!full_ordering) return true;
    return sign_of(dx(i, j), dx(j, k)) == sign_of(dz(i, j), dz(j, k)) &&
           sign_of(dx(i, k), dx(j, k)) == sign_of(dz(i, k), dz(j, k));
}

std::vector<double> upper_triangle(const DistanceMatrix& d) {
    const Eigen::Index n = d.values.rows();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            out.push_back(d.values(i, j));
        }
    }
    return out;
}

struct PearsonParts {
    double mean = 0.0;
    double sumsq = 0.0;  // centered sum of squares
};

PearsonParts centered_parts(const std::vector<double>& v, const std::string& who) {
    PearsonParts parts;
    parts.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    for (double x : v) {
        const double c = x - parts.mean;
        parts.sumsq += c * c;
    }
    if (parts.sumsq == 0.0) {
        throw DataError(who + " has zero variance over pairs");
    }
    return parts;
}

// r = Sxy / sqrt(Sxx * Syy), evaluated in exactly that form. When the two
// inputs are elementwise equal the numerator and both centered sums are the
// same value, and sqrt(fl(s*s)) == s in round-to-nearest, so r is exactly 1.
double pearson(const std::vector<double>& x, const std::vector<double>& y,
               const PearsonParts& px, const PearsonParts& py) {
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - px.mean) * (y[i] - py.mean);
    }
    return sxy / std::sqrt(px.sumsq * py.sumsq);
}

// Average ranks, ties sharing the mean rank of their run.
std::vector<double> average_ranks(const std::vector<double>& v) {
    const std::size_t m = v.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(m);
    std::size_t pos = 0;
    while (pos < m) {
        std::size_t end = pos + 1;
        while (end < m && v[order[end]] == v[order[pos]]) ++end;
        const double shared = 0.5 * (static_cast<double>(pos + 1) + static_cast<double>(end));
        for (std::size_t q = pos; q < end; ++q) {
            ranks[order[q]] = shared;
        }
        pos = end;
    }
    return ranks;
}

void check_same_size(const DistanceMatrix& dx, const DistanceMatrix& dz) {
    if (dx.values.rows() != dz.values.rows()) {
        throw DataError("distance matrices disagree on the point count: " +
                        std::to_string(dx.values.rows()) + " vs " +
                        std::to_string(dz.values.rows()));
    }
}

} // namespace

std::vector<std::vector<int>> knn_sets(const DistanceMatrix& d, int k) {
    const Eigen::Index n = d.values.rows();
    if (k < 1 || k > n - 1) {
        throw DataError("neighbor count must lie in [1, n-1]; got k=" +
                        std::to_string(k) + " with n=" + std::to_string(n));
    }
    std::vector<std::vector<int>> sets(static_cast<std::size_t>(n));
    std::vector<int> order(static_cast<std::size_t>(n - 1));
    for (Eigen::Index i = 0; i < n; ++i) {
        std::size_t pos = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) order[pos++] = static_cast<int>(j);
        }
        std::partial_sort(order.begin(), order.begin() + k, order.end(),
                          [&](int a, int b) {
                              const double da = d.values(i, a);
                              const double db = d.values(i, b);
                              if (da != db) return da < db;
                              return a < b;
                          });
        sets[static_cast<std::size_t>(i)].assign(order.begin(), order.begin() + k);
    }
    return sets;
}

double random_triplet_accuracy(const DistanceMatrix& dx,
                               const DistanceMatrix& dz,
                               int triplets_per_anchor, std::uint64_t seed,
                               bool full_ordering) {
    check_same_size(dx, dz);
    const Eigen::Index n = dx.values.rows();
    if (n < 3) {
        throw DataError("triplet accuracy needs at least 3 points");
    }
    if (triplets_per_anchor < 1) {
        throw DataError("triplets per anchor must be positive");
    }
    long long preserved = 0;
    const long long total =
        static_cast<long long>(n) * static_cast<long long>(triplets_per_anchor);
    for (Eigen::Index i = 0; i < n; ++i) {
        // One substream per anchor: the sample is independent of anchor
        // evaluation order.
        rng::Generator gen(rng::substream(seed, static_cast<std::uint64_t>(i) + 1));
        for (int s = 0; s < triplets_per_anchor; ++s) {
            std::uint64_t jr = gen.index(static_cast<std::uint64_t>(n - 1));
            Eigen::Index j = static_cast<Eigen::Index>(jr);
            if (j >= i) ++j;
            std::uint64_t kr = gen.index(static_cast<std::uint64_t>(n - 2));
            Eigen::Index k = static_cast<Eigen::Index>(kr);
            const Eigen::Index lo = std::min(i, j);
            const Eigen::Index hi = std::max(i, j);
            if (k >= lo) ++k;
            if (k >= hi) ++k;
            if (triplet_preserved(dx.values, dz.values, i, j, k, full_ordering)) {
                ++preserved;
            }
        }
    }
    return static_cast<double>(preserved) / static_cast<double>(total);
}

double exhaustive_triplet_accuracy(const DistanceMatrix& dx,
                                   const DistanceMatrix& dz,
                                   bool full_ordering) {
    check_same_size(dx, dz);
    const Eigen::Index n = dx.values.rows();
    if (n < 3) {
        throw DataError("triplet accuracy needs at least 3 points");
    }
    if (n > 30) {
        throw DataError("exhaustive triplets are limited to n <= 30, got " +
                        std::to_string(n));
    }
    long long preserved = 0;
    long long total = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            for (Eigen::Index k = j + 1; k < n; ++k) {
                if (k == i) continue;
                ++total;
                if (triplet_preserved(dx.values, dz.values, i, j, k, full_ordering)) {
                    ++preserved;
                }
            }
        }
    }
    return static_cast<double>(preserved) / static_cast<double>(total);
}

double spearman_distance_correlation(const DistanceMatrix& dx,
                                     const DistanceMatrix& dz) {
    check_same_size(dx, dz);
    const std::vector<double> rx = average_ranks(upper_triangle(dx));
    const std::vector<double> rz = average_ranks(upper_triangle(dz));
    const PearsonParts px = centered_parts(rx, "first distance matrix");
    const PearsonParts pz = centered_parts(rz, "second distance matrix");
    return pearson(rx, rz, px, pz);
}

std::vector<std::pair<int, double>> lcmc_curve(const DistanceMatrix& dx,
                                               const DistanceMatrix& dz,
                                               std::vector<int> k_values) {
    check_same_size(dx, dz);
    const Eigen::Index n = dx.values.rows();
    if (k_values.empty()) {
        for (int k = 2; k <= 20; k += 3) k_values.push_back(k);
    }
    std::vector<std::pair<int, double>> out;
    out.reserve(k_values.size());
    std::vector<char> member(static_cast<std::size_t>(n), 0);
    for (int k : k_values) {
        const auto sx = knn_sets(dx, k);
        const auto sz = knn_sets(dz, k);
        long long total = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (int j : sx[static_cast<std::size_t>(i)]) member[static_cast<std::size_t>(j)] = 1;
            for (int j : sz[static_cast<std::size_t>(i)]) total += member[static_cast<std::size_t>(j)];
            for (int j : sx[static_cast<std::size_t>(i)]) member[static_cast<std::size_t>(j)] = 0;
        }
        const double score = static_cast<double>(total) /
                             (static_cast<double>(k) * static_cast<double>(n));
        out.emplace_back(k, score);
    }
    return out;
}

double mean_lcmc(const DistanceMatrix& dx, const DistanceMatrix& dz,
                 const std::vector<int>& k_values) {
    const auto curve = lcmc_curve(dx, dz, k_values);
    double sum = 0.0;
    for (const auto& [k, score] : curve) sum += score;
    return sum / static_cast<double>(curve.size());
}

MantelResult mantel_statistic(const DistanceMatrix& d1, const DistanceMatrix& d2,
                              long permutations, std::uint64_t seed) {
    check_same_size(d1, d2);
    const Eigen::Index n = d1.values.rows();
    const std::vector<double> x = upper_triangle(d1);
    const std::vector<double> y = upper_triangle(d2);
    const PearsonParts px = centered_parts(x, "first distance matrix");
    const PearsonParts py = centered_parts(y, "second distance matrix");

    MantelResult result;
    result.r = pearson(x, y, px, py);
    if (permutations <= 0) {
        return result;
    }

    const auto permuted_r = [&](const std::vector<Eigen::Index>& perm) {
        double sxy = 0.0;
        std::size_t pos = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double yv = d2.values(perm[static_cast<std::size_t>(i)],
                                            perm[static_cast<std::size_t>(j)]);
                sxy += (x[pos] - px.mean) * (yv - py.mean);
                ++pos;
            }
        }
        return sxy / std::sqrt(px.sumsq * py.sumsq);
    };

    long long factorial = 1;
    bool fits = n <= 12;
    if (fits) {
        for (Eigen::Index i = 2; i <= n; ++i) factorial *= i;
    }
    long long reached = 0;
    long long replicates = 0;
    if (fits && permutations >= factorial) {
        std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), Eigen::Index{0});
        do {
            if (permuted_r(perm) >= result.r) ++reached;
            ++replicates;
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        rng::Generator gen(rng::substream(seed, 1));
        std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), Eigen::Index{0});
        for (long rep = 0; rep < permutations; ++rep) {
            rng::shuffle(perm, gen);
            if (permuted_r(perm) >= result.r) ++reached;
            ++replicates;
        }
    }
    result.p_value = static_cast<double>(reached) / static_cast<double>(replicates);
    return result;
}

}  // namespace comds
