#include "comds/tuning.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include "comds/distances.hpp"
#include "comds/errors.hpp"
#include "comds/metrics.hpp"
#include "comds/solver.hpp"

namespace comds {

double t_from_tau(double tau, double pi, const DistanceMatrix& d,
                  const NeighborhoodMask& mask) {
    if (!(tau > 0.0)) {
        throw DataError("tau must be positive, got " + std::to_string(tau));
    }
    if (!(pi > 0.0) || pi >= 1.0) {
        throw DataError("the repulsion weight needs a percentile in (0, 1); pi=" +
                        std::to_string(pi) + " leaves no repulsion set");
    }
    const Eigen::Index n = d.values.rows();
    if (mask.mask.rows() != n || mask.mask.cols() != n) {
        throw DataError("mask size does not match the distance matrix");
    }
    std::vector<double> masked;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (mask.mask(i, j)) masked.push_back(d.values(i, j));
        }
    }
    if (masked.empty()) {
        throw DataError("mask selects no pairs; no median distance exists");
    }
    std::sort(masked.begin(), masked.end());
    const std::size_t m = masked.size();
    const double median = (m % 2 == 1)
                              ? masked[m / 2]
                              : 0.5 * (masked[m / 2 - 1] + masked[m / 2]);
    return pi / (1.0 - pi) * median * tau;
}

double adjusted_lcmc(const DistanceMatrix& original, const Matrix& embedding,
                     int k) {
    const DistanceMatrix dz = pairwise_distances(embedding);
    if (original.values.rows() != dz.values.rows()) {
        throw DataError("embedding has " + std::to_string(dz.values.rows()) +
                        " rows but the reference has " +
                        std::to_string(original.values.rows()));
    }
    const Eigen::Index n = original.values.rows();
    const auto curve = lcmc_curve(original, dz, {k});
    return curve[0].second -
           static_cast<double>(k) / static_cast<double>(n - 1);
}

double adjusted_lcmc(const Matrix& original, const Matrix& embedding, int k) {
    return adjusted_lcmc(pairwise_distances(original), embedding, k);
}

std::vector<int> default_k_grid(int n) {
    if (n < 3) {
        throw DataError("neighborhood grid needs at least 3 points, got " +
                        std::to_string(n));
    }
    std::vector<int> ks;
    if (n < 16) {
        const int top = std::min(5, n - 1);
        for (int k = 1; k <= top; ++k) ks.push_back(k);
        return ks;
    }
    ks = {1, 2, 5};
    const int hi = static_cast<int>(std::floor(0.7 * n));
    const double lo_log = std::log(10.0);
    const double hi_log = std::log(static_cast<double>(hi));
    for (int s = 0; s < 7; ++s) {
        const double v = std::exp(lo_log + (hi_log - lo_log) * s / 6.0);
        ks.push_back(static_cast<int>(std::llround(v)));
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
}

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("COMDS_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v < 1024) {
            return static_cast<int>(v);
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

std::string cell_label(double tau, double pi) {
    std::ostringstream os;
    os << "tau=" << tau << ", percentile=" << pi;
    return os.str();
}

} // namespace

TuningResult tune(const std::vector<DistanceMatrix>& distances,
                  const DistanceMatrix& original, const TuningGrid& grid,
                  const SolverSettings& settings, const TuningOptions& options) {
    if (distances.empty()) {
        throw DataError("no distance matrices supplied");
    }
    if (grid.taus.empty() || grid.percentiles.empty()) {
        throw DataError("the tuning grid is empty");
    }
    const Eigen::Index n = original.values.rows();
    for (std::size_t m = 0; m < distances.size(); ++m) {
        if (distances[m].values.rows() != n) {
            throw DataError("view " + std::to_string(m + 1) + " has " +
                            std::to_string(distances[m].values.rows()) +
                            " points but the reference has " + std::to_string(n));
        }
    }
    std::vector<int> ks = grid.k_values;
    if (ks.empty()) {
        ks = default_k_grid(static_cast<int>(n));
    } else {
        for (std::size_t q = 0; q < ks.size(); ++q) {
            if (ks[q] < 1 || ks[q] > n - 1) {
                throw DataError("k=" + std::to_string(ks[q]) +
                                " lies outside [1, n-1] for n=" + std::to_string(n));
            }
            if (q > 0 && ks[q] <= ks[q - 1]) {
                throw DataError("k values must be strictly increasing");
            }
        }
    }

    const std::size_t tn = grid.taus.size();
    const std::size_t pn = grid.percentiles.size();
    const double neg_inf = -std::numeric_limits<double>::infinity();

    TuningResult result;
    result.taus = grid.taus;
    result.percentiles = grid.percentiles;
    result.k_values = ks;
    result.scores.assign(tn, std::vector<std::vector<double>>(
                                 pn, std::vector<double>(ks.size(), neg_inf)));

    std::vector<std::optional<std::string>> failures(tn * pn);

    const auto run_cell = [&](std::size_t cell) {
        const std::size_t ti = cell / pn;
        const std::size_t pi_idx = cell % pn;
        const double tau = grid.taus[ti];
        const double pi = grid.percentiles[pi_idx];
        try {
            LocalSpec spec;
            spec.tau = tau;
            spec.masks.reserve(distances.size());
            spec.t.reserve(distances.size());
            for (const auto& d : distances) {
                spec.masks.push_back(neighborhood_mask(d, pi));
                spec.t.push_back(t_from_tau(tau, pi, d, spec.masks.back()));
            }
            const ConsensusFit fitted =
                fit(distances, settings, Method::LoCoMDS, spec);
            const DistanceMatrix dz = pairwise_distances(fitted.configuration);
            for (std::size_t q = 0; q < ks.size(); ++q) {
                const auto curve = lcmc_curve(original, dz, {ks[q]});
                result.scores[ti][pi_idx][q] =
                    curve[0].second -
                    static_cast<double>(ks[q]) / static_cast<double>(n - 1);
            }
        } catch (const std::exception& e) {
            failures[cell] = cell_label(tau, pi) + ": " + e.what();
        }
    };

    const std::size_t cells = tn * pn;
    const int threads = std::min<int>(resolve_threads(options.threads),
                                      static_cast<int>(cells));
    if (threads <= 1) {
        for (std::size_t cell = 0; cell < cells; ++cell) run_cell(cell);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t cell = next.fetch_add(1);
                    if (cell >= cells) break;
                    run_cell(cell);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    for (const auto& f : failures) {
        if (f.has_value()) result.failed_cells.push_back(*f);
    }
    if (result.failed_cells.size() == cells) {
        throw NumericalError("every tuning cell failed; first failure: " +
                             result.failed_cells.front());
    }

    // Optional truncation: drop k values past the first strict decrease of
    // the per-k best score.
    if (options.truncate_after_first_decrease && ks.size() > 1) {
        std::vector<double> best_at_k(ks.size(), neg_inf);
        for (std::size_t ti = 0; ti < tn; ++ti) {
            for (std::size_t pi_idx = 0; pi_idx < pn; ++pi_idx) {
                for (std::size_t q = 0; q < ks.size(); ++q) {
                    best_at_k[q] = std::max(best_at_k[q], result.scores[ti][pi_idx][q]);
                }
            }
        }
        std::size_t keep = ks.size();
        for (std::size_t q = 1; q < ks.size(); ++q) {
            if (best_at_k[q] < best_at_k[q - 1]) {
                keep = q;
                break;
            }
        }
        if (keep < ks.size()) {
            ks.resize(keep);
            result.k_values = ks;
            for (auto& per_tau : result.scores) {
                for (auto& per_pi : per_tau) {
                    per_pi.resize(keep);
                }
            }
        }
    }

    // One vote per k for the best cell; ties prefer the smaller percentile,
    // then the smaller tau.
    const auto better = [&](double score_a, std::size_t ta, std::size_t pa,
                            double score_b, std::size_t tb, std::size_t pb) {
        if (score_a != score_b) return score_a > score_b;
        if (grid.percentiles[pa] != grid.percentiles[pb]) {
            return grid.percentiles[pa] < grid.percentiles[pb];
        }
        return grid.taus[ta] < grid.taus[tb];
    };

    result.votes.assign(tn, std::vector<int>(pn, 0));
    for (std::size_t q = 0; q < ks.size(); ++q) {
        std::size_t best_t = 0;
        std::size_t best_p = 0;
        for (std::size_t ti = 0; ti < tn; ++ti) {
            for (std::size_t pi_idx = 0; pi_idx < pn; ++pi_idx) {
                if (ti == 0 && pi_idx == 0) continue;
                if (better(result.scores[ti][pi_idx][q], ti, pi_idx,
                           result.scores[best_t][best_p][q], best_t, best_p)) {
                    best_t = ti;
                    best_p = pi_idx;
                }
            }
        }
        ++result.votes[best_t][best_p];
    }

    std::size_t sel_t = 0;
    std::size_t sel_p = 0;
    for (std::size_t ti = 0; ti < tn; ++ti) {
        for (std::size_t pi_idx = 0; pi_idx < pn; ++pi_idx) {
            if (ti == 0 && pi_idx == 0) continue;
            const int a = result.votes[ti][pi_idx];
            const int b = result.votes[sel_t][sel_p];
            bool take = false;
            if (a != b) {
                take = a > b;
            } else if (grid.percentiles[pi_idx] != grid.percentiles[sel_p]) {
                take = grid.percentiles[pi_idx] < grid.percentiles[sel_p];
            } else {
                take = grid.taus[ti] < grid.taus[sel_t];
            }
            if (take) {
                sel_t = ti;
                sel_p = pi_idx;
            }
        }
    }
    result.selected_tau = static_cast<int>(sel_t);
    result.selected_percentile = static_cast<int>(sel_p);
    return result;
}

TuningResult tune(const std::vector<DistanceMatrix>& distances,
                  const Matrix& original, const TuningGrid& grid,
                  const SolverSettings& settings, const TuningOptions& options) {
    return tune(distances, pairwise_distances(original), grid, settings, options);
}

}  // namespace comds
