#include "comds/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

#include "comds/baselines.hpp"
#include "comds/errors.hpp"
#include "comds/rng.hpp"
#include "comds/stress.hpp"
#include "detail.hpp"

namespace comds {

namespace detail {

std::vector<int> union_components(const std::vector<NeighborhoodMask>& masks,
                                  Eigen::Index n) {
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    if (masks.empty()) {
        std::fill(comp.begin(), comp.end(), 0);
        return comp;
    }
    int next = 0;
    std::vector<Eigen::Index> stack;
    for (Eigen::Index s = 0; s < n; ++s) {
        if (comp[static_cast<std::size_t>(s)] >= 0) continue;
        comp[static_cast<std::size_t>(s)] = next;
        stack.assign(1, s);
        while (!stack.empty()) {
            const Eigen::Index i = stack.back();
            stack.pop_back();
            for (Eigen::Index j = 0; j < n; ++j) {
                if (comp[static_cast<std::size_t>(j)] >= 0) continue;
                bool linked = false;
                for (const auto& m : masks) {
                    if (m.mask(i, j)) { linked = true; break; }
                }
                if (linked) {
                    comp[static_cast<std::size_t>(j)] = next;
                    stack.push_back(j);
                }
            }
        }
        ++next;
    }
    return comp;
}

int component_count(const BoolMatrix& adjacency) {
    const Eigen::Index n = adjacency.rows();
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    int next = 0;
    std::vector<Eigen::Index> stack;
    for (Eigen::Index s = 0; s < n; ++s) {
        if (comp[static_cast<std::size_t>(s)] >= 0) continue;
        comp[static_cast<std::size_t>(s)] = next;
        stack.assign(1, s);
        while (!stack.empty()) {
            const Eigen::Index i = stack.back();
            stack.pop_back();
            for (Eigen::Index j = 0; j < n; ++j) {
                if (comp[static_cast<std::size_t>(j)] < 0 && adjacency(i, j)) {
                    comp[static_cast<std::size_t>(j)] = next;
                    stack.push_back(j);
                }
            }
        }
        ++next;
    }
    return next;
}

} // namespace detail

namespace {

constexpr double kWeightGuard = 1e-10;  // relative denominator floor, weight updates
constexpr double kTraceSlack = 1e-10;   // relative slack in the descent check
constexpr double kPinvCut = 1e-10;      // eigenvalue cutoff relative to the largest

// The complete-graph Laplacian nI - J has integer entries, stored exactly.
bool is_complete_laplacian(const Matrix& v) {
    const Eigen::Index n = v.rows();
    if (v.cols() != n || n < 1) return false;
    const double deg = static_cast<double>(n - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (v(i, i) != deg) return false;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (v(i, j) != -1.0 || v(j, i) != -1.0) return false;
        }
    }
    return true;
}

Matrix eig_pinv_apply(const Matrix& a, const Matrix& rhs) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition failed in a pseudoinverse solve");
    }
    const Vector& lam = es.eigenvalues();
    const double cut = kPinvCut * std::max(lam.cwiseAbs().maxCoeff(), 0.0);
    Matrix coef = es.eigenvectors().transpose() * rhs;
    for (Eigen::Index k = 0; k < lam.size(); ++k) {
        if (lam(k) > cut) {
            coef.row(k) /= lam(k);
        } else {
            coef.row(k).setZero();
        }
    }
    return es.eigenvectors() * coef;
}

} // namespace

std::vector<Matrix> build_v(Method mode,
                            const std::vector<NeighborhoodMask>* masks,
                            int n, int views) {
    if (n < 2 || views < 1) {
        throw DataError("quadratic blocks need n >= 2 and at least one view");
    }
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(views));
    if (mode == Method::CoMDS) {
        Matrix block = Matrix::Constant(n, n, -1.0);
        block.diagonal().setConstant(static_cast<double>(n - 1));
        for (int m = 0; m < views; ++m) out.push_back(block);
        return out;
    }
    if (masks == nullptr || static_cast<int>(masks->size()) != views) {
        throw DataError("local mode needs one neighborhood mask per view");
    }
    for (int m = 0; m < views; ++m) {
        const BoolMatrix& mask = (*masks)[static_cast<std::size_t>(m)].mask;
        if (mask.rows() != n || mask.cols() != n) {
            throw DataError("view " + std::to_string(m + 1) + " mask is " +
                            std::to_string(mask.rows()) + "x" + std::to_string(mask.cols()) +
                            ", expected " + std::to_string(n));
        }
        Matrix block = Matrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            double degree = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j != i && mask(i, j)) {
                    block(i, j) = -1.0;
                    degree += 1.0;
                }
            }
            block(i, i) = degree;
        }
        out.push_back(std::move(block));
    }
    return out;
}

std::vector<Matrix> build_b(Method mode, const Matrix& stacked_config,
                            const std::vector<DistanceMatrix>& distances,
                            const std::vector<NeighborhoodMask>* masks,
                            const std::vector<double>* t) {
    const int views = static_cast<int>(distances.size());
    if (views < 1) {
        throw DataError("no distance matrices supplied");
    }
    const Eigen::Index n = distances[0].values.rows();
    if (stacked_config.rows() != static_cast<Eigen::Index>(views) * n) {
        throw DataError("stacked configuration has " +
                        std::to_string(stacked_config.rows()) + " rows, expected " +
                        std::to_string(static_cast<Eigen::Index>(views) * n));
    }
    if (mode == Method::LoCoMDS &&
        (masks == nullptr || t == nullptr ||
         static_cast<int>(masks->size()) != views ||
         static_cast<int>(t->size()) != views)) {
        throw DataError("local mode needs one mask and one repulsion weight per view");
    }
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(views));
    for (int m = 0; m < views; ++m) {
        const Matrix y = stacked_config.middleRows(static_cast<Eigen::Index>(m) * n, n);
        const Matrix& d = distances[static_cast<std::size_t>(m)].values;
        Matrix block = Matrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double cur = detail::row_distance(y, i, j);
                if (cur <= 0.0) continue;
                double num;
                if (mode == Method::CoMDS || (*masks)[static_cast<std::size_t>(m)].mask(i, j)) {
                    num = d(i, j);
                } else {
                    num = 0.5 * (*t)[static_cast<std::size_t>(m)];
                }
                const double entry = -num / cur;
                block(i, j) = entry;
                block(j, i) = entry;
            }
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            block(i, i) = -(block.row(i).sum() - block(i, i));
        }
        out.push_back(std::move(block));
    }
    return out;
}

Matrix guttman_step(const std::vector<Matrix>& v_blocks,
                    const std::vector<Matrix>& b_blocks,
                    const Matrix& stacked_config) {
    if (v_blocks.empty() || v_blocks.size() != b_blocks.size()) {
        throw DataError("quadratic and linear block counts differ");
    }
    const Eigen::Index n = v_blocks[0].rows();
    const auto views = static_cast<Eigen::Index>(v_blocks.size());
    if (stacked_config.rows() != views * n) {
        throw DataError("stacked configuration has " +
                        std::to_string(stacked_config.rows()) + " rows, expected " +
                        std::to_string(views * n));
    }
    Matrix out(stacked_config.rows(), stacked_config.cols());
    for (Eigen::Index m = 0; m < views; ++m) {
        const Matrix y = stacked_config.middleRows(m * n, n);
        const Matrix target = b_blocks[static_cast<std::size_t>(m)] * y;
        if (is_complete_laplacian(v_blocks[static_cast<std::size_t>(m)])) {
            // pinv(nI - J) x = (x - colmean(x) 1) / n for zero-sum x; the
            // column means also remove any component outside the range.
            Matrix sol = target;
            sol.rowwise() -= target.colwise().mean();
            sol /= static_cast<double>(n);
            out.middleRows(m * n, n) = sol;
        } else {
            out.middleRows(m * n, n) =
                eig_pinv_apply(v_blocks[static_cast<std::size_t>(m)], target);
        }
    }
    return out;
}

ConstrainedUpdate constrained_update(
    const std::vector<Matrix>& guttman_targets,
    const std::vector<Matrix>& v_blocks, const Matrix& current_z,
    const std::vector<DiagonalScaling>& current_w, int inner_iters,
    const std::vector<Matrix>* linear_targets) {
    const std::size_t views = v_blocks.size();
    if (views == 0 || guttman_targets.size() != views || current_w.size() != views) {
        throw DataError("block counts do not match the view count");
    }
    if (inner_iters < 1) {
        throw DataError("inner iteration count must be positive");
    }
    const Eigen::Index n = current_z.rows();
    const Eigen::Index p = current_z.cols();

    // Linear terms: either the raw products B Ztilde, or V Zbar. On a
    // connected graph these are equal; on a disconnected one only the raw
    // products are faithful to the objective.
    std::vector<Matrix> lins;
    lins.reserve(views);
    for (std::size_t m = 0; m < views; ++m) {
        if (linear_targets) {
            lins.push_back((*linear_targets)[m]);
        } else {
            lins.push_back(v_blocks[m] * guttman_targets[m]);
        }
        if (lins.back().rows() != n || lins.back().cols() != p) {
            throw DataError("view " + std::to_string(m + 1) +
                            " target does not match the configuration shape");
        }
    }

    std::vector<double> vnorm(views);
    for (std::size_t m = 0; m < views; ++m) {
        vnorm[m] = 2.0 * std::max(v_blocks[m].diagonal().maxCoeff(), 0.0);
    }

    ConstrainedUpdate result;
    result.z = current_z;
    result.w = current_w;

    for (int pass = 0; pass < inner_iters; ++pass) {
        for (Eigen::Index a = 0; a < p; ++a) {
            Vector za = result.z.col(a);
            for (std::size_t m = 0; m < views; ++m) {
                const double den = za.dot(v_blocks[m] * za);
                if (den > kWeightGuard * za.squaredNorm() * vnorm[m]) {
                    result.w[m].weights(a) = za.dot(lins[m].col(a)) / den;
                } else {
                    ++result.skipped_weight_updates;
                }
            }
            Matrix quad = Matrix::Zero(n, n);
            Vector rhs = Vector::Zero(n);
            for (std::size_t m = 0; m < views; ++m) {
                const double wa = result.w[m].weights(a);
                quad += (wa * wa) * v_blocks[m];
                rhs += wa * lins[m].col(a);
            }
            if (quad.diagonal().maxCoeff() > 0.0) {
                result.z.col(a) = eig_pinv_apply(quad, rhs);
            }
        }
    }
    return result;
}

namespace {

struct ViewContext {
    bool complete = false;   // neighborhood graph covers every pair
    Matrix v;                // Laplacian block; empty for complete views
    double vnorm = 0.0;      // 2 * max degree
};

} // namespace

ConsensusFit fit(const std::vector<DistanceMatrix>& distances,
                 const SolverSettings& settings, Method mode,
                 const std::optional<LocalSpec>& local) {
    const std::size_t views = distances.size();
    if (views == 0) {
        throw DataError("no distance matrices supplied");
    }
    const Eigen::Index n = distances[0].values.rows();
    if (n < 3) {
        throw DataError("consensus fit needs at least 3 points, got " +
                        std::to_string(n));
    }
    for (std::size_t m = 0; m < views; ++m) {
        distances[m].validate("view " + std::to_string(m + 1) + " distance matrix");
        if (distances[m].values.rows() != n) {
            throw DataError("view " + std::to_string(m + 1) + " has " +
                            std::to_string(distances[m].values.rows()) +
                            " points but view 1 has " + std::to_string(n));
        }
    }
    const Eigen::Index p = settings.ndim;
    if (p < 1 || p > n - 1) {
        throw DataError("embedding dimension must lie in [1, n-1], got " +
                        std::to_string(p));
    }
    if (!(settings.eps > 0.0)) {
        throw DataError("convergence tolerance must be positive");
    }
    if (settings.itmax < 1 || settings.als_inner_iters < 1) {
        throw DataError("iteration counts must be positive");
    }

    const bool local_mode = mode == Method::LoCoMDS;
    if (local_mode) {
        if (!local.has_value()) {
            throw DataError("local fit needs neighborhood masks and repulsion weights");
        }
        if (local->masks.size() != views || local->t.size() != views) {
            throw DataError("local fit needs one mask and one repulsion weight per view");
        }
        for (std::size_t m = 0; m < views; ++m) {
            if (local->masks[m].mask.rows() != n || local->masks[m].mask.cols() != n) {
                throw DataError("view " + std::to_string(m + 1) + " mask size does not match");
            }
            if (!std::isfinite(local->t[m])) {
                throw DataError("view " + std::to_string(m + 1) + " repulsion weight is not finite");
            }
        }
    }

    ConsensusFit result;
    result.method = mode;

    // Per-view quadratic blocks and connectivity diagnostics.
    std::vector<ViewContext> ctx(views);
    bool all_complete = true;
    if (local_mode) {
        std::vector<int> comp_counts(views);
        bool any_disconnected = false;
        for (std::size_t m = 0; m < views; ++m) {
            const BoolMatrix& mask = local->masks[m].mask;
            Eigen::Index edges = 0;
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j < n; ++j) {
                    if (j != i && mask(i, j)) ++edges;
                }
            }
            ctx[m].complete = edges == n * (n - 1);
            comp_counts[m] = detail::component_count(mask);
            if (comp_counts[m] > 1) any_disconnected = true;
            if (!ctx[m].complete) {
                all_complete = false;
                Matrix block = Matrix::Zero(n, n);
                for (Eigen::Index i = 0; i < n; ++i) {
                    double degree = 0.0;
                    for (Eigen::Index j = 0; j < n; ++j) {
                        if (j != i && mask(i, j)) {
                            block(i, j) = -1.0;
                            degree += 1.0;
                        }
                    }
                    block(i, i) = degree;
                }
                ctx[m].vnorm = 2.0 * block.diagonal().maxCoeff();
                ctx[m].v = std::move(block);
            } else {
                ctx[m].vnorm = 2.0 * static_cast<double>(n - 1);
            }
        }
        if (any_disconnected) {
            std::string counts;
            for (std::size_t m = 0; m < views; ++m) {
                if (m) counts += ", ";
                counts += std::to_string(comp_counts[m]);
            }
            result.warnings.push_back(
                "disconnected neighborhood graphs (components per view: " + counts +
                "); the local objective is unbounded below on such graphs, so the "
                "solver stops at the last non-increasing iterate");
        }
    } else {
        for (auto& c : ctx) {
            c.complete = true;
            c.vnorm = 2.0 * static_cast<double>(n - 1);
        }
    }

    // Union components; iterates are kept centered per component so the
    // majorizer chain stays exact (per-component translation is a null
    // direction of every quadratic block).
    std::vector<int> comps(static_cast<std::size_t>(n), 0);
    int ncomp = 1;
    if (local_mode) {
        comps = detail::union_components(local->masks, n);
        ncomp = 1 + *std::max_element(comps.begin(), comps.end());
    }
    std::vector<std::vector<Eigen::Index>> comp_members(static_cast<std::size_t>(ncomp));
    for (Eigen::Index i = 0; i < n; ++i) {
        comp_members[static_cast<std::size_t>(comps[static_cast<std::size_t>(i)])].push_back(i);
    }
    const auto center_per_component = [&](Matrix& z) {
        for (const auto& members : comp_members) {
            Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(z.cols());
            for (Eigen::Index i : members) mean += z.row(i);
            mean /= static_cast<double>(members.size());
            for (Eigen::Index i : members) z.row(i) -= mean;
        }
    };

    // Mean off-diagonal distance per view, used to scale the initial weights.
    std::vector<double> dbar(views);
    for (std::size_t m = 0; m < views; ++m) {
        const Matrix& d = distances[m].values;
        dbar[m] = (d.sum() - d.diagonal().sum()) / static_cast<double>(n * (n - 1));
        if (dbar[m] <= 0.0) {
            throw DataError("view " + std::to_string(m + 1) + " distances are all zero");
        }
    }

    // Initial configuration.
    Matrix z;
    if (settings.init == InitKind::TorgersonAverage) {
        Matrix avg = Matrix::Zero(n, n);
        for (std::size_t m = 0; m < views; ++m) {
            avg += distances[m].values / dbar[m];
        }
        avg /= static_cast<double>(views);
        z = torgerson_mds(DistanceMatrix{std::move(avg)}, static_cast<int>(p));
    } else {
        rng::Generator gen(rng::substream(settings.seed, 0));
        z.resize(n, p);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index a = 0; a < p; ++a) {
                z(i, a) = gen.normal();
            }
        }
    }
    center_per_component(z);

    // Initial weights: each view's mean fitted distance matches its mean
    // target distance.
    double mz = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            mz += detail::row_distance(z, i, j);
        }
    }
    mz /= static_cast<double>(n * (n - 1) / 2);
    std::vector<DiagonalScaling> w(views);
    if (mz > 0.0) {
        for (std::size_t m = 0; m < views; ++m) {
            w[m].weights = Vector::Constant(p, dbar[m] / mz);
        }
    } else {
        for (std::size_t m = 0; m < views; ++m) {
            w[m].weights = Vector::Ones(p);
        }
        result.warnings.push_back(
            "initial configuration is totally degenerate (all points coincide); "
            "weights start at 1");
    }

    const auto objective = [&](const Matrix& zz, const std::vector<DiagonalScaling>& ww) {
        return local_mode
                   ? locomds_stress(zz, ww, distances, local->masks, local->t)
                   : comds_stress(zz, ww, distances);
    };

    // Projector onto per-component mean removal, used by the local z solve.
    Matrix comp_proj;  // sum over components of (1/|c|) 1_c 1_c'
    const bool use_ridge = settings.ridge > 0.0;
    const bool closed_form_z = !local_mode ? !use_ridge : (all_complete && !use_ridge);
    if (local_mode && !closed_form_z && !use_ridge) {
        comp_proj = Matrix::Zero(n, n);
        for (const auto& members : comp_members) {
            const double inv = 1.0 / static_cast<double>(members.size());
            for (Eigen::Index i : members) {
                for (Eigen::Index j : members) {
                    comp_proj(i, j) = inv;
                }
            }
        }
    }

    result.stress_trace.push_back(objective(z, w));
    int skipped = 0;
    bool guard_fired = false;

    std::vector<Matrix> lins(views, Matrix::Zero(n, p));
    for (int it = 1; it <= settings.itmax; ++it) {
        const Matrix snap_z = z;
        const std::vector<DiagonalScaling> snap_w = w;

        // Linear terms B Ytilde, accumulated pair by pair. The numerator is
        // the target distance for attracting pairs and t/2 for repelling
        // ones; pairs currently at distance zero contribute nothing.
        for (std::size_t m = 0; m < views; ++m) {
            const Matrix y = detail::weighted_rows(z, w[m].weights);
            const Matrix& d = distances[m].values;
            Matrix& lin = lins[m];
            lin.setZero();
            const double half_t = local_mode ? 0.5 * local->t[m] : 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = i + 1; j < n; ++j) {
                    Eigen::RowVectorXd diff = y.row(i) - y.row(j);
                    const double cur = diff.norm();
                    if (cur <= 0.0) continue;
                    const double num =
                        (!local_mode || local->masks[m].mask(i, j)) ? d(i, j) : half_t;
                    const double scale = num / cur;
                    lin.row(i) += scale * diff;
                    lin.row(j) -= scale * diff;
                }
            }
        }

        for (int pass = 0; pass < settings.als_inner_iters; ++pass) {
            for (Eigen::Index a = 0; a < p; ++a) {
                // Weight updates, one view at a time. A degenerate quadratic
                // form is skipped; skipping a block never increases the
                // majorizer.
                Vector za = z.col(a);
                const double za_sq = za.squaredNorm();
                for (std::size_t m = 0; m < views; ++m) {
                    double den;
                    if (ctx[m].complete) {
                        const double s = za.sum();
                        den = static_cast<double>(n) * za_sq - s * s;
                    } else {
                        den = za.dot(ctx[m].v * za);
                    }
                    if (den > kWeightGuard * za_sq * ctx[m].vnorm) {
                        w[m].weights(a) = za.dot(lins[m].col(a)) / den;
                    } else {
                        ++skipped;
                    }
                }

                // Shared-column update.
                Vector rhs = Vector::Zero(n);
                double alpha = 0.0;
                for (std::size_t m = 0; m < views; ++m) {
                    const double wa = w[m].weights(a);
                    rhs += wa * lins[m].col(a);
                    alpha += wa * wa;
                }
                if (closed_form_z) {
                    // pinv(alpha (nI - J)) rhs = (rhs - mean 1) / (n alpha).
                    if (alpha > 0.0) {
                        const double mean = rhs.mean();
                        z.col(a) = (rhs.array() - mean) / (static_cast<double>(n) * alpha);
                    }
                    continue;
                }
                Matrix quad = Matrix::Zero(n, n);
                for (std::size_t m = 0; m < views; ++m) {
                    const double wa2 = w[m].weights(a) * w[m].weights(a);
                    if (wa2 == 0.0) continue;
                    if (ctx[m].complete) {
                        quad.array() += -wa2;
                        quad.diagonal().array() += wa2 * static_cast<double>(n);
                    } else {
                        quad += wa2 * ctx[m].v;
                    }
                }
                if (use_ridge) {
                    quad.diagonal().array() += settings.ridge;
                    Eigen::LLT<Matrix> llt(quad);
                    if (llt.info() == Eigen::Success) {
                        z.col(a) = llt.solve(rhs);
                    }
                    continue;
                }
                if (quad.diagonal().maxCoeff() <= 0.0) continue;
                // Shift by gamma on each component's mean direction: those
                // directions span the null space, so the shifted matrix is
                // positive definite and the shift never touches the
                // component of the solution we keep.
                const double gamma = quad.trace() / static_cast<double>(n);
                Matrix shifted = quad + gamma * comp_proj;
                Eigen::LLT<Matrix> llt(shifted);
                bool ok = false;
                Vector x;
                if (llt.info() == Eigen::Success) {
                    x = llt.solve(rhs);
                    x -= comp_proj * x;
                    const Vector rhs_proj = rhs - comp_proj * rhs;
                    const double resid = (quad * x - rhs_proj).norm();
                    ok = resid <= 1e-8 * (rhs_proj.norm() + 1e-30);
                }
                if (!ok) {
                    x = eig_pinv_apply(quad, rhs);
                }
                z.col(a) = x;
            }
        }

        const double value = objective(z, w);
        const double prev = result.stress_trace.back();
        const double slack = kTraceSlack * std::max(std::abs(prev), 1e-12);
        if (!std::isfinite(value) || value > prev + slack) {
            z = snap_z;
            w = snap_w;
            guard_fired = true;
            result.warnings.push_back(
                "descent guard fired at iteration " + std::to_string(it) +
                ": the objective would have " +
                (std::isfinite(value) ? std::string("increased") : std::string("diverged")) +
                "; returning the last stable iterate");
            break;
        }
        result.stress_trace.push_back(value);
        result.iterations = it;
        const double rel = std::abs(value - prev) / std::max(std::abs(prev), 1e-12);
        if (rel < settings.eps) {
            result.converged = true;
            break;
        }
    }
    (void)guard_fired;

    if (skipped > 0) {
        result.warnings.push_back("skipped " + std::to_string(skipped) +
                                  " weight updates with degenerate quadratic forms");
    }

    try {
        auto gauged = gauge_fix(z, w);
        result.configuration = std::move(gauged.first);
        result.scalings = std::move(gauged.second);
    } catch (const DataError& e) {
        throw NumericalError(std::string("fitted configuration collapsed: ") + e.what());
    }

    if (local_mode) {
        LocalParams params;
        params.tau = local->tau;
        params.percentile = local->masks[0].percentile;
        params.t = local->t;
        result.local_params = params;
    }
    return result;
}

}  // namespace comds
