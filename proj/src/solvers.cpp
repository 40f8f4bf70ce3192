#include "hardcomplete/solvers.hpp"

#include "hardcomplete/rng.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hardcomplete {

namespace {

double rmse_on_omega(const PartialMatrix& pm, const Eigen::MatrixXd& left,
                     const Eigen::MatrixXd& right) {
    double sum = 0.0;
    for (const auto& [key, value] : pm.canonical_entries()) {
        const auto [i, j] = key;
        const double e1 = value - left.row(i).dot(right.row(j));
        sum += e1 * e1;
        if (i != j) {
            const double e2 = value - left.row(j).dot(right.row(i));
            sum += e2 * e2;
        }
    }
    return sum;
}

// Exact norm-constrained least squares for one factor row: minimize
// ‖G^{1/2} l − G^{-1/2} rhs‖ s.t. ‖l‖ ≤ cap, trust-region style. Radially
// shrinking the unconstrained solution is not the constrained minimizer and
// creates spurious ALS fixed points; the ridge path (G + λI)^{-1} rhs is.
Eigen::VectorXd solve_row_capped(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs,
                                 double cap, double ridge) {
    const int r = static_cast<int>(gram.rows());
    Eigen::VectorXd l =
        (gram + ridge * Eigen::MatrixXd::Identity(r, r)).ldlt().solve(rhs);
    if (l.norm() <= cap) return l;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    const Eigen::VectorXd q = es.eigenvectors().transpose() * rhs;
    auto norm_at = [&](double lam) {
        double s = 0.0;
        for (int d = 0; d < r; ++d) {
            const double term = q(d) / (std::max(es.eigenvalues()(d), 0.0) + lam);
            s += term * term;
        }
        return std::sqrt(s);
    };
    double lo = ridge, hi = std::max(1.0, ridge);
    while (norm_at(hi) > cap) hi *= 2.0;
    for (int step = 0; step < 80; ++step) {
        const double mid = 0.5 * (lo + hi);
        (norm_at(mid) > cap ? lo : hi) = mid;
    }
    Eigen::VectorXd scaled(r);
    for (int d = 0; d < r; ++d) scaled(d) = q(d) / (std::max(es.eigenvalues()(d), 0.0) + hi);
    return es.eigenvectors() * scaled;
}

} // namespace

CompletionResult complete_bounded_rank(const PartialMatrix& pm, const SolverConfig& cfg) {
    if (cfg.rank_budget < 1)
        throw std::invalid_argument("complete_bounded_rank: rank budget must be >= 1");
    if (!(cfg.coeff_bound > 0.0))
        throw std::invalid_argument("complete_bounded_rank: coefficient bound must be positive");

    const int n = pm.dim();
    const int r = cfg.rank_budget;
    const double c = cfg.coeff_bound;

    // revealed entries by row and by column (both orientations)
    std::vector<std::vector<std::pair<int, double>>> by_row(n), by_col(n);
    for (const auto& [key, value] : pm.canonical_entries()) {
        const auto [i, j] = key;
        by_row[i].emplace_back(j, value);
        by_col[j].emplace_back(i, value);
        if (i != j) {
            by_row[j].emplace_back(i, value);
            by_col[i].emplace_back(j, value);
        }
    }

    const double ridge = 1e-9 * c;
    CompletionResult best;
    best.rmse_sum = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart < std::max(1, cfg.restarts); ++restart) {
        Rng rng = rng_for_stream(cfg.seed, restart);
        const double init_scale = std::sqrt(c / r);
        Eigen::MatrixXd left(n, r), right(n, r);
        for (int i = 0; i < n; ++i)
            for (int d = 0; d < r; ++d) {
                left(i, d) = init_scale * rng.gaussian();
                right(i, d) = init_scale * rng.gaussian();
            }

        // ALS with row norms constrained to √c, so every entry of the
        // product stays within ±c (Cauchy-Schwarz) without breaking the rank.
        const double row_cap = std::sqrt(c);

        double prev = std::numeric_limits<double>::infinity();
        for (int sweep = 0; sweep < cfg.max_iter; ++sweep) {
            // solve each row of `left` against fixed `right`, then mirror
            for (int i = 0; i < n; ++i) {
                if (by_row[i].empty()) continue;
                Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(r, r);
                Eigen::VectorXd rhs = Eigen::VectorXd::Zero(r);
                for (const auto& [j, value] : by_row[i]) {
                    gram.noalias() += right.row(j).transpose() * right.row(j);
                    rhs.noalias() += value * right.row(j).transpose();
                }
                left.row(i) = solve_row_capped(gram, rhs, row_cap, ridge).transpose();
            }
            for (int j = 0; j < n; ++j) {
                if (by_col[j].empty()) continue;
                Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(r, r);
                Eigen::VectorXd rhs = Eigen::VectorXd::Zero(r);
                for (const auto& [i, value] : by_col[j]) {
                    gram.noalias() += left.row(i).transpose() * left.row(i);
                    rhs.noalias() += value * left.row(i).transpose();
                }
                right.row(j) = solve_row_capped(gram, rhs, row_cap, ridge).transpose();
            }

            const double cur = rmse_on_omega(pm, left, right);
            if (cur < cfg.tol) break;
            if (prev - cur < 1e-14 * std::max(1.0, prev)) break;
            prev = cur;
        }

        // Polish: optima sitting exactly on the norm cap converge slowly
        // under the constrained sweeps. Once in the right basin, plain ALS
        // homes in at full speed; keep its result only if the bound held.
        Eigen::MatrixXd left_p = left, right_p = right;
        prev = std::numeric_limits<double>::infinity();
        for (int sweep = 0; sweep < cfg.max_iter; ++sweep) {
            for (int i = 0; i < n; ++i) {
                if (by_row[i].empty()) continue;
                Eigen::MatrixXd gram = 1e-12 * c * Eigen::MatrixXd::Identity(r, r);
                Eigen::VectorXd rhs = Eigen::VectorXd::Zero(r);
                for (const auto& [j, value] : by_row[i]) {
                    gram.noalias() += right_p.row(j).transpose() * right_p.row(j);
                    rhs.noalias() += value * right_p.row(j).transpose();
                }
                left_p.row(i) = gram.ldlt().solve(rhs).transpose();
            }
            for (int j = 0; j < n; ++j) {
                if (by_col[j].empty()) continue;
                Eigen::MatrixXd gram = 1e-12 * c * Eigen::MatrixXd::Identity(r, r);
                Eigen::VectorXd rhs = Eigen::VectorXd::Zero(r);
                for (const auto& [i, value] : by_col[j]) {
                    gram.noalias() += left_p.row(i).transpose() * left_p.row(i);
                    rhs.noalias() += value * left_p.row(i).transpose();
                }
                right_p.row(j) = gram.ldlt().solve(rhs).transpose();
            }
            const double cur = rmse_on_omega(pm, left_p, right_p);
            if (cur < cfg.tol) break;
            if (prev - cur < 1e-14 * std::max(1.0, prev)) break;
            prev = cur;
        }
        if (max_abs(left_p * right_p.transpose()) <= c &&
            rmse_on_omega(pm, left_p, right_p) < rmse_on_omega(pm, left, right)) {
            left = std::move(left_p);
            right = std::move(right_p);
        }

        DenseMatrix b = left * right.transpose();
        bool rescaled = false;
        const double peak = max_abs(b);
        if (peak > c) { // cannot trigger after capping; kept as a hard guard
            b *= c / peak;
            rescaled = true;
        }
        double rmse = 0.0;
        for (const auto& [key, value] : pm.canonical_entries()) {
            const auto [i, j] = key;
            const double e = value - b(i, j);
            rmse += (i == j) ? e * e : 2.0 * e * e;
        }
        best.restart_rmse.push_back(rmse);

        if (rmse < best.rmse_sum) {
            best.b = std::move(b);
            best.rmse_sum = rmse;
            best.best_restart = restart;
            best.bound_rescaled = rescaled;
        }
    }
    return best;
}

GramSolveResult solve_gram_system(const GramConstraintSystem& sys, int dim,
                                  const SolverConfig& cfg) {
    if (dim < 1) throw std::invalid_argument("solve_gram_system: dimension must be >= 1");
    const int n = static_cast<int>(sys.labels().size());

    struct IndexedConstraint {
        int a, b;
        double target;
    };
    std::vector<IndexedConstraint> constraints;
    constraints.reserve(sys.constraints().size());
    for (const auto& cst : sys.constraints())
        constraints.push_back({sys.label_index(cst.a), sys.label_index(cst.b), cst.target});

    auto loss = [&](const Eigen::MatrixXd& x) {
        double f = 0.0;
        for (const auto& cst : constraints) {
            const double e = x.row(cst.a).dot(x.row(cst.b)) - cst.target;
            f += e * e;
        }
        return f;
    };

    GramSolveResult best{VectorAssignment(dim), std::numeric_limits<double>::infinity(),
                         std::numeric_limits<double>::infinity(), 0};

    for (int restart = 0; restart < std::max(1, cfg.restarts); ++restart) {
        Rng rng = rng_for_stream(cfg.seed, restart);
        Eigen::MatrixXd x(n, dim);
        for (int i = 0; i < n; ++i)
            for (int d = 0; d < dim; ++d) x(i, d) = rng.gaussian() / std::sqrt(dim);

        double lr = 0.05;
        double f = loss(x);
        for (int iter = 0; iter < cfg.max_iter && lr > 1e-14; ++iter) {
            Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, dim);
            for (const auto& cst : constraints) {
                const double e = x.row(cst.a).dot(x.row(cst.b)) - cst.target;
                if (cst.a == cst.b) {
                    grad.row(cst.a) += 4.0 * e * x.row(cst.a);
                } else {
                    grad.row(cst.a) += 2.0 * e * x.row(cst.b);
                    grad.row(cst.b) += 2.0 * e * x.row(cst.a);
                }
            }
            Eigen::MatrixXd trial = x - lr * grad;
            const double f_trial = loss(trial);
            if (f_trial < f) {
                x = std::move(trial);
                f = f_trial;
                lr *= 1.05;
            } else {
                lr *= 0.5;
            }
            if (f < cfg.tol * cfg.tol) break;
        }

        double max_res = 0.0;
        for (const auto& cst : constraints)
            max_res = std::max(max_res, std::abs(x.row(cst.a).dot(x.row(cst.b)) - cst.target));

        if (max_res < best.max_residual) {
            VectorAssignment va(dim);
            for (int i = 0; i < n; ++i) va.set(sys.labels()[i], x.row(i).transpose());
            best.va = std::move(va);
            best.max_residual = max_res;
            best.sum_sq = f;
            best.best_restart = restart;
        }
    }
    return best;
}

std::optional<Coloring> brute_coloring(const Graph& g, int k) {
    if (k < 1) throw std::invalid_argument("brute_coloring: k must be >= 1");
    const int n = g.vertex_count();
    if (n * std::log2(static_cast<double>(k)) > 25.0 + 1e-9)
        throw std::invalid_argument("brute_coloring: instance beyond the k^n enumeration guard");

    std::vector<std::vector<int>> earlier_neighbors(n);
    for (const auto& [i, j] : g.edges()) earlier_neighbors[j].push_back(i);

    std::vector<int> colors(n, -1);
    int v = 0;
    while (v >= 0) {
        if (v == n) {
            Coloring f{k, colors};
            return f;
        }
        bool advanced = false;
        for (int cand = colors[v] + 1; cand < k; ++cand) {
            bool ok = true;
            for (int u : earlier_neighbors[v])
                if (colors[u] == cand) {
                    ok = false;
                    break;
                }
            if (ok) {
                colors[v] = cand;
                ++v;
                advanced = true;
                break;
            }
        }
        if (!advanced) {
            colors[v] = -1;
            --v;
        }
    }
    return std::nullopt;
}

std::optional<PartitionSplit> brute_partition(const PartitionInstance& inst) {
    const int n = inst.size();
    if (n > 24) throw std::invalid_argument("brute_partition: n beyond the enumeration guard");

    const Rational total = inst.total();
    for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
        Rational in_sum(0);
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) in_sum = in_sum + inst.weights()[i];
        if (in_sum + in_sum == total) {
            PartitionSplit split;
            for (int i = 0; i < n; ++i)
                if (mask & (1u << i)) split.in_set.push_back(i);
            return split;
        }
    }
    return std::nullopt;
}

std::optional<Assignment> brute_one_in_k(const OneInKSatInstance& inst) {
    const int n = inst.var_count();
    if (n > 24) throw std::invalid_argument("brute_one_in_k: n beyond the enumeration guard");

    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        Assignment f;
        f.values.resize(n);
        for (int i = 0; i < n; ++i) f.values[i] = (mask & (1u << i)) ? -1 : 1;
        if (f.satisfies(inst)) return f;
    }
    return std::nullopt;
}

} // namespace hardcomplete
