#pragma once

#include "hardcomplete/graph.hpp"
#include "hardcomplete/gram.hpp"
#include "hardcomplete/matrix.hpp"

#include <cstdint>
#include <optional>

namespace hardcomplete {

/// Shared knobs for the heuristic searches. Restart t derives its seed from
/// (seed, t); the best run by residual wins, ties going to the lower index.
struct SolverConfig {
    int rank_budget = 1;
    double coeff_bound = 1.0;
    int max_iter = 300;
    double tol = 1e-10;
    std::uint64_t seed = 0;
    int restarts = 1;
};

struct CompletionResult {
    DenseMatrix b;
    double rmse_sum = 0.0;
    int best_restart = 0;
    bool bound_rescaled = false;      ///< final factors scaled down to honor |B| ≤ c
    std::vector<double> restart_rmse; ///< final rmse_sum per restart (success-rate view)
};

/// Best-effort rank-≤r completion minimizing Σ_Ω (A−B)² by alternating least
/// squares over two n×r factors. The returned matrix always honors the
/// coefficient bound (the product is rescaled if the unconstrained optimum
/// overshoots, which preserves its rank). No optimality guarantee.
CompletionResult complete_bounded_rank(const PartialMatrix& pm, const SolverConfig& cfg);

struct GramSolveResult {
    VectorAssignment va;
    double max_residual = 0.0;
    double sum_sq = 0.0;
    int best_restart = 0;
};

/// Best-effort Gram-vector search in R^dim: seeded gradient descent with an
/// adaptive step on Σ (⟨u_a,u_b⟩ − target)², restarted cfg.restarts times.
GramSolveResult solve_gram_system(const GramConstraintSystem& sys, int dim,
                                  const SolverConfig& cfg);

/// Exhaustive lexicographic-first proper k-coloring, or nullopt if none.
/// Guarded to n·log2(k) ≤ 25 bits of search space.
std::optional<Coloring> brute_coloring(const Graph& g, int k);

/// Exhaustive exact split (rational arithmetic), or nullopt. Guarded to
/// n ≤ 24. Deterministic: first match in increasing subset-mask order.
std::optional<PartitionSplit> brute_partition(const PartitionInstance& inst);

/// Exhaustive satisfying ±1 assignment (every clause's signed sum = k−2), or
/// nullopt. Guarded to n_vars ≤ 24; first match with all-+1 tried first.
std::optional<Assignment> brute_one_in_k(const OneInKSatInstance& inst);

} // namespace hardcomplete
