#pragma once

#include "hardcomplete/matrix.hpp"
#include "hardcomplete/rational.hpp"

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace hardcomplete {

/// Inner-product equality constraint ⟨u_a, u_b⟩ = target on labeled vectors.
/// Stored with a ≤ b (lexicographic); a == b constrains a squared norm.
struct GramConstraint {
    std::string a;
    std::string b;
    double target = 0.0;
};

/// Positive weights a_1..a_n to be split into two equal-sum halves. Weights
/// are exact rationals; normalization (Σ = 1) is computed on demand.
class PartitionInstance {
public:
    explicit PartitionInstance(std::vector<Rational> weights);

    int size() const { return static_cast<int>(weights_.size()); }
    const std::vector<Rational>& weights() const { return weights_; }
    Rational total() const;
    std::vector<Rational> normalized_exact() const;
    std::vector<double> normalized() const;

private:
    std::vector<Rational> weights_;
};

/// A signed occurrence of a variable (0-based) in a clause.
struct Literal {
    int var = 0;
    int sign = 1;
};

/// Exact-one-in-k-SAT: every clause holds exactly k distinct variables and is
/// satisfied iff exactly one signed literal evaluates to −1 (signed sum k−2).
class OneInKSatInstance {
public:
    OneInKSatInstance(int k, int n_vars, std::vector<std::vector<Literal>> clauses);

    int k() const { return k_; }
    int var_count() const { return n_vars_; }
    int clause_count() const { return static_cast<int>(clauses_.size()); }
    const std::vector<std::vector<Literal>>& clauses() const { return clauses_; }

private:
    int k_;
    int n_vars_;
    std::vector<std::vector<Literal>> clauses_;
};

/// Subset I of item indices (0-based) for a partition split.
struct PartitionSplit {
    std::vector<int> in_set;

    bool contains(int i) const;
    /// Σ_{i∈I} a_i − Σ_{i∉I} a_i, exact.
    Rational imbalance(const PartitionInstance& inst) const;
};

/// Total ±1 assignment to the variables of a OneInKSatInstance.
struct Assignment {
    std::vector<int> values; ///< ±1 per variable, 0-based

    bool satisfies(const OneInKSatInstance& inst) const;
};

struct PartitionMeta {
    int n = 0;
    std::vector<double> weights;          ///< normalized, Σ = 1
    std::vector<Rational> weights_exact;  ///< normalized, exact
    Rational scale;                       ///< original Σ a_i recorded by normalization
};

struct CspMeta {
    int k = 0;
    int n_vars = 0;
    std::vector<std::vector<Literal>> clauses;
};

struct AmplifiedMeta {
    int copies = 1;
    std::string inner_kind;
};

using SystemMeta = std::variant<std::monostate, PartitionMeta, CspMeta, AmplifiedMeta>;

/// Labeled inner-product constraint system: the "list of inner product
/// constraints" view of a partial PSD matrix.
class GramConstraintSystem {
public:
    void add_label(const std::string& label);
    bool has_label(const std::string& label) const { return index_.count(label) > 0; }
    int label_index(const std::string& label) const;
    void add_constraint(std::string a, std::string b, double target);

    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<GramConstraint>& constraints() const { return constraints_; }

    SystemMeta meta;

private:
    std::vector<std::string> labels_;
    std::map<std::string, int> index_;
    std::vector<GramConstraint> constraints_;
};

/// Assignment of a vector in R^dim to every label of a system.
class VectorAssignment {
public:
    explicit VectorAssignment(int dim);

    int dim() const { return dim_; }
    std::size_t size() const { return vectors_.size(); }
    void set(const std::string& label, Eigen::VectorXd v);
    const Eigen::VectorXd& at(const std::string& label) const;
    bool contains(const std::string& label) const { return vectors_.count(label) > 0; }
    const std::map<std::string, Eigen::VectorXd>& vectors() const { return vectors_; }

private:
    int dim_;
    std::map<std::string, Eigen::VectorXd> vectors_;
};

/// Max and sum-of-squares constraint violation of va on sys. Throws if a
/// referenced label has no vector.
struct ConstraintResiduals {
    double max_abs = 0.0;
    double sum_sq = 0.0;
};
ConstraintResiduals constraint_residuals(const GramConstraintSystem& sys,
                                         const VectorAssignment& va);

/// Gram matrix ⟨u_a, u_b⟩ over the system's labels, in label order.
DenseMatrix gram_matrix(const GramConstraintSystem& sys, const VectorAssignment& va);

/// Label naming shared between gadget constructors and decoders.
namespace labels {
/// Partition item i (0-based), component j ∈ {1,2,3}.
std::string partition(int i, int j);
/// CSP variable block t (0 is the reference variable), basis index i ∈ [1..2k].
std::string csp_basis(int t, int i);
/// CSP normalized sum/difference vector of basis i<j; sign is +1 or -1.
std::string csp_sum(int t, int i, int j, int sign);
/// Clause label; 0 is the reference clause.
std::string clause(int j);
} // namespace labels

/// The cyclic-rotation gadget for Partition: 3n unit vectors with per-item
/// orthogonal pairs, sum couplings, and consecutive-rotation constraints
/// cos a_i (indices wrap modulo n). Weights are normalized to Σ = 1; the
/// original scale is recorded in the meta.
GramConstraintSystem partition_gadget(const PartitionInstance& inst);

/// The 2-dimensional satisfying vectors for an exact split: each item's
/// orthonormal pair is the running rotation by θ_i = Σ_{j<i} s_j a_j. The
/// second basis vector is the quarter-turn of the first, which satisfies the
/// orthogonality constraint exactly at every angle. Throws (with the exact
/// residue) if the split is not exactly balanced.
VectorAssignment partition_completeness(const PartitionInstance& inst,
                                        const PartitionSplit& split);

/// The Exact-one-in-k-SAT gadget: per-variable 2k-dimensional orthonormal
/// bases tied to the reference variable through paired-index and summed-
/// vector constraints, plus clause vectors constrained to ⟨u_C0,u_C⟩ = 1−2/k.
/// Requires k ≥ 3.
GramConstraintSystem csp_gadget(const OneInKSatInstance& inst);

/// The satisfying 2k-dimensional vectors for an assignment with exactly one
/// −1 literal per clause. Throws, naming a violated clause, otherwise.
VectorAssignment csp_completeness(const OneInKSatInstance& inst, const Assignment& f);

/// Disjoint union of `copies` relabeled copies with all cross-block inner
/// products constrained to zero.
GramConstraintSystem amplify_block_diagonal(const GramConstraintSystem& sys, int copies);

/// Block-diagonal matrix form: cross-block entries revealed as zero.
PartialMatrix amplify_block_diagonal(const PartialMatrix& pm, int copies);

/// The matrix view of a constraint system: an N×N partial matrix whose
/// revealed entries are exactly the constraint targets. Conflicting duplicate
/// constraints raise an error; consistent duplicates merge.
PartialMatrix gram_system_to_partial(const GramConstraintSystem& sys);

} // namespace hardcomplete
