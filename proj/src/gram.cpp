#include "hardcomplete/gram.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace hardcomplete {

PartitionInstance::PartitionInstance(std::vector<Rational> weights)
    : weights_(std::move(weights)) {
    if (weights_.size() < 2)
        throw std::invalid_argument("PartitionInstance: need at least two weights");
    for (const auto& w : weights_)
        if (!(w > Rational(0)))
            throw std::invalid_argument("PartitionInstance: weights must be positive");
}

Rational PartitionInstance::total() const {
    Rational sum(0);
    for (const auto& w : weights_) sum = sum + w;
    return sum;
}

std::vector<Rational> PartitionInstance::normalized_exact() const {
    const Rational sum = total();
    std::vector<Rational> out;
    out.reserve(weights_.size());
    for (const auto& w : weights_) out.push_back(w / sum);
    return out;
}

std::vector<double> PartitionInstance::normalized() const {
    std::vector<double> out;
    out.reserve(weights_.size());
    for (const auto& w : normalized_exact()) out.push_back(w.to_double());
    return out;
}

OneInKSatInstance::OneInKSatInstance(int k, int n_vars,
                                     std::vector<std::vector<Literal>> clauses)
    : k_(k), n_vars_(n_vars), clauses_(std::move(clauses)) {
    if (k < 3) throw std::invalid_argument("OneInKSatInstance: k must be >= 3");
    if (n_vars < 0) throw std::invalid_argument("OneInKSatInstance: negative variable count");
    for (const auto& clause : clauses_) {
        if (static_cast<int>(clause.size()) != k)
            throw std::invalid_argument("OneInKSatInstance: clause width != k");
        std::set<int> seen;
        for (const auto& lit : clause) {
            if (lit.var < 0 || lit.var >= n_vars)
                throw std::out_of_range("OneInKSatInstance: variable index out of range");
            if (lit.sign != 1 && lit.sign != -1)
                throw std::invalid_argument("OneInKSatInstance: literal sign must be ±1");
            if (!seen.insert(lit.var).second)
                throw std::invalid_argument("OneInKSatInstance: repeated variable in clause");
        }
    }
}

bool PartitionSplit::contains(int i) const {
    return std::find(in_set.begin(), in_set.end(), i) != in_set.end();
}

Rational PartitionSplit::imbalance(const PartitionInstance& inst) const {
    Rational diff(0);
    for (int i = 0; i < inst.size(); ++i) {
        if (contains(i))
            diff = diff + inst.weights()[i];
        else
            diff = diff - inst.weights()[i];
    }
    return diff;
}

bool Assignment::satisfies(const OneInKSatInstance& inst) const {
    if (static_cast<int>(values.size()) != inst.var_count()) return false;
    for (int v : values)
        if (v != 1 && v != -1) return false;
    for (const auto& clause : inst.clauses()) {
        int sum = 0;
        for (const auto& lit : clause) sum += lit.sign * values[lit.var];
        if (sum != inst.k() - 2) return false;
    }
    return true;
}

void GramConstraintSystem::add_label(const std::string& label) {
    if (label.empty()) throw std::invalid_argument("GramConstraintSystem: empty label");
    if (!index_.emplace(label, static_cast<int>(labels_.size())).second)
        throw std::invalid_argument("GramConstraintSystem: duplicate label '" + label + "'");
    labels_.push_back(label);
}

int GramConstraintSystem::label_index(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end())
        throw std::invalid_argument("GramConstraintSystem: unknown label '" + label + "'");
    return it->second;
}

void GramConstraintSystem::add_constraint(std::string a, std::string b, double target) {
    if (!has_label(a) || !has_label(b))
        throw std::invalid_argument("GramConstraintSystem: constraint references unknown label");
    if (!std::isfinite(target))
        throw std::invalid_argument("GramConstraintSystem: non-finite target");
    if (b < a) std::swap(a, b);
    constraints_.push_back({std::move(a), std::move(b), target});
}

VectorAssignment::VectorAssignment(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("VectorAssignment: dimension must be >= 1");
}

void VectorAssignment::set(const std::string& label, Eigen::VectorXd v) {
    if (v.size() != dim_)
        throw std::invalid_argument("VectorAssignment: vector dimension mismatch for '" + label + "'");
    if (!v.allFinite())
        throw std::invalid_argument("VectorAssignment: non-finite vector for '" + label + "'");
    vectors_[label] = std::move(v);
}

const Eigen::VectorXd& VectorAssignment::at(const std::string& label) const {
    auto it = vectors_.find(label);
    if (it == vectors_.end())
        throw std::invalid_argument("VectorAssignment: no vector for label '" + label + "'");
    return it->second;
}

ConstraintResiduals constraint_residuals(const GramConstraintSystem& sys,
                                         const VectorAssignment& va) {
    ConstraintResiduals res;
    for (const auto& cst : sys.constraints()) {
        const double err = std::abs(va.at(cst.a).dot(va.at(cst.b)) - cst.target);
        res.max_abs = std::max(res.max_abs, err);
        res.sum_sq += err * err;
    }
    return res;
}

DenseMatrix gram_matrix(const GramConstraintSystem& sys, const VectorAssignment& va) {
    const int n = static_cast<int>(sys.labels().size());
    DenseMatrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            g(i, j) = g(j, i) = va.at(sys.labels()[i]).dot(va.at(sys.labels()[j]));
    return g;
}

namespace labels {

std::string partition(int i, int j) {
    return "p" + std::to_string(i + 1) + ":" + std::to_string(j);
}

std::string csp_basis(int t, int i) {
    return "x" + std::to_string(t) + ":i" + std::to_string(i);
}

std::string csp_sum(int t, int i, int j, int sign) {
    return "x" + std::to_string(t) + ":s(" + std::to_string(i) + "," + std::to_string(j) +
           (sign > 0 ? ",+)" : ",-)");
}

std::string clause(int j) { return "C" + std::to_string(j); }

} // namespace labels

GramConstraintSystem partition_gadget(const PartitionInstance& inst) {
    const int n = inst.size();
    const std::vector<double> a = inst.normalized();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    GramConstraintSystem sys;
    for (int i = 0; i < n; ++i)
        for (int j = 1; j <= 3; ++j) sys.add_label(labels::partition(i, j));

    for (int i = 0; i < n; ++i)
        for (int j = 1; j <= 3; ++j)
            sys.add_constraint(labels::partition(i, j), labels::partition(i, j), 1.0);
    for (int i = 0; i < n; ++i)
        sys.add_constraint(labels::partition(i, 1), labels::partition(i, 2), 0.0);
    for (int i = 0; i < n; ++i) {
        sys.add_constraint(labels::partition(i, 3), labels::partition(i, 1), inv_sqrt2);
        sys.add_constraint(labels::partition(i, 3), labels::partition(i, 2), inv_sqrt2);
    }
    for (int i = 0; i < n; ++i) {
        const int next = (i + 1) % n;
        for (int j = 1; j <= 3; ++j)
            sys.add_constraint(labels::partition(i, j), labels::partition(next, j),
                               std::cos(a[i]));
    }

    PartitionMeta meta;
    meta.n = n;
    meta.weights = a;
    meta.weights_exact = inst.normalized_exact();
    meta.scale = inst.total();
    sys.meta = std::move(meta);
    return sys;
}

VectorAssignment partition_completeness(const PartitionInstance& inst,
                                        const PartitionSplit& split) {
    const Rational residue = split.imbalance(inst);
    if (residue != Rational(0))
        throw std::invalid_argument("partition_completeness: split is not exact, residue " +
                                    residue.str() + " of total " + inst.total().str());

    const int n = inst.size();
    const std::vector<double> a = inst.normalized();
    VectorAssignment va(2);
    double theta = 0.0;
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector2d u1(std::cos(theta), std::sin(theta));
        const Eigen::Vector2d u2(-std::sin(theta), std::cos(theta));
        va.set(labels::partition(i, 1), u1);
        va.set(labels::partition(i, 2), u2);
        va.set(labels::partition(i, 3), ((u1 + u2) / std::sqrt(2.0)).eval());
        theta += split.contains(i) ? a[i] : -a[i];
    }
    return va;
}

namespace {

/// p(i) = i+1 for odd i, i−1 for even i (1-based pairing of the 2k axes).
int paired_index(int i) { return (i % 2 == 1) ? i + 1 : i - 1; }

} // namespace

GramConstraintSystem csp_gadget(const OneInKSatInstance& inst) {
    const int k = inst.k();
    const int two_k = 2 * k;
    const int n = inst.var_count();
    const int m = inst.clause_count();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const double inv_sqrtk = 1.0 / std::sqrt(static_cast<double>(k));

    GramConstraintSystem sys;
    for (int t = 0; t <= n; ++t) {
        for (int i = 1; i <= two_k; ++i) sys.add_label(labels::csp_basis(t, i));
        for (int i = 1; i <= two_k; ++i)
            for (int j = i + 1; j <= two_k; ++j) {
                sys.add_label(labels::csp_sum(t, i, j, +1));
                sys.add_label(labels::csp_sum(t, i, j, -1));
            }
    }
    for (int j = 0; j <= m; ++j) sys.add_label(labels::clause(j));

    // internal variable constraints
    for (int t = 0; t <= n; ++t) {
        for (int i = 1; i <= two_k; ++i)
            sys.add_constraint(labels::csp_basis(t, i), labels::csp_basis(t, i), 1.0);
        for (int i = 1; i <= two_k; ++i)
            for (int j = i + 1; j <= two_k; ++j) {
                sys.add_constraint(labels::csp_sum(t, i, j, +1), labels::csp_sum(t, i, j, +1), 1.0);
                sys.add_constraint(labels::csp_sum(t, i, j, -1), labels::csp_sum(t, i, j, -1), 1.0);
                sys.add_constraint(labels::csp_basis(t, i), labels::csp_basis(t, j), 0.0);
                sys.add_constraint(labels::csp_sum(t, i, j, +1), labels::csp_basis(t, i), inv_sqrt2);
                sys.add_constraint(labels::csp_sum(t, i, j, +1), labels::csp_basis(t, j), inv_sqrt2);
                sys.add_constraint(labels::csp_sum(t, i, j, -1), labels::csp_basis(t, i), inv_sqrt2);
                sys.add_constraint(labels::csp_sum(t, i, j, -1), labels::csp_basis(t, j), -inv_sqrt2);
            }
    }

    // external variable constraints against the reference variable
    for (int t = 1; t <= n; ++t) {
        for (int i = 1; i <= two_k; ++i)
            for (int j = 1; j <= two_k; ++j)
                if (j != paired_index(i))
                    sys.add_constraint(labels::csp_basis(0, i), labels::csp_basis(t, j), 0.0);
        for (int i = 1; i <= two_k; i += 2)
            sys.add_constraint(labels::csp_sum(0, i, i + 1, +1), labels::csp_sum(t, i, i + 1, +1),
                               0.0);
    }
    // sums versus differences inside the reference block (odd index pairs);
    // the sum and the difference of two orthonormal vectors are orthogonal
    for (int i = 1; i <= two_k; i += 2)
        for (int j = i + 2; j <= two_k; j += 2)
            sys.add_constraint(labels::csp_sum(0, i, j, +1), labels::csp_sum(0, i, j, -1), 0.0);

    // internal clause constraints
    sys.add_constraint(labels::clause(0), labels::clause(0), 1.0);
    for (int g = 1; g <= k; ++g)
        sys.add_constraint(labels::clause(0), labels::csp_basis(0, 2 * g - 1), inv_sqrtk);
    for (int j = 1; j <= m; ++j) {
        const auto& clause = inst.clauses()[j - 1];
        sys.add_constraint(labels::clause(j), labels::clause(j), 1.0);
        for (int g = 1; g <= k; ++g)
            sys.add_constraint(labels::clause(j), labels::csp_basis(clause[g - 1].var + 1, 2 * g),
                               clause[g - 1].sign * inv_sqrtk);
    }

    // external clause constraints
    for (int j = 1; j <= m; ++j)
        sys.add_constraint(labels::clause(0), labels::clause(j), 1.0 - 2.0 / k);

    CspMeta meta;
    meta.k = k;
    meta.n_vars = n;
    meta.clauses = inst.clauses();
    sys.meta = std::move(meta);
    return sys;
}

VectorAssignment csp_completeness(const OneInKSatInstance& inst, const Assignment& f) {
    const int k = inst.k();
    const int two_k = 2 * k;
    if (static_cast<int>(f.values.size()) != inst.var_count())
        throw std::invalid_argument("csp_completeness: assignment size mismatch");
    for (int v : f.values)
        if (v != 1 && v != -1)
            throw std::invalid_argument("csp_completeness: assignment values must be ±1");
    for (int j = 0; j < inst.clause_count(); ++j) {
        int sum = 0;
        for (const auto& lit : inst.clauses()[j]) sum += lit.sign * f.values[lit.var];
        if (sum != k - 2)
            throw std::invalid_argument(
                "csp_completeness: assignment does not satisfy clause " + std::to_string(j + 1) +
                " (signed sum " + std::to_string(sum) + ", need " + std::to_string(k - 2) + ")");
    }

    VectorAssignment va(two_k);
    auto basis_vector = [&](int coord_1b) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(two_k);
        e(coord_1b - 1) = 1.0;
        return e;
    };

    // reference block: the standard basis
    for (int i = 1; i <= two_k; ++i) va.set(labels::csp_basis(0, i), basis_vector(i));
    // variable blocks: u_{(x,p(i))} = f(x)·e_i for odd i, −f(x)·e_i for even i
    for (int t = 1; t <= inst.var_count(); ++t) {
        const double fx = f.values[t - 1];
        for (int i = 1; i <= two_k; ++i) {
            const double s = (i % 2 == 1) ? fx : -fx;
            va.set(labels::csp_basis(t, paired_index(i)), (s * basis_vector(i)).eval());
        }
    }
    // sum vectors for every block
    for (int t = 0; t <= inst.var_count(); ++t)
        for (int i = 1; i <= two_k; ++i)
            for (int j = i + 1; j <= two_k; ++j) {
                const Eigen::VectorXd& ui = va.at(labels::csp_basis(t, i));
                const Eigen::VectorXd& uj = va.at(labels::csp_basis(t, j));
                va.set(labels::csp_sum(t, i, j, +1), ((ui + uj) / std::sqrt(2.0)).eval());
                va.set(labels::csp_sum(t, i, j, -1), ((ui - uj) / std::sqrt(2.0)).eval());
            }
    // clause vectors
    Eigen::VectorXd c0 = Eigen::VectorXd::Zero(two_k);
    for (int g = 1; g <= k; ++g) c0 += basis_vector(2 * g - 1);
    va.set(labels::clause(0), (c0 / std::sqrt(static_cast<double>(k))).eval());
    for (int j = 1; j <= inst.clause_count(); ++j) {
        const auto& clause = inst.clauses()[j - 1];
        Eigen::VectorXd c = Eigen::VectorXd::Zero(two_k);
        for (int g = 1; g <= k; ++g)
            c += clause[g - 1].sign * va.at(labels::csp_basis(clause[g - 1].var + 1, 2 * g));
        va.set(labels::clause(j), (c / std::sqrt(static_cast<double>(k))).eval());
    }
    return va;
}

GramConstraintSystem amplify_block_diagonal(const GramConstraintSystem& sys, int copies) {
    if (copies < 1) throw std::invalid_argument("amplify_block_diagonal: copies must be >= 1");
    if (copies == 1) return sys;

    auto block_label = [](int t, const std::string& l) {
        return "b" + std::to_string(t + 1) + "." + l;
    };

    GramConstraintSystem out;
    for (int t = 0; t < copies; ++t)
        for (const auto& l : sys.labels()) out.add_label(block_label(t, l));
    for (int t = 0; t < copies; ++t)
        for (const auto& cst : sys.constraints())
            out.add_constraint(block_label(t, cst.a), block_label(t, cst.b), cst.target);
    for (int t = 0; t < copies; ++t)
        for (int t2 = t + 1; t2 < copies; ++t2)
            for (const auto& la : sys.labels())
                for (const auto& lb : sys.labels())
                    out.add_constraint(block_label(t, la), block_label(t2, lb), 0.0);

    AmplifiedMeta meta;
    meta.copies = copies;
    if (std::holds_alternative<PartitionMeta>(sys.meta))
        meta.inner_kind = "partition";
    else if (std::holds_alternative<CspMeta>(sys.meta))
        meta.inner_kind = "eoks";
    else if (std::holds_alternative<AmplifiedMeta>(sys.meta))
        meta.inner_kind = "amplified";
    else
        meta.inner_kind = "custom";
    out.meta = std::move(meta);
    return out;
}

PartialMatrix amplify_block_diagonal(const PartialMatrix& pm, int copies) {
    if (copies < 1) throw std::invalid_argument("amplify_block_diagonal: copies must be >= 1");
    if (copies == 1) return pm;
    const int n = pm.dim();
    PartialMatrix out(copies * n, pm.coeff_bound());
    for (int t = 0; t < copies; ++t)
        for (const auto& [key, value] : pm.canonical_entries())
            out.reveal(t * n + key.first, t * n + key.second, value);
    for (int t = 0; t < copies; ++t)
        for (int t2 = t + 1; t2 < copies; ++t2)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) out.reveal(t * n + i, t2 * n + j, 0.0);
    return out;
}

PartialMatrix gram_system_to_partial(const GramConstraintSystem& sys) {
    const int n = static_cast<int>(sys.labels().size());
    if (n == 0) throw std::invalid_argument("gram_system_to_partial: system has no labels");
    double c = 1.0;
    for (const auto& cst : sys.constraints()) c = std::max(c, std::abs(cst.target));

    PartialMatrix pm(n, c);
    for (const auto& cst : sys.constraints()) {
        try {
            pm.reveal(sys.label_index(cst.a), sys.label_index(cst.b), cst.target);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("gram_system_to_partial: conflicting constraints on (" +
                                        cst.a + ", " + cst.b + ")");
        }
    }
    return pm;
}

} // namespace hardcomplete
