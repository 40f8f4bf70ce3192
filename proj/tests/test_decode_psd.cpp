#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hardcomplete/decode_psd.hpp"
#include "hardcomplete/rng.hpp"

#include <cmath>

using namespace hardcomplete;

namespace {

std::pair<PartitionInstance, PartitionSplit> planted_partition(int n, Rng& rng) {
    PartitionSplit split;
    for (int i = 0; i < n; ++i)
        if (rng.uniform01() < 0.5) split.in_set.push_back(i);
    if (split.in_set.empty()) split.in_set.push_back(0);
    if (static_cast<int>(split.in_set.size()) == n) split.in_set.pop_back();

    std::vector<std::int64_t> w(n);
    for (int i = 0; i < n; ++i) w[i] = 1 + static_cast<std::int64_t>(rng.below(20));
    std::int64_t diff = 0;
    for (int i = 0; i < n; ++i) diff += split.contains(i) ? w[i] : -w[i];
    for (int i = 0; i < n && diff != 0; ++i) {
        if (diff > 0 && !split.contains(i)) {
            w[i] += diff;
            diff = 0;
        } else if (diff < 0 && split.contains(i)) {
            w[i] -= diff;
            diff = 0;
        }
    }
    std::vector<Rational> weights;
    for (auto x : w) weights.push_back(Rational(x));
    return {PartitionInstance(std::move(weights)), std::move(split)};
}

std::pair<OneInKSatInstance, Assignment> planted_eoks(int k, int n_vars, int m, Rng& rng) {
    Assignment f;
    f.values.resize(n_vars);
    for (int i = 0; i < n_vars; ++i) f.values[i] = rng.uniform01() < 0.5 ? 1 : -1;

    std::vector<std::vector<Literal>> clauses;
    for (int j = 0; j < m; ++j) {
        std::vector<int> vars;
        while (static_cast<int>(vars.size()) < k) {
            int v = static_cast<int>(rng.below(n_vars));
            if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
        }
        const int neg_pos = static_cast<int>(rng.below(k));
        std::vector<Literal> clause;
        for (int g = 0; g < k; ++g)
            clause.push_back({vars[g], g == neg_pos ? -f.values[vars[g]] : f.values[vars[g]]});
        clauses.push_back(std::move(clause));
    }
    return {OneInKSatInstance(k, n_vars, std::move(clauses)), std::move(f)};
}

/// Same split up to complement (a reflection of the plane flips every
/// rotation sign, which is an equally valid reading).
bool same_split_up_to_complement(const PartitionSplit& a, const PartitionSplit& b, int n) {
    if (a.in_set == b.in_set) return true;
    std::vector<int> complement;
    for (int i = 0; i < n; ++i)
        if (!b.contains(i)) complement.push_back(i);
    return a.in_set == complement;
}

/// Perturbs every vector by an exact-norm nu Gaussian direction, so every
/// constraint residual is at most 2*nu + nu^2.
VectorAssignment perturb(const VectorAssignment& va, double nu, Rng& rng) {
    VectorAssignment out(va.dim());
    for (const auto& [label, vec] : va.vectors()) {
        Eigen::VectorXd noise = rng.unit_vector(va.dim()) * nu;
        out.set(label, (vec + noise).eval());
    }
    return out;
}

/// Max residual over constraints internal to one variable block.
double internal_residual(const GramConstraintSystem& sys, const VectorAssignment& va) {
    double worst = 0.0;
    for (const auto& cst : sys.constraints()) {
        const auto pa = cst.a.substr(0, cst.a.find(':'));
        const auto pb = cst.b.substr(0, cst.b.find(':'));
        if (pa != pb || cst.a[0] != 'x') continue;
        worst = std::max(worst, std::abs(va.at(cst.a).dot(va.at(cst.b)) - cst.target));
    }
    return worst;
}

VectorAssignment rotate_all(const VectorAssignment& va, const Eigen::MatrixXd& q) {
    VectorAssignment out(static_cast<int>(q.rows()));
    for (const auto& [label, vec] : va.vectors()) out.set(label, (q * vec).eval());
    return out;
}

} // namespace

TEST_CASE("partition decode roundtrip in the plane") {
    PartitionInstance inst({Rational(1, 2), Rational(1, 2)});
    GramConstraintSystem sys = partition_gadget(inst);
    VectorAssignment va = partition_completeness(inst, PartitionSplit{{0}});
    DecodedPartition dec = decode_partition(sys, va, 1e-9);
    CHECK(same_split_up_to_complement(dec.split, PartitionSplit{{0}}, 2));
    CHECK(dec.split.imbalance(inst) == Rational(0));
    CHECK(std::abs(dec.angle_sum) <= 1e-9);
}

TEST_CASE("partition decode is rotation invariant") {
    Rng rng(103);
    auto [inst, split] = planted_partition(6, rng);
    GramConstraintSystem sys = partition_gadget(inst);
    VectorAssignment va = partition_completeness(inst, split);

    DecodedPartition base = decode_partition(sys, va, 1e-9);
    CHECK(base.split.imbalance(inst) == Rational(0));

    // proper rotation: identical split
    const double ang = rng.uniform(0.0, 2.0 * M_PI);
    Eigen::Matrix2d q;
    q << std::cos(ang), -std::sin(ang), std::sin(ang), std::cos(ang);
    DecodedPartition rotated = decode_partition(sys, rotate_all(va, q), 1e-9);
    CHECK(rotated.split.in_set == base.split.in_set);

    // reflection: complementary split, equally valid
    Eigen::Matrix2d refl;
    refl << 1, 0, 0, -1;
    DecodedPartition mirrored = decode_partition(sys, rotate_all(va, refl), 1e-9);
    CHECK(same_split_up_to_complement(mirrored.split, base.split, inst.size()));
    CHECK(mirrored.split.imbalance(inst) == Rational(0));
}

TEST_CASE("partition decode from three dimensions") {
    Rng rng(107);
    for (int trial = 0; trial < 10; ++trial) {
        auto [inst, split] = planted_partition(4 + static_cast<int>(rng.below(6)), rng);
        GramConstraintSystem sys = partition_gadget(inst);
        VectorAssignment flat = partition_completeness(inst, split);

        // embed in R^3 and rotate by a random orthogonal transform
        Eigen::MatrixXd embed = Eigen::MatrixXd::Zero(3, 2);
        embed(0, 0) = 1.0;
        embed(1, 1) = 1.0;
        Eigen::MatrixXd q = rng.random_rotation(3);
        VectorAssignment spun(3);
        for (const auto& [label, vec] : flat.vectors()) spun.set(label, (q * embed * vec).eval());

        DecodedPartition dec = decode_partition(sys, spun, 1e-6);
        CHECK(dec.planarity_residual <= 1e-9);
        CHECK(dec.split.imbalance(inst) == Rational(0));
    }
}

TEST_CASE("partition decode rejects non-coplanar inputs") {
    PartitionInstance inst({Rational(1, 2), Rational(1, 2)});
    GramConstraintSystem sys = partition_gadget(inst);
    VectorAssignment flat = partition_completeness(inst, PartitionSplit{{0}});
    VectorAssignment lifted(3);
    for (const auto& [label, vec] : flat.vectors()) {
        Eigen::Vector3d v3(vec(0), vec(1), 0.0);
        lifted.set(label, v3);
    }
    Eigen::VectorXd bent = lifted.at(labels::partition(1, 1));
    bent(2) = 0.3; // push one basis vector out of the plane
    lifted.set(labels::partition(1, 1), bent);
    CHECK_THROWS_WITH_AS(decode_partition(sys, lifted, 1e-6), doctest::Contains("coplanar"),
                         std::runtime_error);
}

TEST_CASE("partition decode flags ambiguous rotations") {
    PartitionInstance inst({Rational(1, 2), Rational(1, 2)});
    GramConstraintSystem sys = partition_gadget(inst);
    VectorAssignment va(2);
    for (int i = 0; i < 2; ++i) {
        va.set(labels::partition(i, 1), Eigen::Vector2d(1, 0));
        va.set(labels::partition(i, 2), Eigen::Vector2d(0, 1));
        va.set(labels::partition(i, 3), Eigen::Vector2d(1 / std::sqrt(2.0), 1 / std::sqrt(2.0)));
    }
    CHECK_THROWS_WITH_AS(decode_partition(sys, va, 1e-6), doctest::Contains("ambiguous"),
                         std::runtime_error);
}

TEST_CASE("repair is the identity on exact inputs") {
    Rng rng(109);
    auto [inst, f] = planted_eoks(3, 4, 3, rng);
    GramConstraintSystem sys = csp_gadget(inst);
    VectorAssignment va = csp_completeness(inst, f);
    VectorAssignment repaired = repair_internal(va, sys, 0.0);
    for (const auto& [label, vec] : repaired.vectors())
        CHECK((vec - va.at(label)).norm() <= 1e-12);
}

TEST_CASE("repair restores internal constraints exactly and drifts at most 3*sqrt(eps)") {
    // the full (k, eps) grid: 25 perturbation draws per point
    Rng rng(113);
    for (int trial = 0; trial < 100; ++trial) {
        const int k = (trial % 2 == 0) ? 3 : 4;
        auto [inst, f] = planted_eoks(k, 4, 3, rng);
        GramConstraintSystem sys = csp_gadget(inst);
        VectorAssignment exact = csp_completeness(inst, f);

        const double eps_inject = (trial % 4 < 2) ? 1e-6 : 1e-8;
        VectorAssignment noisy = perturb(exact, eps_inject / 3.0, rng);
        const double eps = constraint_residuals(sys, noisy).max_abs;
        REQUIRE(eps <= eps_inject);

        VectorAssignment repaired = repair_internal(noisy, sys, eps);
        CHECK(internal_residual(sys, repaired) <= 1e-12);

        // per-vector drift (the 3*sqrt(eps) certificate covers every repaired label)
        double max_drift = 0.0;
        for (const auto& [label, vec] : repaired.vectors())
            if (label[0] == 'x') max_drift = std::max(max_drift, (vec - noisy.at(label)).norm());
        CHECK(max_drift <= 3.0 * std::sqrt(eps));

        // pairwise inner products across blocks move at most 7*sqrt(eps)
        const int two_k = 2 * k;
        double max_pair_drift = 0.0;
        for (int x = 0; x <= inst.var_count(); ++x)
            for (int y = x + 1; y <= inst.var_count(); ++y)
                for (int i = 1; i <= two_k; ++i) {
                    const auto a = labels::csp_basis(x, i);
                    const auto b = labels::csp_basis(y, i);
                    max_pair_drift = std::max(
                        max_pair_drift, std::abs(repaired.at(a).dot(repaired.at(b)) -
                                                 noisy.at(a).dot(noisy.at(b))));
                }
        CHECK(max_pair_drift <= 7.0 * std::sqrt(eps));
    }
}

TEST_CASE("repair rejects degenerate blocks") {
    Rng rng(127);
    auto [inst, f] = planted_eoks(3, 3, 2, rng);
    GramConstraintSystem sys = csp_gadget(inst);
    VectorAssignment va = csp_completeness(inst, f);
    va.set(labels::csp_basis(1, 2), va.at(labels::csp_basis(1, 1))); // collapse two basis vectors
    CHECK_THROWS_WITH_AS(repair_internal(va, sys, 1e-6), doctest::Contains("degenerate"),
                         std::runtime_error);
}

TEST_CASE("assignment decode recovers the planted assignment exactly") {
    Rng rng(131);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = (trial % 3 == 0) ? 4 : 3;
        auto [inst, f] = planted_eoks(k, k + static_cast<int>(rng.below(6)),
                                      1 + static_cast<int>(rng.below(6)), rng);
        GramConstraintSystem sys = csp_gadget(inst);
        VectorAssignment va = csp_completeness(inst, f);
        DecodedAssignment dec = decode_assignment(sys, va, 0.0);
        CHECK(dec.assignment.values == f.values);
        CHECK(dec.assignment.satisfies(inst));
        for (double mag : dec.magnitudes) CHECK(mag == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(dec.clauses_within_threshold);
    }
}

TEST_CASE("assignment decode survives noise and stays within the clause thresholds") {
    Rng rng(137);
    for (double eps_inject : {1e-10, 1e-8}) {
        auto [inst, f] = planted_eoks(3, 5, 4, rng);
        GramConstraintSystem sys = csp_gadget(inst);
        VectorAssignment noisy = perturb(csp_completeness(inst, f), eps_inject / 3.0, rng);
        const double eps = constraint_residuals(sys, noisy).max_abs;
        REQUIRE(eps <= eps_inject);

        DecodedAssignment dec = decode_assignment(sys, noisy, eps);
        CHECK(dec.assignment.values == f.values);
        CHECK(dec.assignment.satisfies(inst));
        CHECK(dec.repair_max_drift <= 3.0 * std::sqrt(eps) + 1e-15);

        // |<u_C0,u_C> - (1-2/k)| within delta < min(2/13k^2, 2/(24k+k^2))
        const double delta_cap = std::min(2.0 / (13.0 * 9.0), 2.0 / (24.0 * 3 + 9.0));
        CHECK(dec.delta_threshold == doctest::Approx(delta_cap));
        for (double res : dec.clause_residuals) CHECK(res < delta_cap);
        CHECK(dec.clauses_within_threshold);
    }
}

TEST_CASE("assignment decode is invariant under a global rotation") {
    Rng rng(139);
    auto [inst, f] = planted_eoks(3, 4, 3, rng);
    GramConstraintSystem sys = csp_gadget(inst);
    VectorAssignment va = csp_completeness(inst, f);
    Eigen::MatrixXd q = rng.random_rotation(va.dim());
    DecodedAssignment dec = decode_assignment(sys, rotate_all(va, q), 0.0);
    CHECK(dec.assignment.values == f.values);
}

TEST_CASE("clause drift after repair is bounded by 35*sqrt(2k eps)") {
    Rng rng(149);
    for (int trial = 0; trial < 6; ++trial) {
        const int k = 3;
        auto [inst, f] = planted_eoks(k, 4, 4, rng);
        GramConstraintSystem sys = csp_gadget(inst);
        VectorAssignment exact = csp_completeness(inst, f);
        VectorAssignment noisy = perturb(exact, 1e-7, rng);
        const double eps = constraint_residuals(sys, noisy).max_abs;

        VectorAssignment repaired = repair_internal(noisy, sys, eps);
        const double inv_sqrtk = 1.0 / std::sqrt(static_cast<double>(k));
        Eigen::VectorXd c0_new = Eigen::VectorXd::Zero(noisy.dim());
        for (int g = 1; g <= k; ++g) c0_new += repaired.at(labels::csp_basis(0, 2 * g - 1));
        c0_new *= inv_sqrtk;
        for (int j = 1; j <= inst.clause_count(); ++j) {
            Eigen::VectorXd c_new = Eigen::VectorXd::Zero(noisy.dim());
            for (int g = 1; g <= k; ++g) {
                const Literal& lit = inst.clauses()[j - 1][g - 1];
                c_new += lit.sign * repaired.at(labels::csp_basis(lit.var + 1, 2 * g));
            }
            c_new *= inv_sqrtk;
            const double before = noisy.at(labels::clause(0)).dot(noisy.at(labels::clause(j)));
            const double after = c0_new.dot(c_new);
            CHECK(std::abs(after - before) <= 35.0 * std::sqrt(2.0 * k * eps));
        }
    }
}

TEST_CASE("assignment decode enforces the dimension precondition") {
    Rng rng(151);
    auto [inst, f] = planted_eoks(3, 3, 2, rng);
    GramConstraintSystem sys = csp_gadget(inst);
    VectorAssignment va = csp_completeness(inst, f);
    VectorAssignment wide(4 * 3); // dim 12 > 4k−1 = 11
    for (const auto& [label, vec] : va.vectors()) {
        Eigen::VectorXd big = Eigen::VectorXd::Zero(12);
        big.head(6) = vec;
        wide.set(label, big);
    }
    CHECK_THROWS_AS(decode_assignment(sys, wide, 0.0), std::invalid_argument);
}

TEST_CASE("assignment decode flags inconsistent rotation signs") {
    Rng rng(157);
    auto [inst, f] = planted_eoks(3, 3, 0, rng);
    GramConstraintSystem sys = csp_gadget(inst);
    VectorAssignment va = csp_completeness(inst, f);
    va.set(labels::csp_basis(1, 2), (-va.at(labels::csp_basis(1, 2))).eval());
    CHECK_THROWS_WITH_AS(decode_assignment(sys, va, 0.0), doctest::Contains("inconsistent"),
                         std::runtime_error);
}
