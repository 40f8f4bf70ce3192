#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hardcomplete/gram.hpp"
#include "hardcomplete/rng.hpp"

#include <cmath>

using namespace hardcomplete;

namespace {

PartitionInstance halves() { return PartitionInstance({Rational(1, 2), Rational(1, 2)}); }

/// Random positive integer weights with a planted exact split.
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
    // top up an element on the light side to balance exactly
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

/// Random satisfiable instance with its planted assignment: each clause puts
/// the −1 literal at one random position.
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

} // namespace

TEST_CASE("partition gadget shape for two equal halves") {
    GramConstraintSystem sys = partition_gadget(halves());
    CHECK(sys.labels().size() == 6);
    CHECK(sys.constraints().size() == 18); // 3n + n + 2n + 3n with n = 2

    int cyclic = 0;
    for (const auto& cst : sys.constraints())
        if (cst.target == doctest::Approx(std::cos(0.5)).epsilon(1e-15)) ++cyclic;
    CHECK(cyclic == 6);
    CHECK(std::cos(0.5) == doctest::Approx(0.877583).epsilon(1e-6));

    const auto& meta = std::get<PartitionMeta>(sys.meta);
    CHECK(meta.scale == Rational(1));
    CHECK(meta.weights == std::vector<double>{0.5, 0.5});
}

TEST_CASE("partition gadget auto-normalizes and records the scale") {
    PartitionInstance inst({Rational(3), Rational(2), Rational(1)});
    GramConstraintSystem sys = partition_gadget(inst);
    CHECK(sys.labels().size() == 9);
    CHECK(sys.constraints().size() == 27); // 9n with n = 3
    const auto& meta = std::get<PartitionMeta>(sys.meta);
    CHECK(meta.scale == Rational(6));
    CHECK(meta.weights_exact[0] == Rational(1, 2));
    CHECK(meta.weights_exact[2] == Rational(1, 6));
}

TEST_CASE("partition completeness satisfies every constraint to 1e-12") {
    GramConstraintSystem sys = partition_gadget(halves());

    VectorAssignment va = partition_completeness(halves(), PartitionSplit{{0}});
    CHECK(constraint_residuals(sys, va).max_abs <= 1e-12);
    CHECK(va.at(labels::partition(1, 1))(0) == doctest::Approx(std::cos(0.5)));

    // the mirror split works symmetrically
    VectorAssignment mirror = partition_completeness(halves(), PartitionSplit{{1}});
    CHECK(constraint_residuals(sys, mirror).max_abs <= 1e-12);
}

TEST_CASE("partition completeness theta recursion on four quarters") {
    PartitionInstance inst({Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)});
    GramConstraintSystem sys = partition_gadget(inst);
    VectorAssignment va = partition_completeness(inst, PartitionSplit{{0, 1}});
    CHECK(constraint_residuals(sys, va).max_abs <= 1e-12);
    // theta = (0, 1/4, 1/2, 1/4)
    CHECK(va.at(labels::partition(1, 1))(0) == doctest::Approx(std::cos(0.25)));
    CHECK(va.at(labels::partition(2, 1))(0) == doctest::Approx(std::cos(0.5)));
    CHECK(va.at(labels::partition(3, 1))(0) == doctest::Approx(std::cos(0.25)));
}

TEST_CASE("partition completeness rejects unbalanced splits with the residue") {
    PartitionInstance inst({Rational(1, 2), Rational(1, 4), Rational(1, 4)});
    CHECK_THROWS_WITH_AS(partition_completeness(inst, PartitionSplit{{1}}),
                         doctest::Contains("residue -1/2"), std::invalid_argument);
    VectorAssignment ok = partition_completeness(inst, PartitionSplit{{0}});
    CHECK(constraint_residuals(partition_gadget(inst), ok).max_abs <= 1e-12);
}

TEST_CASE("partition completeness exact on random planted instances") {
    Rng rng(97);
    for (int trial = 0; trial < 15; ++trial) {
        auto [inst, split] = planted_partition(3 + static_cast<int>(rng.below(6)), rng);
        REQUIRE(split.imbalance(inst) == Rational(0));
        GramConstraintSystem sys = partition_gadget(inst);
        VectorAssignment va = partition_completeness(inst, split);
        CHECK(constraint_residuals(sys, va).max_abs <= 1e-12);

        DenseMatrix gram = gram_matrix(sys, va);
        CHECK(numerical_rank(gram) <= 2);
        CHECK(is_psd(gram));
    }
}

TEST_CASE("csp gadget shape at k = 3") {
    OneInKSatInstance inst(3, 1, {});
    GramConstraintSystem sys = csp_gadget(inst);
    // per variable block: 2k + 2*C(2k,2) = 6 + 30 = 36 labels; blocks x0 and
    // x1 plus the reference clause
    CHECK(sys.labels().size() == 36 * 2 + 1);

    int external_zeros = 0;
    for (const auto& cst : sys.constraints()) {
        const bool cross = cst.a.substr(0, 3) != cst.b.substr(0, 3);
        if (cross && cst.a.find(":i") != std::string::npos &&
            cst.b.find(":i") != std::string::npos && cst.target == 0.0)
            ++external_zeros;
    }
    CHECK(external_zeros == 2 * 3 * (2 * 3 - 1)); // 2k(2k−1) basis zero-couplings

    CHECK_THROWS_AS(OneInKSatInstance(2, 1, {}), std::invalid_argument);
}

TEST_CASE("csp gadget emits the clause constraints") {
    OneInKSatInstance inst(3, 3, {{{0, 1}, {1, 1}, {2, 1}}});
    GramConstraintSystem sys = csp_gadget(inst);

    int external_clause = 0;
    for (const auto& cst : sys.constraints())
        if ((cst.a == "C0" && cst.b == "C1") || (cst.a == "C1" && cst.b == "C0")) {
            CHECK(cst.target == doctest::Approx(1.0 / 3.0));
            ++external_clause;
        }
    CHECK(external_clause == 1);
}

TEST_CASE("csp completeness: planted assignment satisfies everything") {
    OneInKSatInstance inst(3, 3, {{{0, 1}, {1, 1}, {2, 1}}});
    Assignment f{{-1, 1, 1}};
    GramConstraintSystem sys = csp_gadget(inst);
    VectorAssignment va = csp_completeness(inst, f);
    CHECK(va.dim() == 6);
    CHECK(constraint_residuals(sys, va).max_abs <= 1e-12);
    CHECK(va.at("C0").dot(va.at("C1")) == doctest::Approx(1.0 / 3.0));

    // all-(+1) violates exactly-one on this clause (signed sum 3, not 1)
    CHECK_THROWS_WITH_AS(csp_completeness(inst, Assignment{{1, 1, 1}}),
                         doctest::Contains("clause 1"), std::invalid_argument);
}

TEST_CASE("csp completeness on zero-clause instances is exactly orthonormal") {
    OneInKSatInstance inst(3, 2, {});
    GramConstraintSystem sys = csp_gadget(inst);
    VectorAssignment va = csp_completeness(inst, Assignment{{1, -1}});
    CHECK(constraint_residuals(sys, va).max_abs <= 1e-12);
}

TEST_CASE("csp completeness exact on random planted instances") {
    Rng rng(101);
    for (int trial = 0; trial < 10; ++trial) {
        const int k = (trial % 2 == 0) ? 3 : 4;
        auto [inst, f] = planted_eoks(k, 4 + static_cast<int>(rng.below(5)),
                                      1 + static_cast<int>(rng.below(6)), rng);
        REQUIRE(f.satisfies(inst));
        GramConstraintSystem sys = csp_gadget(inst);
        VectorAssignment va = csp_completeness(inst, f);
        CHECK(constraint_residuals(sys, va).max_abs <= 1e-12);

        DenseMatrix gram = gram_matrix(sys, va);
        CHECK(numerical_rank(gram) <= 2 * k);
        CHECK(is_psd(gram));
    }
}

TEST_CASE("block-diagonal amplification of a system") {
    GramConstraintSystem sys = partition_gadget(halves());
    GramConstraintSystem one = amplify_block_diagonal(sys, 1);
    CHECK(one.labels() == sys.labels());
    CHECK(one.constraints().size() == sys.constraints().size());

    GramConstraintSystem two = amplify_block_diagonal(sys, 2);
    CHECK(two.labels().size() == 2 * sys.labels().size());
    // per-block copies plus all cross-block zero couplings
    CHECK(two.constraints().size() == 2 * sys.constraints().size() + 6 * 6);
    CHECK(std::get<AmplifiedMeta>(two.meta).inner_kind == "partition");

    // completeness vectors embedded per block in disjoint coordinate pairs
    VectorAssignment va = partition_completeness(halves(), PartitionSplit{{0}});
    VectorAssignment embedded(4);
    for (int block = 0; block < 2; ++block)
        for (const auto& [label, vec] : va.vectors()) {
            Eigen::VectorXd big = Eigen::VectorXd::Zero(4);
            big.segment(2 * block, 2) = vec;
            embedded.set("b" + std::to_string(block + 1) + "." + label, big);
        }
    CHECK(constraint_residuals(two, embedded).max_abs <= 1e-12);
}

TEST_CASE("block-diagonal amplification of a partial matrix") {
    PartialMatrix pm(2, 1.0);
    pm.reveal(0, 0, 1.0);
    PartialMatrix two = amplify_block_diagonal(pm, 2);
    CHECK(two.dim() == 4);
    CHECK(two.at(0, 0) == 1.0);
    CHECK(two.at(2, 2) == 1.0);
    CHECK(two.at(0, 2) == 0.0); // cross-block revealed zero
    CHECK(two.at(1, 3) == 0.0);
    CHECK_FALSE(two.revealed(0, 1)); // in-block holes survive
    CHECK_FALSE(two.revealed(2, 3));
}

TEST_CASE("gram system to partial matrix") {
    GramConstraintSystem sys;
    sys.add_label("a");
    sys.add_label("b");
    sys.add_constraint("a", "a", 1.0);
    sys.add_constraint("b", "b", 1.0);
    sys.add_constraint("a", "b", 0.0);
    PartialMatrix pm = gram_system_to_partial(sys);
    CHECK(pm.dim() == 2);
    CHECK(pm.omega_size() == 4);
    CHECK(pm.at(0, 0) == 1.0);
    CHECK(pm.at(0, 1) == 0.0);
    CHECK(pm.coeff_bound() == 1.0);

    PartialMatrix partition = gram_system_to_partial(partition_gadget(halves()));
    CHECK(partition.dim() == 6);
    CHECK(partition.canonical_entries().size() == 15); // deduped canonical view
    CHECK(partition.omega_size() == 24);

    GramConstraintSystem empty;
    empty.add_label("only");
    PartialMatrix blank = gram_system_to_partial(empty);
    CHECK(blank.omega_size() == 0);

    sys.add_constraint("a", "b", 0.5); // conflicting duplicate
    CHECK_THROWS_WITH_AS(gram_system_to_partial(sys), doctest::Contains("conflicting"),
                         std::invalid_argument);
}

TEST_CASE("the matrix view is stable under consistent relabeling") {
    GramConstraintSystem sys = partition_gadget(halves());
    GramConstraintSystem renamed;
    for (const auto& l : sys.labels()) renamed.add_label("q." + l);
    for (const auto& cst : sys.constraints())
        renamed.add_constraint("q." + cst.a, "q." + cst.b, cst.target);

    PartialMatrix a = gram_system_to_partial(sys);
    PartialMatrix b = gram_system_to_partial(renamed);
    CHECK(a.canonical_entries() == b.canonical_entries());
    CHECK(a.coeff_bound() == b.coeff_bound());
}

TEST_CASE("constraint canonicalization and validation") {
    GramConstraintSystem sys;
    sys.add_label("z");
    sys.add_label("a");
    sys.add_constraint("z", "a", 0.25);
    CHECK(sys.constraints()[0].a == "a"); // stored canonically
    CHECK(sys.constraints()[0].b == "z");
    CHECK_THROWS_AS(sys.add_constraint("a", "missing", 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sys.add_label("a"), std::invalid_argument);
    CHECK_THROWS_AS(sys.add_constraint("a", "z", std::nan("")), std::invalid_argument);
}
