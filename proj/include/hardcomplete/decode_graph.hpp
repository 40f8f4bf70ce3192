#pragma once

#include "hardcomplete/graph.hpp"
#include "hardcomplete/matrix.hpp"

#include <cstdint>
#include <vector>

namespace hardcomplete {

/// Parameters of the random-cone independent-set rounding. The cone angle φ
/// satisfies cos φ = δ√(cr) / (1−δ)², with δ defaulting to 1/(2cr).
struct ConeRoundingParams {
    double c = 1.0;
    int r = 1;
    double delta = 0.0;
    std::uint64_t seed = 0;

    static ConeRoundingParams standard(double c, int r, std::uint64_t seed);

    double cos_phi() const;
    double phi() const;
    /// Throws unless 0 < δ < 1 and cos φ ∈ (0, 1).
    void validate() const;
};

/// Parameters of the δ-net coloring decoder. delta_net must stay strictly
/// below (1−2ε)(cr)^{-1/4}/2 for the decoded coloring to be proper.
struct NetColoringParams {
    double c = 1.0;
    int r = 1;
    double eps = 0.0;
    double delta_net = 0.0;

    static NetColoringParams standard(double c, int r, double eps);

    void validate() const;
};

/// An independent set together with the sampled direction that produced it.
struct IndependentSet {
    std::vector<int> vertices;   ///< sorted, 0-based
    Eigen::VectorXd direction;   ///< the random unit vector used
    std::uint64_t seed = 0;
    std::vector<int> skipped;    ///< survivor indices with degenerate vectors

    bool independent_in(const Graph& g) const;
};

/// Indices i whose revealed row/column entries all deviate from m by at most
/// delta. The averaging bound |S| ≥ n − rmse_sum/δ² holds for symmetric m.
std::vector<int> filter_accurate_submatrix(const PartialMatrix& pm, const DenseMatrix& m,
                                           double delta);

/// Random-cone rounding: samples a uniform unit direction x and keeps every
/// survivor whose normalized factor vectors both lie within angle φ/2 of x.
/// For any two kept indices the reconstruction is guaranteed > δ (checked;
/// a violation means the input factorization broke the norm preconditions).
/// Survivors with vectors of norm < 1e-12 are skipped and recorded.
IndependentSet decode_independent_set(const Factorization& fact, const ConeRoundingParams& params,
                                      const std::vector<int>& survivors);

/// Lower bound on the expected size of the decoded set for an ε-RMSE
/// completion: (1 − ε/δ²)·n / (2r√π(8√(cr))^r).
double independent_set_expectation_bound(int n, double c, int r, double rmse_sum);

/// δ-net coloring: quotient the factor vectors by an axis-aligned grid of
/// cell diagonal 2·delta_net inside the hypercube of side 2(cr)^{1/4}; a
/// vertex's color is the pair (cell of u_i, cell of v_i). Colors are numbered
/// densely in first-use order. Throws if any vector leaves the hypercube
/// (which would violate the factorization norm bound).
Coloring decode_coloring(const Factorization& fact, const NetColoringParams& params);

/// (4√(cr)/(1−2ε))^{2r}: the color-count guarantee of the net decoder.
double coloring_count_bound(double c, int r, double eps);

} // namespace hardcomplete
