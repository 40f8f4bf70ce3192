#include "hardcomplete/decode_graph.hpp"

#include "hardcomplete/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace hardcomplete {

ConeRoundingParams ConeRoundingParams::standard(double c, int r, std::uint64_t seed) {
    ConeRoundingParams p;
    p.c = c;
    p.r = r;
    p.delta = 1.0 / (2.0 * c * r);
    p.seed = seed;
    p.validate();
    return p;
}

double ConeRoundingParams::cos_phi() const {
    return delta * std::sqrt(c * r) / ((1.0 - delta) * (1.0 - delta));
}

double ConeRoundingParams::phi() const { return std::acos(cos_phi()); }

void ConeRoundingParams::validate() const {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("ConeRoundingParams: need 0 < delta < 1");
    const double cp = cos_phi();
    if (!(cp > 0.0 && cp < 1.0))
        throw std::invalid_argument("ConeRoundingParams: cos(phi) outside (0,1)");
    if (r < 1) throw std::invalid_argument("ConeRoundingParams: rank must be >= 1");
}

NetColoringParams NetColoringParams::standard(double c, int r, double eps) {
    NetColoringParams p;
    p.c = c;
    p.r = r;
    p.eps = eps;
    p.delta_net = 0.5 * (1.0 - 2.0 * eps) * std::pow(c * r, -0.25) * (1.0 - 1e-6);
    p.validate();
    return p;
}

void NetColoringParams::validate() const {
    if (!(eps >= 0.0 && eps < 0.5))
        throw std::invalid_argument("NetColoringParams: need 0 <= eps < 1/2");
    const double limit = 0.5 * (1.0 - 2.0 * eps) * std::pow(c * r, -0.25);
    if (!(delta_net > 0.0 && delta_net < limit))
        throw std::invalid_argument("NetColoringParams: delta_net must lie in (0, (1-2eps)(cr)^{-1/4}/2)");
    if (r < 1) throw std::invalid_argument("NetColoringParams: rank must be >= 1");
}

bool IndependentSet::independent_in(const Graph& g) const {
    for (std::size_t a = 0; a < vertices.size(); ++a)
        for (std::size_t b = a + 1; b < vertices.size(); ++b)
            if (g.has_edge(vertices[a], vertices[b])) return false;
    return true;
}

std::vector<int> filter_accurate_submatrix(const PartialMatrix& pm, const DenseMatrix& m,
                                           double delta) {
    if (m.rows() != pm.dim() || m.cols() != pm.dim())
        throw std::invalid_argument("filter_accurate_submatrix: dimension mismatch");
    std::vector<bool> bad(pm.dim(), false);
    for (const auto& [key, value] : pm.canonical_entries()) {
        const auto [i, j] = key;
        if (std::abs(value - m(i, j)) > delta || std::abs(value - m(j, i)) > delta) {
            bad[i] = true;
            bad[j] = true;
        }
    }
    std::vector<int> survivors;
    for (int i = 0; i < pm.dim(); ++i)
        if (!bad[i]) survivors.push_back(i);
    return survivors;
}

IndependentSet decode_independent_set(const Factorization& fact, const ConeRoundingParams& params,
                                      const std::vector<int>& survivors) {
    params.validate();
    const int n = static_cast<int>(fact.u.rows());
    const int r = fact.rank();

    Rng rng(params.seed);
    IndependentSet out;
    out.seed = params.seed;
    out.direction = rng.unit_vector(r);

    const double threshold = std::cos(params.phi() / 2.0);
    for (int i : survivors) {
        if (i < 0 || i >= n)
            throw std::out_of_range("decode_independent_set: survivor index out of range");
        const double nu = fact.u.row(i).norm();
        const double nv = fact.v.row(i).norm();
        if (nu < 1e-12 || nv < 1e-12) {
            out.skipped.push_back(i);
            continue;
        }
        if (fact.u.row(i).dot(out.direction) / nu > threshold &&
            fact.v.row(i).dot(out.direction) / nv > threshold)
            out.vertices.push_back(i);
    }

    // Geometry check from the rounding argument: any two kept indices must
    // reconstruct above δ. A violation means the caller's factorization does
    // not satisfy the norm bounds this decoder assumes.
    for (std::size_t a = 0; a < out.vertices.size(); ++a)
        for (std::size_t b = 0; b < out.vertices.size(); ++b)
            if (fact.reconstruct(out.vertices[a], out.vertices[b]) <= params.delta)
                throw std::runtime_error(
                    "decode_independent_set: kept pair reconstructs below delta; "
                    "input factorization violates the rounding preconditions");
    return out;
}

double independent_set_expectation_bound(int n, double c, int r, double rmse_sum) {
    const double delta = 1.0 / (2.0 * c * r);
    const double eps = rmse_sum / n; // Σ_Ω (A−B)² ≤ ε·n
    const double survivors = std::max(0.0, 1.0 - eps / (delta * delta)) * n;
    return survivors / (2.0 * r * std::sqrt(M_PI) * std::pow(8.0 * std::sqrt(c * r), r));
}

Coloring decode_coloring(const Factorization& fact, const NetColoringParams& params) {
    params.validate();
    const int n = static_cast<int>(fact.u.rows());
    const int r = fact.rank();
    const double half_side = std::pow(params.c * params.r, 0.25);
    const double cell = 2.0 * params.delta_net / std::sqrt(static_cast<double>(r));

    auto cell_of = [&](const Eigen::RowVectorXd& x) {
        std::vector<int> idx(r);
        for (int d = 0; d < r; ++d) {
            if (std::abs(x(d)) > half_side + 1e-9)
                throw std::invalid_argument(
                    "decode_coloring: vector outside the hypercube of side 2(cr)^{1/4}");
            idx[d] = static_cast<int>(std::floor((x(d) + half_side) / cell));
        }
        return idx;
    };

    std::map<std::pair<std::vector<int>, std::vector<int>>, int> palette;
    Coloring result;
    result.assignment.resize(n);
    for (int i = 0; i < n; ++i) {
        auto key = std::make_pair(cell_of(fact.u.row(i)), cell_of(fact.v.row(i)));
        auto [it, inserted] = palette.emplace(std::move(key), static_cast<int>(palette.size()));
        result.assignment[i] = it->second;
    }
    result.k = static_cast<int>(palette.size());
    return result;
}

double coloring_count_bound(double c, int r, double eps) {
    return std::pow(4.0 * std::sqrt(c * r) / (1.0 - 2.0 * eps), 2.0 * r);
}

} // namespace hardcomplete
