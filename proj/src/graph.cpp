#include "hardcomplete/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hardcomplete {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
    if (n <= 0) throw std::invalid_argument("Graph: vertex count must be positive");
    for (auto& [i, j] : edges) {
        if (i == j)
            throw std::invalid_argument("Graph: self-loop at vertex " + std::to_string(i + 1));
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw std::out_of_range("Graph: edge endpoint out of range");
        if (i > j) std::swap(i, j);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
}

bool Graph::has_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(i, j));
}

bool Coloring::well_formed(int n_vertices) const {
    if (k <= 0 || static_cast<int>(assignment.size()) != n_vertices) return false;
    for (int c : assignment)
        if (c < 0 || c >= k) return false;
    return true;
}

bool Coloring::proper_for(const Graph& g) const {
    if (!well_formed(g.vertex_count())) return false;
    for (const auto& [i, j] : g.edges())
        if (assignment[i] == assignment[j]) return false;
    return true;
}

std::vector<int> Coloring::class_sizes() const {
    std::vector<int> sizes(k, 0);
    for (int c : assignment) ++sizes[c];
    return sizes;
}

PartialMatrix graph_to_partial(const Graph& g) {
    PartialMatrix pm(g.vertex_count(), 1.0);
    for (int i = 0; i < g.vertex_count(); ++i) pm.reveal(i, i, 1.0);
    for (const auto& [i, j] : g.edges()) pm.reveal(i, j, 0.0);
    return pm;
}

DenseMatrix completion_from_coloring(const Graph& g, const Coloring& f) {
    const int n = g.vertex_count();
    if (!f.well_formed(n))
        throw std::invalid_argument("completion_from_coloring: malformed coloring");
    for (const auto& [i, j] : g.edges())
        if (f.assignment[i] == f.assignment[j])
            throw std::invalid_argument("completion_from_coloring: improper coloring, edge (" +
                                        std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                        ") is monochromatic");
    DenseMatrix m = DenseMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (f.assignment[i] == f.assignment[j]) m(i, j) = 1.0;
    return m;
}

Factorization factorization_from_coloring(const Coloring& f) {
    const int n = static_cast<int>(f.assignment.size());
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, f.k);
    for (int i = 0; i < n; ++i) u(i, f.assignment[i]) = 1.0;
    return Factorization{u, u};
}

std::pair<Graph, Coloring> balance_by_copies(const Graph& g, const Coloring& f) {
    const int n = g.vertex_count();
    const int k = f.k;
    if (!f.proper_for(g))
        throw std::invalid_argument("balance_by_copies: coloring is not proper");

    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(k) * g.edges().size());
    Coloring balanced{k, std::vector<int>(static_cast<std::size_t>(k) * n)};
    for (int copy = 0; copy < k; ++copy) {
        const int base = copy * n;
        for (const auto& [i, j] : g.edges()) edges.emplace_back(base + i, base + j);
        for (int v = 0; v < n; ++v)
            balanced.assignment[base + v] = (f.assignment[v] + copy) % k;
    }
    return {Graph(k * n, std::move(edges)), std::move(balanced)};
}

PartialMatrix pad_partial(const PartialMatrix& pm, int factor) {
    if (factor < 1) throw std::invalid_argument("pad_partial: factor must be >= 1");
    const int n = pm.dim();
    const int big = factor * n;
    PartialMatrix out(big, pm.coeff_bound());
    for (const auto& [key, value] : pm.canonical_entries()) out.reveal(key.first, key.second, value);
    // everything outside the original top-left block is revealed as zero
    for (int i = 0; i < big; ++i)
        for (int j = std::max(i, n); j < big; ++j) out.reveal(i, j, 0.0);
    return out;
}

} // namespace hardcomplete
