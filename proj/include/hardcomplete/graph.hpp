#pragma once

#include "hardcomplete/matrix.hpp"

#include <utility>
#include <vector>

namespace hardcomplete {

/// Simple undirected graph on vertices 0..n-1. Edges are stored canonically
/// (i < j), sorted and deduplicated; self-loops are rejected.
class Graph {
public:
    Graph(int n, std::vector<std::pair<int, int>> edges);

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    bool has_edge(int i, int j) const;

private:
    int n_;
    std::vector<std::pair<int, int>> edges_;
};

/// Vertex coloring with colors 0..k-1. Properness is relative to a graph and
/// checked by the operations that require it, not at construction.
struct Coloring {
    int k = 0;
    std::vector<int> assignment; ///< color per vertex

    /// All vertices colored within [0, k)?
    bool well_formed(int n_vertices) const;
    /// No monochromatic edge?
    bool proper_for(const Graph& g) const;
    /// Vertices per color.
    std::vector<int> class_sizes() const;
};

/// The partial matrix of a graph: 1 on the diagonal, 0 on edges, unrevealed
/// elsewhere; coefficient bound 1. |Ω| = n + 2m.
PartialMatrix graph_to_partial(const Graph& g);

/// The completion induced by a proper coloring: M(i,j) = 1 iff i and j share
/// a color (sum of indicator outer products over color classes). Throws,
/// naming a violated edge, if the coloring is improper.
DenseMatrix completion_from_coloring(const Graph& g, const Coloring& f);

/// The Gram-vector view of the same completion: u_i = v_i = e_{f(i)} in R^k,
/// so u_i · v_j reconstructs completion_from_coloring exactly and every row
/// norm is 1.
Factorization factorization_from_coloring(const Coloring& f);

/// k disjoint copies of g with copy t's colors cyclically shifted by t. The
/// result is properly colored and perfectly balanced: every color class has
/// exactly n vertices.
std::pair<Graph, Coloring> balance_by_copies(const Graph& g, const Coloring& f);

/// Grows pm to (factor·n)×(factor·n), revealing every entry outside the
/// original top-left block as 0. Factor 1 returns pm unchanged.
PartialMatrix pad_partial(const PartialMatrix& pm, int factor = 10);

} // namespace hardcomplete
