#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "conicopf/network.hpp"

namespace conicopf {

/// Undirected simple graph over bus indices; parallel branches collapse to
/// one edge.
struct SparsityGraph {
  int n = 0;
  std::vector<std::vector<int>> adj;  // sorted neighbor lists

  bool has_edge(int a, int b) const;
  int edge_count() const;
  std::vector<std::pair<int, int>> edges() const;  // a < b
};

SparsityGraph build_graph(const Network& net);
SparsityGraph make_graph(int n, const std::vector<std::pair<int, int>>& edges);

/// Fill-reducing elimination order: minimum degree on the elimination graph,
/// smallest vertex index breaking ties. Deterministic.
std::vector<int> order_vertices(const SparsityGraph& g);

/// Fill edges added when eliminating vertices in the given order; the
/// pattern equals the symbolic Cholesky factor of the graph's Laplacian
/// plus identity under that order. The filled graph is chordal and the
/// order is one of its perfect elimination orderings.
std::vector<std::pair<int, int>> symbolic_factorization(
    const SparsityGraph& g, const std::vector<int>& order);

struct CliqueDecomposition {
  std::vector<int> ordering;
  std::vector<std::pair<int, int>> fill_edges;
  std::vector<std::vector<int>> cliques;  // sorted vertex sets, set-maximal
};

/// Maximal cliques of the chordal extension (g plus fill_edges), computed
/// from the elimination order. Throws ValidationError if the order is not a
/// perfect elimination ordering of the extension.
CliqueDecomposition maximal_cliques(const SparsityGraph& g,
                                    const std::vector<std::pair<int, int>>& fill_edges,
                                    const std::vector<int>& order);

/// Convenience: ordering, fill and cliques in one call.
CliqueDecomposition decompose(const SparsityGraph& g);

bool is_perfect_elimination_ordering(const SparsityGraph& extension,
                                     const std::vector<int>& order);

/// DOT dump of the extension; fill edges are dashed, cliques listed in a
/// comment header.
void write_dot(const SparsityGraph& g, const CliqueDecomposition& dec,
               std::ostream& out);

}  // namespace conicopf
