#include "conicopf/chordal.hpp"

#include <algorithm>
#include <ostream>
#include <set>

namespace conicopf {

bool SparsityGraph::has_edge(int a, int b) const {
  const auto& na = adj[a];
  return std::binary_search(na.begin(), na.end(), b);
}

int SparsityGraph::edge_count() const {
  int twice = 0;
  for (const auto& na : adj) twice += static_cast<int>(na.size());
  return twice / 2;
}

std::vector<std::pair<int, int>> SparsityGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < n; ++a)
    for (int b : adj[a])
      if (a < b) out.emplace_back(a, b);
  return out;
}

SparsityGraph make_graph(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::set<int>> adj(n);
  for (auto [a, b] : edges) {
    if (a == b) continue;
    adj[a].insert(b);
    adj[b].insert(a);
  }
  SparsityGraph g;
  g.n = n;
  g.adj.resize(n);
  for (int v = 0; v < n; ++v) g.adj[v].assign(adj[v].begin(), adj[v].end());
  return g;
}

SparsityGraph build_graph(const Network& net) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(net.branches.size());
  for (const auto& br : net.branches) edges.emplace_back(br.from, br.to);
  return make_graph(net.n_buses(), edges);
}

namespace {

// Elimination-graph simulation shared by ordering and fill computation.
struct Elimination {
  std::vector<std::set<int>> adj;
  explicit Elimination(const SparsityGraph& g) : adj(g.n) {
    for (int v = 0; v < g.n; ++v)
      adj[v] = std::set<int>(g.adj[v].begin(), g.adj[v].end());
  }
  // Removes v and connects its remaining neighbors pairwise; returns the
  // edges that were actually added.
  std::vector<std::pair<int, int>> eliminate(int v) {
    std::vector<int> nb(adj[v].begin(), adj[v].end());
    std::vector<std::pair<int, int>> added;
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        int a = nb[i], b = nb[j];
        if (adj[a].insert(b).second) {
          adj[b].insert(a);
          added.emplace_back(std::min(a, b), std::max(a, b));
        }
      }
    for (int u : nb) adj[u].erase(v);
    adj[v].clear();
    return added;
  }
};

}  // namespace

std::vector<int> order_vertices(const SparsityGraph& g) {
  Elimination elim(g);
  std::vector<bool> done(g.n, false);
  std::vector<int> order;
  order.reserve(g.n);
  for (int step = 0; step < g.n; ++step) {
    int best = -1;
    std::size_t best_deg = 0;
    for (int v = 0; v < g.n; ++v) {
      if (done[v]) continue;
      std::size_t d = elim.adj[v].size();
      if (best < 0 || d < best_deg) {
        best = v;
        best_deg = d;
      }
    }
    order.push_back(best);
    done[best] = true;
    elim.eliminate(best);
  }
  return order;
}

std::vector<std::pair<int, int>> symbolic_factorization(
    const SparsityGraph& g, const std::vector<int>& order) {
  if (static_cast<int>(order.size()) != g.n)
    throw ValidationError("ordering length does not match vertex count");
  std::vector<bool> seen(g.n, false);
  for (int v : order) {
    if (v < 0 || v >= g.n || seen[v])
      throw ValidationError("ordering is not a permutation");
    seen[v] = true;
  }
  Elimination elim(g);
  std::vector<std::pair<int, int>> fill;
  for (int v : order) {
    auto added = elim.eliminate(v);
    fill.insert(fill.end(), added.begin(), added.end());
  }
  std::sort(fill.begin(), fill.end());
  return fill;
}

namespace {

SparsityGraph extend(const SparsityGraph& g,
                     const std::vector<std::pair<int, int>>& fill) {
  auto edges = g.edges();
  edges.insert(edges.end(), fill.begin(), fill.end());
  return make_graph(g.n, edges);
}

}  // namespace

bool is_perfect_elimination_ordering(const SparsityGraph& ext,
                                     const std::vector<int>& order) {
  std::vector<int> rank(ext.n, -1);
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
  for (int v = 0; v < ext.n; ++v) {
    std::vector<int> higher;
    for (int u : ext.adj[v])
      if (rank[u] > rank[v]) higher.push_back(u);
    for (std::size_t i = 0; i < higher.size(); ++i)
      for (std::size_t j = i + 1; j < higher.size(); ++j)
        if (!ext.has_edge(higher[i], higher[j])) return false;
  }
  return true;
}

CliqueDecomposition maximal_cliques(
    const SparsityGraph& g, const std::vector<std::pair<int, int>>& fill_edges,
    const std::vector<int>& order) {
  SparsityGraph ext = extend(g, fill_edges);
  if (!is_perfect_elimination_ordering(ext, order))
    throw ValidationError(
        "ordering is not a perfect elimination ordering of the extension");

  std::vector<int> rank(ext.n, -1);
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);

  // Candidate per vertex: itself plus higher-ordered neighbors.
  std::vector<std::vector<int>> cands;
  cands.reserve(ext.n);
  for (int v = 0; v < ext.n; ++v) {
    std::vector<int> c{v};
    for (int u : ext.adj[v])
      if (rank[u] > rank[v]) c.push_back(u);
    std::sort(c.begin(), c.end());
    cands.push_back(std::move(c));
  }
  // Keep set-maximal candidates only.
  auto subset_of = [](const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  CliqueDecomposition dec;
  dec.ordering = order;
  dec.fill_edges = fill_edges;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < cands.size() && maximal; ++j) {
      if (i == j) continue;
      if (cands[i].size() < cands[j].size() && subset_of(cands[i], cands[j]))
        maximal = false;
      if (cands[i] == cands[j] && j < i) maximal = false;  // dedup
    }
    if (maximal) dec.cliques.push_back(cands[i]);
  }
  return dec;
}

CliqueDecomposition decompose(const SparsityGraph& g) {
  auto order = order_vertices(g);
  auto fill = symbolic_factorization(g, order);
  return maximal_cliques(g, fill, order);
}

void write_dot(const SparsityGraph& g, const CliqueDecomposition& dec,
               std::ostream& out) {
  out << "// cliques:";
  for (const auto& K : dec.cliques) {
    out << " {";
    for (std::size_t i = 0; i < K.size(); ++i)
      out << (i ? "," : "") << K[i];
    out << "}";
  }
  out << "\ngraph extension {\n";
  for (auto [a, b] : g.edges())
    out << "  " << a << " -- " << b << ";\n";
  for (auto [a, b] : dec.fill_edges)
    out << "  " << a << " -- " << b << " [style=dashed];\n";
  out << "}\n";
}

}  // namespace conicopf
