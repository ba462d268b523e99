#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kcp/cnf.hpp"

namespace kcp {

/// Undirected simple graph on vertices 0..n-1. Edges keep insertion order
/// (they become clause order in VC and Tseitin formulas).
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : n_(n), adj_(n) {}

  std::size_t n_vertices() const { return n_; }
  std::size_t n_edges() const { return edges_.size(); }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
  const std::vector<std::size_t>& neighbours(std::size_t v) const { return adj_.at(v); }
  std::size_t degree(std::size_t v) const { return adj_.at(v).size(); }
  std::size_t max_degree() const;

  /// Adds {u,v}; returns false if it was already present. Self-loops throw.
  bool add_edge(std::size_t u, std::size_t v);
  bool has_edge(std::size_t u, std::size_t v) const;
  bool connected() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::vector<std::size_t>> adj_;
};

/// Variable v becomes vertex v-1.
Graph primal_graph(const CnfFormula& formula);

struct TreeDecomposition {
  std::vector<std::vector<std::size_t>> bags;  // sorted vertex lists
  std::vector<std::pair<std::size_t, std::size_t>> tree_edges;
  std::size_t width = 0;
};

/// Min-fill elimination, ties to the smallest vertex index.
TreeDecomposition tree_decomposition(const Graph& g);

/// Elimination order produced by the min-fill heuristic.
std::vector<std::size_t> min_fill_order(const Graph& g);

/// Empty string if `td` is a tree decomposition of `g`, else the reason.
std::string validate_decomposition(const Graph& g, const TreeDecomposition& td);

std::string format_decomposition(const TreeDecomposition& td);
TreeDecomposition parse_decomposition(std::string_view text);

}  // namespace kcp
