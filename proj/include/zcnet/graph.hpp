#ifndef ZCNET_GRAPH_HPP
#define ZCNET_GRAPH_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zcnet/pattern.hpp"

namespace zcnet {

enum class VertexKind { State, Input };

/// A vertex of the system digraph: state x_{index+1} or input u_{index+1}.
struct Vertex {
  VertexKind kind = VertexKind::State;
  Index index = 0;

  static Vertex state(Index i) { return {VertexKind::State, i}; }
  static Vertex input(Index j) { return {VertexKind::Input, j}; }

  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

/// "x3" / "u1" (1-based).
std::string vertex_name(Vertex v);

/// Parses "x3" / "u1". Throws std::invalid_argument on malformed names.
Vertex parse_vertex(std::string_view name);

/// Directed edge between state vertices, from -> to.
struct StateEdge {
  Index from = 0;
  Index to = 0;

  friend auto operator<=>(const StateEdge&, const StateEdge&) = default;
};

/// Sorted list of 0-based state indices.
using StateSet = std::vector<Index>;

/// Digraph G = (X u U, E) of a structured pair (A, B): a_ij != 0 gives
/// x_j -> x_i, b_ij != 0 gives u_j -> x_i. Inputs only have out-edges.
class SystemGraph {
 public:
  SystemGraph() = default;

  /// Throws std::invalid_argument when A is not square or B has the wrong
  /// number of rows.
  explicit SystemGraph(const PatternMatrix& a, const std::optional<PatternMatrix>& b = std::nullopt);

  Index num_states() const { return n_; }
  Index num_inputs() const { return m_; }

  const PatternMatrix& a() const { return a_; }
  const PatternMatrix& b() const { return b_; }

  /// Successor / predecessor lists of state vertices within X.
  std::span<const Index> successors(Index state) const { return succ_[state]; }
  std::span<const Index> predecessors(Index state) const { return pred_[state]; }
  /// States fed directly by input u_{input+1}.
  std::span<const Index> input_targets(Index input) const { return input_succ_[input]; }

  bool has_edge(Index from, Index to) const { return a_.contains(to, from); }
  bool has_self_loop(Index state) const { return a_.contains(state, state); }

  Index num_state_edges() const { return a_.nnz(); }
  Index num_input_edges() const { return b_.nnz(); }

  std::vector<StateEdge> state_edges() const;

 private:
  Index n_ = 0;
  Index m_ = 0;
  PatternMatrix a_;
  PatternMatrix b_;
  std::vector<std::vector<Index>> succ_;
  std::vector<std::vector<Index>> pred_;
  std::vector<std::vector<Index>> input_succ_;
};

inline SystemGraph build_graph(const PatternMatrix& a,
                               const std::optional<PatternMatrix>& b = std::nullopt) {
  return SystemGraph(a, b);
}

/// States reachable from `sources`. A state source reaches itself; an input
/// source contributes only the states reached along its out-edges.
/// Unknown vertices throw std::out_of_range.
StateSet reachable_from(const SystemGraph& graph, std::span<const Vertex> sources);

/// Convenience overload for state sources.
StateSet reachable_from_states(const SystemGraph& graph, std::span<const Index> states);

/// States reachable from the input vertices U.
StateSet reachable_from_inputs(const SystemGraph& graph);

/// Partition of X into maximal strongly connected components together with
/// the condensation order. Components are numbered by their smallest vertex.
class SccDecomposition {
 public:
  Index size() const { return components_.size(); }
  std::span<const StateSet> components() const { return components_; }
  const StateSet& component(Index c) const { return components_[c]; }
  Index component_of(Index state) const { return component_of_[state]; }

  /// A component is nontrivial iff it contains an edge between its vertices.
  bool is_nontrivial(Index c) const { return nontrivial_[c]; }
  std::vector<Index> nontrivial_components() const;

  /// C_a < C_b: some path leads from C_a to C_b (transitive closure).
  bool precedes(Index a, Index b) const { return closure_[a * size() + b]; }

  /// Direct condensation arcs and their transitive reduction, sorted.
  std::span<const std::pair<Index, Index>> condensation_arcs() const { return arcs_; }
  std::span<const std::pair<Index, Index>> reduced_order() const { return reduced_; }
  /// Every pair (a, b) with C_a < C_b, sorted.
  std::vector<std::pair<Index, Index>> order_pairs() const;

  /// Components reachable from c, including c itself.
  std::vector<Index> downward_closure(Index c) const;

 private:
  friend SccDecomposition scc_decompose(const SystemGraph& graph);

  std::vector<StateSet> components_;
  std::vector<Index> component_of_;
  std::vector<bool> nontrivial_;
  std::vector<bool> closure_;
  std::vector<std::pair<Index, Index>> arcs_;
  std::vector<std::pair<Index, Index>> reduced_;
};

/// Tarjan decomposition of the state subgraph; input vertices are ignored.
SccDecomposition scc_decompose(const SystemGraph& graph);

/// True iff the state subgraph contains a cycle (self-loops included).
bool has_cycle(const SystemGraph& graph);

/// One cycle through `start` using only states with allowed[v] set, or
/// nullopt if none exists. Edges are listed in traversal order.
std::optional<std::vector<StateEdge>> find_cycle_through(const SystemGraph& graph, Index start,
                                                         const std::vector<bool>& allowed);

/// Renders a cycle as "(x6,x7),(x7,x6)".
std::string format_cycle(std::span<const StateEdge> cycle);

/// Weight of a walk as a product of a-entries, stored in matrix-product order:
/// a walk x_j -> ... -> x_i of length k is a_{i,v1} a_{v1,v2} ... a_{v_{k-1},j}.
struct PathMonomial {
  std::vector<Entry> factors;

  std::string to_string() const;
  friend auto operator<=>(const PathMonomial&, const PathMonomial&) = default;
};

/// Upper bound on the number of monomials entry_paths will produce.
inline constexpr Index kMaxPathMonomials = 1'000'000;

/// Every walk with exactly k edges from x_j to x_i (0-based i, j), sorted.
/// Their symbolic sum is the (i, j) entry of A^k. Throws std::invalid_argument
/// for k = 0 or bad indices, std::length_error beyond kMaxPathMonomials.
std::vector<PathMonomial> entry_paths(const PatternMatrix& a, Index i, Index j, Index k);

}  // namespace zcnet

#endif  // ZCNET_GRAPH_HPP
