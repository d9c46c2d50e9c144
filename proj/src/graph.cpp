#include "zcnet/graph.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <limits>
#include <stdexcept>

namespace zcnet {

std::string vertex_name(Vertex v) {
  return (v.kind == VertexKind::State ? "x" : "u") + std::to_string(v.index + 1);
}

Vertex parse_vertex(std::string_view name) {
  if (name.size() < 2 || (name[0] != 'x' && name[0] != 'u')) {
    throw std::invalid_argument("malformed vertex name '" + std::string(name) + "'");
  }
  Index one_based = 0;
  const char* first = name.data() + 1;
  const char* last = name.data() + name.size();
  const auto [ptr, ec] = std::from_chars(first, last, one_based);
  if (ec != std::errc{} || ptr != last || one_based == 0) {
    throw std::invalid_argument("malformed vertex name '" + std::string(name) + "'");
  }
  return {name[0] == 'x' ? VertexKind::State : VertexKind::Input, one_based - 1};
}

SystemGraph::SystemGraph(const PatternMatrix& a, const std::optional<PatternMatrix>& b)
    : n_(a.rows()), a_(a) {
  if (!a.is_square()) {
    throw std::invalid_argument("A must be square, got " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()));
  }
  if (b) {
    if (b->rows() != n_) {
      throw std::invalid_argument("B must have " + std::to_string(n_) + " rows, got " +
                                  std::to_string(b->rows()) + "x" + std::to_string(b->cols()));
    }
    b_ = *b;
  } else {
    b_ = PatternMatrix::zero(n_, 0);
  }
  m_ = b_.cols();
  succ_.resize(n_);
  pred_.resize(n_);
  input_succ_.resize(m_);
  for (const Entry& e : a_.entries()) {
    succ_[e.col].push_back(e.row);
    pred_[e.row].push_back(e.col);
  }
  for (const Entry& e : b_.entries()) input_succ_[e.col].push_back(e.row);
  for (auto& s : succ_) std::sort(s.begin(), s.end());
  for (auto& s : input_succ_) std::sort(s.begin(), s.end());
}

std::vector<StateEdge> SystemGraph::state_edges() const {
  std::vector<StateEdge> out;
  out.reserve(a_.nnz());
  for (const Entry& e : a_.entries()) out.push_back({e.col, e.row});
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

StateSet collect(const std::vector<bool>& mark) {
  StateSet out;
  for (Index v = 0; v < mark.size(); ++v) {
    if (mark[v]) out.push_back(v);
  }
  return out;
}

void flood(const SystemGraph& graph, std::vector<bool>& mark, std::vector<Index> stack) {
  while (!stack.empty()) {
    const Index v = stack.back();
    stack.pop_back();
    for (Index w : graph.successors(v)) {
      if (!mark[w]) {
        mark[w] = true;
        stack.push_back(w);
      }
    }
  }
}

}  // namespace

StateSet reachable_from(const SystemGraph& graph, std::span<const Vertex> sources) {
  std::vector<bool> mark(graph.num_states(), false);
  std::vector<Index> stack;
  auto seed = [&](Index v) {
    if (!mark[v]) {
      mark[v] = true;
      stack.push_back(v);
    }
  };
  for (const Vertex& s : sources) {
    if (s.kind == VertexKind::State) {
      if (s.index >= graph.num_states()) {
        throw std::out_of_range("unknown vertex " + vertex_name(s));
      }
      seed(s.index);
    } else {
      if (s.index >= graph.num_inputs()) {
        throw std::out_of_range("unknown vertex " + vertex_name(s));
      }
      for (Index v : graph.input_targets(s.index)) seed(v);
    }
  }
  flood(graph, mark, std::move(stack));
  return collect(mark);
}

StateSet reachable_from_states(const SystemGraph& graph, std::span<const Index> states) {
  std::vector<Vertex> sources;
  sources.reserve(states.size());
  for (Index s : states) sources.push_back(Vertex::state(s));
  return reachable_from(graph, sources);
}

StateSet reachable_from_inputs(const SystemGraph& graph) {
  std::vector<Vertex> sources;
  for (Index j = 0; j < graph.num_inputs(); ++j) sources.push_back(Vertex::input(j));
  return reachable_from(graph, sources);
}

std::vector<Index> SccDecomposition::nontrivial_components() const {
  std::vector<Index> out;
  for (Index c = 0; c < size(); ++c) {
    if (nontrivial_[c]) out.push_back(c);
  }
  return out;
}

std::vector<std::pair<Index, Index>> SccDecomposition::order_pairs() const {
  std::vector<std::pair<Index, Index>> out;
  for (Index a = 0; a < size(); ++a) {
    for (Index b = 0; b < size(); ++b) {
      if (precedes(a, b)) out.emplace_back(a, b);
    }
  }
  return out;
}

std::vector<Index> SccDecomposition::downward_closure(Index c) const {
  std::vector<Index> out;
  for (Index b = 0; b < size(); ++b) {
    if (b == c || precedes(c, b)) out.push_back(b);
  }
  return out;
}

SccDecomposition scc_decompose(const SystemGraph& graph) {
  const Index n = graph.num_states();
  constexpr Index kUnvisited = std::numeric_limits<Index>::max();

  // Iterative Tarjan; components are emitted sinks first.
  std::vector<Index> index(n, kUnvisited);
  std::vector<Index> low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<Index> stack;
  std::vector<std::vector<Index>> raw;
  Index counter = 0;

  struct Frame {
    Index v;
    Index next_child;
  };
  for (Index root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto succ = graph.successors(f.v);
      if (f.next_child < succ.size()) {
        const Index w = succ[f.next_child++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const Index v = f.v;
      if (low[v] == index[v]) {
        std::vector<Index> comp;
        Index w = 0;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        raw.push_back(std::move(comp));
      }
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }

  std::sort(raw.begin(), raw.end(),
            [](const auto& l, const auto& r) { return l.front() < r.front(); });

  SccDecomposition out;
  const Index p = raw.size();
  out.components_ = std::move(raw);
  out.component_of_.assign(n, 0);
  for (Index c = 0; c < p; ++c) {
    for (Index v : out.components_[c]) out.component_of_[v] = c;
  }
  out.nontrivial_.assign(p, false);
  for (Index c = 0; c < p; ++c) {
    const auto& comp = out.components_[c];
    out.nontrivial_[c] = comp.size() > 1 || graph.has_self_loop(comp.front());
  }

  std::vector<std::vector<Index>> succ(p);
  for (const StateEdge& e : graph.state_edges()) {
    const Index a = out.component_of_[e.from];
    const Index b = out.component_of_[e.to];
    if (a != b) succ[a].push_back(b);
  }
  for (Index a = 0; a < p; ++a) {
    std::sort(succ[a].begin(), succ[a].end());
    succ[a].erase(std::unique(succ[a].begin(), succ[a].end()), succ[a].end());
    for (Index b : succ[a]) out.arcs_.emplace_back(a, b);
  }

  // Closure rows in reverse topological order (memoised DFS).
  out.closure_.assign(p * p, false);
  std::vector<bool> done(p, false);
  for (Index root = 0; root < p; ++root) {
    if (done[root]) continue;
    std::vector<Frame> call{{root, 0}};
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next_child < succ[f.v].size()) {
        const Index b = succ[f.v][f.next_child++];
        if (!done[b]) call.push_back({b, 0});
        continue;
      }
      const Index a = f.v;
      for (Index b : succ[a]) {
        out.closure_[a * p + b] = true;
        for (Index c = 0; c < p; ++c) {
          if (out.closure_[b * p + c]) out.closure_[a * p + c] = true;
        }
      }
      done[a] = true;
      call.pop_back();
    }
  }

  for (const auto& [a, b] : out.arcs_) {
    const bool implied = std::any_of(succ[a].begin(), succ[a].end(),
                                     [&](Index c) { return c != b && out.closure_[c * p + b]; });
    if (!implied) out.reduced_.emplace_back(a, b);
  }
  return out;
}

bool has_cycle(const SystemGraph& graph) {
  const SccDecomposition scc = scc_decompose(graph);
  for (Index c = 0; c < scc.size(); ++c) {
    if (scc.is_nontrivial(c)) return true;
  }
  return false;
}

std::optional<std::vector<StateEdge>> find_cycle_through(const SystemGraph& graph, Index start,
                                                         const std::vector<bool>& allowed) {
  if (start >= graph.num_states() || !allowed.at(start)) return std::nullopt;
  if (graph.has_self_loop(start)) return std::vector<StateEdge>{{start, start}};

  // Shortest cycle through start by BFS.
  constexpr Index kNone = std::numeric_limits<Index>::max();
  std::vector<Index> parent(graph.num_states(), kNone);
  std::deque<Index> queue;
  for (Index w : graph.successors(start)) {
    if (allowed[w] && parent[w] == kNone) {
      parent[w] = start;
      queue.push_back(w);
    }
  }
  while (!queue.empty()) {
    const Index v = queue.front();
    queue.pop_front();
    if (graph.has_edge(v, start)) {
      std::vector<Index> path{v};
      while (parent[path.back()] != start) path.push_back(parent[path.back()]);
      std::reverse(path.begin(), path.end());
      std::vector<StateEdge> cycle;
      Index prev = start;
      for (Index w : path) {
        cycle.push_back({prev, w});
        prev = w;
      }
      cycle.push_back({prev, start});
      return cycle;
    }
    for (Index w : graph.successors(v)) {
      if (allowed[w] && w != start && parent[w] == kNone) {
        parent[w] = v;
        queue.push_back(w);
      }
    }
  }
  return std::nullopt;
}

std::string format_cycle(std::span<const StateEdge> cycle) {
  std::string out;
  for (const StateEdge& e : cycle) {
    if (!out.empty()) out += ",";
    out += "(" + vertex_name(Vertex::state(e.from)) + "," + vertex_name(Vertex::state(e.to)) + ")";
  }
  return out;
}

std::string PathMonomial::to_string() const {
  std::string out;
  for (const Entry& e : factors) {
    if (!out.empty()) out += "*";
    out += entry_symbol('a', e);
  }
  return out;
}

std::vector<PathMonomial> entry_paths(const PatternMatrix& a, Index i, Index j, Index k) {
  if (!a.is_square()) throw std::invalid_argument("entry_paths: A must be square");
  if (k == 0) throw std::invalid_argument("entry_paths: walk length must be at least 1");
  const Index n = a.rows();
  if (i >= n || j >= n) throw std::invalid_argument("entry_paths: index outside A");

  std::vector<std::vector<Index>> pred(n);
  std::vector<std::vector<Index>> succ(n);
  for (const Entry& e : a.entries()) {
    pred[e.row].push_back(e.col);
    succ[e.col].push_back(e.row);
  }

  // from_j[t][v]: x_j reaches v in exactly t steps.
  std::vector<std::vector<bool>> from_j(k + 1, std::vector<bool>(n, false));
  from_j[0][j] = true;
  for (Index t = 1; t <= k; ++t) {
    for (Index v = 0; v < n; ++v) {
      if (!from_j[t - 1][v]) continue;
      for (Index w : succ[v]) from_j[t][w] = true;
    }
  }

  std::vector<PathMonomial> out;
  if (!from_j[k][i]) return out;

  // Walk backwards from x_i so factors come out in product order, sorted.
  PathMonomial current;
  current.factors.reserve(k);
  auto visit = [&](auto&& self, Index v, Index remaining) -> void {
    if (remaining == 0) {
      if (out.size() >= kMaxPathMonomials) {
        throw std::length_error("entry_paths: more than " + std::to_string(kMaxPathMonomials) +
                                " monomials");
      }
      out.push_back(current);
      return;
    }
    for (Index u : pred[v]) {
      if (!from_j[remaining - 1][u]) continue;
      current.factors.push_back({v, u});
      self(self, u, remaining - 1);
      current.factors.pop_back();
    }
  };
  visit(visit, i, k);
  return out;
}

}  // namespace zcnet
