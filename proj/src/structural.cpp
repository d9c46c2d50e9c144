#include "zcnet/structural.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace zcnet {

namespace {

void require_square(const PatternMatrix& a) {
  if (!a.is_square()) {
    throw std::invalid_argument("A must be square, got " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()));
  }
}

// Minimum-cost perfect assignment (Hungarian method, potentials form).
// cost is row-major n x n; returns the optimal total cost.
long long min_cost_assignment(Index n, const std::vector<long long>& cost) {
  if (n == 0) return 0;
  constexpr long long kInf = std::numeric_limits<long long>::max() / 4;
  std::vector<long long> u(n + 1, 0), v(n + 1, 0), way_min(n + 1);
  std::vector<Index> match(n + 1, 0), way(n + 1, 0);
  for (Index row = 1; row <= n; ++row) {
    match[0] = row;
    Index col0 = 0;
    std::fill(way_min.begin(), way_min.end(), kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[col0] = true;
      const Index row0 = match[col0];
      long long delta = kInf;
      Index col1 = 0;
      for (Index col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const long long cur = cost[(row0 - 1) * n + (col - 1)] - u[row0] - v[col];
        if (cur < way_min[col]) {
          way_min[col] = cur;
          way[col] = col0;
        }
        if (way_min[col] < delta) {
          delta = way_min[col];
          col1 = col;
        }
      }
      for (Index col = 0; col <= n; ++col) {
        if (used[col]) {
          u[match[col]] += delta;
          v[col] -= delta;
        } else {
          way_min[col] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const Index col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  long long total = 0;
  for (Index col = 1; col <= n; ++col) total += cost[(match[col] - 1) * n + (col - 1)];
  return total;
}

}  // namespace

bool is_structurally_nilpotent(const PatternMatrix& a) {
  require_square(a);
  const Index n = a.rows();
  std::vector<Index> indegree(n, 0);
  std::vector<std::vector<Index>> succ(n);
  for (const Entry& e : a.entries()) {
    succ[e.col].push_back(e.row);
    ++indegree[e.row];
  }
  std::vector<Index> ready;
  for (Index v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  Index removed = 0;
  while (!ready.empty()) {
    const Index v = ready.back();
    ready.pop_back();
    ++removed;
    for (Index w : succ[v]) {
      if (--indegree[w] == 0) ready.push_back(w);
    }
  }
  return removed == n;
}

Index compute_nu(const PatternMatrix& a) {
  require_square(a);
  const Index n = a.rows();
  const long long forbidden = static_cast<long long>(n) + 1;
  std::vector<long long> cost(n * n, forbidden);
  for (Index i = 0; i < n; ++i) cost[i * n + i] = 0;
  for (const Entry& e : a.entries()) cost[e.row * n + e.col] = -1;
  return static_cast<Index>(-min_cost_assignment(n, cost));
}

Index generic_rank(const PatternMatrix& p) {
  std::vector<std::vector<Index>> adj(p.rows());
  for (const Entry& e : p.entries()) adj[e.row].push_back(e.col);

  constexpr Index kFree = std::numeric_limits<Index>::max();
  std::vector<Index> col_match(p.cols(), kFree);
  std::vector<Index> seen(p.cols(), kFree);

  auto augment = [&](auto&& self, Index row, Index stamp) -> bool {
    for (Index col : adj[row]) {
      if (seen[col] == stamp) continue;
      seen[col] = stamp;
      if (col_match[col] == kFree || self(self, col_match[col], stamp)) {
        col_match[col] = row;
        return true;
      }
    }
    return false;
  };

  Index rank = 0;
  for (Index row = 0; row < p.rows(); ++row) {
    if (augment(augment, row, row)) ++rank;
  }
  return rank;
}

bool is_irreducible(const PatternMatrix& a, const PatternMatrix& b) {
  const SystemGraph graph(a, b);
  return reachable_from_inputs(graph).size() == graph.num_states();
}

ControllabilityCertificate is_generically_controllable(const PatternMatrix& a,
                                                       const PatternMatrix& b) {
  const SystemGraph graph(a, b);
  ControllabilityCertificate cert;
  cert.generic_rank = generic_rank(hcat(a, b));

  const StateSet reached = reachable_from_inputs(graph);
  if (reached.size() != graph.num_states()) {
    cert.failure = ControllabilityCertificate::Failure::Unreachable;
    std::vector<bool> in(graph.num_states(), false);
    for (Index v : reached) in[v] = true;
    for (Index v = 0; v < graph.num_states(); ++v) {
      if (!in[v]) cert.unreachable.push_back(v);
    }
    return cert;
  }
  if (cert.generic_rank != graph.num_states()) {
    cert.failure = ControllabilityCertificate::Failure::RankDeficient;
    return cert;
  }
  cert.controllable = true;
  return cert;
}

ZcReport is_generically_zero_controllable(const PatternMatrix& a,
                                          const std::optional<PatternMatrix>& b) {
  const SystemGraph graph(a, b);
  const Index n = graph.num_states();

  ZcReport report;
  report.reachable = reachable_from_inputs(graph);
  std::vector<bool> unreached(n, true);
  for (Index v : report.reachable) unreached[v] = false;
  for (Index v = 0; v < n; ++v) {
    if (unreached[v]) report.unreachable.push_back(v);
  }

  // Reachability is closed under successors, so every SCC lies wholly in
  // X_r or X_u and the SCCs of G_u are those of G inside X_u.
  const SccDecomposition scc = scc_decompose(graph);
  for (Index c = 0; c < scc.size(); ++c) {
    const StateSet& comp = scc.component(c);
    if (scc.is_nontrivial(c) && unreached[comp.front()]) {
      report.nontrivial_unreachable_components.push_back(comp);
    }
  }
  report.verdict = report.nontrivial_unreachable_components.empty();
  if (!report.verdict) {
    const StateSet& first = report.nontrivial_unreachable_components.front();
    std::vector<bool> inside(n, false);
    for (Index v : first) inside[v] = true;
    report.cycle_witness = find_cycle_through(graph, first.front(), inside);
  }
  return report;
}

Decomposition reducible_decomposition(const PatternMatrix& a,
                                      const std::optional<PatternMatrix>& b) {
  const SystemGraph graph(a, b);
  const ZcReport split = is_generically_zero_controllable(a, b);

  Decomposition d;
  d.n1 = split.reachable.size();
  d.n2 = split.unreachable.size();
  d.permutation = split.reachable;
  d.permutation.insert(d.permutation.end(), split.unreachable.begin(), split.unreachable.end());

  std::vector<Index> inputs(graph.num_inputs());
  for (Index j = 0; j < inputs.size(); ++j) inputs[j] = j;

  d.a11 = a.block(split.reachable, split.reachable);
  d.a12 = a.block(split.reachable, split.unreachable);
  d.a22 = a.block(split.unreachable, split.unreachable);
  d.b1 = graph.b().block(split.reachable, inputs);
  return d;
}

}  // namespace zcnet
