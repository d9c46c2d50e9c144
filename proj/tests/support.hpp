// Fixtures and brute-force oracles shared by the test suites. The oracles are
// deliberately naive (closure matrices, subset enumeration, bitmask DP) and
// do not call into the graph algorithms they are used to check.
#ifndef ZCNET_TESTS_SUPPORT_HPP
#define ZCNET_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "zcnet/graph.hpp"
#include "zcnet/pattern.hpp"

namespace zcnet::test {

/// Builds a pattern from 1-based (row, col) pairs.
inline PatternMatrix pattern1(Index rows, Index cols,
                              std::initializer_list<std::pair<Index, Index>> entries) {
  std::vector<Entry> out;
  for (auto [r, c] : entries) out.push_back({r - 1, c - 1});
  return {rows, cols, std::move(out)};
}

inline PatternMatrix example1_a() {
  return pattern1(5, 5, {{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 4}, {3, 4}, {3, 5}, {5, 5}});
}
inline PatternMatrix example1_a_without_a55() {
  return pattern1(5, 5, {{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 4}, {3, 4}, {3, 5}});
}
inline PatternMatrix example1_b() { return pattern1(5, 1, {{4, 1}}); }

inline PatternMatrix example2_a() {
  return pattern1(11, 11,
                  {{1, 3}, {1, 4}, {2, 1}, {2, 6}, {3, 2}, {3, 5}, {4, 4}, {5, 5}, {5, 8},
                   {6, 7}, {7, 6}, {7, 8}, {8, 9}, {8, 10}, {8, 11}});
}

/// 1-based state list to a 0-based StateSet.
inline StateSet xs(std::initializer_list<Index> one_based) {
  StateSet out;
  for (Index v : one_based) out.push_back(v - 1);
  std::sort(out.begin(), out.end());
  return out;
}

inline PatternMatrix random_pattern(std::mt19937_64& rng, Index rows, Index cols,
                                    double density) {
  std::bernoulli_distribution keep(density);
  std::vector<Entry> entries;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (keep(rng)) entries.push_back({i, j});
    }
  }
  return {rows, cols, std::move(entries)};
}

/// closure[s][t]: a path of length >= 1 leads from x_s to x_t (Warshall).
inline std::vector<std::vector<bool>> path_closure(const PatternMatrix& a) {
  const Index n = a.rows();
  std::vector<std::vector<bool>> c(n, std::vector<bool>(n, false));
  for (const Entry& e : a.entries()) c[e.col][e.row] = true;
  for (Index k = 0; k < n; ++k) {
    for (Index s = 0; s < n; ++s) {
      if (!c[s][k]) continue;
      for (Index t = 0; t < n; ++t) {
        if (c[k][t]) c[s][t] = true;
      }
    }
  }
  return c;
}

/// Vertices lying on some cycle.
inline std::vector<bool> on_cycle(const PatternMatrix& a) {
  const auto c = path_closure(a);
  std::vector<bool> out(a.rows());
  for (Index v = 0; v < a.rows(); ++v) out[v] = c[v][v];
  return out;
}

/// Driver set valid iff every vertex on a cycle is reached (length >= 0).
inline bool oracle_driver_valid(const PatternMatrix& a, const StateSet& drivers) {
  const auto c = path_closure(a);
  const auto cyc = on_cycle(a);
  for (Index v = 0; v < a.rows(); ++v) {
    if (!cyc[v]) continue;
    const bool hit = std::any_of(drivers.begin(), drivers.end(),
                                 [&](Index d) { return d == v || c[d][v]; });
    if (!hit) return false;
  }
  return true;
}

/// All valid driver sets of minimum size, by increasing-size subset search.
inline std::vector<StateSet> oracle_minimum_driver_sets(const PatternMatrix& a) {
  const Index n = a.rows();
  for (Index k = 0; k <= n; ++k) {
    std::vector<StateSet> found;
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    // prev_permutation walks k-subsets in lexicographic order of index tuples.
    do {
      StateSet s;
      for (Index v = 0; v < n; ++v) {
        if (pick[v]) s.push_back(v);
      }
      if (oracle_driver_valid(a, s)) found.push_back(s);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    if (!found.empty()) {
      std::sort(found.begin(), found.end());
      return found;
    }
  }
  return {};
}

/// Maximum matching size by bitmask DP over columns (cols <= 20).
inline Index oracle_term_rank(const PatternMatrix& p) {
  const Index rows = p.rows();
  const Index cols = p.cols();
  std::vector<std::uint32_t> row_mask(rows, 0);
  for (const Entry& e : p.entries()) row_mask[e.row] |= 1u << e.col;
  // best[mask]: max matched rows among rows processed so far using columns in mask.
  std::vector<int> best(std::size_t{1} << cols, -1);
  best[0] = 0;
  for (Index r = 0; r < rows; ++r) {
    std::vector<int> next = best;
    for (std::uint32_t mask = 0; mask < best.size(); ++mask) {
      if (best[mask] < 0) continue;
      for (Index c = 0; c < cols; ++c) {
        if ((row_mask[r] >> c & 1u) && !(mask >> c & 1u)) {
          next[mask | 1u << c] = std::max(next[mask | 1u << c], best[mask] + 1);
        }
      }
    }
    best = std::move(next);
  }
  return static_cast<Index>(*std::max_element(best.begin(), best.end()));
}

/// All simple cycles as vertex bitmasks (each cycle listed once, rooted at
/// its smallest vertex).
inline std::vector<std::uint32_t> oracle_simple_cycles(const PatternMatrix& a) {
  const Index n = a.rows();
  std::vector<std::vector<Index>> succ(n);
  for (const Entry& e : a.entries()) succ[e.col].push_back(e.row);
  std::vector<std::uint32_t> out;
  std::function<void(Index, Index, std::uint32_t)> walk = [&](Index root, Index v,
                                                               std::uint32_t mask) {
    for (Index w : succ[v]) {
      if (w == root) out.push_back(mask);
      else if (w > root && !(mask >> w & 1u)) walk(root, w, mask | 1u << w);
    }
  };
  for (Index root = 0; root < n; ++root) walk(root, root, 1u << root);
  return out;
}

/// Most vertices covered by pairwise vertex-disjoint simple cycles.
inline Index oracle_nu_disjoint_cycles(const PatternMatrix& a) {
  const auto cycles = oracle_simple_cycles(a);
  Index best = 0;
  std::function<void(Index, std::uint32_t)> pick = [&](Index from, std::uint32_t used) {
    best = std::max<Index>(best, static_cast<Index>(__builtin_popcount(used)));
    for (Index k = from; k < cycles.size(); ++k) {
      if (!(cycles[k] & used)) pick(k + 1, used | cycles[k]);
    }
  };
  pick(0, 0);
  return best;
}

/// Largest vertex subset S whose S x S pattern has a perfect matching.
inline Index oracle_nu_subsets(const PatternMatrix& a) {
  const Index n = a.rows();
  Index best = 0;
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    std::vector<Index> idx;
    for (Index v = 0; v < n; ++v) {
      if (s >> v & 1u) idx.push_back(v);
    }
    if (idx.size() <= best) continue;
    if (oracle_term_rank(a.block(idx, idx)) == idx.size()) best = idx.size();
  }
  return best;
}

}  // namespace zcnet::test

#endif  // ZCNET_TESTS_SUPPORT_HPP
