#include "zcnet/drivers.hpp"

#include <algorithm>
#include <boost/dynamic_bitset.hpp>
#include <stdexcept>

namespace zcnet {

namespace {

using Bits = boost::dynamic_bitset<>;

// Covering instance: nontrivial components are the targets, components that
// reach at least one target are the candidates.
struct CoverInstance {
  SccDecomposition scc;
  std::vector<Index> targets;          // component ids
  std::vector<Index> candidates;       // component ids, ascending
  std::vector<Bits> cover;             // per candidate, over targets
  std::vector<Bits> coverers;          // per target, over candidates
  std::vector<Index> candidate_of;     // component id -> candidate slot or npos

  static constexpr Index npos = static_cast<Index>(-1);

  explicit CoverInstance(const SystemGraph& graph) : scc(scc_decompose(graph)) {
    targets = scc.nontrivial_components();
    std::vector<Index> target_slot(scc.size(), npos);
    for (Index t = 0; t < targets.size(); ++t) target_slot[targets[t]] = t;

    candidate_of.assign(scc.size(), npos);
    for (Index c = 0; c < scc.size(); ++c) {
      Bits bits(targets.size());
      for (Index d : scc.downward_closure(c)) {
        if (target_slot[d] != npos) bits.set(target_slot[d]);
      }
      if (bits.any()) {
        candidate_of[c] = candidates.size();
        candidates.push_back(c);
        cover.push_back(std::move(bits));
      }
    }
    coverers.assign(targets.size(), Bits(candidates.size()));
    for (Index k = 0; k < candidates.size(); ++k) {
      for (Index t = cover[k].find_first(); t != Bits::npos; t = cover[k].find_next(t)) {
        coverers[t].set(k);
      }
    }
  }

  Bits all_targets() const { return Bits(targets.size()).set(); }

  // Size of a family of uncovered targets no two of which share a coverer;
  // each needs its own driver.
  Index lower_bound(const Bits& uncovered) const {
    std::vector<Index> order;
    for (Index t = uncovered.find_first(); t != Bits::npos; t = uncovered.find_next(t)) {
      order.push_back(t);
    }
    std::stable_sort(order.begin(), order.end(), [&](Index l, Index r) {
      return coverers[l].count() < coverers[r].count();
    });
    Bits used(candidates.size());
    Index bound = 0;
    for (Index t : order) {
      if (!coverers[t].intersects(used)) {
        ++bound;
        used |= coverers[t];
      }
    }
    return bound;
  }

  bool cover_exists(const Bits& uncovered, Index slots) const {
    if (uncovered.none()) return true;
    if (slots == 0 || lower_bound(uncovered) > slots) return false;
    const Index t = uncovered.find_first();
    const Bits& options = coverers[t];
    for (Index k = options.find_first(); k != Bits::npos; k = options.find_next(k)) {
      if (cover_exists(uncovered - cover[k], slots - 1)) return true;
    }
    return false;
  }

  Index minimum_size() const {
    const Bits all = all_targets();
    for (Index k = lower_bound(all);; ++k) {
      if (cover_exists(all, k)) return k;
    }
  }
};

// Lexicographic enumeration over concrete vertices of covers with exactly
// `slots` drivers. Every chosen vertex must cover something new.
class VertexSearch {
 public:
  VertexSearch(const CoverInstance& inst, Index limit) : inst_(inst), limit_(limit) {
    for (Index k = 0; k < inst.candidates.size(); ++k) {
      for (Index v : inst.scc.component(inst.candidates[k])) vertices_.push_back(v);
    }
    std::sort(vertices_.begin(), vertices_.end());
    suffix_.assign(vertices_.size() + 1, Bits(inst.targets.size()));
    for (Index p = vertices_.size(); p-- > 0;) {
      suffix_[p] = suffix_[p + 1] | cover_of(vertices_[p]);
    }
  }

  std::vector<StateSet> run(Index slots) {
    StateSet chosen;
    visit(0, chosen, inst_.all_targets(), slots);
    return std::move(found_);
  }

 private:
  const Bits& cover_of(Index v) const {
    return inst_.cover[inst_.candidate_of[inst_.scc.component_of(v)]];
  }

  void visit(Index pos, StateSet& chosen, const Bits& uncovered, Index slots) {
    if (found_.size() >= limit_) return;
    if (uncovered.none()) {
      found_.push_back(chosen);
      return;
    }
    if (slots == 0 || inst_.lower_bound(uncovered) > slots) return;
    for (Index p = pos; p < vertices_.size() && found_.size() < limit_; ++p) {
      if (!uncovered.is_subset_of(suffix_[p])) break;
      const Bits& c = cover_of(vertices_[p]);
      if (!c.intersects(uncovered)) continue;
      chosen.push_back(vertices_[p]);
      visit(p + 1, chosen, uncovered - c, slots - 1);
      chosen.pop_back();
    }
  }

  const CoverInstance& inst_;
  Index limit_;
  std::vector<Index> vertices_;
  std::vector<Bits> suffix_;
  std::vector<StateSet> found_;
};

DriverSet greedy_from(const PatternMatrix& a, const CoverInstance& inst) {
  Bits uncovered = inst.all_targets();
  StateSet drivers;
  while (uncovered.any()) {
    Index best = CoverInstance::npos;
    Index best_gain = 0;
    for (Index k = 0; k < inst.candidates.size(); ++k) {
      const Index gain = (inst.cover[k] & uncovered).count();
      if (gain > best_gain) {
        best = k;
        best_gain = gain;
      }
    }
    drivers.push_back(inst.scc.component(inst.candidates[best]).front());
    uncovered -= inst.cover[best];
  }
  std::sort(drivers.begin(), drivers.end());
  return validate_driver_set(a, drivers);
}

std::string guard_warning(Index candidates, Index cap) {
  return std::to_string(candidates) + " candidate components exceed the exact-search cap of " +
         std::to_string(cap) + "; greedy result, not certified minimal";
}

}  // namespace

DriverSet validate_driver_set(const PatternMatrix& a, const StateSet& drivers) {
  const SystemGraph graph(a);
  DriverSet out;
  out.drivers = drivers;
  std::sort(out.drivers.begin(), out.drivers.end());
  out.drivers.erase(std::unique(out.drivers.begin(), out.drivers.end()), out.drivers.end());

  const StateSet reached = reachable_from_states(graph, out.drivers);
  std::vector<bool> unreached(graph.num_states(), true);
  for (Index v : reached) unreached[v] = false;

  const SccDecomposition scc = scc_decompose(graph);
  for (Index c = 0; c < scc.size(); ++c) {
    if (scc.is_nontrivial(c) && unreached[scc.component(c).front()]) {
      out.uncovered_components.push_back(scc.component(c));
    }
  }
  out.valid = out.uncovered_components.empty();
  if (!out.valid) {
    const StateSet& first = out.uncovered_components.front();
    std::vector<bool> inside(graph.num_states(), false);
    for (Index v : first) inside[v] = true;
    out.uncovered_witness = find_cycle_through(graph, first.front(), inside);
  }
  return out;
}

DriverSet greedy_driver_set(const PatternMatrix& a) {
  const SystemGraph graph(a);
  return greedy_from(a, CoverInstance(graph));
}

DriverSet minimal_driver_set(const PatternMatrix& a, Index exact_cap) {
  auto sets = enumerate_minimal_driver_sets(a, 1, exact_cap);
  return std::move(sets.front());
}

std::vector<DriverSet> enumerate_minimal_driver_sets(const PatternMatrix& a, Index limit,
                                                     Index exact_cap) {
  if (limit == 0) throw std::invalid_argument("enumeration limit must be at least 1");
  const SystemGraph graph(a);
  const CoverInstance inst(graph);

  if (inst.candidates.size() > exact_cap) {
    DriverSet greedy = greedy_from(a, inst);
    greedy.warning = guard_warning(inst.candidates.size(), exact_cap);
    return {std::move(greedy)};
  }

  const Index size = inst.minimum_size();
  std::vector<DriverSet> out;
  for (StateSet& drivers : VertexSearch(inst, limit).run(size)) {
    DriverSet d = validate_driver_set(a, drivers);
    d.minimal = true;
    out.push_back(std::move(d));
  }
  return out;
}

BPattern build_b_pattern(Index n, const StateSet& drivers, BMode mode) {
  StateSet sorted = drivers;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (Index d : sorted) {
    if (d >= n) {
      throw std::out_of_range("driver " + vertex_name(Vertex::state(d)) + " outside n=" +
                              std::to_string(n));
    }
  }
  if (sorted.empty()) return {mode, PatternMatrix::zero(n, 0)};

  std::vector<Entry> entries;
  for (Index k = 0; k < sorted.size(); ++k) {
    entries.push_back({sorted[k], mode == BMode::Shared ? 0 : k});
  }
  const Index cols = mode == BMode::Shared ? 1 : sorted.size();
  return {mode, PatternMatrix(n, cols, std::move(entries))};
}

std::string to_string(BMode mode) { return mode == BMode::Shared ? "shared" : "per-driver"; }

BMode parse_b_mode(const std::string& text) {
  if (text == "shared") return BMode::Shared;
  if (text == "per-driver" || text == "per_driver") return BMode::PerDriver;
  throw std::invalid_argument("unknown B mode '" + text + "' (expected shared|per-driver)");
}

}  // namespace zcnet
