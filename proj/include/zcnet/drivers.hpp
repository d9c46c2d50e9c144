#ifndef ZCNET_DRIVERS_HPP
#define ZCNET_DRIVERS_HPP

#include <optional>
#include <string>
#include <vector>

#include "zcnet/graph.hpp"
#include "zcnet/pattern.hpp"

namespace zcnet {

/// A driver node selection D and its validity certificate.
struct DriverSet {
  StateSet drivers;  ///< sorted, 0-based
  bool valid = false;
  /// One cycle of G_u^D when invalid.
  std::optional<std::vector<StateEdge>> uncovered_witness;
  /// All nontrivial SCCs not reached from D.
  std::vector<StateSet> uncovered_components;
  /// Set only by the exact solver.
  bool minimal = false;
  /// Explains a fallback to the greedy heuristic.
  std::optional<std::string> warning;

  Index size() const { return drivers.size(); }
};

/// Default bound on candidate components for the exact search.
inline constexpr Index kDefaultExactCap = 25;

/// Zero controllability with drivers D holds generically iff the part of the
/// graph not reachable from D contains no cycle. Unknown vertices throw
/// std::out_of_range.
DriverSet validate_driver_set(const PatternMatrix& a, const StateSet& drivers);

/// Minimum-cardinality valid driver set, lexicographically smallest among
/// ties. Falls back to greedy_driver_set (minimal unset, warning set) when
/// more than `exact_cap` components can reach a nontrivial component.
DriverSet minimal_driver_set(const PatternMatrix& a, Index exact_cap = kDefaultExactCap);

/// All minimum-cardinality valid driver sets in lexicographic order, at most
/// `limit` of them. Under the size guard the single greedy set is returned.
std::vector<DriverSet> enumerate_minimal_driver_sets(const PatternMatrix& a, Index limit,
                                                     Index exact_cap = kDefaultExactCap);

/// Repeatedly takes the condensation component whose downward closure covers
/// the most still uncovered nontrivial components.
DriverSet greedy_driver_set(const PatternMatrix& a);

enum class BMode { Shared, PerDriver };

struct BPattern {
  BMode mode = BMode::PerDriver;
  PatternMatrix pattern;
};

/// Input pattern for drivers D: one column hitting every driver (shared) or
/// one column per driver in ascending driver order (per_driver).
BPattern build_b_pattern(Index n, const StateSet& drivers, BMode mode);

std::string to_string(BMode mode);
BMode parse_b_mode(const std::string& text);

}  // namespace zcnet

#endif  // ZCNET_DRIVERS_HPP
