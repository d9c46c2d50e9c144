#ifndef ZCNET_STRUCTURAL_HPP
#define ZCNET_STRUCTURAL_HPP

#include <optional>
#include <vector>

#include "zcnet/graph.hpp"
#include "zcnet/pattern.hpp"

namespace zcnet {

/// True iff every admissible realization of A is nilpotent, i.e. the graph
/// of A is acyclic. Decided by a topological sort.
bool is_structurally_nilpotent(const PatternMatrix& a);

/// nu(A): the largest order of a principal minor of A that is not
/// identically zero, equal to the most vertices coverable by vertex-disjoint
/// cycles. Computed as a maximum-weight assignment in which real arcs weigh 1
/// and artificial diagonal slots weigh 0.
Index compute_nu(const PatternMatrix& a);

/// Term rank: size of a maximum matching between rows and columns over the
/// nonzero positions.
Index generic_rank(const PatternMatrix& p);

/// Every state is reachable from some input vertex.
bool is_irreducible(const PatternMatrix& a, const PatternMatrix& b);

struct ControllabilityCertificate {
  enum class Failure { None, Unreachable, RankDeficient };

  bool controllable = false;
  Failure failure = Failure::None;
  StateSet unreachable;     ///< populated for Failure::Unreachable
  Index generic_rank = 0;   ///< term rank of [A B]
};

/// Generic controllability: irreducible and term rank of [A B] equal to n.
ControllabilityCertificate is_generically_controllable(const PatternMatrix& a,
                                                       const PatternMatrix& b);

/// Outcome of the generic zero-controllability test.
struct ZcReport {
  bool verdict = false;
  StateSet reachable;    ///< X_r
  StateSet unreachable;  ///< X_u
  /// One cycle of G_u; present iff verdict is false.
  std::optional<std::vector<StateEdge>> cycle_witness;
  /// Nontrivial SCCs lying inside X_u, as vertex sets.
  std::vector<StateSet> nontrivial_unreachable_components;

  friend bool operator==(const ZcReport&, const ZcReport&) = default;
};

/// Zero controllability holds generically iff the part of the graph not
/// reachable from the inputs has no cycle. A missing B means m = 0.
ZcReport is_generically_zero_controllable(const PatternMatrix& a,
                                          const std::optional<PatternMatrix>& b = std::nullopt);

/// Permutation that puts reachable states first, exposing
///   P A P' = [A11 A12; 0 A22],  P B = [B1; 0]
/// with (A11, B1) irreducible.
struct Decomposition {
  std::vector<Index> permutation;  ///< new position r holds old state permutation[r]
  Index n1 = 0;
  Index n2 = 0;
  PatternMatrix a11;
  PatternMatrix a12;
  PatternMatrix a22;
  PatternMatrix b1;
};

Decomposition reducible_decomposition(const PatternMatrix& a,
                                      const std::optional<PatternMatrix>& b = std::nullopt);

}  // namespace zcnet

#endif  // ZCNET_STRUCTURAL_HPP
