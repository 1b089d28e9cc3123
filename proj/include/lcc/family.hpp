#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "lcc/instance.hpp"

namespace lcc {

using Pair = std::pair<Index, Index>;

/// Sets S_1..S_m plus the association of clustered pairs to a single set.
struct ClusterFamily {
  std::vector<IndexSet> sets;
  /// Ordered pair (a < b) -> set position; always the lowest set holding both.
  std::map<Pair, std::size_t> pair_assoc;
};

/// Lowest set containing both a and b.
std::optional<std::size_t> lowest_common_set(const ClusterFamily& family, Index a, Index b);

/// True iff some set holds at least two of the triple's indices.
bool is_clustered(const Triple& triple, const ClusterFamily& family);

/// Fills pair_assoc for every pair of every triple of the instance that lies
/// inside some set.
void associate_pairs(ClusterFamily& family, const LccInstance& inst);

/// Every set re-indexed through `positions` (old index -> new index, or n for
/// dropped elements); dropped elements disappear and the association is
/// rebuilt against `inst`.
ClusterFamily remap_family(const ClusterFamily& family, const std::vector<Index>& positions, std::size_t dropped_mark,
                           const LccInstance& inst);

}  // namespace lcc
