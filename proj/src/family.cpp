#include "lcc/family.hpp"

#include <algorithm>

namespace lcc {

std::optional<std::size_t> lowest_common_set(const ClusterFamily& family, Index a, Index b) {
  const auto it = family.pair_assoc.find(Pair{std::min(a, b), std::max(a, b)});
  if (it != family.pair_assoc.end()) return it->second;
  for (std::size_t s = 0; s < family.sets.size(); ++s) {
    if (contains(family.sets[s], a) && contains(family.sets[s], b)) return s;
  }
  return std::nullopt;
}

bool is_clustered(const Triple& triple, const ClusterFamily& family) {
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      if (family.pair_assoc.count(Pair{std::min(triple[a], triple[b]), std::max(triple[a], triple[b])})) return true;
    }
  }
  for (const auto& s : family.sets) {
    int hits = 0;
    for (Index i : triple) hits += contains(s, i) ? 1 : 0;
    if (hits >= 2) return true;
  }
  return false;
}

void associate_pairs(ClusterFamily& family, const LccInstance& inst) {
  family.pair_assoc.clear();
  // Sets holding each element, in increasing order.
  std::vector<std::vector<std::size_t>> member(inst.size());
  for (std::size_t s = 0; s < family.sets.size(); ++s) {
    for (Index i : family.sets[s]) {
      if (i < member.size()) member[i].push_back(s);
    }
  }
  for (const auto& m : inst.matchings) {
    for (const Triple& t : m.triples) {
      for (int a = 0; a < 3; ++a) {
        for (int b = a + 1; b < 3; ++b) {
          const Pair p{std::min(t[a], t[b]), std::max(t[a], t[b])};
          if (family.pair_assoc.count(p)) continue;
          const auto& x = member[p.first];
          const auto& y = member[p.second];
          std::size_t i = 0, j = 0;
          while (i < x.size() && j < y.size() && x[i] != y[j]) {
            if (x[i] < y[j]) {
              ++i;
            } else {
              ++j;
            }
          }
          if (i < x.size() && j < y.size()) family.pair_assoc.emplace(p, x[i]);
        }
      }
    }
  }
}

ClusterFamily remap_family(const ClusterFamily& family, const std::vector<Index>& positions, std::size_t dropped_mark,
                           const LccInstance& inst) {
  ClusterFamily out;
  out.sets.reserve(family.sets.size());
  for (const auto& s : family.sets) {
    std::vector<Index> mapped;
    for (Index i : s) {
      if (i < positions.size() && positions[i] != dropped_mark) mapped.push_back(positions[i]);
    }
    out.sets.push_back(make_index_set(std::move(mapped)));
  }
  associate_pairs(out, inst);
  return out;
}

}  // namespace lcc
