#pragma once

#include "lcc/family.hpp"
#include "lcc/rng.hpp"

namespace lcc {

/// All 2^k - 1 nonzero vectors of F_2^k (element i is the bit pattern of
/// i + 1); for each v a greedy maximal set of disjoint triples {a, b, a+b+v}
/// scanned in increasing (a, b). delta is the achieved minimum over n.
LccInstance gen_hadamard_f2(int k);

/// Every 2-dimensional subspace {x, y, x+y} of the Hadamard instance, in
/// lexicographic order. Clusters every triple of gen_hadamard_f2(k).
ClusterFamily hadamard_family(const LccInstance& hadamard);

/// n generic unit vectors of R^{d_base} embedded isometrically in
/// R^{d_ambient}, with ceil(delta n) random disjoint spanning triples each.
LccInstance gen_low_dim_real(std::size_t n, std::size_t d_base, std::size_t d_ambient, double delta, Rng& rng);

struct PlantedInstance {
  LccInstance instance;
  ClusterFamily truth;  // one set per direction cluster
};

/// m tight caps of angular radius `radius`, grouped in blocks of 3
/// (orthogonal centres) or 4 (tetrahedral centres) inside random 3-dim
/// subspaces of R^d. Each triple takes two elements of one cap and one of
/// another cap of the owner's block, so every triple is clustered by the caps.
PlantedInstance gen_planted_clusters(std::size_t n, std::size_t d, std::size_t m, double delta, double radius,
                                     Rng& rng);

}  // namespace lcc
