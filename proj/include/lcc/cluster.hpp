#pragma once

#include <map>
#include <optional>

#include "lcc/family.hpp"
#include "lcc/multiplicity.hpp"
#include "lcc/report.hpp"
#include "lcc/rng.hpp"
#include "lcc/spectral.hpp"

namespace lcc {

/// Thresholds of the clustering step. The defaults are the constants of the
/// asymptotic argument; desk-scale runs usually raise corr_cut.
struct ClusterParams {
  double type_a = 0.9;        // pair correlation making a triple Type A
  double type_b_corr = 0.01;  // correlation defining C_v and S in Case B
  double ball_radius = 5e-4;  // Case B ball radius before scaling
  double ball_scale = 1.0;
  double corr_cut = 1e-4;  // Cor(v) threshold for M_v*
};

struct TripleClass {
  enum class Kind { TypeA, TypeB, Unfiltered };
  Kind kind = Kind::TypeB;
  std::optional<Pair> witness;  // first pair (in triple order) with |ip| >= type_a
};

TripleClass classify_triple(const VectorList& vectors, const Triple& triple, double type_a = 0.9);

/// A decoding triple together with the element it decodes.
struct Incidence {
  Index owner = 0;
  Triple triple{};
};

std::vector<Incidence> all_incidences(const LccInstance& inst);

/// Terminal vertex set of the peeling process deleting vertices whose
/// weighted degree (sum of weights of surviving hyperedges through them) is
/// below D. Hyperedges of any arity; repeated edges add up.
IndexSet min_degree_subgraph(std::size_t n, const std::vector<std::vector<Index>>& edges,
                             const std::vector<double>& weights, double D);

struct BasicCluster {
  bool found = false;
  IndexSet s;
  std::vector<std::size_t> t;  // positions in mbar of the triples with >= 2 elements in s
  Json diag;
};

/// One cluster S with the triples of mbar it captures. mstar holds the
/// filtered matchings M_v*.
BasicCluster basic_cluster(const VectorList& vectors, const StarMatchings& mstar, const std::vector<Incidence>& mbar,
                           const ClusterParams& params);

struct IntermediateCluster {
  ClusterFamily family;
  std::vector<Incidence> uncovered;
  std::vector<std::size_t> captured;  // |T_i| per set
  Json diag;
};

IntermediateCluster intermediate_cluster(const LccInstance& inst, double stop_frac, const ClusterParams& params);

struct FinalCluster {
  enum class Outcome { Clustered, LowDimWitness, Rejected };
  Outcome outcome = Outcome::Rejected;
  LccInstance instance;  // clustered sub-instance
  IndexSet positions;    // its elements as positions of the input
  ClusterFamily family;  // over positions of `instance`
  IndexSet witness;      // positions of the input
  std::size_t witness_dim = 0;
  std::vector<LdcExtraction> ldcs;
  Json diag;
};

std::string to_string(FinalCluster::Outcome o);

/// Well-spread transform, low-multiplicity reduction, intermediate clustering
/// and refinement. stop_frac <= 0 selects delta''^2 / 100.
FinalCluster final_cluster(const LccInstance& inst, double beta, double lambda, Rng& rng, const ClusterParams& params,
                           double stop_frac = 0.0, std::size_t samples = 2000);

}  // namespace lcc
