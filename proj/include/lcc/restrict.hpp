#pragma once

#include <optional>

#include "lcc/family.hpp"
#include "lcc/report.hpp"
#include "lcc/rng.hpp"

namespace lcc {

/// A within-cluster pair of one decoding triple. a < b.
struct TaggedPair {
  Index a = 0;
  Index b = 0;
  std::size_t set = 0;  // position of the cluster set
  Triple source{};
  Index third = 0;  // the element of `source` outside the pair
};

/// One pair per triple of every matching, listed per owner in lexicographic
/// order of (a, b).
struct PairFamily {
  std::vector<std::vector<TaggedPair>> per_owner;
};

/// Picks the lexicographically least pair of each triple lying inside some
/// set, tagged with the lowest such set. An unclustered triple throws
/// PreconditionError.
PairFamily build_pairs(const LccInstance& inst, const ClusterFamily& family);

struct SampledSubset {
  IndexSet a;
  std::size_t set = 0;
  std::size_t rejections = 0;
  bool truncated = false;  // rejection budget exhausted; a uniform sub-sample was kept
};

double inclusion_rate(double lambda, std::size_t n);
double sample_cap(double lambda, std::size_t n);

/// Uniform set index, Bernoulli(n^{-1/4+lambda}) inclusion of its members,
/// resampled while |A| > n^{1/4+3 lambda}. After max_rejections draws the last
/// draw is cut down to a uniform subset of admissible size.
SampledSubset sample_cluster_subset(const ClusterFamily& family, double lambda, std::size_t n, Rng& rng,
                                    std::size_t max_rejections = 1000);

/// Third element of the first pair of P_v tagged `set` lying inside `a`.
std::optional<Index> partial_decode_map(Index v, const IndexSet& a, std::size_t set, const PairFamily& pairs);

struct RestrictionRound {
  std::size_t set = 0;
  IndexSet sample;
  std::size_t rejections = 0;
  bool truncated = false;
  bool heavy = false;  // the set carries at least n^{1/2 - 2 lambda} pairs
  std::vector<std::pair<Index, Index>> edges;  // (v, f(v))
  std::size_t components = 0;
  std::size_t small_components = 0;
};

struct RestrictionTranscript {
  std::size_t n = 0;
  double lambda = 0.0;
  std::vector<RestrictionRound> rounds;
  IndexSet kernel;  // U, the union of the samples
  std::size_t components = 0;  // k_r
  std::size_t small_components = 0;
  std::vector<Index> component_of;  // smallest member of each element's component
  std::uint64_t seed = 0;
  std::size_t restart = 0;
  std::size_t restarts = 1;
};

std::size_t default_rounds(double lambda, std::size_t n);
double small_component_limit(double lambda, std::size_t n);

/// r rounds of the restriction process with union-find component tracking.
RestrictionTranscript run_restriction(const LccInstance& inst, const ClusterFamily& family, double lambda,
                                      std::size_t rounds, Rng& rng);

/// Best of `restarts` runs (fewest final components, earliest restart on
/// ties); restart k uses stage_seed(seed, "restriction", k).
RestrictionTranscript best_restriction(const LccInstance& inst, const ClusterFamily& family, double lambda,
                                       std::size_t rounds, std::size_t restarts, std::uint64_t seed);

/// Components recomputed from the transcript edges by breadth-first search.
std::vector<Index> components_by_search(std::size_t n, const std::vector<std::pair<Index, Index>>& edges);

struct DimensionCertificate {
  bool exact = false;
  std::size_t dim = 0;          // rank(V)
  std::size_t kernel_rank = 0;  // rank of the U rows
  std::size_t image_rank = 0;   // rank(L(V))
  std::size_t components = 0;   // k_r
  std::size_t bound = 0;        // kernel_rank + components
  std::size_t edges_checked = 0;
  Json diag;
};

/// Projects U to zero and checks that every transcript edge has proportional
/// images (both zero or nonzero multiples over exact fields) and that
/// rank(L(V)) <= k_r. Failures throw CertificationError naming the edge.
DimensionCertificate certify_dimension(const LccInstance& inst, const RestrictionTranscript& transcript);

Json transcript_json(const RestrictionTranscript& transcript);
Json certificate_json(const DimensionCertificate& cert);

struct LowDimension {
  enum class Kind { Subset, BoundHolds, Witness };
  Kind kind = Kind::BoundHolds;
  IndexSet subset;  // positions of the input
  std::size_t dim = 0;
  std::optional<RestrictionTranscript> transcript;
  std::optional<DimensionCertificate> certificate;
  std::vector<LdcExtraction> ldcs;
  Json diag;
};

std::string to_string(LowDimension::Kind kind);

/// Regular form, then restriction plus certification. When the measured
/// dimension is already at most n^{1/2 - lambda} the input itself is returned
/// (the certificate is still computed and reported).
LowDimension cluster_low_dim(const LccInstance& inst, const ClusterFamily& family, double lambda, double beta,
                             Rng& rng, std::size_t restarts = 16, std::size_t rounds = 0);

}  // namespace lcc
