#pragma once

#include "lcc/cluster.hpp"
#include "lcc/restrict.hpp"

namespace lcc {

/// A large subset of small dimension.
struct SubsetLow {
  IndexSet subset;
  std::size_t dim = 0;  // exact rank of the subset rows
  std::string source;   // witness | restriction | bound-holds | fallback-whole | fallback-single
  std::vector<LdcExtraction> ldcs;
  Json diag;
};

/// Final clustering with beta = lambda/4, then the low-dimension step with
/// beta = lambda/2. A rejected clustering falls back to the whole list when
/// its rank is at most max{8 delta^6 d, n^{1/2 - lambda/16}}, else to the
/// span closure of the first element.
SubsetLow subset_low(const LccInstance& inst, double lambda, Rng& rng, const ClusterParams& params = {});

enum class AmplifyCase { Case1, Case2, Case3 };
std::string to_string(AmplifyCase c);

struct AmplifyRecord {
  AmplifyCase kind = AmplifyCase::Case1;
  std::size_t size_before = 0;
  std::size_t size_after = 0;
  std::size_t dim_before = 0;
  std::size_t dim_after = 0;
  std::size_t type_one = 0;
  std::size_t type_zero = 0;
  bool fallback = false;  // the case produced nothing new; one element was added instead
  std::optional<Ldc2Check> ldc;
  Json diag;
};

struct AmplificationState {
  IndexSet s;  // closed under span_closure
  std::size_t dim = 0;
  std::vector<AmplifyRecord> history;
};

/// One growth step of a span-closed set. Every step adds at least one element.
AmplificationState amplify_step(const LccInstance& inst, const AmplificationState& state, double lambda, Rng& rng,
                                const ClusterParams& params = {});

struct BoundReport {
  bool complete = false;
  std::size_t n = 0;
  std::size_t d_measured = 0;
  std::size_t bound_sum = 0;
  double target_bound = 0.0;
  double lambda = 0.0;
  double lambda_inner = 0.0;
  std::size_t steps = 0;
  std::size_t step_limit = 0;
  std::size_t step_estimate = 0;  // floor(400 / delta^4)
  std::uint64_t seed = 0;
  std::vector<AmplifyRecord> trace;
};

/// Amplification from the empty set until the whole list is covered, with
/// inner rate 1/51. Steps use stage_seed(seed, "amplify", k).
BoundReport certify_bound(const LccInstance& inst, double lambda, std::uint64_t seed,
                          const ClusterParams& params = {});

Json amplify_json(const AmplifyRecord& r);
Json bound_json(const BoundReport& report);
Json ldc_json(const LdcExtraction& e);

}  // namespace lcc
