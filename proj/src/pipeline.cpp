#include "lcc/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "lcc/errors.hpp"

namespace lcc {

namespace {

IndexSet compose(const IndexSet& outer, const IndexSet& inner) {
  IndexSet out;
  out.reserve(inner.size());
  for (Index i : inner) out.push_back(outer[i]);
  return make_index_set(std::move(out));
}

// Largest subset of `keep` on which every element retains a triple.
IndexSet prune_to_matched(const LccInstance& inst, IndexSet keep) {
  std::vector<char> alive(inst.size(), 0);
  for (Index v : keep) alive[v] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (Index v : keep) {
      if (!alive[v]) continue;
      bool any = false;
      for (const Triple& t : inst.matchings[v].triples) {
        if (alive[t[0]] && alive[t[1]] && alive[t[2]]) {
          any = true;
          break;
        }
      }
      if (!any) {
        alive[v] = 0;
        changed = true;
      }
    }
  }
  IndexSet out;
  for (Index v : keep) {
    if (alive[v]) out.push_back(v);
  }
  return out;
}

}  // namespace

SubsetLow subset_low(const LccInstance& inst, double lambda, Rng& rng, const ClusterParams& params) {
  if (inst.vectors.field().kind != FieldKind::Real) throw PreconditionError("subset_low needs a real instance");
  SubsetLow res;
  const FinalCluster fc = final_cluster(inst, lambda / 4.0, lambda, rng, params);
  res.diag["final_cluster"] = fc.diag;
  res.diag["outcome"] = to_string(fc.outcome);
  switch (fc.outcome) {
    case FinalCluster::Outcome::LowDimWitness:
      res.subset = fc.witness;
      res.source = "witness";
      res.ldcs = fc.ldcs;
      break;
    case FinalCluster::Outcome::Clustered: {
      LowDimension ld = cluster_low_dim(fc.instance, fc.family, lambda, lambda / 2.0, rng);
      res.subset = compose(fc.positions, ld.subset);
      res.source = ld.kind == LowDimension::Kind::Witness    ? "witness"
                   : ld.kind == LowDimension::Kind::Subset ? "restriction"
                                                             : "bound-holds";
      res.ldcs = ld.ldcs;
      Json ldd = ld.diag;
      if (ld.transcript) ldd["transcript"] = transcript_json(*ld.transcript);
      if (ld.certificate) ldd["certificate"] = certificate_json(*ld.certificate);
      res.diag["low_dim"] = std::move(ldd);
      break;
    }
    case FinalCluster::Outcome::Rejected: {
      const double n = static_cast<double>(inst.size());
      const std::size_t d = rank(inst.vectors);
      const double cap = std::max(8.0 * std::pow(inst.delta, 6.0) * static_cast<double>(d),
                                  std::pow(n, 0.5 - lambda / 16.0));
      res.diag["fallback_cap"] = cap;
      if (static_cast<double>(d) <= cap) {
        res.subset = iota_set(inst.size());
        res.source = "fallback-whole";
      } else {
        res.subset = span_closure(inst.vectors, IndexSet{0});
        res.source = "fallback-single";
      }
      break;
    }
  }
  res.dim = rank_of(inst.vectors, res.subset);
  res.diag["source"] = res.source;
  res.diag["size"] = res.subset.size();
  res.diag["dim"] = res.dim;
  return res;
}

std::string to_string(AmplifyCase c) {
  switch (c) {
    case AmplifyCase::Case1:
      return "case1";
    case AmplifyCase::Case2:
      return "case2";
    case AmplifyCase::Case3:
      return "case3";
  }
  return "?";
}

AmplificationState amplify_step(const LccInstance& inst, const AmplificationState& state, double lambda, Rng& rng,
                                const ClusterParams& params) {
  const std::size_t n = inst.size();
  if (state.s.size() >= n) throw PreconditionError("amplify_step: the set already covers every element");
  std::vector<char> in_s(n, 0);
  for (Index v : state.s) in_s[v] = 1;
  const double nd = static_cast<double>(n);
  const std::size_t case1_at = std::max<std::size_t>(1, ceil_count(inst.delta * nd / 4.0));
  const std::size_t zero_at = ceil_count(3.0 * inst.delta * nd / 8.0);

  AmplifyRecord rec;
  rec.size_before = state.s.size();
  rec.dim_before = state.dim;
  IndexSet grow;

  // Case 1: the element with most triples having two points in S.
  Index best = n;
  std::size_t best_count = 0;
  std::vector<Index> type_one, type_zero;
  for (Index v = 0; v < n; ++v) {
    if (in_s[v]) continue;
    std::size_t two = 0, outside = 0;
    for (const Triple& t : inst.matchings[v].triples) {
      const int k = in_s[t[0]] + in_s[t[1]] + in_s[t[2]];
      two += k == 2 ? 1 : 0;
      outside += k == 0 ? 1 : 0;
    }
    if (two > best_count) {
      best_count = two;
      best = v;
    }
    (outside >= zero_at ? type_zero : type_one).push_back(v);
  }
  rec.type_one = type_one.size();
  rec.type_zero = type_zero.size();
  rec.diag["case1_threshold"] = case1_at;
  rec.diag["type_zero_threshold"] = zero_at;

  if (best != n && best_count >= case1_at) {
    rec.kind = AmplifyCase::Case1;
    rec.diag["pivot"] = best + 1;
    rec.diag["two_in_s"] = best_count;
    grow = {best};
  } else if (!type_one.empty() && type_one.size() >= case1_at) {
    rec.kind = AmplifyCase::Case3;
    const VectorList images = project_to_zero(inst.vectors, state.s);
    std::vector<std::vector<std::vector<Index>>> pairs(type_one.size());
    for (std::size_t h = 0; h < type_one.size(); ++h) {
      for (const Triple& t : inst.matchings[type_one[h]].triples) {
        if (in_s[t[0]] + in_s[t[1]] + in_s[t[2]] != 1) continue;
        std::vector<Index> p;
        for (Index x : t) {
          if (!in_s[x]) p.push_back(x);
        }
        pairs[h].push_back(std::move(p));
      }
    }
    LdcExtraction e = extract_ldc2(images, type_one, pairs);
    rec.ldc = e.check;
    rec.diag["ldc"] = ldc_json(e);
    rec.diag["type_one_image_dim"] = rank_of(images, type_one);
    grow = type_one;
  } else {
    rec.kind = AmplifyCase::Case2;
    const IndexSet sub_keep = prune_to_matched(inst, type_zero);
    rec.diag["sub_instance"] = sub_keep.size();
    if (!sub_keep.empty()) {
      const LccInstance sub = restrict_instance(inst, sub_keep);
      SubsetLow sl = subset_low(sub, lambda, rng, params);
      rec.diag["subset_low"] = sl.diag;
      grow = compose(sub_keep, sl.subset);
    }
  }
  IndexSet next = span_closure(inst.vectors, set_union(state.s, grow));
  if (next.size() <= state.s.size()) {
    // Nothing new came out of the case; the first outside element keeps the
    // iteration moving.
    rec.fallback = true;
    Index first = 0;
    while (in_s[first]) ++first;
    next = span_closure(inst.vectors, set_union(state.s, IndexSet{first}));
  }
  AmplificationState out;
  out.s = std::move(next);
  out.dim = rank_of(inst.vectors, out.s);
  out.history = state.history;
  rec.size_after = out.s.size();
  rec.dim_after = out.dim;
  out.history.push_back(std::move(rec));
  return out;
}

BoundReport certify_bound(const LccInstance& inst, double lambda, std::uint64_t seed, const ClusterParams& params) {
  if (inst.vectors.field().kind != FieldKind::Real) throw PreconditionError("certify_bound needs a real instance");
  if (!verify_lcc(inst).valid) throw PreconditionError("certify_bound needs a verified instance");
  if (!(lambda > 0.0 && lambda <= 1.0 / 50.0 + 1e-15)) throw PreconditionError("lambda must lie in (0, 1/50]");
  BoundReport rep;
  rep.n = inst.size();
  rep.lambda = lambda;
  rep.lambda_inner = 1.0 / 51.0;
  rep.seed = seed;
  const double delta = inst.delta;
  rep.step_limit = static_cast<std::size_t>(std::ceil(1000.0 / std::pow(delta, 4.0)));
  rep.step_estimate = static_cast<std::size_t>(std::floor(400.0 / std::pow(delta, 4.0)));
  rep.target_bound = std::pow(static_cast<double>(rep.n), 0.5 - lambda);
  AmplificationState state;
  while (state.s.size() < rep.n) {
    if (rep.steps >= rep.step_limit) throw CertificationError("amplification did not terminate within the step guard");
    Rng rng = make_rng(stage_seed(seed, "amplify", rep.steps));
    state = amplify_step(inst, state, rep.lambda_inner, rng, params);
    ++rep.steps;
  }
  rep.trace = state.history;
  for (const auto& r : rep.trace) rep.bound_sum += r.dim_after - r.dim_before;
  rep.d_measured = rank(inst.vectors);
  if (rep.d_measured > rep.bound_sum) throw CertificationError("measured dimension exceeds the summed increments");
  rep.complete = true;
  return rep;
}

Json ldc_json(const LdcExtraction& e) {
  Json j;
  j["decoded"] = index_list(e.decoded);
  j["n"] = e.check.n;
  j["d"] = e.check.d;
  j["delta"] = e.check.delta;
  j["verified"] = e.check.verified;
  j["min_length"] = e.check.min_length;
  j["bound_holds"] = e.check.bound_holds;
  return j;
}

Json amplify_json(const AmplifyRecord& r) {
  Json j;
  j["case"] = to_string(r.kind);
  j["size_before"] = r.size_before;
  j["size_after"] = r.size_after;
  j["dim_before"] = r.dim_before;
  j["dim_after"] = r.dim_after;
  j["type_one"] = r.type_one;
  j["type_zero"] = r.type_zero;
  j["fallback"] = r.fallback;
  j["detail"] = r.diag;
  return j;
}

Json bound_json(const BoundReport& rep) {
  Json j;
  j["complete"] = rep.complete;
  j["n"] = rep.n;
  j["d_measured"] = rep.d_measured;
  j["bound_sum"] = rep.bound_sum;
  j["target_bound"] = rep.target_bound;
  j["lambda"] = rep.lambda;
  j["lambda_inner"] = rep.lambda_inner;
  j["steps"] = rep.steps;
  j["step_limit"] = rep.step_limit;
  j["step_estimate"] = rep.step_estimate;
  j["seed"] = rep.seed;
  Json trace = Json::array();
  for (const auto& r : rep.trace) trace.push_back(amplify_json(r));
  j["trace"] = std::move(trace);
  return j;
}

}  // namespace lcc
