#include "lcc/restrict.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <boost/pending/disjoint_sets.hpp>

#include "lcc/errors.hpp"
#include "lcc/multiplicity.hpp"

namespace lcc {

namespace {

std::string triple_text(Index owner, const Triple& t) {
  return "triple (" + std::to_string(t[0] + 1) + "," + std::to_string(t[1] + 1) + "," + std::to_string(t[2] + 1) +
         ") of element " + std::to_string(owner + 1);
}

void require_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0 / 50.0 + 1e-15)) throw PreconditionError("lambda must lie in (0, 1/50]");
}

struct Components {
  explicit Components(std::size_t n) : sets(n) {
    for (Index i = 0; i < n; ++i) sets.make_set(i);
  }
  boost::disjoint_sets_with_storage<> sets;
};

// Smallest member of each element's component.
std::vector<Index> canonical(std::size_t n, boost::disjoint_sets_with_storage<>& sets) {
  std::vector<Index> low(n, n), out(n);
  for (Index i = 0; i < n; ++i) {
    const Index r = sets.find_set(i);
    low[r] = std::min(low[r], i);
  }
  for (Index i = 0; i < n; ++i) out[i] = low[sets.find_set(i)];
  return out;
}

void count_components(const std::vector<Index>& comp, double small_limit, std::size_t& total, std::size_t& small) {
  std::vector<std::size_t> size(comp.size(), 0);
  for (Index c : comp) ++size[c];
  total = 0;
  small = 0;
  for (std::size_t s : size) {
    if (s == 0) continue;
    ++total;
    if (static_cast<double>(s) <= small_limit) ++small;
  }
}

bool proportional(const VectorList& images, Index v, Index z) {
  const std::array<Index, 2> rows{v, z};
  if (rank_of(images, rows) > 1) return false;
  if (images.field().exact()) return images.is_zero_row(v) == images.is_zero_row(z);
  return true;
}

}  // namespace

PairFamily build_pairs(const LccInstance& inst, const ClusterFamily& family) {
  PairFamily out;
  out.per_owner.resize(inst.size());
  for (const auto& m : inst.matchings) {
    auto& list = out.per_owner[m.owner];
    for (const Triple& t : m.triples) {
      Triple s = t;
      std::sort(s.begin(), s.end());
      const std::array<Pair, 3> cands{{{s[0], s[1]}, {s[0], s[2]}, {s[1], s[2]}}};
      const std::array<Index, 3> thirds{s[2], s[1], s[0]};
      bool found = false;
      for (std::size_t k = 0; k < 3 && !found; ++k) {
        if (auto set = lowest_common_set(family, cands[k].first, cands[k].second)) {
          list.push_back({cands[k].first, cands[k].second, *set, t, thirds[k]});
          found = true;
        }
      }
      if (!found) throw PreconditionError("build_pairs: unclustered " + triple_text(m.owner, t));
    }
    std::sort(list.begin(), list.end(),
              [](const TaggedPair& x, const TaggedPair& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  }
  return out;
}

double inclusion_rate(double lambda, std::size_t n) {
  return std::pow(static_cast<double>(n), -0.25 + lambda);
}

double sample_cap(double lambda, std::size_t n) {
  return std::pow(static_cast<double>(n), 0.25 + 3.0 * lambda);
}

SampledSubset sample_cluster_subset(const ClusterFamily& family, double lambda, std::size_t n, Rng& rng,
                                    std::size_t max_rejections) {
  require_lambda(lambda);
  if (family.sets.empty()) throw PreconditionError("sample_cluster_subset: empty family");
  SampledSubset out;
  out.set = static_cast<std::size_t>(uniform_below(rng, family.sets.size()));
  const IndexSet& s = family.sets[out.set];
  const double p = inclusion_rate(lambda, n);
  const auto cap = static_cast<std::size_t>(std::floor(sample_cap(lambda, n) + 1e-9));
  for (;;) {
    IndexSet a;
    for (Index x : s) {
      if (uniform01(rng) < p) a.push_back(x);
    }
    if (a.size() <= cap) {
      out.a = std::move(a);
      return out;
    }
    if (++out.rejections >= max_rejections) {
      // Partial Fisher-Yates keeps a uniform cap-subset of the last draw.
      for (std::size_t k = 0; k < cap; ++k) {
        const std::size_t j = k + static_cast<std::size_t>(uniform_below(rng, a.size() - k));
        std::swap(a[k], a[j]);
      }
      a.resize(cap);
      out.a = make_index_set(std::move(a));
      out.truncated = true;
      return out;
    }
  }
}

std::optional<Index> partial_decode_map(Index v, const IndexSet& a, std::size_t set, const PairFamily& pairs) {
  for (const TaggedPair& p : pairs.per_owner.at(v)) {
    if (p.set == set && contains(a, p.a) && contains(a, p.b)) return p.third;
  }
  return std::nullopt;
}

std::size_t default_rounds(double lambda, std::size_t n) {
  return static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 4.0 * lambda) - 1e-9));
}

double small_component_limit(double lambda, std::size_t n) {
  return std::pow(static_cast<double>(n), 1.0 - 10.0 * lambda);
}

RestrictionTranscript run_restriction(const LccInstance& inst, const ClusterFamily& family, double lambda,
                                      std::size_t rounds, Rng& rng) {
  require_lambda(lambda);
  const std::size_t n = inst.size();
  const PairFamily pairs = build_pairs(inst, family);
  // Pairs by set, so a round only touches the owners that can fire.
  std::vector<std::vector<Index>> owners_of(family.sets.size());
  std::vector<std::size_t> pairs_in(family.sets.size(), 0);
  for (Index v = 0; v < n; ++v) {
    for (const TaggedPair& p : pairs.per_owner[v]) {
      if (owners_of[p.set].empty() || owners_of[p.set].back() != v) owners_of[p.set].push_back(v);
      ++pairs_in[p.set];
    }
  }
  const double heavy_at = std::pow(static_cast<double>(n), 0.5 - 2.0 * lambda);
  const double small_limit = small_component_limit(lambda, n);

  RestrictionTranscript tr;
  tr.n = n;
  tr.lambda = lambda;
  Components uf(n);
  std::vector<Index> kernel;
  for (std::size_t j = 0; j < rounds && !family.sets.empty(); ++j) {
    SampledSubset s = sample_cluster_subset(family, lambda, n, rng);
    RestrictionRound round;
    round.set = s.set;
    round.rejections = s.rejections;
    round.truncated = s.truncated;
    round.heavy = static_cast<double>(pairs_in[s.set]) >= heavy_at;
    for (Index v : owners_of[s.set]) {
      if (auto z = partial_decode_map(v, s.a, s.set, pairs)) {
        round.edges.emplace_back(v, *z);
        uf.sets.union_set(v, *z);
      }
    }
    kernel.insert(kernel.end(), s.a.begin(), s.a.end());
    round.sample = std::move(s.a);
    count_components(canonical(n, uf.sets), small_limit, round.components, round.small_components);
    tr.rounds.push_back(std::move(round));
  }
  tr.kernel = make_index_set(std::move(kernel));
  tr.component_of = canonical(n, uf.sets);
  count_components(tr.component_of, small_limit, tr.components, tr.small_components);
  return tr;
}

RestrictionTranscript best_restriction(const LccInstance& inst, const ClusterFamily& family, double lambda,
                                       std::size_t rounds, std::size_t restarts, std::uint64_t seed) {
  if (restarts == 0) throw PreconditionError("best_restriction: at least one restart");
  std::optional<RestrictionTranscript> best;
  for (std::size_t k = 0; k < restarts; ++k) {
    const std::uint64_t s = stage_seed(seed, "restriction", k);
    Rng rng = make_rng(s);
    RestrictionTranscript tr = run_restriction(inst, family, lambda, rounds, rng);
    tr.seed = s;
    tr.restart = k;
    if (!best || tr.components < best->components) best = std::move(tr);
  }
  best->restarts = restarts;
  return *best;
}

std::vector<Index> components_by_search(std::size_t n, const std::vector<std::pair<Index, Index>>& edges) {
  std::vector<std::vector<Index>> adj(n);
  for (const auto& [a, b] : edges) {
    adj.at(a).push_back(b);
    adj.at(b).push_back(a);
  }
  std::vector<Index> comp(n, n);
  for (Index s = 0; s < n; ++s) {
    if (comp[s] != n) continue;
    std::queue<Index> q;
    q.push(s);
    comp[s] = s;
    while (!q.empty()) {
      const Index u = q.front();
      q.pop();
      for (Index w : adj[u]) {
        if (comp[w] == n) {
          comp[w] = s;
          q.push(w);
        }
      }
    }
  }
  return comp;
}

DimensionCertificate certify_dimension(const LccInstance& inst, const RestrictionTranscript& transcript) {
  const std::size_t n = inst.size();
  if (transcript.n != n) throw PreconditionError("certify_dimension: transcript belongs to another instance");
  DimensionCertificate cert;
  cert.exact = inst.vectors.field().exact();
  const VectorList images = project_to_zero(inst.vectors, transcript.kernel);
  for (const auto& round : transcript.rounds) {
    for (const auto& [v, z] : round.edges) {
      if (!proportional(images, v, z)) {
        throw CertificationError("edge (" + std::to_string(v + 1) + "," + std::to_string(z + 1) +
                                 ") is not proportional after projection");
      }
      ++cert.edges_checked;
    }
  }
  // The recorded components must be the ones the edges generate.
  std::vector<std::pair<Index, Index>> all;
  for (const auto& round : transcript.rounds) all.insert(all.end(), round.edges.begin(), round.edges.end());
  if (components_by_search(n, all) != transcript.component_of) {
    throw CertificationError("transcript components disagree with its edges");
  }
  cert.dim = rank(inst.vectors);
  cert.kernel_rank = rank_of(inst.vectors, transcript.kernel);
  cert.image_rank = rank(images);
  cert.components = transcript.components;
  cert.bound = cert.kernel_rank + cert.components;
  if (cert.image_rank > cert.components) {
    throw CertificationError("rank of the projected list exceeds the component count");
  }
  if (cert.dim > cert.bound) throw CertificationError("dimension exceeds kernel rank plus components");
  return cert;
}

Json transcript_json(const RestrictionTranscript& tr) {
  Json j;
  j["n"] = tr.n;
  j["lambda"] = tr.lambda;
  j["seed"] = tr.seed;
  j["restart"] = tr.restart;
  j["restarts"] = tr.restarts;
  Json rounds = Json::array();
  for (const auto& r : tr.rounds) {
    Json x;
    x["set"] = r.set + 1;
    x["sample"] = index_list(r.sample);
    x["rejections"] = r.rejections;
    x["truncated"] = r.truncated;
    x["heavy"] = r.heavy;
    Json edges = Json::array();
    for (const auto& [v, z] : r.edges) edges.push_back(Json::array({v + 1, z + 1}));
    x["edges"] = std::move(edges);
    x["components"] = r.components;
    x["small_components"] = r.small_components;
    rounds.push_back(std::move(x));
  }
  j["rounds"] = std::move(rounds);
  j["kernel"] = index_list(tr.kernel);
  j["components"] = tr.components;
  j["small_components"] = tr.small_components;
  return j;
}

Json certificate_json(const DimensionCertificate& c) {
  Json j;
  j["exact"] = c.exact;
  j["dim"] = c.dim;
  j["kernel_rank"] = c.kernel_rank;
  j["image_rank"] = c.image_rank;
  j["components"] = c.components;
  j["bound"] = c.bound;
  j["edges_checked"] = c.edges_checked;
  return j;
}

std::string to_string(LowDimension::Kind kind) {
  switch (kind) {
    case LowDimension::Kind::Subset:
      return "subset";
    case LowDimension::Kind::BoundHolds:
      return "bound-holds";
    case LowDimension::Kind::Witness:
      return "witness";
  }
  return "?";
}

LowDimension cluster_low_dim(const LccInstance& inst, const ClusterFamily& family, double lambda, double beta,
                             Rng& rng, std::size_t restarts, std::size_t rounds) {
  require_lambda(lambda);
  LowDimension res;
  const std::size_t n = inst.size();
  const double nd = static_cast<double>(n);
  res.diag["lambda"] = lambda;
  res.diag["beta"] = beta;
  const MultiplicityProfile prof = triple_multiplicity(inst);
  res.diag["max_multiplicity"] = prof.max_multiplicity;
  res.diag["multiplicity_cap"] = std::pow(nd, beta);

  ReductionResult reg = regularize(inst);
  res.diag["regularize"] = reg.diag;
  if (!reg.reduced) {
    res.kind = LowDimension::Kind::Witness;
    res.subset = reg.witness;
    res.dim = rank_of(inst.vectors, res.subset);
    if (reg.ldc) res.ldcs.push_back(*reg.ldc);
    return res;
  }
  const LccInstance& w = reg.instance;
  std::vector<Index> newpos(n, n);
  for (std::size_t k = 0; k < reg.kept.size(); ++k) newpos[reg.kept[k]] = k;
  const ClusterFamily fam = remap_family(family, newpos, n, w);

  const std::size_t d = rank(inst.vectors);
  const double target = std::pow(nd, 0.5 - lambda);
  res.diag["dim"] = d;
  res.diag["dim_target"] = target;

  const std::size_t r = rounds > 0 ? rounds : default_rounds(lambda, std::max<std::size_t>(w.size(), 1));
  const std::uint64_t seed = rng();
  RestrictionTranscript tr = best_restriction(w, fam, lambda, r, restarts, seed);
  DimensionCertificate cert = certify_dimension(w, tr);
  const double wn = static_cast<double>(w.size());
  res.diag["kernel_size"] = tr.kernel.size();
  res.diag["kernel_size_cap"] = std::pow(wn, 0.25 + 7.0 * lambda);
  res.diag["components_cap"] = std::pow(wn, 10.0 * lambda);
  res.diag["measured_bound"] = tr.kernel.size() + tr.components;
  res.diag["formula_bound"] = std::pow(wn, 0.25 + 7.0 * lambda) + std::pow(wn, 10.0 * lambda);

  if (static_cast<double>(d) <= target) {
    res.kind = LowDimension::Kind::BoundHolds;
    res.subset = iota_set(n);
    res.dim = d;
  } else {
    res.kind = LowDimension::Kind::Subset;
    res.subset = reg.kept;
    res.dim = rank_of(inst.vectors, res.subset);
    if (res.dim != cert.dim) throw CertificationError("cluster_low_dim: subset rank disagrees with certificate");
  }
  res.transcript = std::move(tr);
  res.certificate = std::move(cert);
  return res;
}

}  // namespace lcc
