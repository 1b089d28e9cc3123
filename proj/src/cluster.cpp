#include "lcc/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lcc/errors.hpp"
#include "lcc/forster.hpp"

namespace lcc {

namespace {

IndexSet compose(const IndexSet& outer, const IndexSet& inner) {
  IndexSet out;
  out.reserve(inner.size());
  for (Index i : inner) out.push_back(outer[i]);
  return out;
}

int hits(const Triple& t, const IndexSet& s) {
  return (contains(s, t[0]) ? 1 : 0) + (contains(s, t[1]) ? 1 : 0) + (contains(s, t[2]) ? 1 : 0);
}

}  // namespace

TripleClass classify_triple(const VectorList& vectors, const Triple& triple, double type_a) {
  TripleClass c;
  const std::array<Pair, 3> pairs{{{triple[0], triple[1]}, {triple[0], triple[2]}, {triple[1], triple[2]}}};
  for (const auto& p : pairs) {
    const auto a = vectors.real_row(p.first);
    const auto b = vectors.real_row(p.second);
    double ip = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) ip += a[k] * b[k];
    if (std::abs(ip) >= type_a) {
      c.kind = TripleClass::Kind::TypeA;
      c.witness = p;
      return c;
    }
  }
  c.kind = TripleClass::Kind::TypeB;
  return c;
}

std::vector<Incidence> all_incidences(const LccInstance& inst) {
  std::vector<Incidence> out;
  for (const auto& m : inst.matchings) {
    for (const Triple& t : m.triples) out.push_back({m.owner, t});
  }
  return out;
}

IndexSet min_degree_subgraph(std::size_t n, const std::vector<std::vector<Index>>& edges,
                             const std::vector<double>& weights, double D) {
  if (edges.size() != weights.size()) throw PreconditionError("min_degree_subgraph: one weight per edge");
  std::vector<char> alive(n, 1), edge_alive(edges.size(), 1);
  std::vector<double> deg(n, 0.0);
  std::vector<std::vector<std::size_t>> at(n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    for (Index v : edges[e]) {
      if (v >= n) throw PreconditionError("min_degree_subgraph: vertex out of range");
      deg[v] += weights[e];
      at[v].push_back(e);
    }
  }
  // Relative slack so that a degree equal to D up to rounding survives.
  const double cut = D - 1e-12 * std::max(1.0, std::abs(D));
  std::vector<Index> queue;
  for (Index v = 0; v < n; ++v) {
    if (deg[v] < cut) queue.push_back(v);
  }
  while (!queue.empty()) {
    const Index v = queue.back();
    queue.pop_back();
    if (!alive[v]) continue;
    alive[v] = 0;
    for (std::size_t e : at[v]) {
      if (!edge_alive[e]) continue;
      edge_alive[e] = 0;
      for (Index u : edges[e]) {
        if (u == v || !alive[u]) continue;
        deg[u] -= weights[e];
        if (deg[u] < cut) queue.push_back(u);
      }
    }
  }
  IndexSet out;
  for (Index v = 0; v < n; ++v) {
    if (alive[v]) out.push_back(v);
  }
  return out;
}

BasicCluster basic_cluster(const VectorList& vectors, const StarMatchings& mstar, const std::vector<Incidence>& mbar,
                           const ClusterParams& params) {
  BasicCluster res;
  const std::size_t n = vectors.size();
  if (mbar.empty() || n == 0) return res;
  require_unit_rows(vectors, "basic_cluster");
  const Eigen::MatrixXd v = vectors.to_eigen();
  const Eigen::MatrixXd g = v * v.transpose();
  auto ip = [&](Index a, Index b) { return std::abs(g(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))); };

  // Triples of mbar that survive in M_owner*.
  std::vector<std::size_t> type_a, type_b;
  for (std::size_t k = 0; k < mbar.size(); ++k) {
    const auto& inc = mbar[k];
    bool star = true;
    for (Index x : inc.triple) star = star && ip(x, inc.owner) < mstar.corr_cut;
    if (!star) continue;
    if (classify_triple(vectors, inc.triple, params.type_a).kind == TripleClass::Kind::TypeA) {
      type_a.push_back(k);
    } else {
      type_b.push_back(k);
    }
  }
  res.diag["filtered_triples"] = type_a.size() + type_b.size();
  res.diag["type_a"] = type_a.size();
  res.diag["type_b"] = type_b.size();
  if (type_a.empty() && type_b.empty()) return res;

  IndexSet s;
  if (type_a.size() >= type_b.size()) {
    res.diag["case"] = "A";
    std::map<Pair, double> weight;
    for (std::size_t k : type_a) {
      const Triple& t = mbar[k].triple;
      const std::array<Pair, 3> pairs{{{t[0], t[1]}, {t[0], t[2]}, {t[1], t[2]}}};
      for (auto p : pairs) {
        if (ip(p.first, p.second) >= params.type_a) {
          if (p.first > p.second) std::swap(p.first, p.second);
          weight[p] += 1.0;
        }
      }
    }
    std::vector<std::vector<Index>> edges;
    std::vector<double> w;
    std::vector<std::vector<Index>> nbr(n);
    for (const auto& [p, x] : weight) {
      edges.push_back({p.first, p.second});
      w.push_back(x);
      nbr[p.first].push_back(p.second);
      nbr[p.second].push_back(p.first);
    }
    // Half the average degree: peeling at the average itself can empty the graph.
    const double D = static_cast<double>(type_a.size()) / static_cast<double>(n);
    const IndexSet core = min_degree_subgraph(n, edges, w, D);
    res.diag["min_degree"] = D;
    res.diag["core_size"] = core.size();
    if (core.empty()) return res;
    // Highest induced degree inside the core, lowest index on ties.
    Index best = core.front();
    double best_deg = -1.0;
    for (Index u : core) {
      double dsum = 0.0;
      for (const auto& [p, x] : weight) {
        if ((p.first == u && contains(core, p.second)) || (p.second == u && contains(core, p.first))) dsum += x;
      }
      if (dsum > best_deg) {
        best_deg = dsum;
        best = u;
      }
    }
    IndexSet vstar;
    for (Index u : nbr[best]) {
      if (contains(core, u)) vstar.push_back(u);
    }
    vstar = make_index_set(vstar);
    std::vector<Index> members = vstar;
    for (Index u : vstar) members.insert(members.end(), nbr[u].begin(), nbr[u].end());
    s = make_index_set(members);
    res.diag["center"] = best + 1;
    res.diag["neighbors"] = vstar.size();
  } else {
    res.diag["case"] = "B";
    std::vector<std::vector<Index>> edges;
    for (std::size_t k : type_b) {
      const Triple& t = mbar[k].triple;
      edges.push_back({t[0], t[1], t[2]});
    }
    const std::vector<double> w(edges.size(), 1.0);
    // A third of the average degree of the 3-uniform hypergraph.
    const double D = static_cast<double>(type_b.size()) / static_cast<double>(n);
    const IndexSet core = min_degree_subgraph(n, edges, w, D);
    res.diag["min_degree"] = D;
    res.diag["core_size"] = core.size();
    if (core.empty()) return res;
    std::vector<std::size_t> inner;  // type B incidences inside the core
    std::vector<std::size_t> deg(n, 0);
    for (std::size_t k : type_b) {
      const Triple& t = mbar[k].triple;
      if (hits(t, core) == 3) {
        inner.push_back(k);
        for (Index x : t) ++deg[x];
      }
    }
    Index center = core.front();
    for (Index u : core) {
      if (deg[u] > deg[center]) center = u;
    }
    std::map<Index, std::size_t> partner;
    for (std::size_t k : inner) {
      const Triple& t = mbar[k].triple;
      if (std::find(t.begin(), t.end(), center) == t.end()) continue;
      for (Index x : t) {
        if (x != center && ip(x, center) > params.type_b_corr) ++partner[x];
      }
    }
    if (partner.empty()) return res;
    Index mate = partner.begin()->first;
    for (const auto& [x, c] : partner) {
      if (c > partner[mate]) mate = x;
    }
    std::set<Triple> distinct;
    for (std::size_t k : inner) {
      Triple t = mbar[k].triple;
      const bool has_c = std::find(t.begin(), t.end(), center) != t.end();
      const bool has_m = std::find(t.begin(), t.end(), mate) != t.end();
      if (has_c && has_m) {
        std::sort(t.begin(), t.end());
        distinct.insert(t);
      }
    }
    std::vector<Index> thirds;
    for (const Triple& t : distinct) {
      for (Index x : t) {
        if (x != center && x != mate) thirds.push_back(x);
      }
    }
    thirds = make_index_set(thirds);
    // Densest ball centred at one of the points (covers every ball a
    // farthest-point cover could select).
    const double radius = params.ball_radius * params.ball_scale;
    IndexSet vstar;
    for (Index p : thirds) {
      IndexSet ball;
      for (Index q : thirds) {
        if ((v.row(static_cast<Eigen::Index>(p)) - v.row(static_cast<Eigen::Index>(q))).norm() <= radius) {
          ball.push_back(q);
        }
      }
      if (ball.size() > vstar.size()) vstar = ball;
    }
    for (Index u = 0; u < n; ++u) {
      for (Index x : vstar) {
        if (ip(u, x) > params.type_b_corr) {
          s.push_back(u);
          break;
        }
      }
    }
    res.diag["center"] = center + 1;
    res.diag["partner"] = mate + 1;
    res.diag["shared_triples"] = distinct.size();
    res.diag["ball_radius"] = radius;
    res.diag["ball_size"] = vstar.size();
  }
  for (std::size_t k = 0; k < mbar.size(); ++k) {
    if (hits(mbar[k].triple, s) >= 2) res.t.push_back(k);
  }
  res.s = std::move(s);
  res.found = !res.s.empty() && !res.t.empty();
  res.diag["set_size"] = res.s.size();
  res.diag["captured"] = res.t.size();
  return res;
}

IntermediateCluster intermediate_cluster(const LccInstance& inst, double stop_frac, const ClusterParams& params) {
  IntermediateCluster res;
  const double n = static_cast<double>(inst.size());
  const StarMatchings mstar = star_matchings(inst, params.corr_cut);
  std::vector<Incidence> remainder = all_incidences(inst);
  const double stop_at = stop_frac * n * n;
  res.diag["stop_at"] = stop_at;
  res.diag["t_measured"] = mstar.t_measured;
  res.diag["corr_cut"] = params.corr_cut;
  Json rounds = Json::array();
  while (!remainder.empty() && static_cast<double>(remainder.size()) > stop_at) {
    BasicCluster bc = basic_cluster(inst.vectors, mstar, remainder, params);
    rounds.push_back(bc.diag);
    if (!bc.found) break;
    // Recheck the postcondition before accepting the set.
    std::vector<char> take(remainder.size(), 0);
    for (std::size_t k : bc.t) {
      if (hits(remainder[k].triple, bc.s) < 2) throw CertificationError("basic_cluster returned an unclustered triple");
      take[k] = 1;
    }
    std::vector<Incidence> next;
    for (std::size_t k = 0; k < remainder.size(); ++k) {
      if (!take[k]) next.push_back(remainder[k]);
    }
    res.captured.push_back(bc.t.size());
    res.family.sets.push_back(std::move(bc.s));
    remainder = std::move(next);
  }
  res.uncovered = std::move(remainder);
  associate_pairs(res.family, inst);
  res.diag["rounds"] = std::move(rounds);
  res.diag["sets"] = res.family.sets.size();
  res.diag["uncovered"] = res.uncovered.size();
  return res;
}

std::string to_string(FinalCluster::Outcome o) {
  switch (o) {
    case FinalCluster::Outcome::Clustered:
      return "clustered";
    case FinalCluster::Outcome::LowDimWitness:
      return "low-dim-witness";
    case FinalCluster::Outcome::Rejected:
      return "rejected";
  }
  return "?";
}

FinalCluster final_cluster(const LccInstance& inst, double beta, double lambda, Rng& rng, const ClusterParams& params,
                           double stop_frac, std::size_t samples) {
  if (inst.vectors.field().kind != FieldKind::Real) throw PreconditionError("final_cluster needs a real instance");
  FinalCluster res;
  const double delta = inst.delta;
  res.diag["beta"] = beta;
  res.diag["lambda"] = lambda;
  res.diag["corr_cut"] = params.corr_cut;

  const double beta_ws = std::clamp(2.0 * std::pow(delta, 6.0), 1e-12, 0.5);
  const WellSpreadResult ws = well_spread_transform(inst, beta_ws, samples, rng);
  Json wsd;
  wsd["beta"] = beta_ws;
  wsd["transformed"] = ws.transformed;
  if (!ws.transformed) {
    res.outcome = FinalCluster::Outcome::LowDimWitness;
    res.witness = ws.witness;
    res.witness_dim = rank_of(inst.vectors, res.witness);
    wsd["witness_size"] = res.witness.size();
    wsd["witness_dim"] = res.witness_dim;
    res.diag["well_spread"] = wsd;
    return res;
  }
  wsd["status"] = to_string(ws.solution.status);
  wsd["residual"] = ws.solution.residual;
  wsd["kept"] = ws.kept.size();
  wsd["lambda_max"] = ws.lambda_max;
  wsd["certified_bound"] = ws.certified_bound;
  wsd["mixed"] = ws.mixed;
  res.diag["well_spread"] = wsd;

  ReductionResult rm = reduce_multiplicity(ws.instance, beta);
  res.diag["multiplicity"] = rm.diag;
  if (!rm.reduced) {
    res.outcome = FinalCluster::Outcome::LowDimWitness;
    res.witness = make_index_set(compose(ws.kept, rm.witness));
    res.witness_dim = rank_of(inst.vectors, res.witness);
    if (rm.ldc) res.ldcs.push_back(*rm.ldc);
    return res;
  }
  if (rm.emptied) {
    res.outcome = FinalCluster::Outcome::Rejected;
    res.diag["reason"] = "multiplicity reduction removed every element";
    return res;
  }
  const LccInstance& v2 = rm.instance;
  const IndexSet pos2 = compose(ws.kept, rm.kept);
  const double d2 = v2.delta;
  const double stop = stop_frac > 0.0 ? stop_frac : d2 * d2 / 100.0;
  IntermediateCluster ic = intermediate_cluster(v2, stop, params);
  Json icd = ic.diag;
  Json sizes = Json::array();
  for (const auto& s : ic.family.sets) sizes.push_back(s.size());
  icd["set_sizes"] = sizes;
  const double n2 = static_cast<double>(v2.size());
  const double dim2 = static_cast<double>(rank(v2.vectors));
  if (d2 > 0.0 && dim2 > 0.0) icd["t_formula"] = n2 / (std::pow(d2, 6.0) * dim2);
  res.diag["clustering"] = icd;

  // Refinement: keep elements with at least half of their triples clustered,
  // then only clustered triples among the survivors.
  const std::size_t m2 = v2.size();
  std::vector<std::vector<char>> clustered(m2);
  std::vector<char> alive(m2, 0);
  for (Index v = 0; v < m2; ++v) {
    const auto& triples = v2.matchings[v].triples;
    clustered[v].assign(triples.size(), 0);
    std::size_t c = 0;
    for (std::size_t k = 0; k < triples.size(); ++k) {
      clustered[v][k] = is_clustered(triples[k], ic.family) ? 1 : 0;
      c += clustered[v][k];
    }
    alive[v] = (c > 0 && 2 * c >= triples.size()) ? 1 : 0;
  }
  std::size_t first_pass = static_cast<std::size_t>(std::count(alive.begin(), alive.end(), 1));
  for (bool changed = true; changed;) {
    changed = false;
    for (Index v = 0; v < m2; ++v) {
      if (!alive[v]) continue;
      std::size_t c = 0;
      const auto& triples = v2.matchings[v].triples;
      for (std::size_t k = 0; k < triples.size(); ++k) {
        const Triple& t = triples[k];
        c += (clustered[v][k] && alive[t[0]] && alive[t[1]] && alive[t[2]]) ? 1 : 0;
      }
      if (c == 0) {
        alive[v] = 0;
        changed = true;
      }
    }
  }
  IndexSet keep;
  for (Index v = 0; v < m2; ++v) {
    if (alive[v]) keep.push_back(v);
  }
  Json rd;
  rd["half_clustered"] = first_pass;
  rd["kept"] = keep.size();
  if (keep.empty()) {
    res.outcome = FinalCluster::Outcome::Rejected;
    res.diag["refinement"] = rd;
    res.diag["reason"] = "no element keeps a clustered matching";
    return res;
  }
  LccInstance filtered = v2;
  for (Index v = 0; v < m2; ++v) {
    std::vector<Triple> next;
    for (std::size_t k = 0; k < v2.matchings[v].triples.size(); ++k) {
      if (clustered[v][k]) next.push_back(v2.matchings[v].triples[k]);
    }
    filtered.matchings[v].triples = std::move(next);
  }
  res.instance = restrict_instance(filtered, keep);
  std::vector<Index> newpos(m2, m2);
  for (std::size_t k = 0; k < keep.size(); ++k) newpos[keep[k]] = k;
  res.family = remap_family(ic.family, newpos, m2, res.instance);
  for (const auto& m : res.instance.matchings) {
    for (const Triple& t : m.triples) {
      if (!is_clustered(t, res.family)) throw CertificationError("refined instance kept an unclustered triple");
    }
  }
  res.positions = compose(pos2, keep);
  res.outcome = FinalCluster::Outcome::Clustered;
  rd["delta_hat"] = res.instance.delta;
  rd["n_hat"] = res.instance.size();
  res.diag["refinement"] = rd;
  return res;
}

}  // namespace lcc
