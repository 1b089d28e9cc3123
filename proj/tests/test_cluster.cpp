#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lcc/cluster.hpp"
#include "lcc/errors.hpp"
#include "lcc/generators.hpp"
#include "support.hpp"

using namespace lcc;

namespace {

// Recomputes every degree from scratch after each single deletion.
IndexSet peel_oracle(std::size_t n, const std::vector<std::vector<Index>>& edges, const std::vector<double>& w,
                     double D) {
  std::vector<char> alive(n, 1);
  for (;;) {
    std::vector<double> deg(n, 0.0);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      bool ok = true;
      for (Index v : edges[e]) ok = ok && alive[v];
      if (!ok) continue;
      for (Index v : edges[e]) deg[v] += w[e];
    }
    bool removed = false;
    for (Index v = 0; v < n && !removed; ++v) {
      if (alive[v] && deg[v] < D) {
        alive[v] = 0;
        removed = true;
      }
    }
    if (!removed) break;
  }
  IndexSet out;
  for (Index v = 0; v < n; ++v) {
    if (alive[v]) out.push_back(v);
  }
  return out;
}

ClusterParams desk_params() {
  ClusterParams p;
  p.corr_cut = 0.5;
  return p;
}

// Every output set lies inside one planted cap (compared through labels).
bool sets_refine_truth(const ClusterFamily& found, const std::vector<Index>& labels, const ClusterFamily& truth) {
  for (const IndexSet& s : found.sets) {
    bool inside_one = false;
    for (const IndexSet& cap : truth.sets) {
      bool all = true;
      for (Index i : s) all = all && contains(cap, labels[i]);
      inside_one = inside_one || all;
    }
    if (!inside_one) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("triple classification") {
  Eigen::MatrixXd rows(4, 2);
  const double c = std::cos(0.3), s = std::sin(0.3);
  rows << 1, 0, c, s, 0, 1, -std::sin(0.2), std::cos(0.2);
  const VectorList v = VectorList::from_eigen(rows);
  TripleClass a = classify_triple(v, {0, 2, 1});
  CHECK(a.kind == TripleClass::Kind::TypeA);
  REQUIRE(a.witness.has_value());
  CHECK(*a.witness == Pair{0, 1});
  // 2 and 3 correlate above 0.9, found before nothing else.
  TripleClass b = classify_triple(v, {2, 0, 3});
  CHECK(b.kind == TripleClass::Kind::TypeA);
  CHECK(*b.witness == Pair{2, 3});
  CHECK(classify_triple(v, {0, 2, 3}, 0.999).kind == TripleClass::Kind::TypeB);
  CHECK_FALSE(classify_triple(v, {0, 2, 3}, 0.999).witness.has_value());
}

TEST_CASE("peeling matches the recompute-everything oracle") {
  Rng rng = make_rng(51);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 5 + uniform_below(rng, 25);
    const std::size_t m = uniform_below(rng, 4 * n);
    const std::size_t arity = 2 + uniform_below(rng, 2);
    std::vector<std::vector<Index>> edges;
    std::vector<double> w;
    for (std::size_t e = 0; e < m; ++e) {
      std::vector<Index> ed;
      while (ed.size() < arity) {
        const Index v = uniform_below(rng, n);
        if (std::find(ed.begin(), ed.end(), v) == ed.end()) ed.push_back(v);
      }
      edges.push_back(ed);
      w.push_back(trial % 2 ? 1.0 : 0.5 + uniform01(rng));
    }
    const double D = 1.0 + uniform01(rng) * 4.0;
    CHECK(min_degree_subgraph(n, edges, w, D) == peel_oracle(n, edges, w, D));
  }
  CHECK_THROWS_AS(min_degree_subgraph(3, {{0, 1}}, {}, 1.0), PreconditionError);
}

TEST_CASE("peeling at half the average degree keeps a nonempty core") {
  Rng rng = make_rng(52);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 10 + uniform_below(rng, 30);
    std::vector<std::vector<Index>> edges;
    for (std::size_t e = 0; e < 3 * n; ++e) {
      Index a = uniform_below(rng, n), b = uniform_below(rng, n - 1);
      if (b >= a) ++b;
      edges.push_back({a, b});
    }
    const std::vector<double> w(edges.size(), 1.0);
    // Average degree 2|E|/n; peeling below |E|/n never empties the graph.
    const IndexSet core = min_degree_subgraph(n, edges, w, static_cast<double>(edges.size()) / n);
    CHECK_FALSE(core.empty());
  }
}

TEST_CASE("incidences list every triple once") {
  const LccInstance h = gen_hadamard_f2(4);
  const auto inc = all_incidences(h);
  std::size_t total = 0;
  for (const auto& m : h.matchings) total += m.triples.size();
  CHECK(inc.size() == total);
  for (const auto& i : inc) {
    const auto& ts = h.matchings[i.owner].triples;
    CHECK(std::find(ts.begin(), ts.end(), i.triple) != ts.end());
  }
}

TEST_CASE("basic cluster captures triples with two elements in the set") {
  Rng rng = make_rng(53);
  const PlantedInstance p = gen_planted_clusters(120, 6, 3, 0.1, 0.05, rng);
  REQUIRE(verify_lcc(p.instance).valid);
  const ClusterParams params = desk_params();
  const StarMatchings mstar = star_matchings(p.instance, params.corr_cut);
  const auto mbar = all_incidences(p.instance);
  const BasicCluster bc = basic_cluster(p.instance.vectors, mstar, mbar, params);
  REQUIRE(bc.found);
  CHECK_FALSE(bc.s.empty());
  CHECK(std::is_sorted(bc.s.begin(), bc.s.end()));
  for (std::size_t k : bc.t) {
    int h = 0;
    for (Index x : mbar[k].triple) h += contains(bc.s, x) ? 1 : 0;
    CHECK(h >= 2);
  }
  // The set is a planted cap or part of one.
  ClusterFamily one;
  one.sets.push_back(bc.s);
  CHECK(sets_refine_truth(one, p.instance.labels, p.truth));
}

TEST_CASE("intermediate clustering covers the planted triples") {
  Rng rng = make_rng(54);
  const PlantedInstance p = gen_planted_clusters(120, 6, 3, 0.1, 0.05, rng);
  const IntermediateCluster ic = intermediate_cluster(p.instance, 0.0, desk_params());
  CHECK(ic.uncovered.empty());
  CHECK(ic.family.sets.size() == ic.captured.size());
  CHECK(sets_refine_truth(ic.family, p.instance.labels, p.truth));
  for (const auto& m : p.instance.matchings) {
    for (const Triple& t : m.triples) CHECK(is_clustered(t, ic.family));
  }
  for (const auto& [pair, set] : ic.family.pair_assoc) {
    CHECK(lowest_common_set(ic.family, pair.first, pair.second) == set);
  }
}

TEST_CASE("final clustering recovers planted caps") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Rng gen = make_rng(seed);
    const PlantedInstance p = gen_planted_clusters(200, 8, 4, 0.1, 0.05, gen);
    Rng rng = make_rng(stage_seed(seed, "cluster"));
    const FinalCluster fc = final_cluster(p.instance, 0.005, 0.02, rng, desk_params());
    REQUIRE(fc.outcome == FinalCluster::Outcome::Clustered);
    CHECK(verify_lcc(fc.instance).valid);
    CHECK(static_cast<double>(fc.instance.size()) >= 0.01 * 200);
    std::size_t clustered = 0, total = 0;
    for (const auto& m : fc.instance.matchings) {
      for (const Triple& t : m.triples) {
        ++total;
        clustered += is_clustered(t, fc.family) ? 1 : 0;
      }
    }
    CHECK(total > 0);
    CHECK(clustered == total);
    CHECK(sets_refine_truth(fc.family, fc.instance.labels, p.truth));
    for (std::size_t i = 0; i < fc.positions.size(); ++i) CHECK(fc.instance.labels[i] == fc.positions[i]);
  }
}

TEST_CASE("default correlation cut filters every desk-scale triple") {
  Rng gen = make_rng(7);
  const PlantedInstance p = gen_planted_clusters(120, 6, 3, 0.1, 0.05, gen);
  const StarMatchings s = star_matchings(p.instance, ClusterParams{}.corr_cut);
  std::size_t kept = 0;
  for (const auto& m : s.matchings) kept += m.triples.size();
  CHECK(kept == 0);
}
