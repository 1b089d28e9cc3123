#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lcc/errors.hpp"
#include "lcc/generators.hpp"
#include "lcc/restrict.hpp"
#include "support.hpp"

using namespace lcc;

namespace {

// Smallest member of each component by naive label propagation.
std::vector<Index> propagate(std::size_t n, const std::vector<std::pair<Index, Index>>& edges) {
  std::vector<Index> c(n);
  for (Index i = 0; i < n; ++i) c[i] = i;
  for (bool changed = true; changed;) {
    changed = false;
    for (auto [a, b] : edges) {
      const Index m = std::min(c[a], c[b]);
      if (c[a] != m || c[b] != m) {
        c[a] = c[b] = m;
        changed = true;
      }
    }
  }
  return c;
}

}  // namespace

TEST_CASE("pairs take the least clustered pair and the lowest set") {
  std::vector<Matching> m(6);
  for (Index v = 0; v < 6; ++v) m[v].owner = v;
  m[0].triples = {{5, 1, 3}};
  m[2].triples = {{4, 5, 1}};
  m[4].triples = {{3, 2, 5}, {0, 1, 2}};
  LccInstance inst = make_instance(VectorList::prime(6, 2, 2, std::vector<std::uint64_t>(12, 0)), std::move(m), 0.0);
  ClusterFamily f;
  f.sets = {{3, 5}, {1, 3, 5}, {0, 1}, {4, 5}};
  const PairFamily p = build_pairs(inst, f);
  REQUIRE(p.per_owner.size() == 6);
  REQUIRE(p.per_owner[0].size() == 1);
  CHECK(p.per_owner[0][0].a == 1);
  CHECK(p.per_owner[0][0].b == 3);
  CHECK(p.per_owner[0][0].set == 1);
  CHECK(p.per_owner[0][0].third == 5);
  CHECK(p.per_owner[2][0].a == 1);
  CHECK(p.per_owner[2][0].b == 5);
  CHECK(p.per_owner[2][0].set == 1);
  // Owner 4 lists (0, 1) before (3, 5).
  REQUIRE(p.per_owner[4].size() == 2);
  CHECK(p.per_owner[4][0].a == 0);
  CHECK(p.per_owner[4][0].set == 2);
  CHECK(p.per_owner[4][1].a == 3);
  CHECK(p.per_owner[4][1].set == 0);
  CHECK(p.per_owner[4][1].third == 2);

  ClusterFamily partial;
  partial.sets = {{0, 1}};
  CHECK_THROWS_AS(build_pairs(inst, partial), PreconditionError);
}

TEST_CASE("sampled inclusion rate matches n^(-1/4 + lambda)") {
  const std::size_t n = 10000;
  const double lambda = 0.02;
  CHECK(inclusion_rate(lambda, n) == doctest::Approx(std::pow(10.0, -0.92)));
  ClusterFamily f;
  for (int s = 0; s < 4; ++s) {
    IndexSet set;
    for (Index i = 0; i < 50; ++i) set.push_back(50 * static_cast<Index>(s) + i);
    f.sets.push_back(set);
  }
  Rng rng = make_rng(61);
  const int draws = 4000;
  std::size_t members = 0, truncated = 0;
  std::vector<std::size_t> per_set(4, 0);
  for (int k = 0; k < draws; ++k) {
    const SampledSubset s = sample_cluster_subset(f, lambda, n, rng);
    members += s.a.size();
    truncated += s.truncated ? 1 : 0;
    ++per_set[s.set];
    CHECK(static_cast<double>(s.a.size()) <= sample_cap(lambda, n));
    for (Index i : s.a) CHECK(contains(f.sets[s.set], i));
  }
  const double rate = static_cast<double>(members) / (draws * 50.0);
  CHECK(std::abs(rate - 0.1202) <= 0.01);
  CHECK(truncated == 0);
  for (std::size_t c : per_set) CHECK(std::abs(static_cast<double>(c) / draws - 0.25) <= 0.03);
}

TEST_CASE("rejection budget truncates to an admissible subset") {
  ClusterFamily f;
  f.sets.push_back(iota_set(400));
  Rng rng = make_rng(62);
  // Rate 0.12 of 400 is far above the cap of about 17 at n = 10^4.
  const SampledSubset s = sample_cluster_subset(f, 0.02, 10000, rng, 5);
  CHECK(s.truncated);
  CHECK(s.rejections == 5);
  CHECK(static_cast<double>(s.a.size()) <= sample_cap(0.02, 10000));
  CHECK(std::is_sorted(s.a.begin(), s.a.end()));
  CHECK_THROWS_AS(sample_cluster_subset(f, 0.05, 100, rng), PreconditionError);
  CHECK_THROWS_AS(sample_cluster_subset(ClusterFamily{}, 0.02, 100, rng), PreconditionError);
}

TEST_CASE("partial decoding map") {
  PairFamily p;
  p.per_owner.resize(3);
  p.per_owner[0] = {{1, 2, 0, {1, 2, 7}, 7}, {3, 4, 1, {3, 4, 8}, 8}, {5, 6, 0, {5, 6, 9}, 9}};
  CHECK(partial_decode_map(0, {1, 2, 5, 6}, 0, p) == Index{7});
  CHECK(partial_decode_map(0, {5, 6}, 0, p) == Index{9});
  CHECK(partial_decode_map(0, {3, 4}, 1, p) == Index{8});
  CHECK_FALSE(partial_decode_map(0, {3, 4}, 0, p).has_value());
  CHECK_FALSE(partial_decode_map(0, {1, 5}, 0, p).has_value());
  CHECK_FALSE(partial_decode_map(1, {1, 2}, 0, p).has_value());
}

TEST_CASE("zero rounds leave every element alone") {
  const LccInstance h = gen_hadamard_f2(5);
  const ClusterFamily f = hadamard_family(h);
  Rng rng = make_rng(63);
  const RestrictionTranscript t = run_restriction(h, f, 0.02, 0, rng);
  CHECK(t.components == h.size());
  CHECK(t.kernel.empty());
  CHECK(t.rounds.empty());
}

TEST_CASE("restriction on the Hadamard code merges components and certifies") {
  const LccInstance h = gen_hadamard_f2(6);
  REQUIRE(verify_lcc(h).valid);
  const ClusterFamily f = hadamard_family(h);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng = make_rng(seed);
    const RestrictionTranscript t = run_restriction(h, f, 0.02, 120, rng);
    CHECK(t.rounds.size() == 120);
    CHECK(t.components < h.size());
    std::vector<std::pair<Index, Index>> edges;
    for (const auto& r : t.rounds) {
      edges.insert(edges.end(), r.edges.begin(), r.edges.end());
      for (Index i : r.sample) CHECK(contains(t.kernel, i));
      for (Index i : r.sample) CHECK(contains(f.sets[r.set], i));
    }
    CHECK(t.component_of == propagate(h.size(), edges));
    CHECK(t.component_of == components_by_search(h.size(), edges));

    const DimensionCertificate c = certify_dimension(h, t);
    CHECK(c.exact);
    CHECK(c.image_rank <= c.components);
    CHECK(c.dim <= c.bound);
    CHECK(c.bound == c.kernel_rank + c.components);
    CHECK(c.edges_checked == edges.size());

    // Independent F_2 oracle: rank(L(V)) = rank(V) - rank(U), and each edge
    // joins elements equal modulo span(U).
    const auto rows = testing::gf2_rows(h.vectors);
    std::vector<std::uint64_t> u;
    for (Index i : t.kernel) u.push_back(rows[i]);
    CHECK(c.dim == testing::gf2_rank(rows));
    CHECK(c.kernel_rank == testing::gf2_rank(u));
    CHECK(c.image_rank == testing::gf2_rank(rows) - testing::gf2_rank(u));
    for (auto [a, b] : edges) {
      auto ext = u;
      ext.push_back(rows[a] ^ rows[b]);
      CHECK(testing::gf2_rank(ext) == testing::gf2_rank(u));
    }
  }
}

TEST_CASE("a tampered transcript fails certification") {
  const LccInstance h = gen_hadamard_f2(5);
  const ClusterFamily f = hadamard_family(h);
  Rng rng = make_rng(64);
  RestrictionTranscript t = run_restriction(h, f, 0.02, 3, rng);
  REQUIRE_FALSE(t.rounds.empty());
  // Join two elements whose difference lies outside span(U) when possible.
  const auto rows = testing::gf2_rows(h.vectors);
  std::vector<std::uint64_t> u;
  for (Index i : t.kernel) u.push_back(rows[i]);
  const std::size_t base = testing::gf2_rank(u);
  bool planted = false;
  for (Index a = 0; a < h.size() && !planted; ++a) {
    for (Index b = a + 1; b < h.size() && !planted; ++b) {
      auto ext = u;
      ext.push_back(rows[a] ^ rows[b]);
      if (testing::gf2_rank(ext) > base && t.component_of[a] != t.component_of[b]) {
        t.rounds.back().edges.push_back({a, b});
        planted = true;
      }
    }
  }
  REQUIRE(planted);
  CHECK_THROWS_AS(certify_dimension(h, t), CertificationError);
}

TEST_CASE("best restriction is reproducible and picks the fewest components") {
  const LccInstance h = gen_hadamard_f2(5);
  const ClusterFamily f = hadamard_family(h);
  const RestrictionTranscript a = best_restriction(h, f, 0.02, 10, 4, 99);
  const RestrictionTranscript b = best_restriction(h, f, 0.02, 10, 4, 99);
  CHECK(transcript_json(a).dump() == transcript_json(b).dump());
  for (std::size_t k = 0; k < 4; ++k) {
    Rng rng = make_rng(stage_seed(99, "restriction", k));
    const RestrictionTranscript t = run_restriction(h, f, 0.02, 10, rng);
    CHECK(a.components <= t.components);
    if (k == a.restart) CHECK(t.components == a.components);
  }
}

TEST_CASE("low-dimension step on the Hadamard code") {
  const LccInstance h = gen_hadamard_f2(6);
  const ClusterFamily f = hadamard_family(h);
  Rng rng = make_rng(65);
  const LowDimension ld = cluster_low_dim(h, f, 0.02, 0.01, rng, 2);
  REQUIRE(ld.certificate.has_value());
  CHECK(ld.certificate->image_rank <= ld.certificate->components);
  CHECK_FALSE(ld.subset.empty());
  CHECK(ld.dim == rank_of(h.vectors, ld.subset));
  CHECK(to_string(ld.kind).size() > 0);
}

TEST_CASE("component limits and default rounds") {
  CHECK(default_rounds(0.02, 10000) == 3);
  CHECK(default_rounds(0.0001, 10) == 2);
  CHECK(small_component_limit(0.02, 10000) == doctest::Approx(std::pow(10000.0, 0.8)));
}
