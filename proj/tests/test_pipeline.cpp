#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "lcc/errors.hpp"
#include "lcc/generators.hpp"
#include "lcc/pipeline.hpp"
#include "support.hpp"

using namespace lcc;

namespace {

using TripleSet = std::set<std::array<Index, 3>>;

// Greedy matchings over bit patterns 1..2^k-1, built from pair lists.
std::vector<TripleSet> greedy_oracle(int k) {
  const std::uint64_t n = (std::uint64_t{1} << k) - 1;
  std::vector<TripleSet> out(n);
  for (std::uint64_t v = 1; v <= n; ++v) {
    std::set<std::uint64_t> taken{v};
    for (std::uint64_t a = 1; a <= n; ++a) {
      for (std::uint64_t b = a + 1; b <= n; ++b) {
        const std::uint64_t c = a ^ b ^ v;
        if (c == 0 || c == a || c == b) continue;
        if (taken.count(a) || taken.count(b) || taken.count(c)) continue;
        taken.insert({a, b, c});
        std::array<Index, 3> t{a - 1, b - 1, c - 1};
        std::sort(t.begin(), t.end());
        out[v - 1].insert(t);
      }
    }
  }
  return out;
}

ClusterParams desk_params() {
  ClusterParams p;
  p.corr_cut = 0.5;
  return p;
}

}  // namespace

TEST_CASE("Hadamard generator matches the greedy oracle") {
  const LccInstance h2 = gen_hadamard_f2(2);
  CHECK(h2.size() == 3);
  CHECK(min_matching_size(h2) == 0);
  CHECK(h2.delta == 0.0);
  for (int k : {3, 5}) {
    const LccInstance h = gen_hadamard_f2(k);
    REQUIRE(verify_lcc(h).valid);
    CHECK(testing::gf2_rank(testing::gf2_rows(h.vectors)) == static_cast<std::size_t>(k));
    const auto oracle = greedy_oracle(k);
    for (Index v = 0; v < h.size(); ++v) {
      TripleSet got;
      for (Triple t : h.matchings[v].triples) {
        std::sort(t.begin(), t.end());
        got.insert(t);
      }
      CHECK(got == oracle[v]);
    }
    const ClusterFamily f = hadamard_family(h);
    const std::size_t n = h.size();
    CHECK(f.sets.size() == n * (n - 1) / 6);
    for (const auto& m : h.matchings) {
      for (const Triple& t : m.triples) CHECK(is_clustered(t, f));
    }
  }
  CHECK_THROWS_AS(gen_hadamard_f2(1), PreconditionError);
}

TEST_CASE("low-dimensional generator") {
  Rng rng = make_rng(71);
  const LccInstance inst = gen_low_dim_real(90, 3, 7, 0.2, rng);
  REQUIRE(verify_lcc(inst).valid);
  CHECK(inst.size() == 90);
  CHECK(inst.dim() == 7);
  CHECK(rank(inst.vectors) == 3);
  CHECK(min_matching_size(inst) >= ceil_count(0.2 * 90));
  const Eigen::MatrixXd m = inst.vectors.to_eigen();
  for (Eigen::Index i = 0; i < m.rows(); ++i) CHECK(m.row(i).norm() == doctest::Approx(1.0));
}

TEST_CASE("planted generator") {
  Rng rng = make_rng(72);
  const PlantedInstance p = gen_planted_clusters(200, 8, 4, 0.1, 0.05, rng);
  REQUIRE(verify_lcc(p.instance).valid);
  REQUIRE(p.truth.sets.size() == 4);
  std::vector<int> seen(200, 0);
  for (const IndexSet& s : p.truth.sets) {
    CHECK(s.size() == 50);
    for (Index i : s) ++seen[i];
  }
  CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
  for (const auto& m : p.instance.matchings) {
    CHECK(m.triples.size() >= 20);
    for (const Triple& t : m.triples) CHECK(is_clustered(t, p.truth));
  }
  // Members of a cap are close to each other.
  const Eigen::MatrixXd v = p.instance.vectors.to_eigen();
  for (const IndexSet& s : p.truth.sets) {
    for (Index a : s) CHECK(v.row(a).dot(v.row(s.front())) >= std::cos(0.1) - 1e-12);
  }
}

TEST_CASE("subset of small dimension") {
  Rng gen = make_rng(73);
  const PlantedInstance p = gen_planted_clusters(200, 8, 4, 0.1, 0.05, gen);
  Rng rng = make_rng(74);
  const SubsetLow s = subset_low(p.instance, 0.02, rng, desk_params());
  CHECK_FALSE(s.subset.empty());
  CHECK(std::is_sorted(s.subset.begin(), s.subset.end()));
  CHECK(s.dim == rank_of(p.instance.vectors, s.subset));
  CHECK_FALSE(s.source.empty());
  for (const auto& e : s.ldcs) {
    CHECK(e.check.verified);
    CHECK(e.check.bound_holds);
  }
  const LccInstance h = gen_hadamard_f2(4);
  CHECK_THROWS_AS(subset_low(h, 0.02, rng), PreconditionError);
}

TEST_CASE("amplification step grows a span-closed set") {
  Rng gen = make_rng(75);
  const LccInstance inst = gen_low_dim_real(60, 3, 5, 0.3, gen);
  AmplificationState st;
  for (std::uint64_t k = 0; st.s.size() < inst.size(); ++k) {
    Rng rng = make_rng(k);
    const AmplificationState next = amplify_step(inst, st, 1.0 / 51.0, rng, desk_params());
    CHECK(next.s.size() > st.s.size());
    CHECK(next.s == span_closure(inst.vectors, next.s));
    CHECK(next.dim == rank_of(inst.vectors, next.s));
    for (Index i : st.s) CHECK(contains(next.s, i));
    REQUIRE(next.history.size() == st.history.size() + 1);
    const AmplifyRecord& r = next.history.back();
    CHECK(r.size_before == st.s.size());
    CHECK(r.size_after == next.s.size());
    if (r.ldc) {
      CHECK(r.ldc->verified);
      CHECK(r.ldc->bound_holds);
    }
    st = next;
  }
  Rng rng = make_rng(0);
  CHECK_THROWS_AS(amplify_step(inst, st, 1.0 / 51.0, rng), PreconditionError);
}

TEST_CASE("case 1 fires when an element has many triples with two points in S") {
  // Four copies of each axis of R^3. Every triple holds one copy of each
  // axis, so with the e2 and e3 copies in S each e1 copy sees two points of S.
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(12, 3);
  for (int i = 0; i < 4; ++i) rows(i, 0) = 1.0;
  for (int i = 4; i < 8; ++i) rows(i, 1) = 1.0;
  for (int i = 8; i < 12; ++i) rows(i, 2) = 1.0;
  std::vector<Matching> m(12);
  for (Index v = 0; v < 12; ++v) {
    m[v].owner = v;
    const Index axis = v / 4, off = v % 4;
    const Index o1 = ((axis + 1) % 3) * 4, o2 = ((axis + 2) % 3) * 4;
    m[v].triples.push_back({axis * 4 + (off + 1) % 4, o1 + off, o2 + off});
    m[v].triples.push_back({o1 + (off + 1) % 4, o2 + (off + 1) % 4, axis * 4 + (off + 2) % 4});
  }
  const LccInstance inst = make_instance(VectorList::from_eigen(rows), std::move(m), 2.0 / 12.0);
  REQUIRE(verify_lcc(inst).valid);
  AmplificationState st;
  st.s = span_closure(inst.vectors, {4, 8});
  st.dim = rank_of(inst.vectors, st.s);
  CHECK(st.s.size() == 8);
  Rng rng = make_rng(76);
  const AmplificationState next = amplify_step(inst, st, 1.0 / 51.0, rng);
  const AmplifyRecord& r = next.history.back();
  CHECK(r.kind == AmplifyCase::Case1);
  CHECK_FALSE(r.fallback);
  CHECK(next.s.size() == 12);
  CHECK(next.dim == 3);
}

TEST_CASE("dimension bound on low-dimensional instances") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Rng gen = make_rng(seed);
    const LccInstance inst = gen_low_dim_real(120, 3, 3, 0.3, gen);
    const BoundReport rep = certify_bound(inst, 0.02, seed, desk_params());
    CHECK(rep.complete);
    CHECK(rep.d_measured == 3);
    CHECK(rep.d_measured <= rep.bound_sum);
    CHECK(rep.steps <= rep.step_limit);
    CHECK(rep.trace.size() == rep.steps);
    std::size_t sum = 0;
    for (const auto& r : rep.trace) sum += r.dim_after - r.dim_before;
    CHECK(sum == rep.bound_sum);
    CHECK(rep.lambda_inner == doctest::Approx(1.0 / 51.0));
    CHECK(bound_json(rep).dump() == bound_json(certify_bound(inst, 0.02, seed, desk_params())).dump());
  }
}

TEST_CASE("dimension bound rejects unusable inputs") {
  const LccInstance h = gen_hadamard_f2(3);
  CHECK_THROWS_AS(certify_bound(h, 0.02, 1), PreconditionError);
  Rng gen = make_rng(77);
  LccInstance inst = gen_low_dim_real(30, 3, 3, 0.3, gen);
  inst.matchings[0].triples.pop_back();
  CHECK_THROWS_AS(certify_bound(inst, 0.02, 1), PreconditionError);
  Rng g2 = make_rng(78);
  const LccInstance ok = gen_low_dim_real(30, 3, 3, 0.3, g2);
  CHECK_THROWS_AS(certify_bound(ok, 0.5, 1), PreconditionError);
}
