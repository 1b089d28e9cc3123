#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "lcc/errors.hpp"
#include "lcc/generators.hpp"
#include "lcc/multiplicity.hpp"
#include "support.hpp"

using namespace lcc;

namespace {

Eigen::Vector3d random_dir(Rng& rng) { return Eigen::Vector3d(normal01(rng), normal01(rng), normal01(rng)).normalized(); }

// Generic unit vectors of R^3 where the first 3 * shared elements form
// `shared` bases used by every other owner, topped up with random disjoint
// triples to ceil(delta n) per owner.
LccInstance shared_triples(std::size_t n, std::size_t shared, double delta, Rng& rng) {
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(n), 3);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) rows.row(i) = random_dir(rng).transpose();
  const std::size_t reserved = 3 * shared;
  const std::size_t need = ceil_count(delta * static_cast<double>(n));
  std::vector<Matching> m(n);
  for (Index v = 0; v < n; ++v) {
    m[v].owner = v;
    if (v >= reserved) {
      for (std::size_t s = 0; s < shared; ++s) m[v].triples.push_back({3 * s, 3 * s + 1, 3 * s + 2});
    }
    std::vector<Index> pool;
    for (Index u = reserved; u < n; ++u) {
      if (u != v) pool.push_back(u);
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    for (std::size_t k = 0; m[v].triples.size() < need; ++k) {
      m[v].triples.push_back({pool[3 * k], pool[3 * k + 1], pool[3 * k + 2]});
    }
  }
  return make_instance(VectorList::from_eigen(rows), std::move(m), delta);
}

// 10 copies each of e1, e2, e3; every triple holds another copy of the
// owner's direction, so a single element already decodes it.
LccInstance copies_of_axes() {
  const std::size_t per = 10, n = 3 * per;
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(n, 3);
  for (std::size_t i = 0; i < n; ++i) rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i / per)) = 1.0;
  std::vector<Matching> m(n);
  for (Index v = 0; v < n; ++v) {
    m[v].owner = v;
    const std::size_t axis = v / per, off = v % per;
    for (std::size_t k = 0; k < 3; ++k) {
      const Index same = axis * per + (off + 1 + k) % per;
      const Index b = ((axis + 1) % 3) * per + (off + k) % per;
      const Index c = ((axis + 2) % 3) * per + (off + k) % per;
      m[v].triples.push_back({same, b, c});
    }
  }
  return make_instance(VectorList::from_eigen(rows), std::move(m), 0.1);
}

}  // namespace

TEST_CASE("span star agrees with the coefficient pattern") {
  Rng rng = make_rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Vector3d a = random_dir(rng), b = random_dir(rng), c = random_dir(rng);
    std::array<double, 3> coef{};
    bool all_nonzero = true;
    for (double& x : coef) {
      x = uniform_below(rng, 3) == 0 ? 0.0 : 0.5 + uniform01(rng);
      all_nonzero = all_nonzero && x != 0.0;
    }
    if (coef == std::array<double, 3>{0, 0, 0}) coef[0] = 1.0;
    all_nonzero = coef[0] != 0 && coef[1] != 0 && coef[2] != 0;
    Eigen::MatrixXd rows(4, 3);
    rows.row(0) = (coef[0] * a + coef[1] * b + coef[2] * c).transpose();
    rows.row(1) = a.transpose();
    rows.row(2) = b.transpose();
    rows.row(3) = c.transpose();
    CHECK(span_star_test(0, {1, 2, 3}, VectorList::from_eigen(rows)) == all_nonzero);
  }
  // Over F_5: (1,1,0) is spanned by (1,0,0), (0,1,0) alone.
  const VectorList p = VectorList::prime(4, 3, 5, {1, 1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1});
  CHECK_FALSE(span_star_test(0, {1, 2, 3}, p));
  const VectorList q = VectorList::prime(4, 3, 5, {1, 2, 3, 1, 0, 0, 0, 1, 0, 0, 0, 1});
  CHECK(span_star_test(0, {1, 2, 3}, q));
  const VectorList bad = VectorList::prime(4, 3, 5, {1, 1, 1, 1, 0, 0, 0, 1, 0, 0, 1, 0});
  CHECK_THROWS_AS(span_star_test(0, {1, 2, 3}, bad), PreconditionError);
}

TEST_CASE("triple multiplicity matches a direct count") {
  Rng rng = make_rng(42);
  const LccInstance inst = shared_triples(40, 2, 0.1, rng);
  const MultiplicityProfile p = triple_multiplicity(inst);
  std::map<std::vector<Index>, std::size_t> brute;
  std::size_t inc = 0;
  for (const auto& m : inst.matchings) {
    for (const Triple& t : m.triples) {
      std::vector<Index> s(t.begin(), t.end());
      std::sort(s.begin(), s.end());
      ++brute[s];
      ++inc;
    }
  }
  CHECK(p.incidences == inc);
  CHECK(p.counts.size() == brute.size());
  std::size_t top = 0;
  for (const auto& [t, c] : brute) top = std::max(top, c);
  CHECK(p.max_multiplicity == top);
  CHECK(p.max_multiplicity == 34);
  std::size_t hist_total = 0;
  for (const auto& [c, k] : p.histogram) hist_total += c * k;
  CHECK(hist_total == inc);
}

TEST_CASE("regular form keeps a generic instance") {
  Rng rng = make_rng(43);
  const LccInstance inst = gen_low_dim_real(60, 3, 3, 0.3, rng);
  const ReductionResult r = regularize(inst);
  REQUIRE(r.reduced);
  CHECK(r.kept.size() == 60);
  CHECK(r.instance.delta <= inst.delta / 4.0);
  CHECK(verify_lcc(r.instance).valid);
  for (const auto& m : r.instance.matchings) {
    for (const Triple& t : m.triples) CHECK(span_star_test(m.owner, t, r.instance.vectors));
  }
}

TEST_CASE("regular form returns decoded copies as a 2-query witness") {
  const LccInstance inst = copies_of_axes();
  REQUIRE(verify_lcc(inst).valid);
  const ReductionResult r = regularize(inst);
  REQUIRE_FALSE(r.reduced);
  CHECK(r.witness.size() == 30);
  CHECK(r.witness_dim == 3);
  REQUIRE(r.ldc.has_value());
  CHECK(r.ldc->check.verified);
  CHECK(r.ldc->check.bound_holds);
}

TEST_CASE("multiplicity reduction removes heavy triples") {
  Rng rng = make_rng(44);
  const LccInstance inst = shared_triples(40, 1, 0.1, rng);
  REQUIRE(verify_lcc(inst).valid);
  const double beta = 0.5;
  const ReductionResult r = reduce_multiplicity(inst, beta);
  REQUIRE(r.reduced);
  REQUIRE_FALSE(r.emptied);
  CHECK(static_cast<double>(triple_multiplicity(r.instance).max_multiplicity) <= std::pow(40.0, beta));
  CHECK(verify_lcc(r.instance).valid);
  for (std::size_t i = 0; i < r.kept.size(); ++i) CHECK(r.instance.labels[i] == inst.labels[r.kept[i]]);
  CHECK_THROWS_AS(reduce_multiplicity(inst, 0.0), PreconditionError);
}

TEST_CASE("multiplicity reduction with mostly heavy triples gives a witness") {
  Rng rng = make_rng(45);
  const LccInstance inst = shared_triples(40, 3, 0.1, rng);
  REQUIRE(verify_lcc(inst).valid);
  const ReductionResult r = reduce_multiplicity(inst, 0.5);
  REQUIRE_FALSE(r.reduced);
  CHECK_FALSE(r.witness.empty());
  CHECK(r.witness_dim <= 3);
  REQUIRE(r.ldc.has_value());
  CHECK(r.ldc->check.verified);
  CHECK(r.ldc->check.bound_holds);
}
