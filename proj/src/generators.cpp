#include "lcc/generators.hpp"

#include <algorithm>
#include <cmath>

#include "lcc/errors.hpp"
#include "lcc/multiplicity.hpp"

namespace lcc {

namespace {

// Columns: orthonormal basis of a uniformly random k-dim subspace of R^d.
Eigen::MatrixXd random_frame(std::size_t d, std::size_t k, Rng& rng) {
  Eigen::MatrixXd g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k));
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = normal01(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  return qr.householderQ() * Eigen::MatrixXd::Identity(g.rows(), g.cols());
}

template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

void require_valid(const LccInstance& inst, const char* what) {
  if (!verify_lcc(inst).valid) throw Error(std::string(what) + ": generated instance failed verification");
}

}  // namespace

LccInstance gen_hadamard_f2(int k) {
  if (k < 2 || k > 12) throw PreconditionError("gen_hadamard_f2: k must lie in [2, 12]");
  const std::size_t n = (std::size_t{1} << k) - 1;
  const std::size_t d = static_cast<std::size_t>(k);
  std::vector<std::uint64_t> entries(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t x = i + 1;
    for (std::size_t b = 0; b < d; ++b) entries[i * d + b] = (x >> b) & 1U;
  }
  std::vector<Matching> matchings(n);
  std::size_t min_size = n;
  for (std::size_t vi = 0; vi < n; ++vi) {
    const std::size_t v = vi + 1;
    std::vector<char> used(n + 1, 0);
    used[v] = 1;
    matchings[vi].owner = vi;
    for (std::size_t a = 1; a <= n; ++a) {
      if (used[a]) continue;
      for (std::size_t b = a + 1; b <= n; ++b) {
        if (used[b] || used[a]) continue;
        const std::size_t c = a ^ b ^ v;
        if (c == 0 || c == a || c == b || used[c]) continue;
        used[a] = used[b] = used[c] = 1;
        matchings[vi].triples.push_back({a - 1, b - 1, c - 1});
      }
    }
    min_size = std::min(min_size, matchings[vi].triples.size());
  }
  LccInstance inst = make_instance(VectorList::prime(n, d, 2, std::move(entries)), std::move(matchings),
                                   static_cast<double>(min_size) / static_cast<double>(n));
  require_valid(inst, "gen_hadamard_f2");
  return inst;
}

ClusterFamily hadamard_family(const LccInstance& hadamard) {
  const std::size_t n = hadamard.size();
  ClusterFamily family;
  for (std::size_t x = 1; x <= n; ++x) {
    for (std::size_t y = x + 1; y <= n; ++y) {
      const std::size_t z = x ^ y;
      if (z > y) family.sets.push_back({x - 1, y - 1, z - 1});
    }
  }
  associate_pairs(family, hadamard);
  return family;
}

LccInstance gen_low_dim_real(std::size_t n, std::size_t d_base, std::size_t d_ambient, double delta, Rng& rng) {
  if (d_base == 0 || d_base > 3 || d_ambient < 3 || d_base > d_ambient) {
    throw PreconditionError("gen_low_dim_real: need 1 <= d_base <= 3 <= d_ambient");
  }
  if (!(delta > 0.0 && delta <= 1.0 / 3.0)) throw PreconditionError("gen_low_dim_real: delta must lie in (0, 1/3]");
  const std::size_t q = ceil_count(delta * static_cast<double>(n));
  if (n == 0 || 3 * q > n - 1) throw PreconditionError("gen_low_dim_real: not enough elements for the matchings");

  const Eigen::MatrixXd frame = random_frame(d_ambient, d_base, rng);
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d_ambient));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    Eigen::VectorXd g(static_cast<Eigen::Index>(d_base));
    for (Eigen::Index j = 0; j < g.size(); ++j) g(j) = normal01(rng);
    g.normalize();
    rows.row(i) = (frame * g).transpose();
  }
  const VectorList vectors = VectorList::from_eigen(rows);

  std::vector<Matching> matchings(n);
  for (Index v = 0; v < n; ++v) {
    matchings[v].owner = v;
    for (int attempt = 0; attempt < 100 && matchings[v].triples.size() < q; ++attempt) {
      matchings[v].triples.clear();
      std::vector<Index> pool;
      for (Index u = 0; u < n; ++u) {
        if (u != v) pool.push_back(u);
      }
      shuffle(pool, rng);
      for (std::size_t s = 0; s + 3 <= pool.size() && matchings[v].triples.size() < q; s += 3) {
        const Triple t{pool[s], pool[s + 1], pool[s + 2]};
        if (!in_span(vectors, t, v)) continue;
        if (d_base == 3 && !span_star_test(v, t, vectors)) continue;
        matchings[v].triples.push_back(t);
      }
    }
    if (matchings[v].triples.size() < q) throw Error("gen_low_dim_real: could not complete a matching");
  }
  LccInstance inst = make_instance(vectors, std::move(matchings), delta);
  require_valid(inst, "gen_low_dim_real");
  return inst;
}

PlantedInstance gen_planted_clusters(std::size_t n, std::size_t d, std::size_t m, double delta, double radius,
                                     Rng& rng) {
  if (!(radius > 0.0 && radius < 0.1)) throw PreconditionError("gen_planted_clusters: radius must lie in (0, 0.1)");
  if (d < 3) throw PreconditionError("gen_planted_clusters: need d >= 3");
  if (!(delta > 0.0 && delta <= 1.0)) throw PreconditionError("gen_planted_clusters: delta must lie in (0, 1]");
  // m = 3a + 4b caps.
  const std::size_t fours = m % 3;
  if (m < 3 || 4 * fours > m) throw PreconditionError("gen_planted_clusters: m must be a sum of 3s and 4s");
  std::vector<std::size_t> block_sizes((m - 4 * fours) / 3, 3);
  block_sizes.insert(block_sizes.end(), fours, 4);
  if (n < m) throw PreconditionError("gen_planted_clusters: fewer elements than caps");

  const double s3 = 1.0 / std::sqrt(3.0);
  const Eigen::Matrix3d ortho = Eigen::Matrix3d::Identity();
  Eigen::Matrix<double, 4, 3> tetra;
  tetra << s3, s3, s3, s3, -s3, -s3, -s3, s3, -s3, -s3, -s3, s3;

  std::vector<std::size_t> block_of(m), first_cap;
  std::vector<Eigen::Vector3d> centers(m);
  std::vector<Eigen::MatrixXd> frames;
  for (std::size_t b = 0, cap = 0; b < block_sizes.size(); ++b) {
    first_cap.push_back(cap);
    frames.push_back(random_frame(d, 3, rng));
    for (std::size_t j = 0; j < block_sizes[b]; ++j, ++cap) {
      block_of[cap] = b;
      centers[cap] = block_sizes[b] == 3 ? Eigen::Vector3d(ortho.row(static_cast<Eigen::Index>(j)))
                                         : Eigen::Vector3d(tetra.row(static_cast<Eigen::Index>(j)));
    }
  }

  // Element i sits in cap i mod m, at angle at most `radius` from the centre.
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  PlantedInstance out;
  out.truth.sets.resize(m);
  for (Index i = 0; i < n; ++i) {
    const std::size_t cap = i % m;
    out.truth.sets[cap].push_back(i);
    const Eigen::Vector3d c = centers[cap];
    Eigen::Vector3d g(normal01(rng), normal01(rng), normal01(rng));
    g -= g.dot(c) * c;
    g.normalize();
    const double angle = radius * (0.5 + 0.5 * uniform01(rng));
    const Eigen::Vector3d local = std::cos(angle) * c + std::sin(angle) * g;
    rows.row(static_cast<Eigen::Index>(i)) = (frames[block_of[cap]] * local).transpose();
  }
  const VectorList vectors = VectorList::from_eigen(rows);

  const std::size_t q = ceil_count(delta * static_cast<double>(n));
  std::vector<Matching> matchings(n);
  for (Index v = 0; v < n; ++v) {
    const std::size_t cap = v % m;
    const std::size_t b = block_of[cap];
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < block_sizes[b]; ++j) {
      if (first_cap[b] + j != cap) others.push_back(first_cap[b] + j);
    }
    std::vector<std::vector<Index>> pools;
    for (std::size_t c : others) {
      pools.push_back(out.truth.sets[c]);
      shuffle(pools.back(), rng);
    }
    matchings[v].owner = v;
    while (matchings[v].triples.size() < q) {
      std::vector<std::size_t> pair_caps;
      for (std::size_t j = 0; j < pools.size(); ++j) {
        if (pools[j].size() >= 2) pair_caps.push_back(j);
      }
      if (pair_caps.empty()) throw PreconditionError("gen_planted_clusters: caps too small for delta");
      const std::size_t j = pair_caps[uniform_below(rng, pair_caps.size())];
      std::vector<std::size_t> single_caps;
      for (std::size_t k = 0; k < pools.size(); ++k) {
        if (k != j && !pools[k].empty()) single_caps.push_back(k);
      }
      if (single_caps.empty()) throw PreconditionError("gen_planted_clusters: caps too small for delta");
      const std::size_t k = single_caps[uniform_below(rng, single_caps.size())];
      Triple t{};
      t[0] = pools[j].back();
      pools[j].pop_back();
      t[1] = pools[j].back();
      pools[j].pop_back();
      t[2] = pools[k].back();
      pools[k].pop_back();
      matchings[v].triples.push_back(t);
    }
  }
  out.instance = make_instance(vectors, std::move(matchings), delta);
  require_valid(out.instance, "gen_planted_clusters");
  associate_pairs(out.truth, out.instance);
  return out;
}

}  // namespace lcc
