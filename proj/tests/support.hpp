#pragma once

// Shared builders and independent oracles for the test suites. The oracles
// here deliberately avoid the library's linear algebra.

#include <cstdint>
#include <vector>

#include "lcc/instance.hpp"
#include "lcc/rng.hpp"

namespace testing {

using lcc::Index;

struct IntMatrix {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<long> a;  // row-major
  [[nodiscard]] long at(std::size_t i, std::size_t j) const { return a[i * d + j]; }
};

/// Small integer entries in [-range, range]; with `rank_cap` < d the rows are
/// integer combinations of rank_cap random rows.
inline IntMatrix random_int_matrix(std::size_t n, std::size_t d, long range, std::size_t rank_cap, lcc::Rng& rng) {
  IntMatrix m{n, d, std::vector<long>(n * d, 0)};
  const auto draw = [&] { return static_cast<long>(lcc::uniform_below(rng, 2 * range + 1)) - range; };
  if (rank_cap >= d) {
    for (auto& x : m.a) x = draw();
    return m;
  }
  std::vector<long> base(rank_cap * d);
  for (auto& x : base) x = draw();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < rank_cap; ++r) {
      const long c = static_cast<long>(lcc::uniform_below(rng, 5)) - 2;
      for (std::size_t j = 0; j < d; ++j) m.a[i * d + j] += c * base[r * d + j];
    }
  }
  return m;
}

inline lcc::VectorList as_real(const IntMatrix& m) {
  std::vector<double> e(m.a.begin(), m.a.end());
  return lcc::VectorList::real(m.n, m.d, std::move(e));
}

inline lcc::VectorList as_rational(const IntMatrix& m) {
  std::vector<lcc::Rational> e;
  for (long x : m.a) e.emplace_back(x);
  return lcc::VectorList::rational(m.n, m.d, std::move(e));
}

inline lcc::VectorList as_prime(const IntMatrix& m, std::uint64_t p) {
  std::vector<std::uint64_t> e;
  for (long x : m.a) {
    const long r = x % static_cast<long>(p);
    e.push_back(static_cast<std::uint64_t>(r < 0 ? r + static_cast<long>(p) : r));
  }
  return lcc::VectorList::prime(m.n, m.d, p, std::move(e));
}

/// Rank over Q by fraction-free (Bareiss) elimination in 128-bit integers.
inline std::size_t bareiss_rank(const IntMatrix& m) {
  std::vector<std::vector<__int128>> a(m.n, std::vector<__int128>(m.d));
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t j = 0; j < m.d; ++j) a[i][j] = m.at(i, j);
  }
  std::size_t r = 0;
  __int128 prev = 1;
  for (std::size_t c = 0; c < m.d && r < m.n; ++c) {
    std::size_t piv = r;
    while (piv < m.n && a[piv][c] == 0) ++piv;
    if (piv == m.n) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = r + 1; i < m.n; ++i) {
      for (std::size_t j = c + 1; j < m.d; ++j) a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

/// Rank over F_p by plain elimination.
inline std::size_t modp_rank(const IntMatrix& m, std::uint64_t p) {
  const auto mod = [&](long x) {
    const long r = x % static_cast<long>(p);
    return static_cast<unsigned __int128>(r < 0 ? r + static_cast<long>(p) : r);
  };
  std::vector<std::vector<unsigned __int128>> a(m.n, std::vector<unsigned __int128>(m.d));
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t j = 0; j < m.d; ++j) a[i][j] = mod(m.at(i, j));
  }
  const auto power = [&](unsigned __int128 b, std::uint64_t e) {
    unsigned __int128 r = 1;
    b %= p;
    while (e) {
      if (e & 1U) r = r * b % p;
      b = b * b % p;
      e >>= 1U;
    }
    return r;
  };
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.d && r < m.n; ++c) {
    std::size_t piv = r;
    while (piv < m.n && a[piv][c] == 0) ++piv;
    if (piv == m.n) continue;
    std::swap(a[piv], a[r]);
    const unsigned __int128 inv = power(a[r][c], p - 2);
    for (std::size_t i = r + 1; i < m.n; ++i) {
      const unsigned __int128 f = a[i][c] * inv % p;
      for (std::size_t j = c; j < m.d; ++j) a[i][j] = (a[i][j] + (p - f) * a[r][j]) % p;
    }
    ++r;
  }
  return r;
}

/// Rank over F_2 of bit-pattern rows.
inline std::size_t gf2_rank(std::vector<std::uint64_t> rows) {
  std::size_t r = 0;
  for (int bit = 63; bit >= 0; --bit) {
    const std::uint64_t mask = std::uint64_t{1} << bit;
    std::size_t piv = r;
    while (piv < rows.size() && !(rows[piv] & mask)) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != r && (rows[i] & mask)) rows[i] ^= rows[r];
    }
    ++r;
  }
  return r;
}

/// Bit pattern of each row of an F_2 list.
inline std::vector<std::uint64_t> gf2_rows(const lcc::VectorList& v) {
  std::vector<std::uint64_t> out;
  for (Index i = 0; i < v.size(); ++i) {
    std::uint64_t x = 0;
    const auto row = v.prime_row(i);
    for (std::size_t j = 0; j < row.size(); ++j) x |= (row[j] & 1U) << j;
    out.push_back(x);
  }
  return out;
}

}  // namespace testing
