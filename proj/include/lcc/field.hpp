#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace lcc {

using Rational = boost::multiprecision::cpp_rational;

enum class FieldKind { Real, Rational, PrimeField };

/// The scalar field of a vector list. Exact fields carry a zero tolerance.
struct FieldSpec {
  FieldKind kind = FieldKind::Real;
  std::uint64_t p = 0;
  double tolerance = 1e-9;

  static FieldSpec real(double tolerance = 1e-9);
  static FieldSpec rational();
  static FieldSpec prime(std::uint64_t p);

  [[nodiscard]] bool exact() const { return kind != FieldKind::Real; }
  [[nodiscard]] std::string name() const;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

bool is_prime(std::uint64_t p);

/// Arithmetic in Z/pZ for p < 2^63.
struct PrimeOps {
  using value_type = std::uint64_t;
  std::uint64_t p;

  [[nodiscard]] value_type zero() const { return 0; }
  [[nodiscard]] value_type one() const { return 1 % p; }
  [[nodiscard]] bool is_zero(value_type a) const { return a == 0; }
  [[nodiscard]] value_type add(value_type a, value_type b) const {
    const auto s = a + b;
    return s >= p ? s - p : s;
  }
  [[nodiscard]] value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p - b; }
  [[nodiscard]] value_type neg(value_type a) const { return a == 0 ? 0 : p - a; }
  [[nodiscard]] value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>((static_cast<unsigned __int128>(a) * b) % p);
  }
  [[nodiscard]] value_type inv(value_type a) const;
};

struct RationalOps {
  using value_type = Rational;

  [[nodiscard]] value_type zero() const { return Rational(0); }
  [[nodiscard]] value_type one() const { return Rational(1); }
  [[nodiscard]] bool is_zero(const value_type& a) const { return a == 0; }
  [[nodiscard]] value_type add(const value_type& a, const value_type& b) const { return a + b; }
  [[nodiscard]] value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  [[nodiscard]] value_type neg(const value_type& a) const { return -a; }
  [[nodiscard]] value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  [[nodiscard]] value_type inv(const value_type& a) const { return Rational(1) / a; }
};

}  // namespace lcc
