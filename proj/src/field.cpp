#include "lcc/field.hpp"

#include "lcc/errors.hpp"

namespace lcc {

FieldSpec FieldSpec::real(double tolerance) {
  if (!(tolerance >= 0.0)) throw PreconditionError("real tolerance must be nonnegative");
  return FieldSpec{FieldKind::Real, 0, tolerance};
}

FieldSpec FieldSpec::rational() { return FieldSpec{FieldKind::Rational, 0, 0.0}; }

FieldSpec FieldSpec::prime(std::uint64_t p) {
  if (!is_prime(p)) throw PreconditionError("field characteristic " + std::to_string(p) + " is not prime");
  if (p >= (std::uint64_t{1} << 62)) throw PreconditionError("prime too large");
  return FieldSpec{FieldKind::PrimeField, p, 0.0};
}

std::string FieldSpec::name() const {
  switch (kind) {
    case FieldKind::Real:
      return "R";
    case FieldKind::Rational:
      return "Q";
    case FieldKind::PrimeField:
      return "Fp " + std::to_string(p);
  }
  return "?";
}

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  if (p % 2 == 0) return p == 2;
  for (std::uint64_t f = 3; f <= p / f; f += 2) {
    if (p % f == 0) return false;
  }
  return true;
}

PrimeOps::value_type PrimeOps::inv(value_type a) const {
  // Fermat: a^(p-2)
  value_type result = one();
  value_type base = a % p;
  std::uint64_t e = p - 2;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

}  // namespace lcc
