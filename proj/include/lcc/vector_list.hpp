#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lcc/field.hpp"

namespace lcc {

using Index = std::size_t;
/// Sorted, duplicate-free list of element positions.
using IndexSet = std::vector<Index>;

/// An ordered list of n vectors in F^d. Repeated vectors are allowed and stay
/// distinguishable by position. Storage is dense row-major.
class VectorList {
 public:
  using Storage = std::variant<std::vector<double>, std::vector<Rational>, std::vector<std::uint64_t>>;

  VectorList() = default;

  static VectorList real(std::size_t n, std::size_t d, std::vector<double> entries, double tolerance = 1e-9);
  static VectorList rational(std::size_t n, std::size_t d, std::vector<Rational> entries);
  static VectorList prime(std::size_t n, std::size_t d, std::uint64_t p, std::vector<std::uint64_t> entries);
  /// Rows of the matrix become the list elements.
  static VectorList from_eigen(const Eigen::MatrixXd& rows, double tolerance = 1e-9);
  /// Zero list of the same field.
  static VectorList zeros(const FieldSpec& field, std::size_t n, std::size_t d);

  [[nodiscard]] const FieldSpec& field() const { return field_; }
  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] std::size_t dim() const { return d_; }
  [[nodiscard]] bool empty() const { return n_ == 0; }

  [[nodiscard]] std::span<const double> real_row(Index i) const;
  [[nodiscard]] std::span<const Rational> rational_row(Index i) const;
  [[nodiscard]] std::span<const std::uint64_t> prime_row(Index i) const;

  [[nodiscard]] double real_at(Index i, Index j) const { return real_row(i)[j]; }

  [[nodiscard]] const Storage& storage() const { return data_; }
  [[nodiscard]] Storage& storage() { return data_; }

  /// Sub-list in the given order (repetitions allowed).
  [[nodiscard]] VectorList select(std::span<const Index> rows) const;
  /// Appends the rows of another list over the same field and dimension.
  [[nodiscard]] VectorList concat(const VectorList& other) const;
  [[nodiscard]] bool is_zero_row(Index i) const;

  /// Real lists only: n x d matrix.
  [[nodiscard]] Eigen::MatrixXd to_eigen() const;
  /// Real twin of an exact list (Rational entries converted to double).
  [[nodiscard]] VectorList to_real(double tolerance = 1e-9) const;

  friend bool operator==(const VectorList& a, const VectorList& b);

 private:
  FieldSpec field_;
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  Storage data_;
};

/// Sorts and deduplicates.
IndexSet make_index_set(std::vector<Index> items);
IndexSet set_union(const IndexSet& a, const IndexSet& b);
IndexSet set_difference(const IndexSet& a, const IndexSet& b);
bool contains(const IndexSet& s, Index i);
IndexSet iota_set(std::size_t n);

}  // namespace lcc
