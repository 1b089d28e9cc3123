#pragma once

#include <memory>
#include <span>

#include "lcc/vector_list.hpp"

namespace lcc {

/// Row rank. Exact elimination over Q and F_p; over R the number of singular
/// values above tolerance * sigma_max.
std::size_t rank(const VectorList& vectors);
std::size_t rank_of(const VectorList& vectors, std::span<const Index> rows);

/// rank(rows + target) == rank(rows).
bool in_span(const VectorList& vectors, std::span<const Index> rows, Index target);
/// Same test for an external vector given as a one-row list.
bool in_span(const VectorList& vectors, std::span<const Index> rows, const VectorList& target);

/// Incrementally grown span over the rows of a fixed list. Every row keeps its
/// residual against the current basis, so membership queries are O(d) and an
/// insertion is O(n d).
class SpanTracker {
 public:
  explicit SpanTracker(const VectorList& vectors);
  ~SpanTracker();
  SpanTracker(SpanTracker&&) noexcept;
  SpanTracker& operator=(SpanTracker&&) noexcept;

  /// Adds row i; true when it was outside the current span.
  bool add(Index i);
  [[nodiscard]] bool in_span(Index i) const;
  [[nodiscard]] std::size_t dim() const;
  [[nodiscard]] std::size_t size() const;
  /// Basis rows in insertion order.
  [[nodiscard]] const std::vector<Index>& basis() const;
  /// Every row currently in the span.
  [[nodiscard]] IndexSet spanned() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

/// {i : v_i in span{v_j : j in S}}.
IndexSet span_closure(const VectorList& vectors, const IndexSet& seed);

/// Images of every row under a linear map whose kernel is span{v_j : j in U}.
/// Exact fields reduce against an echelon basis of U; over R the map is the
/// orthogonal projection onto the complement of the numerical span of U.
VectorList project_to_zero(const VectorList& vectors, const IndexSet& kernel_rows);

/// Coordinates of every row with respect to independent basis rows (given as
/// a list over the same field). Rows outside the span of the basis throw.
VectorList coordinates(const VectorList& vectors, const VectorList& basis);

/// Maximal independent subset chosen greedily in the given order.
std::vector<Index> independent_subset(const VectorList& vectors, std::span<const Index> order);

/// Real lists only: orthonormal basis (columns) of the numerical row space.
Eigen::MatrixXd row_space_basis(const VectorList& vectors);
/// Real lists only: rows expressed in an orthonormal basis of their span.
VectorList intrinsic_coordinates(const VectorList& vectors);

/// d x d matrix over the same field given as a list of d rows, applied as
/// v -> M v to every row.
VectorList apply_matrix(const VectorList& vectors, const VectorList& matrix);

}  // namespace lcc
