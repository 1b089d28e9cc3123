#include "lcc/vector_list.hpp"

#include <algorithm>
#include <cmath>

#include "lcc/errors.hpp"

namespace lcc {

namespace {

void check_shape(std::size_t n, std::size_t d, std::size_t entries) {
  if (n * d != entries) {
    throw StructuralError("vector list expects " + std::to_string(n * d) + " entries, got " +
                          std::to_string(entries));
  }
}

}  // namespace

VectorList VectorList::real(std::size_t n, std::size_t d, std::vector<double> entries, double tolerance) {
  check_shape(n, d, entries.size());
  VectorList v;
  v.field_ = FieldSpec::real(tolerance);
  v.n_ = n;
  v.d_ = d;
  v.data_ = std::move(entries);
  return v;
}

VectorList VectorList::rational(std::size_t n, std::size_t d, std::vector<Rational> entries) {
  check_shape(n, d, entries.size());
  VectorList v;
  v.field_ = FieldSpec::rational();
  v.n_ = n;
  v.d_ = d;
  v.data_ = std::move(entries);
  return v;
}

VectorList VectorList::prime(std::size_t n, std::size_t d, std::uint64_t p, std::vector<std::uint64_t> entries) {
  check_shape(n, d, entries.size());
  VectorList v;
  v.field_ = FieldSpec::prime(p);
  v.n_ = n;
  v.d_ = d;
  for (auto& e : entries) e %= p;
  v.data_ = std::move(entries);
  return v;
}

VectorList VectorList::from_eigen(const Eigen::MatrixXd& rows, double tolerance) {
  const auto n = static_cast<std::size_t>(rows.rows());
  const auto d = static_cast<std::size_t>(rows.cols());
  std::vector<double> entries(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) entries[i * d + j] = rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return real(n, d, std::move(entries), tolerance);
}

VectorList VectorList::zeros(const FieldSpec& field, std::size_t n, std::size_t d) {
  switch (field.kind) {
    case FieldKind::Real:
      return real(n, d, std::vector<double>(n * d, 0.0), field.tolerance);
    case FieldKind::Rational:
      return rational(n, d, std::vector<Rational>(n * d, Rational(0)));
    case FieldKind::PrimeField:
      return prime(n, d, field.p, std::vector<std::uint64_t>(n * d, 0));
  }
  return {};
}

std::span<const double> VectorList::real_row(Index i) const {
  const auto& v = std::get<std::vector<double>>(data_);
  return {v.data() + i * d_, d_};
}

std::span<const Rational> VectorList::rational_row(Index i) const {
  const auto& v = std::get<std::vector<Rational>>(data_);
  return {v.data() + i * d_, d_};
}

std::span<const std::uint64_t> VectorList::prime_row(Index i) const {
  const auto& v = std::get<std::vector<std::uint64_t>>(data_);
  return {v.data() + i * d_, d_};
}

VectorList VectorList::select(std::span<const Index> rows) const {
  VectorList out;
  out.field_ = field_;
  out.n_ = rows.size();
  out.d_ = d_;
  std::visit(
      [&](const auto& src) {
        using Vec = std::decay_t<decltype(src)>;
        Vec dst;
        dst.reserve(rows.size() * d_);
        for (Index r : rows) {
          if (r >= n_) throw StructuralError("row index " + std::to_string(r) + " out of range");
          dst.insert(dst.end(), src.begin() + static_cast<std::ptrdiff_t>(r * d_),
                     src.begin() + static_cast<std::ptrdiff_t>((r + 1) * d_));
        }
        out.data_ = std::move(dst);
      },
      data_);
  return out;
}

VectorList VectorList::concat(const VectorList& other) const {
  if (!(field_ == other.field_) || d_ != other.d_) throw PreconditionError("concat: field or dimension mismatch");
  VectorList out = *this;
  out.n_ = n_ + other.n_;
  std::visit(
      [&](auto& dst) {
        using Vec = std::decay_t<decltype(dst)>;
        const auto& src = std::get<Vec>(other.data_);
        dst.insert(dst.end(), src.begin(), src.end());
      },
      out.data_);
  return out;
}

bool VectorList::is_zero_row(Index i) const {
  switch (field_.kind) {
    case FieldKind::Real: {
      const auto row = real_row(i);
      return std::all_of(row.begin(), row.end(), [](double x) { return x == 0.0; });
    }
    case FieldKind::Rational: {
      const auto row = rational_row(i);
      return std::all_of(row.begin(), row.end(), [](const Rational& x) { return x == 0; });
    }
    case FieldKind::PrimeField: {
      const auto row = prime_row(i);
      return std::all_of(row.begin(), row.end(), [](std::uint64_t x) { return x == 0; });
    }
  }
  return false;
}

Eigen::MatrixXd VectorList::to_eigen() const {
  if (field_.kind != FieldKind::Real) throw PreconditionError("to_eigen requires a real vector list");
  const auto& v = std::get<std::vector<double>>(data_);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(d_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < d_; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v[i * d_ + j];
  return m;
}

VectorList VectorList::to_real(double tolerance) const {
  std::vector<double> entries(n_ * d_);
  switch (field_.kind) {
    case FieldKind::Real:
      entries = std::get<std::vector<double>>(data_);
      break;
    case FieldKind::Rational: {
      const auto& v = std::get<std::vector<Rational>>(data_);
      for (std::size_t k = 0; k < v.size(); ++k) entries[k] = v[k].convert_to<double>();
      break;
    }
    case FieldKind::PrimeField:
      throw PreconditionError("a prime-field list has no real twin");
  }
  return real(n_, d_, std::move(entries), tolerance);
}

bool operator==(const VectorList& a, const VectorList& b) {
  return a.field_ == b.field_ && a.n_ == b.n_ && a.d_ == b.d_ && a.data_ == b.data_;
}

IndexSet make_index_set(std::vector<Index> items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return items;
}

IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool contains(const IndexSet& s, Index i) { return std::binary_search(s.begin(), s.end(), i); }

IndexSet iota_set(std::size_t n) {
  IndexSet out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

}  // namespace lcc
