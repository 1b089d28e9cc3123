#include "lcc/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "lcc/errors.hpp"

namespace lcc {

namespace {

template <class Ops>
std::size_t exact_rank(const Ops& ops, std::vector<typename Ops::value_type> a, std::size_t n, std::size_t d) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < d && r < n; ++c) {
    std::size_t piv = n;
    for (std::size_t i = r; i < n; ++i) {
      if (!ops.is_zero(a[i * d + c])) {
        piv = i;
        break;
      }
    }
    if (piv == n) continue;
    if (piv != r) {
      for (std::size_t k = 0; k < d; ++k) std::swap(a[piv * d + k], a[r * d + k]);
    }
    const auto inv = ops.inv(a[r * d + c]);
    for (std::size_t i = r + 1; i < n; ++i) {
      if (ops.is_zero(a[i * d + c])) continue;
      const auto f = ops.mul(a[i * d + c], inv);
      for (std::size_t k = c; k < d; ++k) a[i * d + k] = ops.sub(a[i * d + k], ops.mul(f, a[r * d + k]));
    }
    ++r;
  }
  return r;
}

std::size_t real_rank(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = tol * sv(0);
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > cut) ++r;
  }
  return r;
}

/// Orthonormal basis (columns) of the numerical row space of m.
Eigen::MatrixXd real_row_basis(const Eigen::MatrixXd& m, double tol) {
  const auto d = m.cols();
  if (m.rows() == 0) return Eigen::MatrixXd(d, 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index r = 0;
  if (sv.size() > 0 && sv(0) > 0.0) {
    const double cut = tol * sv(0);
    while (r < sv.size() && sv(r) > cut) ++r;
  }
  return svd.matrixV().leftCols(r);
}

struct TrackerBase {
  virtual ~TrackerBase() = default;
  virtual bool add(Index i) = 0;
  [[nodiscard]] virtual bool in_span(Index i) const = 0;
  std::vector<Index> basis;
  std::size_t n = 0;
};

template <class Ops>
struct ExactTracker final : TrackerBase {
  using T = typename Ops::value_type;
  Ops ops;
  std::size_t d;
  std::vector<T> residual;
  std::vector<char> zero;

  ExactTracker(Ops o, std::span<const T> data, std::size_t rows, std::size_t dim)
      : ops(std::move(o)), d(dim), residual(data.begin(), data.end()), zero(rows, 0) {
    n = rows;
    for (std::size_t i = 0; i < n; ++i) zero[i] = row_is_zero(i);
  }

  [[nodiscard]] bool row_is_zero(std::size_t i) const {
    for (std::size_t k = 0; k < d; ++k) {
      if (!ops.is_zero(residual[i * d + k])) return false;
    }
    return true;
  }

  bool add(Index i) override {
    if (zero[i]) return false;
    std::size_t pc = 0;
    while (ops.is_zero(residual[i * d + pc])) ++pc;
    const auto inv = ops.inv(residual[i * d + pc]);
    std::vector<T> pivot(d);
    for (std::size_t k = 0; k < d; ++k) pivot[k] = ops.mul(residual[i * d + k], inv);
    for (std::size_t j = 0; j < n; ++j) {
      if (zero[j]) continue;
      const T f = residual[j * d + pc];
      if (ops.is_zero(f)) continue;
      for (std::size_t k = 0; k < d; ++k) {
        if (!ops.is_zero(pivot[k])) residual[j * d + k] = ops.sub(residual[j * d + k], ops.mul(f, pivot[k]));
      }
      zero[j] = row_is_zero(j);
    }
    basis.push_back(i);
    return true;
  }

  [[nodiscard]] bool in_span(Index i) const override { return zero[i] != 0; }
};

struct RealTracker final : TrackerBase {
  double tol;
  Eigen::MatrixXd residual;  // n x d
  Eigen::VectorXd norm0;
  std::vector<Eigen::VectorXd> q;

  RealTracker(const Eigen::MatrixXd& m, double tolerance) : tol(tolerance), residual(m), norm0(m.rows()) {
    n = static_cast<std::size_t>(m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i) norm0(i) = m.row(i).norm();
  }

  bool add(Index i) override {
    if (in_span(i)) return false;
    Eigen::VectorXd v = residual.row(static_cast<Eigen::Index>(i)).transpose();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : q) v -= b.dot(v) * b;
    }
    const double nv = v.norm();
    if (nv == 0.0) return false;
    v /= nv;
    residual -= (residual * v) * v.transpose();
    q.push_back(std::move(v));
    basis.push_back(i);
    return true;
  }

  [[nodiscard]] bool in_span(Index i) const override {
    const auto k = static_cast<Eigen::Index>(i);
    return residual.row(k).norm() <= tol * norm0(k);
  }
};

std::unique_ptr<TrackerBase> make_tracker(const VectorList& v) {
  const auto& f = v.field();
  switch (f.kind) {
    case FieldKind::Real:
      return std::make_unique<RealTracker>(v.to_eigen(), f.tolerance);
    case FieldKind::Rational: {
      const auto& data = std::get<std::vector<Rational>>(v.storage());
      return std::make_unique<ExactTracker<RationalOps>>(RationalOps{}, std::span<const Rational>(data), v.size(),
                                                         v.dim());
    }
    case FieldKind::PrimeField: {
      const auto& data = std::get<std::vector<std::uint64_t>>(v.storage());
      return std::make_unique<ExactTracker<PrimeOps>>(PrimeOps{f.p}, std::span<const std::uint64_t>(data),
                                                      v.size(), v.dim());
    }
  }
  return nullptr;
}

/// Inverse of an r x r row-major matrix by Gauss-Jordan; throws when singular.
template <class Ops>
std::vector<typename Ops::value_type> exact_inverse(const Ops& ops, std::vector<typename Ops::value_type> a,
                                                    std::size_t r) {
  using T = typename Ops::value_type;
  std::vector<T> inv(r * r, ops.zero());
  for (std::size_t i = 0; i < r; ++i) inv[i * r + i] = ops.one();
  for (std::size_t c = 0; c < r; ++c) {
    std::size_t piv = r;
    for (std::size_t i = c; i < r; ++i) {
      if (!ops.is_zero(a[i * r + c])) {
        piv = i;
        break;
      }
    }
    if (piv == r) throw PreconditionError("matrix is singular");
    for (std::size_t k = 0; k < r; ++k) {
      std::swap(a[piv * r + k], a[c * r + k]);
      std::swap(inv[piv * r + k], inv[c * r + k]);
    }
    const T s = ops.inv(a[c * r + c]);
    for (std::size_t k = 0; k < r; ++k) {
      a[c * r + k] = ops.mul(a[c * r + k], s);
      inv[c * r + k] = ops.mul(inv[c * r + k], s);
    }
    for (std::size_t i = 0; i < r; ++i) {
      if (i == c || ops.is_zero(a[i * r + c])) continue;
      const T f = a[i * r + c];
      for (std::size_t k = 0; k < r; ++k) {
        a[i * r + k] = ops.sub(a[i * r + k], ops.mul(f, a[c * r + k]));
        inv[i * r + k] = ops.sub(inv[i * r + k], ops.mul(f, inv[c * r + k]));
      }
    }
  }
  return inv;
}

template <class Ops>
std::vector<typename Ops::value_type> exact_coordinates(const Ops& ops, std::span<const typename Ops::value_type> rows,
                                                        std::size_t n, std::span<const typename Ops::value_type> basis,
                                                        std::size_t r, std::size_t d) {
  using T = typename Ops::value_type;
  // Pivot columns of the basis rows.
  std::vector<T> ech(basis.begin(), basis.end());
  std::vector<std::size_t> pivots;
  {
    std::size_t row = 0;
    for (std::size_t c = 0; c < d && row < r; ++c) {
      std::size_t piv = r;
      for (std::size_t i = row; i < r; ++i) {
        if (!ops.is_zero(ech[i * d + c])) {
          piv = i;
          break;
        }
      }
      if (piv == r) continue;
      for (std::size_t k = 0; k < d; ++k) std::swap(ech[piv * d + k], ech[row * d + k]);
      const T inv = ops.inv(ech[row * d + c]);
      for (std::size_t i = row + 1; i < r; ++i) {
        if (ops.is_zero(ech[i * d + c])) continue;
        const T f = ops.mul(ech[i * d + c], inv);
        for (std::size_t k = c; k < d; ++k) ech[i * d + k] = ops.sub(ech[i * d + k], ops.mul(f, ech[row * d + k]));
      }
      pivots.push_back(c);
      ++row;
    }
  }
  if (pivots.size() != r) throw PreconditionError("coordinates: basis rows are dependent");
  // G^T with G[k][t] = basis_k[pivot_t]; coordinates c = (G^T)^{-1} v_P.
  std::vector<T> gt(r * r);
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t t = 0; t < r; ++t) gt[t * r + k] = basis[k * d + pivots[t]];
  const auto ginv = exact_inverse(ops, std::move(gt), r);
  std::vector<T> out(n * r, ops.zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < r; ++k) {
      T acc = ops.zero();
      for (std::size_t t = 0; t < r; ++t) acc = ops.add(acc, ops.mul(ginv[k * r + t], rows[i * d + pivots[t]]));
      out[i * r + k] = acc;
    }
    for (std::size_t c = 0; c < d; ++c) {
      T acc = ops.zero();
      for (std::size_t k = 0; k < r; ++k) acc = ops.add(acc, ops.mul(out[i * r + k], basis[k * d + c]));
      if (!ops.is_zero(ops.sub(acc, rows[i * d + c]))) {
        throw PreconditionError("coordinates: row " + std::to_string(i) + " is outside the span of the basis");
      }
    }
  }
  return out;
}

}  // namespace

std::size_t rank(const VectorList& vectors) {
  const auto& f = vectors.field();
  switch (f.kind) {
    case FieldKind::Real:
      return real_rank(vectors.to_eigen(), f.tolerance);
    case FieldKind::Rational:
      return exact_rank(RationalOps{}, std::get<std::vector<Rational>>(vectors.storage()), vectors.size(),
                        vectors.dim());
    case FieldKind::PrimeField:
      return exact_rank(PrimeOps{f.p}, std::get<std::vector<std::uint64_t>>(vectors.storage()), vectors.size(),
                        vectors.dim());
  }
  return 0;
}

std::size_t rank_of(const VectorList& vectors, std::span<const Index> rows) { return rank(vectors.select(rows)); }

bool in_span(const VectorList& vectors, std::span<const Index> rows, Index target) {
  std::vector<Index> with(rows.begin(), rows.end());
  with.push_back(target);
  return rank_of(vectors, with) == rank_of(vectors, rows);
}

bool in_span(const VectorList& vectors, std::span<const Index> rows, const VectorList& target) {
  const auto base = vectors.select(rows);
  return rank(base.concat(target)) == rank(base);
}

struct SpanTracker::Impl {
  std::unique_ptr<TrackerBase> t;
};

SpanTracker::SpanTracker(const VectorList& vectors) : impl_(std::make_unique<Impl>()) {
  impl_->t = make_tracker(vectors);
}
SpanTracker::~SpanTracker() = default;
SpanTracker::SpanTracker(SpanTracker&&) noexcept = default;
SpanTracker& SpanTracker::operator=(SpanTracker&&) noexcept = default;

bool SpanTracker::add(Index i) {
  if (i >= impl_->t->n) throw StructuralError("span tracker: index out of range");
  return impl_->t->add(i);
}
bool SpanTracker::in_span(Index i) const { return impl_->t->in_span(i); }
std::size_t SpanTracker::dim() const { return impl_->t->basis.size(); }
std::size_t SpanTracker::size() const { return impl_->t->n; }
const std::vector<Index>& SpanTracker::basis() const { return impl_->t->basis; }

IndexSet SpanTracker::spanned() const {
  IndexSet out;
  for (Index i = 0; i < impl_->t->n; ++i) {
    if (impl_->t->in_span(i)) out.push_back(i);
  }
  return out;
}

IndexSet span_closure(const VectorList& vectors, const IndexSet& seed) {
  SpanTracker tracker(vectors);
  for (Index i : seed) tracker.add(i);
  auto out = tracker.spanned();
  // Seeds are always members, including those the real tolerance would place
  // just outside their own span.
  return set_union(out, seed);
}

VectorList project_to_zero(const VectorList& vectors, const IndexSet& kernel_rows) {
  const auto& f = vectors.field();
  switch (f.kind) {
    case FieldKind::Real: {
      const Eigen::MatrixXd m = vectors.to_eigen();
      const Eigen::MatrixXd q = real_row_basis(vectors.select(kernel_rows).to_eigen(), f.tolerance);
      Eigen::MatrixXd images = m - (m * q) * q.transpose();
      // Rounding residue of rows inside the kernel span would otherwise read
      // as fresh directions under a relative rank tolerance.
      const double cut = f.tolerance * std::max(1.0, m.rowwise().norm().maxCoeff());
      for (Eigen::Index i = 0; i < images.rows(); ++i) {
        if (images.row(i).norm() <= cut) images.row(i).setZero();
      }
      return VectorList::from_eigen(images, f.tolerance);
    }
    case FieldKind::Rational: {
      const auto& data = std::get<std::vector<Rational>>(vectors.storage());
      ExactTracker<RationalOps> t(RationalOps{}, std::span<const Rational>(data), vectors.size(), vectors.dim());
      for (Index i : kernel_rows) t.add(i);
      return VectorList::rational(vectors.size(), vectors.dim(), std::move(t.residual));
    }
    case FieldKind::PrimeField: {
      const auto& data = std::get<std::vector<std::uint64_t>>(vectors.storage());
      ExactTracker<PrimeOps> t(PrimeOps{f.p}, std::span<const std::uint64_t>(data), vectors.size(), vectors.dim());
      for (Index i : kernel_rows) t.add(i);
      return VectorList::prime(vectors.size(), vectors.dim(), f.p, std::move(t.residual));
    }
  }
  return {};
}

VectorList coordinates(const VectorList& vectors, const VectorList& basis) {
  const auto& f = vectors.field();
  if (!(f == basis.field()) || vectors.dim() != basis.dim()) {
    throw PreconditionError("coordinates: field or dimension mismatch");
  }
  const std::size_t n = vectors.size();
  const std::size_t r = basis.size();
  const std::size_t d = vectors.dim();
  switch (f.kind) {
    case FieldKind::Real: {
      const Eigen::MatrixXd bt = basis.to_eigen().transpose();  // d x r
      const Eigen::MatrixXd v = vectors.to_eigen();
      if (r == 0) {
        for (Index i = 0; i < n; ++i) {
          if (v.row(static_cast<Eigen::Index>(i)).norm() > 0.0)
            throw PreconditionError("coordinates: row outside the span of an empty basis");
        }
        return VectorList::real(n, 0, {}, f.tolerance);
      }
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(bt);
      if (static_cast<std::size_t>(qr.rank()) < r) throw PreconditionError("coordinates: basis rows are dependent");
      const Eigen::MatrixXd c = qr.solve(v.transpose()).transpose();  // n x r
      const Eigen::MatrixXd back = c * bt.transpose();
      for (Index i = 0; i < n; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        const double scale = std::max(1.0, v.row(k).norm());
        if ((back.row(k) - v.row(k)).norm() > 1e-7 * scale) {
          throw PreconditionError("coordinates: row " + std::to_string(i) + " is outside the span of the basis");
        }
      }
      return VectorList::from_eigen(c, f.tolerance);
    }
    case FieldKind::Rational: {
      const auto& rows = std::get<std::vector<Rational>>(vectors.storage());
      const auto& b = std::get<std::vector<Rational>>(basis.storage());
      auto out = exact_coordinates(RationalOps{}, std::span<const Rational>(rows), n, std::span<const Rational>(b), r, d);
      return VectorList::rational(n, r, std::move(out));
    }
    case FieldKind::PrimeField: {
      const auto& rows = std::get<std::vector<std::uint64_t>>(vectors.storage());
      const auto& b = std::get<std::vector<std::uint64_t>>(basis.storage());
      auto out = exact_coordinates(PrimeOps{f.p}, std::span<const std::uint64_t>(rows), n,
                                   std::span<const std::uint64_t>(b), r, d);
      return VectorList::prime(n, r, f.p, std::move(out));
    }
  }
  return {};
}

std::vector<Index> independent_subset(const VectorList& vectors, std::span<const Index> order) {
  SpanTracker tracker(vectors);
  for (Index i : order) tracker.add(i);
  return tracker.basis();
}

Eigen::MatrixXd row_space_basis(const VectorList& vectors) {
  if (vectors.field().kind != FieldKind::Real) throw PreconditionError("row_space_basis requires a real list");
  return real_row_basis(vectors.to_eigen(), vectors.field().tolerance);
}

VectorList intrinsic_coordinates(const VectorList& vectors) {
  const Eigen::MatrixXd q = row_space_basis(vectors);
  return VectorList::from_eigen(vectors.to_eigen() * q, vectors.field().tolerance);
}

VectorList apply_matrix(const VectorList& vectors, const VectorList& matrix) {
  const auto& f = vectors.field();
  const std::size_t d = vectors.dim();
  if (!(matrix.field() == f) || matrix.size() != d || matrix.dim() != d) {
    throw PreconditionError("apply_matrix: expected a " + std::to_string(d) + "x" + std::to_string(d) +
                            " matrix over the same field");
  }
  const std::size_t n = vectors.size();
  switch (f.kind) {
    case FieldKind::Real: {
      const Eigen::MatrixXd out = vectors.to_eigen() * matrix.to_eigen().transpose();
      return VectorList::from_eigen(out, f.tolerance);
    }
    case FieldKind::Rational: {
      std::vector<Rational> out(n * d, Rational(0));
      for (Index i = 0; i < n; ++i) {
        const auto v = vectors.rational_row(i);
        for (Index r = 0; r < d; ++r) {
          const auto m = matrix.rational_row(r);
          Rational acc = 0;
          for (Index c = 0; c < d; ++c) acc += m[c] * v[c];
          out[i * d + r] = acc;
        }
      }
      return VectorList::rational(n, d, std::move(out));
    }
    case FieldKind::PrimeField: {
      const PrimeOps ops{f.p};
      std::vector<std::uint64_t> out(n * d, 0);
      for (Index i = 0; i < n; ++i) {
        const auto v = vectors.prime_row(i);
        for (Index r = 0; r < d; ++r) {
          const auto m = matrix.prime_row(r);
          std::uint64_t acc = 0;
          for (Index c = 0; c < d; ++c) acc = ops.add(acc, ops.mul(m[c], v[c]));
          out[i * d + r] = acc;
        }
      }
      return VectorList::prime(n, d, f.p, std::move(out));
    }
  }
  return {};
}

}  // namespace lcc
