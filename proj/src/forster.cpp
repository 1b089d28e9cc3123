#include "lcc/forster.hpp"

#include <algorithm>
#include <cmath>

#include "lcc/errors.hpp"

namespace lcc {

namespace {

/// One greedy draw. When `stop` is in 1..d-1 the elements spanned by the
/// first `stop` picks are written to `covered`.
std::vector<Index> greedy_draw(const VectorList& vectors, std::size_t d, Rng& rng, std::size_t stop,
                               IndexSet* covered) {
  SpanTracker tracker(vectors);
  std::vector<Index> order;
  std::vector<Index> candidates;
  order.reserve(d);
  for (std::size_t step = 0; step < d; ++step) {
    candidates.clear();
    for (Index i = 0; i < vectors.size(); ++i) {
      if (!tracker.in_span(i)) candidates.push_back(i);
    }
    if (candidates.empty()) break;
    const Index pick = candidates[uniform_below(rng, candidates.size())];
    tracker.add(pick);
    order.push_back(pick);
    if (covered != nullptr && step + 1 == stop) *covered = tracker.spanned();
  }
  return order;
}

Marginals marginals_of(const VectorList& vectors, std::size_t d, std::size_t samples, Rng& rng) {
  std::vector<std::size_t> hits(vectors.size(), 0);
  for (std::size_t s = 0; s < samples; ++s) {
    for (Index i : greedy_draw(vectors, d, rng, 0, nullptr)) ++hits[i];
  }
  Marginals m;
  m.samples = samples;
  m.gamma.resize(vectors.size());
  for (Index i = 0; i < vectors.size(); ++i) m.gamma[i] = static_cast<double>(hits[i]) / static_cast<double>(samples);
  return m;
}

struct Evaluation {
  bool ok = false;
  double value = 0.0;
  Eigen::VectorXd gradient;
};

Evaluation evaluate(const Eigen::MatrixXd& u, const Eigen::VectorXd& gamma, const Eigen::VectorXd& t) {
  Evaluation e;
  const Eigen::VectorXd w = t.array().exp();
  const Eigen::MatrixXd x = u.transpose() * w.asDiagonal() * u;
  Eigen::LLT<Eigen::MatrixXd> llt(x);
  if (llt.info() != Eigen::Success) return e;
  const Eigen::MatrixXd l = llt.matrixL();
  double logdet = 0.0;
  for (Eigen::Index k = 0; k < l.rows(); ++k) {
    if (!(l(k, k) > 0.0)) return e;
    logdet += 2.0 * std::log(l(k, k));
  }
  const Eigen::MatrixXd y = llt.matrixL().solve(u.transpose());  // d x n
  const Eigen::VectorXd quad = y.colwise().squaredNorm().transpose();
  e.value = gamma.dot(t) - logdet;
  e.gradient = gamma - w.cwiseProduct(quad);
  e.ok = std::isfinite(e.value) && e.gradient.allFinite();
  return e;
}

Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& x) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
  const Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() <= 0.0) throw ConditioningError("X(t) is not positive definite");
  return es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

double isotropy_residual(const Eigen::MatrixXd& u, const Eigen::VectorXd& gamma, const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd img = normalized_images(u, m);
  const Eigen::MatrixXd s = img.transpose() * gamma.asDiagonal() * img;
  return (s - Eigen::MatrixXd::Identity(m.rows(), m.cols())).norm();
}

double top_eigenvalue(const Eigen::MatrixXd& rows) {
  if (rows.rows() == 0 || rows.cols() == 0) return 0.0;
  const Eigen::MatrixXd g = rows.transpose() * rows;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

std::vector<Index> greedy_basis_sample(const VectorList& vectors, Rng& rng) {
  const std::size_t d = vectors.dim();
  if (rank(vectors) != d) throw PreconditionError("greedy_basis_sample: vectors do not span the ambient space");
  return greedy_draw(vectors, d, rng, 0, nullptr);
}

Marginals estimate_marginals(const VectorList& vectors, std::size_t samples, Rng& rng) {
  if (samples == 0) throw PreconditionError("estimate_marginals: need at least one sample");
  const std::size_t d = vectors.dim();
  if (rank(vectors) != d) throw PreconditionError("estimate_marginals: vectors do not span the ambient space");
  return marginals_of(vectors, d, samples, rng);
}

IndependenceVerdict independence_test(const VectorList& vectors, double eta, double tau, std::size_t samples,
                                      Rng& rng) {
  if (!(eta > 0.0 && eta <= 1.0 && tau > 0.0 && tau <= 1.0)) {
    throw PreconditionError("independence_test: eta and tau must lie in (0, 1]");
  }
  if (samples == 0) throw PreconditionError("independence_test: need at least one sample");
  const std::size_t n = vectors.size();
  const std::size_t r = rank(vectors);
  const std::size_t t = ceil_count(2.0 * tau * static_cast<double>(r));
  const std::size_t need_cover = ceil_count(eta * static_cast<double>(n) / 2.0);

  IndependenceVerdict verdict;
  std::vector<std::size_t> hits(n, 0);
  std::vector<Index> best_prefix;
  IndexSet best_cover;
  for (std::size_t s = 0; s < samples; ++s) {
    IndexSet covered;
    const auto order = greedy_draw(vectors, r, rng, t < r ? t : 0, &covered);
    for (Index i : order) ++hits[i];
    if (t >= 1 && t < r && covered.size() > best_cover.size()) {
      best_cover = std::move(covered);
      best_prefix.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(t, order.size())));
    }
  }
  verdict.marginals.samples = samples;
  verdict.marginals.gamma.resize(n);
  for (Index i = 0; i < n; ++i) verdict.marginals.gamma[i] = static_cast<double>(hits[i]) / static_cast<double>(samples);

  // Both payloads are re-checked before they are returned.
  if (!best_prefix.empty() && best_cover.size() >= need_cover) {
    const std::size_t dim = rank_of(vectors, best_prefix);
    const IndexSet recount = span_closure(vectors, make_index_set(best_prefix));
    if (dim <= t && dim < r && recount.size() >= need_cover) {
      verdict.independent = false;
      verdict.witness_basis = best_prefix;
      verdict.covered = recount;
      verdict.witness_dim = dim;
      return verdict;
    }
  }
  const double floor = n == 0 ? 0.0 : tau * static_cast<double>(r) / static_cast<double>(n);
  for (double g : verdict.marginals.gamma) verdict.qualifying += g >= floor ? 1 : 0;
  verdict.independent = true;
  verdict.low_confidence = static_cast<double>(verdict.qualifying) < (1.0 - eta) * static_cast<double>(n) - 1e-9;
  return verdict;
}

ObjectiveValue barthe_objective(const Eigen::MatrixXd& u, const Eigen::VectorXd& gamma, const Eigen::VectorXd& t) {
  if (gamma.size() != u.rows() || t.size() != u.rows()) throw PreconditionError("barthe_objective: length mismatch");
  const Evaluation e = evaluate(u, gamma, t);
  if (!e.ok) throw ConditioningError("barthe_objective: X(t) is numerically singular");
  return {e.value, e.gradient};
}

std::string to_string(BartheStatus s) {
  switch (s) {
    case BartheStatus::Converged:
      return "converged";
    case BartheStatus::Diverged:
      return "diverged";
    case BartheStatus::IterationCap:
      return "iteration-cap";
  }
  return "?";
}

Eigen::MatrixXd normalized_images(const Eigen::MatrixXd& u, const Eigen::MatrixXd& m) {
  Eigen::MatrixXd img = u * m.transpose();
  for (Eigen::Index i = 0; i < img.rows(); ++i) {
    const double nr = img.row(i).norm();
    if (nr > 0.0) img.row(i) /= nr;
  }
  return img;
}

BartheSolution barthe_transform(const VectorList& vectors, const std::vector<double>& gamma, double tol,
                                std::size_t max_iter) {
  if (vectors.field().kind != FieldKind::Real) throw PreconditionError("barthe_transform needs a real vector list");
  const std::size_t n = vectors.size();
  const std::size_t d = vectors.dim();
  if (gamma.size() != n) throw PreconditionError("barthe_transform: gamma has the wrong length");
  if (rank(vectors) != d) throw PreconditionError("barthe_transform: vectors do not span the ambient space");
  double sum = 0.0;
  for (double g : gamma) {
    if (!(g >= 0.0 && g <= 1.0 + 1e-12)) throw PreconditionError("barthe_transform: gamma entries must lie in [0, 1]");
    sum += g;
  }
  if (std::abs(sum - static_cast<double>(d)) > 1e-9 * static_cast<double>(d)) {
    throw PreconditionError("barthe_transform: gamma must sum to d");
  }
  Eigen::MatrixXd u = vectors.to_eigen();
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double nr = u.row(i).norm();
    if (nr == 0.0) throw PreconditionError("barthe_transform: zero row " + std::to_string(i + 1));
    u.row(i) /= nr;
  }
  const Eigen::VectorXd g = Eigen::Map<const Eigen::VectorXd>(gamma.data(), static_cast<Eigen::Index>(n));

  constexpr double kArmijo = 1e-4;
  constexpr double kDivergenceCap = 50.0;
  BartheSolution sol;
  Eigen::VectorXd t = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Evaluation cur = evaluate(u, g, t);
  if (!cur.ok) throw ConditioningError("barthe_transform: X(0) is numerically singular");
  double step = 1.0;
  sol.status = BartheStatus::IterationCap;
  for (std::size_t iter = 0;; ++iter) {
    sol.iterations = iter;
    const Eigen::MatrixXd x = u.transpose() * t.array().exp().matrix().asDiagonal() * u;
    const Eigen::MatrixXd m = inverse_sqrt(x);
    sol.transform = m;
    sol.dual = t;
    sol.residual = isotropy_residual(u, g, m);
    sol.gradient_inf = cur.gradient.lpNorm<Eigen::Infinity>();
    if (sol.residual <= tol && sol.gradient_inf <= tol) {
      sol.status = BartheStatus::Converged;
      break;
    }
    if (t.lpNorm<Eigen::Infinity>() > kDivergenceCap) {
      sol.status = BartheStatus::Diverged;
      break;
    }
    if (iter >= max_iter) break;
    const double gg = cur.gradient.squaredNorm();
    double s = step;
    bool accepted = false;
    Evaluation next;
    Eigen::VectorXd trial;
    while (s > 1e-30) {
      trial = t + s * cur.gradient;
      trial.array() -= trial.mean();  // f is invariant under t -> t + c 1 since sum gamma = d
      next = evaluate(u, g, trial);
      // The second test is the derivative form of the same sufficient-increase
      // condition (f is concave along the line); it stays reliable once
      // value differences fall below rounding.
      if (next.ok &&
          (next.value - cur.value >= kArmijo * s * gg || next.gradient.dot(cur.gradient) >= kArmijo * gg)) {
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted) break;
    t = trial;
    cur = next;
    step = 2.0 * s;
  }
  return sol;
}

WellSpreadResult well_spread_transform(const LccInstance& inst, double beta, std::size_t samples, Rng& rng,
                                       double mix_eps) {
  if (inst.vectors.field().kind != FieldKind::Real) throw PreconditionError("well_spread_transform needs a real instance");
  if (!(beta > 0.0 && beta <= 0.5)) throw PreconditionError("well_spread_transform: beta must lie in (0, 1/2]");
  const std::size_t n = inst.size();
  WellSpreadResult res;
  const VectorList w = intrinsic_coordinates(inst.vectors);
  const std::size_t r = w.dim();
  if (n == 0 || r == 0) {
    res.witness = iota_set(n);
    res.witness_dim = 0;
    return res;
  }
  const double eta = std::max(inst.delta / 2.0, 1e-12);
  const double tau = std::min(2.0 * beta, 1.0);
  res.verdict = independence_test(w, eta, tau, samples, rng);
  if (!res.verdict.independent) {
    res.witness = res.verdict.covered;
    res.witness_dim = res.verdict.witness_dim;
    return res;
  }

  std::vector<double> gamma = res.verdict.marginals.gamma;
  auto solve_on_support = [&](const std::vector<double>& gam) {
    IndexSet support;
    std::vector<double> sub;
    for (Index i = 0; i < n; ++i) {
      if (gam[i] > 0.0) {
        support.push_back(i);
        sub.push_back(gam[i]);
      }
    }
    // Re-normalize against accumulated rounding in the empirical frequencies.
    double sum = 0.0;
    for (double x : sub) sum += x;
    for (double& x : sub) x = std::min(1.0, x * static_cast<double>(r) / sum);
    return barthe_transform(w.select(support), sub, 1e-9, 20000);
  };
  res.solution = solve_on_support(gamma);
  if (res.solution.status == BartheStatus::Diverged) {
    const Marginals fresh = marginals_of(w, r, samples, rng);
    for (Index i = 0; i < n; ++i) gamma[i] = (1.0 - mix_eps) * gamma[i] + mix_eps * fresh.gamma[i];
    res.mixed = true;
    res.mix_eps = mix_eps;
    res.solution = solve_on_support(gamma);
  }

  const Eigen::MatrixXd images = normalized_images(w.to_eigen(), res.solution.transform);
  const double floor = tau * static_cast<double>(r) / static_cast<double>(n);
  double min_gamma = 1.0;
  for (Index i = 0; i < n; ++i) {
    if (res.verdict.marginals.gamma[i] >= floor && gamma[i] > 0.0) {
      res.kept.push_back(i);
      min_gamma = std::min(min_gamma, gamma[i]);
    }
  }
  LccInstance moved = inst;
  moved.vectors = VectorList::from_eigen(images, inst.vectors.field().tolerance);
  res.refined = static_cast<double>(res.kept.size()) >= (1.0 - inst.delta / 2.0) * static_cast<double>(n) - 1e-9;
  res.instance = res.refined ? refine_subset(moved, res.kept) : restrict_instance(moved, res.kept);
  res.lambda_max = top_eigenvalue(res.instance.vectors.to_eigen());
  res.certified_bound = res.kept.empty() ? 0.0 : (1.0 + res.solution.residual) / min_gamma;
  res.spread_guarantee = 4.0 * static_cast<double>(n) / (beta * static_cast<double>(r));
  res.transformed = true;
  return res;
}

}  // namespace lcc
