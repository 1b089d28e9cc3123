#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lcc/instance.hpp"
#include "lcc/rng.hpp"

namespace lcc {

/// Per-element probabilities of landing in a sampled basis.
struct Marginals {
  std::vector<double> gamma;
  std::size_t samples = 0;
};

/// Greedy basis: repeatedly picks a uniform element outside the span of the
/// elements chosen so far. Returns the d indices in the order drawn.
std::vector<Index> greedy_basis_sample(const VectorList& vectors, Rng& rng);

/// Empirical marginals of `samples` greedy draws.
Marginals estimate_marginals(const VectorList& vectors, std::size_t samples, Rng& rng);

struct IndependenceVerdict {
  bool independent = true;
  bool low_confidence = false;
  Marginals marginals;
  std::size_t qualifying = 0;  // entries >= tau d / n
  // Witness payload: prefix of a greedy sample and the elements it spans.
  std::vector<Index> witness_basis;
  IndexSet covered;
  std::size_t witness_dim = 0;
};

/// Either marginals with at least (1 - eta) n entries >= tau d / n, or a
/// subspace of dimension <= ceil(2 tau d) spanned by a greedy prefix that
/// holds at least ceil(eta n / 2) elements. A witness must be a proper
/// subspace of the span of all elements.
IndependenceVerdict independence_test(const VectorList& vectors, double eta, double tau, std::size_t samples,
                                      Rng& rng);

struct ObjectiveValue {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

/// f(t) = <gamma, t> - ln det X(t), X(t) = sum_j e^{t_j} u_j u_j^T, for the
/// rows u_j of `u`.
ObjectiveValue barthe_objective(const Eigen::MatrixXd& u, const Eigen::VectorXd& gamma, const Eigen::VectorXd& t);

enum class BartheStatus { Converged, Diverged, IterationCap };
std::string to_string(BartheStatus s);

struct BartheSolution {
  Eigen::MatrixXd transform;  // M = X(t*)^{-1/2}
  Eigen::VectorXd dual;       // t* for the unit-normalized rows
  double residual = 0.0;      // || sum_j gamma_j uhat_j uhat_j^T - I ||_F
  double gradient_inf = 0.0;
  std::size_t iterations = 0;
  BartheStatus status = BartheStatus::IterationCap;
};

/// Gradient ascent with Armijo backtracking on the concave objective. Rows
/// are normalized first, which only shifts t and leaves M unchanged.
BartheSolution barthe_transform(const VectorList& vectors, const std::vector<double>& gamma, double tol = 1e-9,
                                 std::size_t max_iter = 20000);

/// Rows M u_j / ||M u_j|| (zero rows stay zero).
Eigen::MatrixXd normalized_images(const Eigen::MatrixXd& u, const Eigen::MatrixXd& m);

struct WellSpreadResult {
  bool transformed = false;
  // Transformed branch.
  LccInstance instance;  // in intrinsic coordinates of the input span
  BartheSolution solution;
  IndexSet kept;  // positions of the input
  double lambda_max = 0.0;
  double certified_bound = 0.0;  // (1 + residual) / min_{j in kept} gamma_j
  double spread_guarantee = 0.0;  // 4 n / (beta d)
  bool mixed = false;            // interior shift applied after a divergence
  double mix_eps = 0.0;
  bool refined = true;  // false when fewer than (1 - delta/2) n elements qualified
  // Witness branch.
  IndexSet witness;
  std::size_t witness_dim = 0;
  IndependenceVerdict verdict;
};

/// Reduction to well-spread position with eta = delta / 2 and tau = 2 beta.
WellSpreadResult well_spread_transform(const LccInstance& inst, double beta, std::size_t samples, Rng& rng,
                                       double mix_eps = 1e-3);

}  // namespace lcc
