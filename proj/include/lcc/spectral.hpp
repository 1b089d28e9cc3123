#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lcc/instance.hpp"

namespace lcc {

struct SpreadProfile {
  double t_measured = 0.0;                  // lambda_max(sum_j v_j v_j^T)
  std::vector<double> per_vector_max_corr;  // max_{i != j} |<v_i, v_j>|
};

/// Largest eigenvalue of sum_j v_j v_j^T for unit rows.
double spread_bound(const VectorList& vectors);
SpreadProfile spread_profile(const VectorList& vectors);

/// Rows are unit length within 1e-8 (zero rows are rejected).
void require_unit_rows(const VectorList& vectors, const char* who);

/// {j : |<v_j, u>| >= alpha}; the count is checked against spread / alpha^2.
IndexSet correlated_with_vector(const VectorList& vectors, const Eigen::VectorXd& u, double alpha);

/// {j : ||P v_j|| >= alpha} for the plane spanned by orthonormal p1, p2; the
/// count is checked against (80 / alpha^3) spread.
IndexSet correlated_with_plane(const VectorList& vectors, const Eigen::VectorXd& p1, const Eigen::VectorXd& p2,
                               double alpha);

struct StarMatchings {
  std::vector<Matching> matchings;  // M_v* per element
  std::vector<std::size_t> dropped;
  std::vector<std::size_t> cor_size;  // |Cor(v)|, v itself included
  double corr_cut = 1e-4;
  double t_measured = 0.0;
};

/// Drops every triple touching Cor(v) = {u : |<u, v>| >= corr_cut}.
StarMatchings star_matchings(const LccInstance& inst, double corr_cut = 1e-4);

struct PairCount {
  std::size_t with_multiplicity = 0;  // (owner, triple) incidences
  std::size_t distinct = 0;           // distinct triples
};

PairCount pair_triple_count(const std::vector<Matching>& mstar, Index i, Index j);

}  // namespace lcc
