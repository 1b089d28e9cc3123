#include "lcc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lcc/errors.hpp"

namespace lcc {

void require_unit_rows(const VectorList& vectors, const char* who) {
  if (vectors.field().kind != FieldKind::Real) throw PreconditionError(std::string(who) + " needs a real list");
  for (Index i = 0; i < vectors.size(); ++i) {
    double s = 0.0;
    for (double x : vectors.real_row(i)) s += x * x;
    if (std::abs(std::sqrt(s) - 1.0) > 1e-8) {
      throw PreconditionError(std::string(who) + ": row " + std::to_string(i + 1) + " is not a unit vector");
    }
  }
}

double spread_bound(const VectorList& vectors) {
  require_unit_rows(vectors, "spread_bound");
  if (vectors.empty() || vectors.dim() == 0) return 0.0;
  const Eigen::MatrixXd v = vectors.to_eigen();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(v.transpose() * v, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

SpreadProfile spread_profile(const VectorList& vectors) {
  SpreadProfile p;
  p.t_measured = spread_bound(vectors);
  const Eigen::MatrixXd v = vectors.to_eigen();
  const Eigen::MatrixXd g = (v * v.transpose()).cwiseAbs();
  p.per_vector_max_corr.assign(vectors.size(), 0.0);
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      if (i != j) p.per_vector_max_corr[i] = std::max(p.per_vector_max_corr[i], g(i, j));
    }
  }
  return p;
}

IndexSet correlated_with_vector(const VectorList& vectors, const Eigen::VectorXd& u, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw PreconditionError("correlated_with_vector: alpha must lie in (0, 1]");
  if (static_cast<std::size_t>(u.size()) != vectors.dim() || std::abs(u.norm() - 1.0) > 1e-8) {
    throw PreconditionError("correlated_with_vector: u must be a unit vector of the ambient dimension");
  }
  const double t = spread_bound(vectors);
  const Eigen::VectorXd ip = vectors.to_eigen() * u;
  IndexSet out;
  for (Eigen::Index j = 0; j < ip.size(); ++j) {
    if (std::abs(ip(j)) >= alpha) out.push_back(static_cast<Index>(j));
  }
  if (static_cast<double>(out.size()) > t / (alpha * alpha) * (1.0 + 1e-9) + 1e-9) {
    throw CertificationError("correlated_with_vector: " + std::to_string(out.size()) +
                             " correlated vectors exceed spread / alpha^2 = " + std::to_string(t / (alpha * alpha)));
  }
  return out;
}

IndexSet correlated_with_plane(const VectorList& vectors, const Eigen::VectorXd& p1, const Eigen::VectorXd& p2,
                               double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw PreconditionError("correlated_with_plane: alpha must lie in (0, 1]");
  const auto d = static_cast<Eigen::Index>(vectors.dim());
  if (p1.size() != d || p2.size() != d || std::abs(p1.norm() - 1.0) > 1e-8 || std::abs(p2.norm() - 1.0) > 1e-8 ||
      std::abs(p1.dot(p2)) > 1e-8) {
    throw PreconditionError("correlated_with_plane: plane vectors must be orthonormal");
  }
  const double t = spread_bound(vectors);
  const Eigen::MatrixXd v = vectors.to_eigen();
  const Eigen::VectorXd a = v * p1;
  const Eigen::VectorXd b = v * p2;
  IndexSet out;
  for (Eigen::Index j = 0; j < v.rows(); ++j) {
    if (std::sqrt(a(j) * a(j) + b(j) * b(j)) >= alpha) out.push_back(static_cast<Index>(j));
  }
  const double cap = 80.0 / (alpha * alpha * alpha) * t;
  if (static_cast<double>(out.size()) > cap * (1.0 + 1e-9)) {
    throw CertificationError("correlated_with_plane: count exceeds (80 / alpha^3) spread");
  }
  return out;
}

StarMatchings star_matchings(const LccInstance& inst, double corr_cut) {
  if (!(corr_cut > 0.0 && corr_cut <= 1.0)) throw PreconditionError("star_matchings: corr_cut must lie in (0, 1]");
  const std::size_t n = inst.size();
  StarMatchings out;
  out.corr_cut = corr_cut;
  out.t_measured = spread_bound(inst.vectors);
  const Eigen::MatrixXd v = inst.vectors.to_eigen();
  const Eigen::MatrixXd g = v * v.transpose();
  out.matchings.resize(n);
  out.dropped.assign(n, 0);
  out.cor_size.assign(n, 0);
  const double cor_cap = out.t_measured / (corr_cut * corr_cut);
  for (Index o = 0; o < n; ++o) {
    auto cor = [&](Index u) { return std::abs(g(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(o))) >= corr_cut; };
    for (Index u = 0; u < n; ++u) out.cor_size[o] += cor(u) ? 1 : 0;
    out.matchings[o].owner = o;
    for (const Triple& t : inst.matchings[o].triples) {
      if (cor(t[0]) || cor(t[1]) || cor(t[2])) {
        ++out.dropped[o];
      } else {
        out.matchings[o].triples.push_back(t);
      }
    }
    // Disjoint triples: each member of Cor(v) removes at most one of them.
    if (out.dropped[o] > out.cor_size[o]) throw CertificationError("star_matchings: dropped more triples than |Cor(v)|");
    if (static_cast<double>(out.cor_size[o]) > cor_cap * (1.0 + 1e-9)) {
      throw CertificationError("star_matchings: |Cor(v)| exceeds spread / corr_cut^2");
    }
  }
  return out;
}

PairCount pair_triple_count(const std::vector<Matching>& mstar, Index i, Index j) {
  PairCount c;
  std::set<Triple> seen;
  for (const auto& m : mstar) {
    for (Triple t : m.triples) {
      const bool hi = t[0] == i || t[1] == i || t[2] == i;
      const bool hj = t[0] == j || t[1] == j || t[2] == j;
      if (hi && hj && i != j) {
        ++c.with_multiplicity;
        std::sort(t.begin(), t.end());
        seen.insert(t);
      }
    }
  }
  c.distinct = seen.size();
  return c;
}

}  // namespace lcc
