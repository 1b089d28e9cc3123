#include "lcc/instance.hpp"

#include <algorithm>
#include <cmath>

#include "lcc/errors.hpp"

namespace lcc {

namespace {

VectorList unit_vector(const FieldSpec& field, std::size_t d, Index i) {
  VectorList e = VectorList::zeros(field, 1, d);
  std::visit(
      [&](auto& data) {
        using T = typename std::decay_t<decltype(data)>::value_type;
        data[i] = T(1);
      },
      e.storage());
  return e;
}

void check_tuple(const std::vector<Index>& tuple, std::size_t n, const std::string& where) {
  for (std::size_t a = 0; a < tuple.size(); ++a) {
    if (tuple[a] >= n) {
      throw StructuralError(where + ": index " + std::to_string(tuple[a] + 1) + " out of range 1.." +
                            std::to_string(n));
    }
    for (std::size_t b = a + 1; b < tuple.size(); ++b) {
      if (tuple[a] == tuple[b]) throw StructuralError(where + ": repeated index " + std::to_string(tuple[a] + 1));
    }
  }
}

/// Positions of tuples that reuse an index already taken by an earlier tuple.
template <class Tuples>
std::vector<std::size_t> overlapping(const Tuples& tuples, std::size_t n) {
  std::vector<char> used(n, 0);
  std::vector<std::size_t> bad;
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    bool clash = false;
    for (Index i : tuples[t]) clash = clash || used[i];
    if (clash) bad.push_back(t);
    for (Index i : tuples[t]) used[i] = 1;
  }
  return bad;
}

std::string matching_name(Index owner) { return "matching of element " + std::to_string(owner + 1); }

}  // namespace

LccInstance make_instance(VectorList vectors, std::vector<Matching> matchings, double delta) {
  LccInstance inst;
  inst.labels = iota_set(vectors.size());
  inst.vectors = std::move(vectors);
  inst.matchings = std::move(matchings);
  inst.delta = delta;
  return inst;
}

std::string to_string(VerificationIssue::Kind kind) {
  switch (kind) {
    case VerificationIssue::Kind::Size:
      return "size";
    case VerificationIssue::Kind::Disjoint:
      return "disjointness";
    case VerificationIssue::Kind::OwnerInTriple:
      return "owner-in-triple";
    case VerificationIssue::Kind::Span:
      return "span";
  }
  return "?";
}

std::size_t VerificationReport::count(VerificationIssue::Kind kind) const {
  return static_cast<std::size_t>(
      std::count_if(issues.begin(), issues.end(), [&](const VerificationIssue& i) { return i.kind == kind; }));
}

std::size_t ceil_count(double x) {
  if (x <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(x - 1e-9));
}

VerificationReport verify_lcc(const LccInstance& inst) {
  const std::size_t n = inst.size();
  if (inst.matchings.size() != n) {
    throw StructuralError("expected " + std::to_string(n) + " matchings, got " +
                          std::to_string(inst.matchings.size()));
  }
  if (!inst.labels.empty() && inst.labels.size() != n) throw StructuralError("label list has the wrong length");
  VerificationReport rep;
  rep.required_size = ceil_count(inst.delta * static_cast<double>(n));
  rep.matching_sizes.resize(n);
  for (Index v = 0; v < n; ++v) {
    const Matching& m = inst.matchings[v];
    if (m.owner != v) {
      throw StructuralError(matching_name(v) + ": owner field is " + std::to_string(m.owner + 1));
    }
    for (const Triple& t : m.triples) check_tuple({t[0], t[1], t[2]}, n, matching_name(v));
  }
  for (Index v = 0; v < n; ++v) {
    const Matching& m = inst.matchings[v];
    rep.matching_sizes[v] = m.triples.size();
    if (m.triples.size() < rep.required_size) {
      rep.issues.push_back({VerificationIssue::Kind::Size, v, 0,
                            std::to_string(m.triples.size()) + " < " + std::to_string(rep.required_size)});
    }
    for (std::size_t t : overlapping(m.triples, n)) {
      rep.issues.push_back({VerificationIssue::Kind::Disjoint, v, t, "triple shares an index with an earlier one"});
    }
    for (std::size_t t = 0; t < m.triples.size(); ++t) {
      const Triple& tr = m.triples[t];
      if (std::find(tr.begin(), tr.end(), v) != tr.end()) {
        rep.issues.push_back({VerificationIssue::Kind::OwnerInTriple, v, t, "triple contains its owner"});
      }
      if (!in_span(inst.vectors, std::span<const Index>(tr.data(), 3), v)) {
        rep.issues.push_back({VerificationIssue::Kind::Span, v, t, "triple does not span its owner"});
      }
    }
  }
  rep.valid = rep.issues.empty();
  return rep;
}

VerificationReport verify_ldc(const LdcInstance& inst) {
  const std::size_t n = inst.vectors.size();
  const std::size_t d = inst.vectors.dim();
  if (inst.tuples.size() != inst.targets.size()) {
    throw StructuralError("expected " + std::to_string(inst.targets.size()) + " matchings, got " +
                          std::to_string(inst.tuples.size()));
  }
  VerificationReport rep;
  rep.required_size = ceil_count(inst.delta * static_cast<double>(n));
  rep.matching_sizes.resize(inst.targets.size());
  for (std::size_t t = 0; t < inst.targets.size(); ++t) {
    const std::string where = "matching of target " + std::to_string(t + 1);
    if (inst.targets[t] >= d) throw StructuralError(where + ": target coordinate out of range");
    for (const auto& tuple : inst.tuples[t]) {
      if (tuple.size() != static_cast<std::size_t>(inst.query_arity)) {
        throw StructuralError(where + ": tuple of size " + std::to_string(tuple.size()));
      }
      check_tuple(tuple, n, where);
    }
  }
  for (std::size_t t = 0; t < inst.targets.size(); ++t) {
    const auto& tuples = inst.tuples[t];
    rep.matching_sizes[t] = tuples.size();
    if (tuples.size() < rep.required_size) {
      rep.issues.push_back({VerificationIssue::Kind::Size, t, 0,
                            std::to_string(tuples.size()) + " < " + std::to_string(rep.required_size)});
    }
    for (std::size_t k : overlapping(tuples, n)) {
      rep.issues.push_back({VerificationIssue::Kind::Disjoint, t, k, "tuple shares an index with an earlier one"});
    }
    const VectorList e = unit_vector(inst.vectors.field(), d, inst.targets[t]);
    for (std::size_t k = 0; k < tuples.size(); ++k) {
      if (!in_span(inst.vectors, tuples[k], e)) {
        rep.issues.push_back({VerificationIssue::Kind::Span, t, k, "tuple does not span its target"});
      }
    }
  }
  rep.valid = rep.issues.empty();
  return rep;
}

std::size_t min_matching_size(const LccInstance& inst) {
  if (inst.matchings.empty()) return 0;
  std::size_t best = inst.matchings.front().triples.size();
  for (const auto& m : inst.matchings) best = std::min(best, m.triples.size());
  return best;
}

LccInstance restrict_instance(const LccInstance& inst, const IndexSet& keep) {
  const std::size_t n = inst.size();
  std::vector<Index> pos(n, n);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] >= n) throw StructuralError("restrict: index out of range");
    pos[keep[k]] = k;
  }
  LccInstance out;
  out.vectors = inst.vectors.select(keep);
  out.query_arity = inst.query_arity;
  out.labels.reserve(keep.size());
  for (Index i : keep) out.labels.push_back(inst.labels.empty() ? i : inst.labels[i]);
  out.matchings.resize(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    Matching& m = out.matchings[k];
    m.owner = k;
    for (const Triple& t : inst.matchings[keep[k]].triples) {
      if (pos[t[0]] == n || pos[t[1]] == n || pos[t[2]] == n) continue;
      m.triples.push_back({pos[t[0]], pos[t[1]], pos[t[2]]});
    }
  }
  out.delta = keep.empty() ? 0.0 : static_cast<double>(min_matching_size(out)) / static_cast<double>(keep.size());
  return out;
}

LccInstance refine_subset(const LccInstance& inst, const IndexSet& keep) {
  const double n = static_cast<double>(inst.size());
  if (static_cast<double>(keep.size()) < (1.0 - inst.delta / 2.0) * n - 1e-9) {
    throw PreconditionError("refine_subset: keeping " + std::to_string(keep.size()) + " of " +
                            std::to_string(inst.size()) + " elements is below (1 - delta/2) n");
  }
  LccInstance out = restrict_instance(inst, keep);
  out.delta = inst.delta / 2.0;
  return out;
}

LccInstance apply_invertible(const LccInstance& inst, const VectorList& matrix, bool normalize) {
  const std::size_t d = inst.dim();
  if (matrix.size() != d || matrix.dim() != d) throw PreconditionError("apply_invertible: matrix must be d x d");
  if (rank(matrix) < d) throw PreconditionError("apply_invertible: matrix is singular");
  if (normalize && inst.vectors.field().kind != FieldKind::Real) {
    throw PreconditionError("apply_invertible: normalization needs a real instance");
  }
  LccInstance out = inst;
  out.vectors = apply_matrix(inst.vectors, matrix);
  if (normalize) {
    Eigen::MatrixXd m = out.vectors.to_eigen();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double nr = m.row(i).norm();
      if (nr > 0.0) m.row(i) /= nr;
    }
    out.vectors = VectorList::from_eigen(m, inst.vectors.field().tolerance);
  }
  return out;
}

LccInstance apply_invertible(const LccInstance& inst, const Eigen::MatrixXd& matrix, bool normalize) {
  if (inst.vectors.field().kind != FieldKind::Real) throw PreconditionError("apply_invertible: real matrix on exact field");
  return apply_invertible(inst, VectorList::from_eigen(matrix, inst.vectors.field().tolerance), normalize);
}

double ldc2_min_length(double delta, std::size_t d) {
  return std::exp2(delta * static_cast<double>(d) / 16.0 - 1.0);
}

Ldc2Check check_ldc2(const LdcInstance& ldc) {
  Ldc2Check c;
  c.n = ldc.vectors.size();
  c.d = ldc.targets.size();
  c.delta = ldc.delta;
  c.min_length = ldc2_min_length(ldc.delta, c.d);
  c.verified = verify_ldc(ldc).valid;
  c.bound_holds = static_cast<double>(c.n) >= c.min_length;
  if (c.verified && !c.bound_holds) {
    throw ConsistencyError("a verified (2," + std::to_string(ldc.delta) + ")-LDC of dimension " + std::to_string(c.d) +
                           " has length " + std::to_string(c.n) + " below the lower bound " +
                           std::to_string(c.min_length));
  }
  return c;
}

LdcExtraction extract_ldc2(const VectorList& images, const std::vector<Index>& decoded,
                           const std::vector<std::vector<std::vector<Index>>>& pairs) {
  if (pairs.size() != decoded.size()) throw PreconditionError("extract_ldc2: one pair list per decoded element");
  const std::size_t n = images.size();
  const std::vector<Index> chosen = independent_subset(images, decoded);
  std::vector<Index> order = chosen;
  for (Index i = 0; i < n; ++i) order.push_back(i);
  const std::vector<Index> basis = independent_subset(images, order);
  LdcExtraction out;
  out.ldc.vectors = coordinates(images, images.select(basis));
  out.ldc.query_arity = 2;
  std::size_t min_size = n;
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    const auto pos = static_cast<std::size_t>(std::find(decoded.begin(), decoded.end(), chosen[k]) - decoded.begin());
    out.decoded.push_back(chosen[k]);
    out.ldc.targets.push_back(k);
    out.ldc.tuples.push_back(pairs[pos]);
    min_size = std::min(min_size, pairs[pos].size());
  }
  out.ldc.delta = (chosen.empty() || n == 0) ? 0.0 : static_cast<double>(min_size) / static_cast<double>(n);
  out.check = check_ldc2(out.ldc);
  return out;
}

}  // namespace lcc
