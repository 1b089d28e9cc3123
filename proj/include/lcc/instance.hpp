#pragma once

#include <array>
#include <string>
#include <vector>

#include "lcc/linalg.hpp"

namespace lcc {

using Triple = std::array<Index, 3>;

/// Disjoint decoding triples for one element.
struct Matching {
  Index owner = 0;
  std::vector<Triple> triples;
};

/// Geometric 3-query LCC: vectors plus one matching per element. `labels`
/// carry stable identities of the elements through every reduction, so a
/// sub-instance can always be mapped back to positions of the root instance.
struct LccInstance {
  VectorList vectors;
  std::vector<Matching> matchings;
  double delta = 0.0;
  int query_arity = 3;
  std::vector<Index> labels;

  [[nodiscard]] std::size_t size() const { return vectors.size(); }
  [[nodiscard]] std::size_t dim() const { return vectors.dim(); }
};

/// Builds an instance with identity labels.
LccInstance make_instance(VectorList vectors, std::vector<Matching> matchings, double delta);

/// Geometric LDC: tuples[t] is the matching decoding e_{targets[t]}.
struct LdcInstance {
  VectorList vectors;
  std::vector<Index> targets;
  std::vector<std::vector<std::vector<Index>>> tuples;
  double delta = 0.0;
  int query_arity = 2;
};

struct VerificationIssue {
  enum class Kind { Size, Disjoint, OwnerInTriple, Span };
  Kind kind;
  Index element;     // owner index (LCC) or target position (LDC)
  std::size_t item;  // position of the offending tuple inside its matching
  std::string detail;
};

std::string to_string(VerificationIssue::Kind kind);

struct VerificationReport {
  bool valid = true;
  std::size_t required_size = 0;  // ceil(delta * n)
  std::vector<std::size_t> matching_sizes;
  std::vector<VerificationIssue> issues;

  [[nodiscard]] std::size_t count(VerificationIssue::Kind kind) const;
};

/// ceil(x) with a small slack so that products such as 0.3 * 60 round to 18.
std::size_t ceil_count(double x);

/// Structural problems (index out of range, repeated index inside one triple,
/// wrong owner, wrong number of matchings) throw StructuralError; every other
/// check is reported.
VerificationReport verify_lcc(const LccInstance& inst);
VerificationReport verify_ldc(const LdcInstance& inst);

/// Sub-instance on `keep` (sorted positions). Each new matching consists of
/// the old triples lying inside `keep`, re-indexed; delta becomes the
/// measured minimum matching size over the new length.
LccInstance restrict_instance(const LccInstance& inst, const IndexSet& keep);

/// Same selection with the guarantee |keep| >= (1 - delta/2) n and delta/2
/// as the new rate.
LccInstance refine_subset(const LccInstance& inst, const IndexSet& keep);

/// Applies v -> M v to every element (M as d rows over the instance field);
/// over R the images may be normalized to unit length.
LccInstance apply_invertible(const LccInstance& inst, const VectorList& matrix, bool normalize);
LccInstance apply_invertible(const LccInstance& inst, const Eigen::MatrixXd& matrix, bool normalize);

/// Smallest possible length 2^{delta d / 16 - 1} of a (2, delta)-LDC in
/// dimension d.
double ldc2_min_length(double delta, std::size_t d);

struct Ldc2Check {
  bool verified = false;
  std::size_t n = 0;
  std::size_t d = 0;
  double delta = 0.0;
  double min_length = 0.0;
  bool bound_holds = true;
};

/// Verifies a 2-query LDC and compares its length with the lower bound. A
/// verified instance that violates the bound throws ConsistencyError.
Ldc2Check check_ldc2(const LdcInstance& ldc);

struct LdcExtraction {
  LdcInstance ldc;
  std::vector<Index> decoded;  // element positions decoded to e_1..e_k
  Ldc2Check check;
};

/// Builds the 2-query LDC induced by `pairs[i]` decoding `decoded[i]` inside
/// the list `images`: an independent subset of the decoded elements is sent
/// to standard basis vectors by a change of basis of span(images), and the
/// result is verified and compared with the length bound (ConsistencyError
/// on violation).
LdcExtraction extract_ldc2(const VectorList& images, const std::vector<Index>& decoded,
                           const std::vector<std::vector<std::vector<Index>>>& pairs);

/// Minimum matching size over all elements (0 for an empty instance).
std::size_t min_matching_size(const LccInstance& inst);

}  // namespace lcc
