#pragma once

#include <map>
#include <optional>

#include "lcc/instance.hpp"
#include "lcc/report.hpp"

namespace lcc {

/// True iff no proper subset of the triple spans the owner (for an
/// independent triple: every coefficient of the owner is nonzero). The triple
/// must span the owner.
bool span_star_test(Index owner, const Triple& triple, const VectorList& vectors);

struct MultiplicityProfile {
  std::map<Triple, std::size_t> counts;  // keyed by the sorted triple
  std::size_t max_multiplicity = 0;
  std::map<std::size_t, std::size_t> histogram;  // multiplicity -> number of distinct triples
  std::size_t incidences = 0;
};

MultiplicityProfile triple_multiplicity(const LccInstance& inst);

/// Outcome of a reduction that either returns a sub-instance or a large
/// subset of small dimension together with the 2-query LDC behind it.
struct ReductionResult {
  bool reduced = false;
  LccInstance instance;
  IndexSet kept;  // positions of the input
  IndexSet witness;
  std::size_t witness_dim = 0;
  std::optional<LdcExtraction> ldc;
  bool emptied = false;  // the thresholds removed every element
  Json diag;
};

/// Drops elements with many triples that a proper subset already decodes,
/// then every such triple. When at least ceil(delta n / 2) elements have at
/// least ceil(delta n / 10) such triples, returns those elements as a witness
/// with the induced 2-query LDC instead.
ReductionResult regularize(const LccInstance& inst);

/// Low triple-multiplicity reduction with threshold n^beta.
ReductionResult reduce_multiplicity(const LccInstance& inst, double beta);

}  // namespace lcc
