#include "lcc/multiplicity.hpp"

#include <algorithm>
#include <cmath>

#include "lcc/errors.hpp"

namespace lcc {

namespace {

Triple sorted(Triple t) {
  std::sort(t.begin(), t.end());
  return t;
}

bool touches(const Triple& t, const std::vector<char>& mark) { return mark[t[0]] || mark[t[1]] || mark[t[2]]; }

bool inside(const Triple& t, const std::vector<char>& alive) { return alive[t[0]] && alive[t[1]] && alive[t[2]]; }

/// Lexicographically least pair of the triple spanning the owner, if any.
std::optional<std::vector<Index>> spanning_pair(Index owner, const Triple& t, const VectorList& v) {
  const Triple s = sorted(t);
  const std::array<std::array<Index, 2>, 3> pairs{{{s[0], s[1]}, {s[0], s[2]}, {s[1], s[2]}}};
  for (const auto& p : pairs) {
    if (in_span(v, std::span<const Index>(p.data(), 2), owner)) return std::vector<Index>{p[0], p[1]};
  }
  return std::nullopt;
}

/// Keeps the elements flagged in `alive` and, inside each matching, only the
/// triples accepted by `keep_triple(owner, triple)` (old indices).
template <class Pred>
LccInstance restrict_filtered(const LccInstance& inst, const IndexSet& keep, Pred keep_triple) {
  LccInstance filtered = inst;
  for (auto& m : filtered.matchings) {
    std::vector<Triple> next;
    for (const Triple& t : m.triples) {
      if (keep_triple(m.owner, t)) next.push_back(t);
    }
    m.triples = std::move(next);
  }
  return restrict_instance(filtered, keep);
}

}  // namespace

bool span_star_test(Index owner, const Triple& triple, const VectorList& vectors) {
  if (!in_span(vectors, std::span<const Index>(triple.data(), 3), owner)) {
    throw PreconditionError("span_star_test: triple does not span element " + std::to_string(owner + 1));
  }
  if (vectors.is_zero_row(owner)) return false;
  for (int a = 0; a < 3; ++a) {
    const Index single[1] = {triple[a]};
    if (in_span(vectors, single, owner)) return false;
    for (int b = a + 1; b < 3; ++b) {
      const Index pair[2] = {triple[a], triple[b]};
      if (in_span(vectors, pair, owner)) return false;
    }
  }
  return true;
}

MultiplicityProfile triple_multiplicity(const LccInstance& inst) {
  MultiplicityProfile p;
  for (const auto& m : inst.matchings) {
    for (const Triple& t : m.triples) {
      ++p.counts[sorted(t)];
      ++p.incidences;
    }
  }
  for (const auto& [t, c] : p.counts) {
    p.max_multiplicity = std::max(p.max_multiplicity, c);
    ++p.histogram[c];
  }
  return p;
}

ReductionResult regularize(const LccInstance& inst) {
  const std::size_t n = inst.size();
  const std::size_t heavy_bad = ceil_count(inst.delta * static_cast<double>(n) / 10.0);
  const std::size_t heavy_count_needed = ceil_count(inst.delta * static_cast<double>(n) / 2.0);
  std::vector<std::vector<char>> bad(n);
  std::vector<std::size_t> bad_count(n, 0);
  std::size_t total_bad = 0;
  for (Index v = 0; v < n; ++v) {
    const auto& triples = inst.matchings[v].triples;
    bad[v].assign(triples.size(), 0);
    for (std::size_t k = 0; k < triples.size(); ++k) {
      if (!span_star_test(v, triples[k], inst.vectors)) {
        bad[v][k] = 1;
        ++bad_count[v];
      }
    }
    total_bad += bad_count[v];
  }
  IndexSet heavy;
  for (Index v = 0; v < n; ++v) {
    if (bad_count[v] > 0 && bad_count[v] >= heavy_bad) heavy.push_back(v);
  }
  ReductionResult res;
  res.diag["bad_triples"] = total_bad;
  res.diag["heavy_threshold"] = heavy_bad;
  res.diag["heavy_elements"] = heavy.size();
  res.diag["witness_threshold"] = heavy_count_needed;

  if (!heavy.empty() && heavy.size() >= heavy_count_needed) {
    // Every bad triple of a heavy element contains a pair that decodes it.
    std::vector<std::vector<std::vector<Index>>> pairs(heavy.size());
    for (std::size_t h = 0; h < heavy.size(); ++h) {
      const Index v = heavy[h];
      const auto& triples = inst.matchings[v].triples;
      for (std::size_t k = 0; k < triples.size(); ++k) {
        if (!bad[v][k]) continue;
        if (auto p = spanning_pair(v, triples[k], inst.vectors)) pairs[h].push_back(*p);
      }
    }
    res.ldc = extract_ldc2(inst.vectors, heavy, pairs);
    res.witness = heavy;
    res.witness_dim = rank_of(inst.vectors, heavy);
    res.diag["branch"] = "witness";
    return res;
  }

  std::vector<char> drop(n, 0);
  for (Index v : heavy) drop[v] = 1;
  for (Index v = 0; v < n; ++v) {
    if (!drop[v]) res.kept.push_back(v);
  }
  // Bad triples are recognised by their position inside the owner's matching.
  LccInstance filtered = inst;
  for (Index v = 0; v < n; ++v) {
    std::vector<Triple> next;
    for (std::size_t k = 0; k < inst.matchings[v].triples.size(); ++k) {
      if (!bad[v][k]) next.push_back(inst.matchings[v].triples[k]);
    }
    filtered.matchings[v].triples = std::move(next);
  }
  res.instance = restrict_instance(filtered, res.kept);
  res.instance.delta = std::min(inst.delta / 4.0, res.instance.delta);
  res.reduced = true;
  res.emptied = res.kept.empty();
  res.diag["branch"] = "regular";
  res.diag["kept"] = res.kept.size();
  res.diag["delta_out"] = res.instance.delta;
  return res;
}

ReductionResult reduce_multiplicity(const LccInstance& inst, double beta) {
  if (!(beta > 0.0)) throw PreconditionError("reduce_multiplicity: beta must be positive");
  const std::size_t n = inst.size();
  const double nd = static_cast<double>(n);
  const double delta = inst.delta;
  const double gamma = delta * delta / 6.0;
  ReductionResult res;
  res.diag["beta"] = beta;
  res.diag["gamma"] = gamma;

  // (i) peel elements lying in fewer than ceil(gamma n) surviving triples.
  const std::size_t peel_cut = ceil_count(gamma * nd);
  std::vector<char> alive(n, 1);
  std::vector<std::size_t> deg(n, 0);
  for (const auto& m : inst.matchings) {
    for (const Triple& t : m.triples) {
      for (Index i : t) ++deg[i];
    }
  }
  // Incidences by element, used to update degrees when an element goes.
  std::vector<std::vector<std::pair<Index, std::size_t>>> where(n);
  for (Index v = 0; v < n; ++v) {
    const auto& triples = inst.matchings[v].triples;
    for (std::size_t k = 0; k < triples.size(); ++k) {
      for (Index i : triples[k]) where[i].push_back({v, k});
    }
  }
  std::vector<std::vector<char>> triple_alive(n);
  for (Index v = 0; v < n; ++v) triple_alive[v].assign(inst.matchings[v].triples.size(), 1);
  std::size_t peeled = 0;
  std::size_t peeled_triples = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (Index u = 0; u < n; ++u) {
      if (!alive[u] || deg[u] >= peel_cut) continue;
      alive[u] = 0;
      ++peeled;
      changed = true;
      for (auto [v, k] : where[u]) {
        if (!triple_alive[v][k]) continue;
        triple_alive[v][k] = 0;
        ++peeled_triples;
        for (Index i : inst.matchings[v].triples[k]) --deg[i];
      }
    }
  }
  res.diag["peel_threshold"] = peel_cut;
  res.diag["peeled_elements"] = peeled;
  res.diag["peeled_triples"] = peeled_triples;

  // (ii) drop elements with fewer than ceil(delta n / 2) triples inside V'.
  const std::size_t keep_cut = ceil_count(delta * nd / 2.0);
  std::vector<char> in2(n, 0);
  IndexSet v2;
  for (Index v = 0; v < n; ++v) {
    if (!alive[v]) continue;
    std::size_t c = 0;
    for (const Triple& t : inst.matchings[v].triples) c += inside(t, alive) ? 1 : 0;
    if (c >= keep_cut && c > 0) {
      in2[v] = 1;
      v2.push_back(v);
    }
  }
  res.diag["second_stage_threshold"] = keep_cut;
  res.diag["second_stage_size"] = v2.size();

  // Multiplicities inside V''.
  std::map<Triple, std::size_t> mult;
  for (Index v : v2) {
    for (const Triple& t : inst.matchings[v].triples) {
      if (inside(t, in2)) ++mult[sorted(t)];
    }
  }
  const double high = std::pow(nd, beta);
  std::size_t max_mult = 0;
  for (const auto& [t, c] : mult) max_mult = std::max(max_mult, c);
  res.diag["multiplicity_threshold"] = high;
  res.diag["max_multiplicity_before"] = max_mult;

  // (iii) contradiction branch: many elements decoded mostly by heavy triples.
  std::size_t mostly_high = 0;
  for (Index v : v2) {
    std::size_t tot = 0, hi = 0;
    for (const Triple& t : inst.matchings[v].triples) {
      if (!inside(t, in2)) continue;
      ++tot;
      hi += static_cast<double>(mult[sorted(t)]) >= high ? 1 : 0;
    }
    mostly_high += (tot > 0 && 2 * hi >= tot) ? 1 : 0;
  }
  const std::size_t branch_cut = ceil_count(delta / 24.0 * static_cast<double>(v2.size()));
  res.diag["mostly_high_elements"] = mostly_high;
  res.diag["witness_threshold"] = branch_cut;

  if (!v2.empty() && mostly_high > 0 && mostly_high >= branch_cut) {
    // Element in the most heavy-triple incidences.
    std::vector<std::size_t> heavy_inc(n, 0);
    for (Index v : v2) {
      for (const Triple& t : inst.matchings[v].triples) {
        if (inside(t, in2) && static_cast<double>(mult[sorted(t)]) >= high) {
          for (Index i : t) ++heavy_inc[i];
        }
      }
    }
    const Index pivot = static_cast<Index>(std::max_element(heavy_inc.begin(), heavy_inc.end()) - heavy_inc.begin());
    std::vector<std::pair<std::size_t, Triple>> through;
    for (const auto& [t, c] : mult) {
      if (static_cast<double>(c) >= high && std::find(t.begin(), t.end(), pivot) != t.end()) through.push_back({c, t});
    }
    std::stable_sort(through.begin(), through.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    const auto cap = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::pow(nd, 0.5 - beta / 2.0))));
    const double target = std::pow(nd, 0.5 + beta / 2.0);
    std::vector<Index> kernel;
    IndexSet zeroed;
    std::size_t used = 0;
    for (const auto& [c, t] : through) {
      if (used >= cap) break;
      kernel.insert(kernel.end(), t.begin(), t.end());
      ++used;
      const IndexSet closure = span_closure(inst.vectors, make_index_set(kernel));
      zeroed.clear();
      for (Index i : closure) {
        if (in2[i]) zeroed.push_back(i);
      }
      if (static_cast<double>(zeroed.size()) >= target) break;
    }
    const IndexSet kernel_set = make_index_set(kernel);
    std::vector<char> star(n, 0);
    for (Index i : zeroed) star[i] = 1;
    const std::size_t s_cut = std::max<std::size_t>(1, ceil_count(gamma / 6.0 * target));
    IndexSet s;
    std::vector<std::vector<std::vector<Index>>> pairs;
    for (Index v = 0; v < n; ++v) {
      std::vector<std::vector<Index>> pv;
      for (const Triple& t : inst.matchings[v].triples) {
        if (!touches(t, star)) continue;
        // Drop one zeroed element; the other two decode the image of v.
        const Triple st = sorted(t);
        std::size_t skip = 0;
        while (!star[st[skip]]) ++skip;
        std::vector<Index> p;
        for (std::size_t a = 0; a < 3; ++a) {
          if (a != skip) p.push_back(st[a]);
        }
        pv.push_back(std::move(p));
      }
      if (pv.size() >= s_cut) {
        s.push_back(v);
        pairs.push_back(std::move(pv));
      }
    }
    const VectorList images = project_to_zero(inst.vectors, kernel_set);
    res.ldc = extract_ldc2(images, s, pairs);
    res.witness = s;
    res.witness_dim = rank_of(inst.vectors, s);
    res.diag["branch"] = "witness";
    res.diag["pivot"] = pivot + 1;
    res.diag["heavy_triples_used"] = used;
    res.diag["zeroed"] = zeroed.size();
    res.diag["witness_size"] = s.size();
    res.diag["witness_dim"] = res.witness_dim;
    res.diag["dimension_target"] = std::pow(nd, 0.5 - beta / 4.0);
    return res;
  }

  // (iv) delete triples of multiplicity above n^beta, then keep elements that
  // still hold ceil(delta |V''| / 12) triples inside the survivors.
  auto low = [&](const Triple& t) { return static_cast<double>(mult[sorted(t)]) <= high; };
  const std::size_t low_cut = std::max<std::size_t>(1, ceil_count(delta / 12.0 * static_cast<double>(v2.size())));
  std::vector<char> cur = in2;
  for (bool changed = true; changed;) {
    changed = false;
    for (Index v = 0; v < n; ++v) {
      if (!cur[v]) continue;
      std::size_t c = 0;
      for (const Triple& t : inst.matchings[v].triples) c += (inside(t, cur) && low(t)) ? 1 : 0;
      if (c < low_cut) {
        cur[v] = 0;
        changed = true;
      }
    }
  }
  for (Index v = 0; v < n; ++v) {
    if (cur[v]) res.kept.push_back(v);
  }
  res.instance = restrict_filtered(inst, res.kept, [&](Index, const Triple& t) { return low(t); });
  res.reduced = true;
  res.emptied = res.kept.empty();
  res.diag["branch"] = "reduced";
  res.diag["low_threshold"] = low_cut;
  res.diag["kept"] = res.kept.size();
  res.diag["delta_out"] = res.instance.delta;
  res.diag["max_multiplicity_after"] = triple_multiplicity(res.instance).max_multiplicity;
  res.diag["emptied_by_constants"] = res.emptied;
  return res;
}

}  // namespace lcc
