#include "probint/model.hpp"

#include <algorithm>
#include <set>

#include "probint/jointprob.hpp"

namespace probint::model {

std::string atom_to_string(const Atom& a) {
  if (std::holds_alternative<long long>(a))
    return std::to_string(std::get<long long>(a));
  return std::get<std::string>(a);
}

void CoordinateSpace::validate() const {
  if (atoms.empty())
    throw InputError("coordinate '" + name + "' has no atoms");
  if (probs.size() != atoms.size())
    throw InputError("coordinate '" + name + "': probs/atoms size mismatch");
  std::set<std::pair<int, std::string>> seen;
  for (const Atom& a : atoms) {
    auto key = std::make_pair(static_cast<int>(a.index()), atom_to_string(a));
    if (!seen.insert(key).second)
      throw InputError("coordinate '" + name + "': duplicate atom " +
                       atom_to_string(a));
  }
  Rational sum = 0;
  for (const Rational& p : probs) {
    if (p < 0)
      throw InputError("coordinate '" + name + "': negative atom probability");
    sum += p;
  }
  if (sum != 1)
    throw InputError("coordinate '" + name + "': atom probabilities sum to " +
                     to_fraction_string(sum) + ", expected 1");
}

int CoordinateSpace::find_atom(const Atom& a) const {
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (atoms[i] == a) return static_cast<int>(i);
  return -1;
}

void ProductSpace::validate() const {
  std::set<std::string> names;
  for (const CoordinateSpace& c : coords) {
    c.validate();
    if (!names.insert(c.name).second)
      throw InputError("duplicate coordinate name '" + c.name + "'");
  }
}

std::size_t Event::table_size(const ProductSpace& space) const {
  std::size_t n = 1;
  for (int j : support) n *= space.atom_count(j);
  return n;
}

void Event::validate(const ProductSpace& space) const {
  for (std::size_t k = 0; k < support.size(); ++k) {
    int j = support[k];
    if (j < 0 || j >= static_cast<int>(space.dim()))
      throw InputError("event '" + name + "': support coordinate out of range");
    if (k > 0 && support[k - 1] >= j)
      throw InputError("event '" + name + "': support not strictly increasing");
  }
  if (table.size() != table_size(space))
    throw InputError("event '" + name + "': table size mismatch");
  for (std::uint8_t v : table)
    if (v > 1) throw InputError("event '" + name + "': non-boolean table entry");
}

Event normalize_support(const ProductSpace& space, const Event& raw) {
  raw.validate(space);
  const std::size_t d = raw.support.size();
  if (d == 0) return raw;

  std::vector<std::size_t> sizes(d), strides(d);
  for (std::size_t k = 0; k < d; ++k)
    sizes[k] = space.atom_count(raw.support[k]);
  strides[d - 1] = 1;
  for (std::size_t k = d - 1; k > 0; --k)
    strides[k - 1] = strides[k] * sizes[k];

  // A direction is kept iff some pair of cells differing only there differs
  // in value. Probabilities play no part here.
  std::vector<bool> kept(d, false);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t idx = 0; idx < raw.table.size() && !kept[k]; ++idx) {
      std::size_t digit = (idx / strides[k]) % sizes[k];
      std::size_t base = idx - digit * strides[k];
      if (raw.table[idx] != raw.table[base]) kept[k] = true;
    }
  }

  Event out;
  out.name = raw.name;
  std::vector<std::size_t> kept_pos;
  for (std::size_t k = 0; k < d; ++k)
    if (kept[k]) {
      out.support.push_back(raw.support[k]);
      kept_pos.push_back(k);
    }

  if (out.support.size() == d) {
    out.table = raw.table;
    return out;
  }

  const std::size_t nd = out.support.size();
  std::size_t new_size = 1;
  for (std::size_t k = 0; k < nd; ++k) new_size *= sizes[kept_pos[k]];
  out.table.resize(new_size);
  for (std::size_t nidx = 0; nidx < new_size; ++nidx) {
    // Dropped directions are constant; read their 0 slice.
    std::size_t rem = nidx, old_idx = 0;
    for (std::size_t k = nd; k-- > 0;) {
      std::size_t digit = rem % sizes[kept_pos[k]];
      rem /= sizes[kept_pos[k]];
      old_idx += digit * strides[kept_pos[k]];
    }
    out.table[nidx] = raw.table[old_idx];
  }
  return out;
}

bool supports_intersect(const Event& a, const Event& b) {
  std::size_t i = 0, j = 0;
  while (i < a.support.size() && j < b.support.size()) {
    if (a.support[i] == b.support[j]) return true;
    if (a.support[i] < b.support[j])
      ++i;
    else
      ++j;
  }
  return false;
}

DependencyGraph build_dependency_graph(const ProductSpace& space,
                                       const std::vector<Event>& events) {
  DependencyGraph g;
  g.n = static_cast<int>(events.size());
  g.neighbors.assign(g.n, {});
  for (int i = 0; i < g.n; ++i) {
    events[i].validate(space);
    for (int j = i + 1; j < g.n; ++j) {
      if (supports_intersect(events[i], events[j])) {
        g.neighbors[i].push_back(j);
        g.neighbors[j].push_back(i);
      }
    }
  }
  g.degrees.resize(g.n);
  g.support_sizes.resize(g.n);
  g.mu.resize(g.n);
  g.max_degree = 5;
  for (int i = 0; i < g.n; ++i) {
    g.degrees[i] = static_cast<int>(g.neighbors[i].size());
    g.max_degree = std::max(g.max_degree, g.degrees[i]);
    g.support_sizes[i] = static_cast<int>(events[i].support.size());
    g.mu[i] = std::min(g.support_sizes[i], g.degrees[i] + 1);
  }
  return g;
}

SmallnessReport check_smallness(const ProductSpace& space,
                                const std::vector<Event>& events,
                                const DependencyGraph& graph) {
  SmallnessReport report;
  for (std::size_t i = 0; i < events.size(); ++i) {
    SmallnessRow row;
    row.event = events[i].name;
    row.probability = jointprob::event_probability(space, events[i]);
    Integer base = 3 * Integer(graph.max_degree);
    Integer den;
    mpz_pow_ui(den.get_mpz_t(), base.get_mpz_t(), 3u * graph.mu[i]);
    row.threshold = Rational(1, den);
    row.passes = row.probability < row.threshold;
    report.overall = report.overall && row.passes;
    report.rows.push_back(std::move(row));
  }
  return report;
}

LllReport check_lll(const ProductSpace& space, const std::vector<Event>& events,
                    const DependencyGraph& graph,
                    const std::optional<std::vector<Rational>>& s) {
  LllReport report;
  const int n = graph.n;
  if (s) {
    if (static_cast<int>(s->size()) != n)
      throw InputError("check_lll: s has wrong length");
    report.s = *s;
  } else {
    report.s.assign(n, Rational(1, graph.max_degree));
  }
  for (const Rational& si : report.s)
    if (si <= 0 || si >= 1) throw InputError("check_lll: s_i outside (0,1)");

  report.passes = true;
  for (int i = 0; i < n; ++i) {
    Rational bound = report.s[i];
    for (int j : graph.neighbors[i]) bound *= 1 - report.s[j];
    Rational p = jointprob::event_probability(space, events[i]);
    if (p > bound) report.passes = false;
  }
  report.lower_bound = 1;
  for (int i = 0; i < n; ++i) report.lower_bound *= 1 - report.s[i];
  return report;
}

}  // namespace probint::model
