#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "probint/rational.hpp"

namespace probint::model {

// An atom is an outcome label of one coordinate. Predicates require numeric
// atoms; tuple- and table-built events accept either kind.
using Atom = std::variant<long long, std::string>;

std::string atom_to_string(const Atom& a);

struct CoordinateSpace {
  std::string name;
  std::vector<Atom> atoms;       // pairwise distinct, size >= 1
  std::vector<Rational> probs;   // same size, each >= 0, sum == 1 exactly

  void validate() const;         // throws InputError
  int find_atom(const Atom& a) const;  // -1 when absent
};

struct ProductSpace {
  std::vector<CoordinateSpace> coords;

  void validate() const;
  std::size_t dim() const { return coords.size(); }
  std::size_t atom_count(std::size_t j) const { return coords[j].atoms.size(); }
};

// Event over a product space: truth table over the coordinates in `support`.
// support holds 0-based coordinate indices, strictly increasing. The table is
// indexed mixed-radix with the LAST support coordinate fastest. Events built
// through normalize_support have minimal support: the table is non-constant
// in every support direction.
struct Event {
  std::string name;
  std::vector<int> support;
  std::vector<std::uint8_t> table;

  std::size_t table_size(const ProductSpace& space) const;
  void validate(const ProductSpace& space) const;
};

// Drops every support coordinate whose direction leaves the table constant.
// Structural only: atom probabilities (including zeros) play no part.
// Idempotent; the indicator function on the full space is unchanged.
Event normalize_support(const ProductSpace& space, const Event& raw);

bool supports_intersect(const Event& a, const Event& b);

struct Instance {
  ProductSpace space;
  std::vector<Event> events;
};

// Adjacency: supports share a coordinate. Delta is floored at 5.
struct DependencyGraph {
  int n = 0;
  std::vector<std::vector<int>> neighbors;  // sorted, no self loops
  std::vector<int> degrees;                 // Delta_i
  int max_degree = 5;                       // Delta = max{5, Delta_i}
  std::vector<int> support_sizes;           // r_i
  std::vector<int> mu;                      // min(r_i, Delta_i + 1)
};

DependencyGraph build_dependency_graph(const ProductSpace& space,
                                       const std::vector<Event>& events);

struct SmallnessRow {
  std::string event;
  Rational probability;
  Rational threshold;   // (3*Delta)^(-3*mu_i)
  bool passes = false;  // strict: probability < threshold
};

struct SmallnessReport {
  std::vector<SmallnessRow> rows;
  bool overall = true;
};

// Exact rational comparison per event. No events: trivially passing.
SmallnessReport check_smallness(const ProductSpace& space,
                                const std::vector<Event>& events,
                                const DependencyGraph& graph);

struct LllReport {
  bool passes = false;
  std::vector<Rational> s;
  Rational lower_bound;  // prod (1 - s_i), reported regardless of passes
};

// Condition P(A_i) <= s_i * prod_{j in Gamma(i)} (1 - s_j), exact.
// Default s_i = 1/Delta.
LllReport check_lll(const ProductSpace& space, const std::vector<Event>& events,
                    const DependencyGraph& graph,
                    const std::optional<std::vector<Rational>>& s = std::nullopt);

}  // namespace probint::model
