#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

#include "probint/model.hpp"
#include "probint/rational.hpp"

namespace probint::jointprob {

struct Budget {
  // Tuple count allowed per connected component (product of atom counts
  // over the union of supports).
  std::uint64_t max_tuples_per_component = std::uint64_t{1} << 24;
  // Guard against C(n,k) blowup in sigma_series.
  std::uint64_t max_subsets = std::uint64_t{1} << 22;
};

// Joint probabilities keyed by the sorted index tuple of a connected
// component. Concurrent insert/lookup safe; entries are immutable once
// stored, so racing writers are idempotent.
class MemoCache {
 public:
  bool lookup(const std::vector<int>& key, Rational& out) const;
  void store(const std::vector<int>& key, const Rational& value);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::vector<int>, Rational> entries_;
};

// P(A): marginal over the event's support coordinates.
Rational event_probability(const model::ProductSpace& space,
                           const model::Event& event);

// P of the intersection over `subset` (0-based indices into `events`).
// Splits the subset into connected components of the induced dependency
// subgraph and multiplies component joints; each component joint enumerates
// the tuples over the union of its supports. Empty subset: 1.
Rational joint_probability(const model::ProductSpace& space,
                           const std::vector<model::Event>& events,
                           const std::vector<int>& subset,
                           const Budget& budget = {},
                           MemoCache* cache = nullptr);

struct IntersectionSeries {
  int K = 0;
  std::vector<Rational> sigma;   // sigma[0] = 1, k-wise intersection sums
  std::vector<Rational> coeffs;  // coeffs[k] = (-1)^k sigma[k]
};

// sigma_k for k = 0..K over all k-subsets in lexicographic order.
// Requires 0 <= K <= n.
IntersectionSeries sigma_series(const model::ProductSpace& space,
                                const std::vector<model::Event>& events,
                                const model::DependencyGraph& graph, int K,
                                const Budget& budget = {},
                                MemoCache* cache = nullptr);

}  // namespace probint::jointprob
