#include "probint/jointprob.hpp"

#include <algorithm>
#include <functional>

namespace probint::jointprob {

bool MemoCache::lookup(const std::vector<int>& key, Rational& out) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return false;
  out = it->second;
  return true;
}

void MemoCache::store(const std::vector<int>& key, const Rational& value) {
  std::lock_guard<std::mutex> lock(mu_);
  entries_.emplace(key, value);
}

std::size_t MemoCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

namespace {

std::string component_label(const std::vector<model::Event>& events,
                            const std::vector<int>& comp) {
  std::string s = "{";
  for (std::size_t i = 0; i < comp.size(); ++i) {
    if (i) s += ", ";
    s += events[comp[i]].name;
  }
  return s + "}";
}

// Exact joint over one connected component, enumerating the tuples of the
// union of its supports. Probabilities are accumulated as integer
// numerators over the product of per-coordinate common denominators, which
// keeps the hot loop in mpz additions and multiplications.
Rational component_joint(const model::ProductSpace& space,
                         const std::vector<model::Event>& events,
                         const std::vector<int>& comp, const Budget& budget) {
  if (comp.size() == 1 && events[comp[0]].support.empty())
    return events[comp[0]].table[0] ? 1 : 0;

  std::vector<int> J;
  for (int idx : comp)
    J.insert(J.end(), events[idx].support.begin(), events[idx].support.end());
  std::sort(J.begin(), J.end());
  J.erase(std::unique(J.begin(), J.end()), J.end());
  const std::size_t depth_max = J.size();

  std::uint64_t tuples = 1;
  for (int j : J) {
    std::size_t a = space.atom_count(j);
    if (tuples > budget.max_tuples_per_component / a + 1)
      tuples = budget.max_tuples_per_component + 1;
    else
      tuples *= a;
    if (tuples > budget.max_tuples_per_component)
      throw ResourceError("component " + component_label(events, comp) +
                          " exceeds the enumeration budget of " +
                          std::to_string(budget.max_tuples_per_component) +
                          " tuples");
  }

  // Integer numerators per coordinate over a common denominator.
  std::vector<std::vector<Integer>> num(depth_max);
  Integer denom = 1;
  for (std::size_t t = 0; t < depth_max; ++t) {
    const auto& coord = space.coords[J[t]];
    Integer common = 1;
    for (const Rational& p : coord.probs)
      mpz_lcm(common.get_mpz_t(), common.get_mpz_t(),
              p.get_den().get_mpz_t());
    num[t].resize(coord.probs.size());
    for (std::size_t a = 0; a < coord.probs.size(); ++a)
      num[t][a] = coord.probs[a].get_num() * (common / coord.probs[a].get_den());
    denom *= common;
  }

  // For each event, the depth at which its support is fully assigned, plus
  // the (position, stride) pairs that fold the digits into a table index.
  struct Check {
    const model::Event* event;
    std::vector<std::pair<std::size_t, std::size_t>> pos_stride;
  };
  std::vector<std::vector<Check>> completing(depth_max);
  for (int idx : comp) {
    const model::Event& e = events[idx];
    const std::size_t r = e.support.size();
    std::vector<std::size_t> strides(r);
    strides[r - 1] = 1;
    for (std::size_t k = r - 1; k > 0; --k)
      strides[k - 1] = strides[k] * space.atom_count(e.support[k]);
    Check chk{&e, {}};
    std::size_t complete_at = 0;
    for (std::size_t k = 0; k < r; ++k) {
      std::size_t pos =
          std::lower_bound(J.begin(), J.end(), e.support[k]) - J.begin();
      chk.pos_stride.emplace_back(pos, strides[k]);
      complete_at = std::max(complete_at, pos);
    }
    completing[complete_at].push_back(std::move(chk));
  }

  Integer total = 0;
  std::vector<std::size_t> digit(depth_max, 0);
  std::vector<Integer> partial(depth_max + 1);
  partial[0] = 1;

  std::function<void(std::size_t)> walk = [&](std::size_t d) {
    if (d == depth_max) {
      total += partial[d];
      return;
    }
    const std::size_t atoms = space.atom_count(J[d]);
    for (std::size_t a = 0; a < atoms; ++a) {
      if (num[d][a] == 0) continue;  // zero-probability atom contributes nothing
      digit[d] = a;
      bool alive = true;
      for (const Check& chk : completing[d]) {
        std::size_t index = 0;
        for (auto [pos, stride] : chk.pos_stride) index += digit[pos] * stride;
        if (!chk.event->table[index]) {
          alive = false;
          break;
        }
      }
      if (!alive) continue;
      partial[d + 1] = partial[d] * num[d][a];
      walk(d + 1);
    }
  };
  walk(0);

  Rational out(total, denom);
  out.canonicalize();
  return out;
}

std::vector<std::vector<int>> split_components(
    const std::vector<model::Event>& events, const std::vector<int>& subset) {
  const std::size_t k = subset.size();
  std::vector<int> parent(k);
  for (std::size_t i = 0; i < k; ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (model::supports_intersect(events[subset[i]], events[subset[j]])) {
        int a = find(static_cast<int>(i)), b = find(static_cast<int>(j));
        if (a != b) parent[a] = b;
      }
  std::vector<std::vector<int>> comps;
  std::vector<int> root_slot(k, -1);
  for (std::size_t i = 0; i < k; ++i) {
    int r = find(static_cast<int>(i));
    if (root_slot[r] < 0) {
      root_slot[r] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[root_slot[r]].push_back(subset[i]);
  }
  for (auto& c : comps) std::sort(c.begin(), c.end());
  return comps;
}

}  // namespace

Rational event_probability(const model::ProductSpace& space,
                           const model::Event& event) {
  std::vector<model::Event> one{event};
  return component_joint(space, one, {0}, Budget{});
}

Rational joint_probability(const model::ProductSpace& space,
                           const std::vector<model::Event>& events,
                           const std::vector<int>& subset, const Budget& budget,
                           MemoCache* cache) {
  for (int idx : subset)
    if (idx < 0 || idx >= static_cast<int>(events.size()))
      throw InputError("joint_probability: event index out of range");
  if (subset.empty()) return 1;

  // Disjoint-support components are independent, so the joint over the
  // subset is the product of the component joints.
  Rational product = 1;
  for (const std::vector<int>& comp : split_components(events, subset)) {
    Rational value;
    if (cache && cache->lookup(comp, value)) {
      product *= value;
      continue;
    }
    value = component_joint(space, events, comp, budget);
    if (cache) cache->store(comp, value);
    product *= value;
  }
  return product;
}

IntersectionSeries sigma_series(const model::ProductSpace& space,
                                const std::vector<model::Event>& events,
                                const model::DependencyGraph& graph, int K,
                                const Budget& budget, MemoCache* cache) {
  const int n = static_cast<int>(events.size());
  if (K < 0 || K > n)
    throw InputError("sigma_series: K must satisfy 0 <= K <= n");
  (void)graph;

  Integer subset_count = 0;
  for (int k = 0; k <= K; ++k) subset_count += binomial(n, k);
  if (subset_count > Integer(static_cast<unsigned long>(budget.max_subsets)))
    throw ResourceError("sigma_series: " + subset_count.get_str() +
                        " subsets exceed the budget of " +
                        std::to_string(budget.max_subsets));

  IntersectionSeries series;
  series.K = K;
  series.sigma.assign(K + 1, Rational(0));
  series.sigma[0] = 1;
  for (int k = 1; k <= K; ++k) {
    // k-subsets in lexicographic order.
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      series.sigma[k] += joint_probability(space, events, idx, budget, cache);
      int pos = k - 1;
      while (pos >= 0 && idx[pos] == n - k + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  series.coeffs.resize(K + 1);
  for (int k = 0; k <= K; ++k)
    series.coeffs[k] = (k % 2 == 0) ? series.sigma[k] : -series.sigma[k];
  return series;
}

}  // namespace probint::jointprob
