#include "probint/generator.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "probint/jointprob.hpp"

namespace probint::generator {

namespace {

using Rng = std::mt19937_64;

// Closed-interval draw; modulo keeps the stream deterministic and portable
// since mt19937_64 itself is fully specified.
long long draw(Rng& rng, long long lo, long long hi) {
  return lo + static_cast<long long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

std::vector<int> sample_distinct(Rng& rng, int m, int r) {
  std::vector<int> pool(m);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < r; ++i) {
    const int j = static_cast<int>(draw(rng, i, m - 1));
    std::swap(pool[i], pool[j]);
  }
  std::vector<int> out(pool.begin(), pool.begin() + r);
  std::sort(out.begin(), out.end());
  return out;
}

void validate_config(const Config& c) {
  if (c.m_min < 1 || c.m_min > c.m_max || c.atoms_min < 1 ||
      c.atoms_min > c.atoms_max || c.n_min < 0 || c.n_min > c.n_max ||
      c.support_max < 1)
    throw InputError("generator: invalid configuration ranges");
}

model::Instance generate_free(Rng& rng, const Config& config) {
  model::Instance inst;
  const int m = static_cast<int>(draw(rng, config.m_min, config.m_max));
  for (int j = 0; j < m; ++j) {
    model::CoordinateSpace coord;
    coord.name = "xi" + std::to_string(j + 1);
    const int a = static_cast<int>(draw(rng, config.atoms_min, config.atoms_max));
    std::vector<long> weights(a);
    for (int t = 0; t < a; ++t) {
      weights[t] = static_cast<long>(draw(rng, 1, 16));
      coord.atoms.emplace_back(static_cast<long long>(t));
    }
    if (a >= 2 && draw(rng, 0, 7) == 0)
      weights[draw(rng, 0, a - 1)] = 0;  // the occasional zero-probability atom
    const long total = std::accumulate(weights.begin(), weights.end(), 0L);
    for (int t = 0; t < a; ++t) {
      Rational p(weights[t], total);
      p.canonicalize();
      coord.probs.push_back(p);
    }
    inst.space.coords.push_back(std::move(coord));
  }
  inst.space.validate();

  const int n = static_cast<int>(draw(rng, config.n_min, config.n_max));
  for (int i = 0; i < n; ++i) {
    model::Event raw;
    raw.name = "A" + std::to_string(i + 1);
    const int r = static_cast<int>(draw(rng, 1, std::min(config.support_max, m)));
    raw.support = sample_distinct(rng, m, r);
    std::size_t cells = 1;
    for (int j : raw.support) cells *= inst.space.atom_count(j);
    raw.table.assign(cells, 0);
    for (std::size_t t = 0; t < cells; ++t)
      raw.table[t] = draw(rng, 0, 2) == 0 ? 1 : 0;
    // A tautology would make ln P(no event) undefined downstream; knock one
    // cell out instead of shipping it.
    if (std::all_of(raw.table.begin(), raw.table.end(),
                    [](std::uint8_t v) { return v != 0; }))
      raw.table[draw(rng, 0, static_cast<long long>(cells) - 1)] = 0;
    inst.events.push_back(model::normalize_support(inst.space, raw));
  }
  return inst;
}

model::Instance generate_smallness(Rng& rng, const Config& config) {
  model::Instance inst;
  const int m = static_cast<int>(draw(rng, config.m_min, config.m_max));
  const int n = static_cast<int>(draw(rng, config.n_min, config.n_max));

  // Rare-atom denominators strictly above (3 Delta)^3 for the largest
  // dependency degree this instance could reach, so a single all-rare corner
  // already sits below the mu = 1 threshold, and deeper corners gain a
  // factor below (3 Delta)^-3 per support coordinate while mu grows by at
  // most one.
  const long long delta_ceiling = std::max<long long>(5, n - 1);
  const long long three_delta = 3 * delta_ceiling;
  const long long d_min =
      std::max<long long>(10000, three_delta * three_delta * three_delta + 1);
  const long long d_max = 4 * d_min;

  std::vector<int> rare_index(m);
  for (int j = 0; j < m; ++j) {
    model::CoordinateSpace coord;
    coord.name = "xi" + std::to_string(j + 1);
    const int a = static_cast<int>(draw(rng, std::max(2, config.atoms_min),
                                        std::max(2, config.atoms_max)));
    const long long D = draw(rng, d_min, d_max);
    rare_index[j] = static_cast<int>(draw(rng, 0, a - 1));
    for (int t = 0; t < a; ++t) {
      coord.atoms.emplace_back(static_cast<long long>(t));
      Rational p = (t == rare_index[j])
                       ? Rational(1, static_cast<long>(D))
                       : Rational(static_cast<long>(D - 1),
                                  static_cast<long>(D * (a - 1)));
      p.canonicalize();
      coord.probs.push_back(p);
    }
    inst.space.coords.push_back(std::move(coord));
  }
  inst.space.validate();

  std::vector<bool> has_extra(n, false);
  auto corner_event = [&](int i, const std::vector<int>& support,
                          bool extra) -> model::Event {
    model::Event raw;
    raw.name = "A" + std::to_string(i + 1);
    raw.support = support;
    std::size_t cells = 1;
    std::vector<std::size_t> strides(support.size());
    for (std::size_t k = support.size(); k-- > 0;) {
      strides[k] = cells;
      cells *= inst.space.atom_count(support[k]);
    }
    raw.table.assign(cells, 0);
    std::size_t corner = 0;
    for (std::size_t k = 0; k < support.size(); ++k)
      corner += static_cast<std::size_t>(rare_index[support[k]]) * strides[k];
    raw.table[corner] = 1;
    if (extra && cells > 1) {
      std::size_t other = corner;
      while (other == corner)
        other = static_cast<std::size_t>(draw(rng, 0, static_cast<long long>(cells) - 1));
      raw.table[other] = 1;
    }
    return model::normalize_support(inst.space, raw);
  };

  std::vector<std::vector<int>> supports(n);
  for (int i = 0; i < n; ++i) {
    const int r = static_cast<int>(draw(rng, 1, std::min(config.support_max, m)));
    supports[i] = sample_distinct(rng, m, r);
    has_extra[i] = draw(rng, 0, 3) == 0;
    inst.events.push_back(corner_event(i, supports[i], has_extra[i]));
  }

  // Extra cells are opportunistic: keep them only when the exact check still
  // passes, otherwise fall back to the provably admissible corners.
  auto graph = model::build_dependency_graph(inst.space, inst.events);
  auto report = model::check_smallness(inst.space, inst.events, graph);
  if (!report.overall) {
    for (int i = 0; i < n; ++i)
      if (has_extra[i]) inst.events[i] = corner_event(i, supports[i], false);
    graph = model::build_dependency_graph(inst.space, inst.events);
    report = model::check_smallness(inst.space, inst.events, graph);
    if (!report.overall)
      throw std::logic_error(
          "generator: corner instance failed its admissibility invariant");
  }
  return inst;
}

}  // namespace

model::Instance generate_instance(std::uint64_t seed, const Config& config) {
  validate_config(config);
  Rng rng(seed);
  model::Instance inst = config.mode == Mode::Free
                             ? generate_free(rng, config)
                             : generate_smallness(rng, config);
  inst.space.validate();
  for (const model::Event& e : inst.events) e.validate(inst.space);
  return inst;
}

}  // namespace probint::generator
