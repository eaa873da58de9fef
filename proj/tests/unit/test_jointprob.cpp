#include <doctest.h>

#include <random>
#include <vector>

#include "probint/jointprob.hpp"
#include "probint/model.hpp"

using namespace probint;
using namespace probint::model;
using namespace probint::jointprob;

namespace {

ProductSpace weighted_space() {
  ProductSpace s;
  auto add = [&s](const char* name, std::vector<Rational> probs) {
    CoordinateSpace c;
    c.name = name;
    for (std::size_t i = 0; i < probs.size(); ++i)
      c.atoms.emplace_back(static_cast<long long>(i));
    c.probs = std::move(probs);
    s.coords.push_back(c);
  };
  add("xi1", {Rational(1, 3), Rational(2, 3)});
  add("xi2", {Rational(1, 6), Rational(1, 2), Rational(1, 3)});
  add("xi3", {Rational(1, 2), Rational(1, 2)});
  add("xi4", {Rational(1, 4), Rational(1, 4), Rational(1, 2)});
  s.validate();
  return s;
}

Event make_event(const ProductSpace& space, std::string name,
                 std::vector<int> support, std::vector<std::uint8_t> table) {
  Event e;
  e.name = std::move(name);
  e.support = std::move(support);
  e.table = std::move(table);
  e.validate(space);
  return e;
}

bool event_holds(const ProductSpace& space, const Event& e,
                 const std::vector<std::size_t>& point) {
  std::size_t idx = 0;
  for (int c : e.support) idx = idx * space.atom_count(c) + point[c];
  return e.table[idx] != 0;
}

// Full-space enumeration, no component factorization: the independent check
// the library's factorized walk is tested against.
Rational brute_joint(const ProductSpace& space, const std::vector<Event>& events,
                     const std::vector<int>& subset) {
  std::size_t m = space.coords.size();
  std::vector<std::size_t> point(m, 0);
  Rational total(0);
  for (;;) {
    bool all = true;
    for (int i : subset)
      if (!event_holds(space, events[i], point)) {
        all = false;
        break;
      }
    if (all) {
      Rational p(1);
      for (std::size_t c = 0; c < m; ++c) p *= space.coords[c].probs[point[c]];
      total += p;
    }
    std::size_t c = m;
    while (c > 0) {
      --c;
      if (++point[c] < space.atom_count(static_cast<int>(c))) break;
      point[c] = 0;
      if (c == 0) {
        total.canonicalize();
        return total;
      }
    }
    if (m == 0) break;
  }
  total.canonicalize();
  return total;
}

}  // namespace

TEST_CASE("frozen two-event sample") {
  ProductSpace space;
  for (int j = 0; j < 2; ++j) {
    CoordinateSpace c;
    c.name = "xi" + std::to_string(j + 1);
    c.atoms = {Atom(0LL), Atom(1LL)};
    c.probs = {Rational(1, 2), Rational(1, 2)};
    space.coords.push_back(c);
  }
  std::vector<Event> events;
  events.push_back(make_event(space, "A1", {0}, {0, 1}));
  events.push_back(make_event(space, "A2", {0, 1}, {0, 0, 0, 1}));

  CHECK(event_probability(space, events[0]) == Rational(1, 2));
  CHECK(event_probability(space, events[1]) == Rational(1, 4));
  CHECK(joint_probability(space, events, {0, 1}) == Rational(1, 4));
  CHECK(joint_probability(space, events, {}) == Rational(1));

  DependencyGraph g = build_dependency_graph(space, events);
  IntersectionSeries s = sigma_series(space, events, g, 2);
  REQUIRE(s.sigma.size() == 3);
  CHECK(s.sigma[0] == Rational(1));
  CHECK(s.sigma[1] == Rational(3, 4));
  CHECK(s.sigma[2] == Rational(1, 4));
  CHECK(s.coeffs[1] == Rational(-3, 4));
  CHECK(s.coeffs[2] == Rational(1, 4));
}

TEST_CASE("independent events factorize exactly") {
  ProductSpace space;
  std::vector<Event> events;
  for (int j = 0; j < 4; ++j) {
    CoordinateSpace c;
    c.name = "xi" + std::to_string(j + 1);
    c.atoms = {Atom(0LL), Atom(1LL)};
    c.probs = {Rational(1, 2), Rational(1, 2)};
    space.coords.push_back(c);
  }
  for (int j = 0; j < 4; ++j)
    events.push_back(make_event(space, "A" + std::to_string(j + 1), {j}, {0, 1}));

  MemoCache cache;
  CHECK(joint_probability(space, events, {0, 1, 2, 3}, {}, &cache) ==
        Rational(1, 16));
  CHECK(cache.size() == 4);  // one singleton component per event

  DependencyGraph g = build_dependency_graph(space, events);
  IntersectionSeries s = sigma_series(space, events, g, 4, {}, &cache);
  CHECK(s.sigma[1] == Rational(2));
  CHECK(s.sigma[2] == Rational(3, 2));
  CHECK(s.sigma[3] == Rational(1, 2));
  CHECK(s.sigma[4] == Rational(1, 16));
}

TEST_CASE("factorized joints match full-space enumeration") {
  ProductSpace space = weighted_space();
  std::mt19937 rng(20240817);
  auto rand_table = [&rng](std::size_t cells) {
    std::vector<std::uint8_t> t(cells);
    for (auto& b : t) b = static_cast<std::uint8_t>(rng() & 1u);
    return t;
  };

  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Event> events;
    events.push_back(make_event(space, "E1", {0, 1}, rand_table(6)));
    events.push_back(make_event(space, "E2", {1, 2}, rand_table(6)));
    events.push_back(make_event(space, "E3", {2, 3}, rand_table(6)));
    events.push_back(make_event(space, "E4", {0, 3}, rand_table(6)));
    events.push_back(make_event(space, "E5", {1}, rand_table(3)));

    MemoCache cache;
    for (int mask = 0; mask < 32; ++mask) {
      std::vector<int> subset;
      for (int i = 0; i < 5; ++i)
        if (mask & (1 << i)) subset.push_back(i);
      Rational lib = joint_probability(space, events, subset, {}, &cache);
      Rational ref = brute_joint(space, events, subset);
      CHECK_MESSAGE(lib == ref, "trial ", trial, " mask ", mask);
    }
  }
}

TEST_CASE("zero-probability atoms contribute nothing") {
  ProductSpace space;
  CoordinateSpace c;
  c.name = "xi1";
  c.atoms = {Atom(0LL), Atom(1LL)};
  c.probs = {Rational(1), Rational(0)};
  space.coords.push_back(c);
  std::vector<Event> events;
  events.push_back(make_event(space, "A", {0}, {0, 1}));
  CHECK(event_probability(space, events[0]) == Rational(0));
  CHECK(joint_probability(space, events, {0}) == Rational(0));
}

TEST_CASE("constant events behave as probability 0 and 1") {
  ProductSpace space = weighted_space();
  std::vector<Event> events;
  events.push_back(make_event(space, "never", {}, {0}));
  events.push_back(make_event(space, "always", {}, {1}));
  events.push_back(make_event(space, "half", {2}, {0, 1}));
  CHECK(joint_probability(space, events, {0, 2}) == Rational(0));
  CHECK(joint_probability(space, events, {1, 2}) == Rational(1, 2));
  CHECK(joint_probability(space, events, {1}) == Rational(1));
}

TEST_CASE("memoization is consistent across repeated queries") {
  ProductSpace space = weighted_space();
  std::vector<Event> events;
  events.push_back(make_event(space, "E1", {0, 1}, {0, 1, 1, 0, 0, 1}));
  events.push_back(make_event(space, "E2", {1, 2}, {1, 0, 0, 1, 1, 0}));
  events.push_back(make_event(space, "E3", {3}, {0, 1, 1}));

  MemoCache cache;
  Rational first = joint_probability(space, events, {0, 1, 2}, {}, &cache);
  std::size_t filled = cache.size();
  CHECK(filled >= 2);  // component {0,1} and component {2}
  Rational second = joint_probability(space, events, {0, 1, 2}, {}, &cache);
  CHECK(first == second);
  CHECK(cache.size() == filled);
  CHECK(first == brute_joint(space, events, {0, 1, 2}));
}

TEST_CASE("budgets are enforced") {
  ProductSpace space = weighted_space();
  std::vector<Event> events;
  events.push_back(make_event(space, "E1", {0, 1}, {0, 1, 1, 0, 0, 1}));
  events.push_back(make_event(space, "E2", {1, 2}, {1, 0, 0, 1, 1, 0}));

  Budget tight;
  tight.max_tuples_per_component = 11;  // union {0,1,2} needs 12 tuples
  CHECK_THROWS_AS(joint_probability(space, events, {0, 1}, tight),
                  ResourceError);
  // A singleton component fits.
  CHECK_NOTHROW(joint_probability(space, events, {0}, tight));

  DependencyGraph g = build_dependency_graph(space, events);
  Budget few_subsets;
  few_subsets.max_subsets = 2;  // C(2,0)+C(2,1)+C(2,2) = 4 > 2
  CHECK_THROWS_AS(sigma_series(space, events, g, 2, few_subsets),
                  ResourceError);
}

TEST_CASE("sigma_series validates K") {
  ProductSpace space = weighted_space();
  std::vector<Event> events;
  events.push_back(make_event(space, "E1", {0}, {0, 1}));
  DependencyGraph g = build_dependency_graph(space, events);
  CHECK_THROWS_AS(sigma_series(space, events, g, -1), InputError);
  CHECK_THROWS_AS(sigma_series(space, events, g, 2), InputError);
  IntersectionSeries s = sigma_series(space, events, g, 0);
  REQUIRE(s.sigma.size() == 1);
  CHECK(s.sigma[0] == Rational(1));
}

TEST_CASE("joint_probability validates indices") {
  ProductSpace space = weighted_space();
  std::vector<Event> events;
  events.push_back(make_event(space, "E1", {0}, {0, 1}));
  CHECK_THROWS_AS(joint_probability(space, events, {1}), InputError);
  CHECK_THROWS_AS(joint_probability(space, events, {-1}), InputError);
}
