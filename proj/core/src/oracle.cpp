#include "probint/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace probint::oracle {

namespace {

std::complex<double> horner(const std::vector<double>& coeffs,
                            std::complex<double> z) {
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
  return acc;
}

std::complex<double> horner_deriv(const std::vector<double>& coeffs,
                                  std::complex<double> z) {
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t k = coeffs.size(); k-- > 1;)
    acc = acc * z + coeffs[k] * static_cast<double>(k);
  return acc;
}

}  // namespace

double distance_to_unit_segment(std::complex<double> z) {
  const double t = std::clamp(z.real(), 0.0, 1.0);
  return std::hypot(z.real() - t, z.imag());
}

Rational exact_intersection_probability(const model::ProductSpace& space,
                                        const std::vector<model::Event>& events,
                                        const jointprob::Budget& budget) {
  space.validate();
  for (const model::Event& e : events) e.validate(space);

  // Constant events: a tautological event forces probability zero; constant
  // false events are dropped.
  std::vector<const model::Event*> live;
  for (const model::Event& e : events) {
    if (e.support.empty()) {
      if (e.table[0]) return Rational(0);
      continue;
    }
    live.push_back(&e);
  }
  if (live.empty()) return Rational(1);

  std::vector<int> J;
  for (const model::Event* e : live)
    J.insert(J.end(), e->support.begin(), e->support.end());
  std::sort(J.begin(), J.end());
  J.erase(std::unique(J.begin(), J.end()), J.end());
  const std::size_t depth_max = J.size();

  std::uint64_t tuples = 1;
  for (int j : J) {
    const std::size_t a = space.atom_count(j);
    if (tuples > budget.max_tuples_per_component / a + 1)
      throw ResourceError(
          "direct enumeration exceeds the budget of " +
          std::to_string(budget.max_tuples_per_component) + " tuples");
    tuples *= a;
    if (tuples > budget.max_tuples_per_component)
      throw ResourceError(
          "direct enumeration exceeds the budget of " +
          std::to_string(budget.max_tuples_per_component) + " tuples");
  }

  std::vector<std::vector<Integer>> num(depth_max);
  Integer denom = 1;
  for (std::size_t t = 0; t < depth_max; ++t) {
    const auto& coord = space.coords[J[t]];
    Integer common = 1;
    for (const Rational& p : coord.probs)
      mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), p.get_den().get_mpz_t());
    num[t].resize(coord.probs.size());
    for (std::size_t a = 0; a < coord.probs.size(); ++a)
      num[t][a] = coord.probs[a].get_num() * (common / coord.probs[a].get_den());
    denom *= common;
  }

  // An event prunes the branch as soon as its support is fully assigned and
  // its table says it occurred: such tuples contribute nothing to P(none).
  struct Check {
    const model::Event* event;
    std::vector<std::pair<std::size_t, std::size_t>> pos_stride;
  };
  std::vector<std::vector<Check>> completing(depth_max);
  for (const model::Event* e : live) {
    const std::size_t r = e->support.size();
    std::vector<std::size_t> strides(r);
    strides[r - 1] = 1;
    for (std::size_t k = r - 1; k > 0; --k)
      strides[k - 1] = strides[k] * space.atom_count(e->support[k]);
    Check chk{e, {}};
    std::size_t complete_at = 0;
    for (std::size_t k = 0; k < r; ++k) {
      const std::size_t pos =
          std::lower_bound(J.begin(), J.end(), e->support[k]) - J.begin();
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
      if (num[d][a] == 0) continue;
      digit[d] = a;
      bool occurred = false;
      for (const Check& chk : completing[d]) {
        std::size_t index = 0;
        for (auto [pos, stride] : chk.pos_stride) index += digit[pos] * stride;
        if (chk.event->table[index]) {
          occurred = true;
          break;
        }
      }
      if (occurred) continue;
      partial[d + 1] = partial[d] * num[d][a];
      walk(d + 1);
    }
  };
  walk(0);

  Rational out(total, denom);
  out.canonicalize();
  return out;
}

std::vector<Rational> full_p_polynomial(const model::ProductSpace& space,
                                        const std::vector<model::Event>& events,
                                        const model::DependencyGraph& graph,
                                        const jointprob::Budget& budget,
                                        jointprob::MemoCache* cache) {
  return jointprob::sigma_series(space, events, graph,
                                 static_cast<int>(events.size()), budget, cache)
      .coeffs;
}

std::string RootReport::to_json_string() const {
  nlohmann::ordered_json j;
  j["roots"] = nlohmann::ordered_json::array();
  for (const std::complex<double>& r : roots)
    j["roots"].push_back({r.real(), r.imag()});
  if (std::isinf(min_dist))
    j["min_dist"] = nullptr;
  else
    j["min_dist"] = min_dist;
  j["delta"] = delta;
  j["zero_free"] = zero_free;
  return j.dump(2) + "\n";
}

RootReport root_localize(const std::vector<double>& coeffs, double delta) {
  if (coeffs.empty() || coeffs[0] != 1.0)
    throw InputError("root_localize: constant coefficient must be one");
  if (coeffs.size() > 1 && coeffs.back() == 0.0)
    throw InputError("root_localize: trailing zero coefficients must be stripped");
  if (!(delta >= 0.0))
    throw InputError("root_localize: delta must be non-negative");

  RootReport report;
  report.delta = delta;
  const std::size_t degree = coeffs.size() - 1;
  if (degree == 0) {
    report.min_dist = std::numeric_limits<double>::infinity();
    report.zero_free = true;
    return report;
  }

  // Aberth simultaneous iteration. The coefficients of these polynomials are
  // heavily graded (k-wise intersection sums of rare events fall by several
  // orders per degree), so the root moduli spread across many scales; a
  // single starting circle stalls. Seed moduli from the Newton polygon
  // instead: the upper convex hull of (k, ln |a_k|) assigns k2-k1 roots of
  // modulus |a_k1 / a_k2|^(1/(k2-k1)) to each hull edge, which lands every
  // start within a bounded factor of its cluster.
  std::vector<std::complex<double>> z(degree);
  {
    std::vector<std::pair<double, double>> pts;  // (k, ln |a_k|), a_k != 0
    for (std::size_t k = 0; k < coeffs.size(); ++k)
      if (coeffs[k] != 0.0)
        pts.emplace_back(static_cast<double>(k), std::log(std::abs(coeffs[k])));
    std::vector<std::pair<double, double>> hull;
    for (const auto& p : pts) {
      while (hull.size() >= 2) {
        const auto& a = hull[hull.size() - 2];
        const auto& b = hull[hull.size() - 1];
        const double cross = (b.first - a.first) * (p.second - a.second) -
                             (b.second - a.second) * (p.first - a.first);
        if (cross >= 0.0)
          hull.pop_back();  // b lies on or below the chord: not on the upper hull
        else
          break;
      }
      hull.push_back(p);
    }
    std::size_t j = 0;
    for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
      const int m = static_cast<int>(hull[e + 1].first - hull[e].first);
      const double modulus =
          std::exp((hull[e].second - hull[e + 1].second) / m);
      for (int t = 0; t < m && j < degree; ++t, ++j) {
        const double theta = 6.283185307179586 *
                                 (static_cast<double>(t) + 0.26 * (e % 3)) /
                                 static_cast<double>(m) +
                             0.4;
        z[j] = std::polar(modulus, theta);
      }
    }
    for (; j < degree; ++j)  // unreachable unless the hull degenerates
      z[j] = std::polar(1.0, 0.4 + static_cast<double>(j));
  }

  for (int iter = 0; iter < 1000; ++iter) {
    double worst = 0.0;
    for (std::size_t j = 0; j < degree; ++j) {
      const std::complex<double> pv = horner(coeffs, z[j]);
      const std::complex<double> dv = horner_deriv(coeffs, z[j]);
      if (pv == std::complex<double>(0.0, 0.0)) continue;
      std::complex<double> w;
      if (dv == std::complex<double>(0.0, 0.0)) {
        w = std::complex<double>(1e-3, 1e-3);  // nudge off a critical point
      } else {
        w = pv / dv;
      }
      std::complex<double> sum(0.0, 0.0);
      for (std::size_t k = 0; k < degree; ++k)
        if (k != j) sum += 1.0 / (z[j] - z[k]);
      const std::complex<double> denom = 1.0 - w * sum;
      const std::complex<double> step =
          (denom == std::complex<double>(0.0, 0.0)) ? w : w / denom;
      z[j] -= step;
      worst = std::max(worst, std::abs(step) / (1.0 + std::abs(z[j])));
    }
    if (worst <= 1e-14) break;
  }

  for (std::size_t j = 0; j < degree; ++j) {
    for (int it = 0; it < 3; ++it) {
      const std::complex<double> pv = horner(coeffs, z[j]);
      const std::complex<double> dv = horner_deriv(coeffs, z[j]);
      if (dv == std::complex<double>(0.0, 0.0)) break;
      z[j] -= pv / dv;
    }
  }

  // Backward-error residual check: |p(z_j)| must be small relative to the
  // magnitude Horner actually accumulates at z_j, i.e. sum_k |a_k| |z_j|^k.
  // An absolute tolerance is meaningless here because well-conditioned roots
  // of these graded polynomials can sit at |z| ~ 1e12 where even a perfectly
  // rounded evaluation yields a large |p(z)|.
  std::ostringstream bad;
  bool failed = false;
  for (std::size_t j = 0; j < degree; ++j) {
    const double residual = std::abs(horner(coeffs, z[j]));
    const double zj = std::abs(z[j]);
    double scale = 0.0;  // Horner on |a_k|, evaluated at |z_j|
    for (std::size_t k = coeffs.size(); k-- > 0;)
      scale = scale * zj + std::abs(coeffs[k]);
    const double tol = 1e-8 * std::max(scale, 1.0);
    if (residual > tol) {
      failed = true;
      bad << " root (" << z[j].real() << ", " << z[j].imag() << ") residual "
          << residual << " exceeds " << tol << ";";
    }
  }
  if (failed)
    throw NumericError("root_localize: residual check failed:" + bad.str());

  report.roots = z;
  double min_dist = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < degree; ++j) {
    const double dist = distance_to_unit_segment(z[j]);
    const double dv = std::abs(horner_deriv(coeffs, z[j]));
    // First-order error bar on the root location, widened 8x for safety.
    const double bar =
        dv > 0.0 ? 8.0 * std::abs(horner(coeffs, z[j])) / dv
                 : std::numeric_limits<double>::infinity();
    min_dist = std::min(min_dist, std::max(0.0, dist - bar));
  }
  report.min_dist = min_dist;
  report.zero_free = min_dist > delta;
  return report;
}

RootReport root_localize(const std::vector<Rational>& coeffs, double delta) {
  if (coeffs.empty() || coeffs[0] != 1)
    throw InputError("root_localize: constant coefficient must be one");
  std::size_t last = coeffs.size();
  while (last > 1 && coeffs[last - 1] == 0) --last;
  std::vector<double> d(last);
  for (std::size_t k = 0; k < last; ++k) d[k] = to_double(coeffs[k]);
  return root_localize(d, delta);
}

}  // namespace probint::oracle
