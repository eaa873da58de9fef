// Acceptance suite: one line per criterion, "PASS criterion N (...)" or
// "FAIL criterion N (...): reason". The process exit code is the number of
// failed criteria. Counterexample instances are archived as JSON under
// ./acceptance_artifacts/ for replay.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "probint/generator.hpp"
#include "probint/instance_io.hpp"
#include "probint/interpolate.hpp"
#include "probint/jointprob.hpp"
#include "probint/model.hpp"
#include "probint/oracle.hpp"
#include "probint/predparse.hpp"
#include "probint/rational.hpp"

using namespace probint;

namespace {

const char* kArtifactDir = "acceptance_artifacts";

void archive_instance(const std::string& name, const model::Instance& inst) {
  std::error_code ec;
  std::filesystem::create_directories(kArtifactDir, ec);
  std::ofstream out(std::string(kArtifactDir) + "/" + name + ".json");
  out << io::instance_to_json_string(inst);
}

struct Failure {
  bool failed = false;
  std::string reason;
  void fail(const std::string& r) {
    if (!failed) reason = r;
    failed = true;
  }
};

// ---------------------------------------------------------------------------
// Criterion 1: on 500 generated instances, the full coefficient vector of p
// sums exactly (rational arithmetic) to the directly enumerated probability
// that no event occurs, and the constant term is exactly one.
std::string criterion1() {
  generator::Config cfg;  // free mode defaults
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    model::Instance inst = generator::generate_instance(seed, cfg);
    model::DependencyGraph g =
        model::build_dependency_graph(inst.space, inst.events);
    jointprob::MemoCache cache;
    std::vector<Rational> coeffs =
        oracle::full_p_polynomial(inst.space, inst.events, g, {}, &cache);
    if (coeffs.empty() || !(coeffs[0] == Rational(1)))
      return "seed " + std::to_string(seed) + ": constant term is not 1";
    Rational sum(0);
    for (const Rational& c : coeffs) sum += c;
    sum.canonicalize();
    Rational direct =
        oracle::exact_intersection_probability(inst.space, inst.events);
    if (!(sum == direct)) {
      archive_instance("criterion1_seed" + std::to_string(seed), inst);
      return "seed " + std::to_string(seed) + ": sum of coefficients " +
             to_fraction_string(sum) + " != direct enumeration " +
             to_fraction_string(direct);
    }
  }
  return "";
}

// ---------------------------------------------------------------------------
// Criterion 2: on 200 admissible instances and epsilon in {1e-2, 1e-4}, the
// certified estimate of ln P(no event) is within epsilon of the logarithm of
// the exactly enumerated probability.
std::string criterion2() {
  generator::Config cfg;
  cfg.mode = generator::Mode::Smallness;
  const double epsilons[2] = {1e-2, 1e-4};
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    model::Instance inst = generator::generate_instance(seed, cfg);
    Rational exact =
        oracle::exact_intersection_probability(inst.space, inst.events);
    double truth = std::log(to_double(exact));
    for (double eps : epsilons) {
      interpolate::EstimateOptions opt;
      opt.epsilon = eps;
      jointprob::MemoCache cache;
      opt.cache = &cache;
      interpolate::Estimate est =
          interpolate::estimate_log_intersection(inst.space, inst.events, opt);
      if (est.guarantee != interpolate::Guarantee::CertifiedByAssumption) {
        archive_instance("criterion2_seed" + std::to_string(seed), inst);
        return "seed " + std::to_string(seed) +
               ": admissible instance not certified";
      }
      double err = std::abs(est.log_value - truth);
      if (!(err <= eps)) {
        archive_instance("criterion2_seed" + std::to_string(seed), inst);
        std::ostringstream os;
        os << "seed " << seed << " eps " << eps << ": |estimate - truth| = "
           << err;
        return os.str();
      }
    }
  }
  return "";
}

// ---------------------------------------------------------------------------
// Criterion 3: on 1000 admissible instances, every root of the full
// polynomial p stays farther than delta = 1/(6 Delta) from the segment
// [0, 1]; root residuals are verified internally to 1e-8.
std::string criterion3() {
  generator::Config cfg;
  cfg.mode = generator::Mode::Smallness;
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    model::Instance inst = generator::generate_instance(seed, cfg);
    model::DependencyGraph g =
        model::build_dependency_graph(inst.space, inst.events);
    jointprob::MemoCache cache;
    std::vector<Rational> coeffs =
        oracle::full_p_polynomial(inst.space, inst.events, g, {}, &cache);
    double delta = 1.0 / (6.0 * g.max_degree);
    oracle::RootReport rep;
    try {
      rep = oracle::root_localize(coeffs, delta);
    } catch (const NumericError& e) {
      archive_instance("criterion3_seed" + std::to_string(seed), inst);
      return "seed " + std::to_string(seed) +
             ": root residual check failed: " + e.what();
    }
    if (!rep.zero_free) {
      archive_instance("criterion3_seed" + std::to_string(seed), inst);
      std::ofstream roots(std::string(kArtifactDir) + "/criterion3_seed" +
                          std::to_string(seed) + "_roots.json");
      roots << rep.to_json_string();
      std::ostringstream os;
      os << "seed " << seed << ": min root distance " << rep.min_dist
         << " <= delta " << delta;
      return os.str();
    }
    ++checked;
  }
  if (checked != 1000) return "generated fewer than 1000 instances";
  return "";
}

// ---------------------------------------------------------------------------
// Criterion 4: on 1000 random event subsets, the component-factorized joint
// probability equals (exact rational comparison) a direct full-width
// enumeration over the union of supports with no component splitting.
std::string criterion4() {
  generator::Config cfg;  // free mode
  std::mt19937_64 rng(424242);
  int done = 0;
  for (std::uint64_t seed = 1000; done < 1000; ++seed) {
    model::Instance inst = generator::generate_instance(seed, cfg);
    const int n = static_cast<int>(inst.events.size());
    jointprob::MemoCache cache;
    for (int rep = 0; rep < 4 && done < 1000; ++rep, ++done) {
      std::vector<int> subset;
      for (int i = 0; i < n; ++i)
        if (rng() & 1u) subset.push_back(i);

      Rational lib =
          jointprob::joint_probability(inst.space, inst.events, subset, {}, &cache);

      // Direct enumeration over the union of supports, one flat odometer.
      std::vector<int> coords;
      for (int i : subset)
        coords.insert(coords.end(), inst.events[i].support.begin(),
                      inst.events[i].support.end());
      std::sort(coords.begin(), coords.end());
      coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
      std::vector<std::size_t> digit(coords.size(), 0);
      Rational total(0);
      bool more = true;
      while (more) {
        bool all = true;
        for (int i : subset) {
          const model::Event& e = inst.events[i];
          std::size_t idx = 0;
          for (int c : e.support) {
            std::size_t pos = static_cast<std::size_t>(
                std::lower_bound(coords.begin(), coords.end(), c) -
                coords.begin());
            idx = idx * inst.space.atom_count(c) + digit[pos];
          }
          if (e.table[idx] == 0) {
            all = false;
            break;
          }
        }
        if (all) {
          Rational p(1);
          for (std::size_t t = 0; t < coords.size(); ++t)
            p *= inst.space.coords[coords[t]].probs[digit[t]];
          total += p;
        }
        more = false;
        for (std::size_t t = coords.size(); t-- > 0;) {
          if (++digit[t] < inst.space.atom_count(coords[t])) {
            more = true;
            break;
          }
          digit[t] = 0;
        }
        if (coords.empty()) break;
      }
      total.canonicalize();

      if (!(lib == total)) {
        archive_instance("criterion4_seed" + std::to_string(seed), inst);
        std::ostringstream os;
        os << "seed " << seed << " subset size " << subset.size()
           << ": factorized " << to_fraction_string(lib) << " != direct "
           << to_fraction_string(total);
        return os.str();
      }
    }
  }
  return "";
}

// ---------------------------------------------------------------------------
// Criterion 5: on instances satisfying the standard local-lemma condition
// with s_i = 1/Delta, the exact probability that no event occurs is at least
// prod_i (1 - s_i), compared in exact rational arithmetic; at least 50
// instances must actually satisfy the precondition for the run to count.
std::string criterion5() {
  generator::Config cfg;
  cfg.mode = generator::Mode::Smallness;
  int qualifying = 0;
  for (std::uint64_t seed = 5000; seed < 5100; ++seed) {
    model::Instance inst = generator::generate_instance(seed, cfg);
    model::DependencyGraph g =
        model::build_dependency_graph(inst.space, inst.events);
    model::LllReport lll = model::check_lll(inst.space, inst.events, g);
    if (!lll.passes) continue;
    ++qualifying;
    Rational exact =
        oracle::exact_intersection_probability(inst.space, inst.events);
    if (!(exact >= lll.lower_bound)) {
      archive_instance("criterion5_seed" + std::to_string(seed), inst);
      return "seed " + std::to_string(seed) + ": P(no event) " +
             to_fraction_string(exact) + " < bound " +
             to_fraction_string(lll.lower_bound);
    }
  }
  if (qualifying < 50)
    return "only " + std::to_string(qualifying) +
           " instances satisfied the lemma precondition (need >= 50)";
  return "";
}

// ---------------------------------------------------------------------------
// Criterion 6: the log-series recursion reproduces ln(1 - z/2) coefficients
// to 1e-12 relative error through order 40, and exp(log(c)) round-trips
// degree-6 polynomials with roots outside |z| = 1.2 to 1e-10 through
// order 60.
std::string criterion6() {
  {
    std::vector<double> c(41, 0.0);
    c[0] = 1.0;
    c[1] = -0.5;
    std::vector<double> b = interpolate::log_taylor(c);
    for (int k = 1; k <= 40; ++k) {
      double expect = -std::pow(0.5, k) / k;
      if (!(std::abs(b[k] - expect) <= 1e-12 * std::abs(expect)))
        return "ln(1 - z/2) coefficient k=" + std::to_string(k) +
               " off by more than 1e-12 relative";
    }
  }

  std::mt19937_64 rng(606060);
  std::uniform_real_distribution<double> radius(1.25, 3.0);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  const int K = 60;
  for (int trial = 0; trial < 200; ++trial) {
    // Three conjugate quadratic factors: all roots outside |z| = 1.2.
    std::vector<double> c{1.0};
    for (int f = 0; f < 3; ++f) {
      std::complex<double> r = std::polar(radius(rng), angle(rng));
      double b1 = -2.0 * (1.0 / r).real();
      double b2 = std::norm(1.0 / r);
      std::vector<double> next(c.size() + 2, 0.0);
      for (std::size_t i = 0; i < c.size(); ++i) {
        next[i] += c[i];
        next[i + 1] += c[i] * b1;
        next[i + 2] += c[i] * b2;
      }
      c = std::move(next);
    }
    c.resize(K + 1, 0.0);
    std::vector<double> b = interpolate::log_taylor(c);

    // Test-local series exponential: k e_k = sum_{j=1..k} j b_j e_{k-j}.
    std::vector<double> e(K + 1, 0.0);
    e[0] = 1.0;
    for (int k = 1; k <= K; ++k) {
      double acc = 0.0;
      for (int j = 1; j <= k; ++j) acc += j * b[j] * e[k - j];
      e[k] = acc / k;
    }
    for (int k = 0; k <= K; ++k)
      if (!(std::abs(e[k] - c[k]) <= 1e-10))
        return "trial " + std::to_string(trial) + ": exp(log(c)) drifts at k=" +
               std::to_string(k);
  }
  return "";
}

// ---------------------------------------------------------------------------
// Criterion 7: the shipped interpolation plan re-validates from disk: the
// map fixes 0 and 1 exactly, at least 4096 boundary samples of |z| = rho stay
// inside the certified zero-free disk within 1e-12, the real segment image
// stays within delta + 1e-12 of [0, 1], and the stored tail bound matches the
// closed form and meets the epsilon/2 target. (The boundary condition
// certifies disk containment: |phi(z)| <= rho. Requiring the boundary image
// to hug the segment [0,1] instead is unsatisfiable for any polynomial that
// fixes 0 and 1 with rho > 1, so the disk form is the condition under test.)
std::string criterion7() {
  interpolate::InterpolationPlan plan;
  try {
    plan = interpolate::load_plan_file(std::string(PROBINT_DATA_DIR) +
                                       "/plan_delta30.json");
  } catch (const std::exception& e) {
    return std::string("plan failed to load/validate: ") + e.what();
  }
  interpolate::PlanValidation v = interpolate::validate_plan(plan);
  if (!v.ok) return "re-validation failed: " + v.detail;
  if (v.samples < 4096)
    return "only " + std::to_string(v.samples) + " boundary samples (< 4096)";
  if (!(v.worst_disk_excess <= 1e-12)) {
    std::ostringstream os;
    os << "boundary image leaves the certified disk by " << v.worst_disk_excess;
    return os.str();
  }
  if (!(v.worst_segment_dist <= plan.delta + 1e-12)) {
    std::ostringstream os;
    os << "segment image strays " << v.worst_segment_dist
       << " from [0,1] (allowed " << plan.delta + 1e-12 << ")";
    return os.str();
  }
  double phi0 = plan.phi_coeffs.empty() ? 1.0 : plan.phi_coeffs[0];
  double phi1 = 0.0;
  for (double x : plan.phi_coeffs) phi1 += x;
  if (phi0 != 0.0) return "phi(0) != 0 exactly";
  if (phi1 != 1.0) return "phi(1) != 1 exactly";
  double closed_form =
      interpolate::tail_bound_value(8, plan.q, plan.rho, plan.K);
  if (plan.tail_bound != closed_form)
    return "stored tail bound does not match the closed form";
  if (!(plan.tail_bound <= 0.5e-4)) {
    std::ostringstream os;
    os << "tail bound " << plan.tail_bound << " exceeds epsilon/2 = 5e-05";
    return os.str();
  }
  return "";
}

// ---------------------------------------------------------------------------
// Criterion 8: constraint-system counting over {0,1,2}^12 agrees with a
// literal exhaustive scan of all 531441 points to 1e-2 relative error, with
// a certified estimate, and the exact path reproduces the integer count.
std::string criterion8() {
  const int dim = 12;
  const long long side_count = 531441;  // 3^12

  struct System {
    const char* name;
    std::string constraints;
    bool heavy;  // includes the arity-8 sum constraint
  };
  const System systems[3] = {
      {"heavy_plus_trivial",
       "x[1] + x[2] + x[3] + x[4] + x[5] + x[6] + x[7] + x[8] <= 15\n"
       "x[9] <= 2\n"
       "x[10] >= 0\n"
       "x[11] <= 2\n"
       "x[12] >= 0\n"
       "x[1] >= 0\n",
       true},
      {"heavy_alone",
       "x[1] + x[2] + x[3] + x[4] + x[5] + x[6] + x[7] + x[8] <= 15\n", true},
      {"all_trivial",
       "x[1] >= 0\nx[2] <= 2\nx[3] >= 0\nx[4] <= 2\nx[5] >= 0\nx[6] <= 2\n",
       false},
  };

  for (const System& sys : systems) {
    model::ProductSpace cube = io::uniform_cube(dim, 2);
    std::vector<model::Event> violations =
        io::parse_constraint_lines(sys.constraints, cube);

    // Literal exhaustive scan: walk all 3^12 points, apply the constraint
    // semantics directly (sum of the first eight digits at most 15; the
    // remaining constraints hold identically).
    long long kept = 0;
    {
      std::vector<int> d(dim, 0);
      bool more = true;
      while (more) {
        int sum8 = 0;
        for (int j = 0; j < 8; ++j) sum8 += d[j];
        bool ok = !sys.heavy || sum8 <= 15;
        if (ok) ++kept;
        more = false;
        for (int j = dim; j-- > 0;) {
          if (++d[j] <= 2) {
            more = true;
            break;
          }
          d[j] = 0;
        }
      }
    }

    interpolate::EstimateOptions opt;
    jointprob::MemoCache cache;
    opt.cache = &cache;
    interpolate::Estimate est;
    try {
      est = interpolate::estimate_log_intersection(cube, violations, opt);
    } catch (const std::exception& e) {
      return std::string(sys.name) + ": estimate failed: " + e.what();
    }
    if (est.guarantee != interpolate::Guarantee::CertifiedByAssumption)
      return std::string(sys.name) + ": estimate not certified";

    double estimated = static_cast<double>(side_count) * est.value;
    double rel = std::abs(estimated - static_cast<double>(kept)) /
                 static_cast<double>(kept);
    if (!(rel <= 1e-2)) {
      std::ostringstream os;
      os << sys.name << ": estimated count " << estimated
         << " vs exhaustive " << kept << " (rel " << rel << ")";
      return os.str();
    }

    Rational exact_p =
        oracle::exact_intersection_probability(cube, violations);
    Rational total = exact_p * Rational(static_cast<long>(side_count));
    total.canonicalize();
    Rational expect(static_cast<long>(kept));
    if (!(total == expect))
      return std::string(sys.name) + ": exact path gives " +
             to_fraction_string(total) + " kept points, exhaustive scan " +
             std::to_string(kept);
  }
  return "";
}

// ---------------------------------------------------------------------------
// Criterion 9: the truncation tail bound is honest: for certified runs at
// epsilon = 1e-4, extending the same pipeline to order 2K changes the sum of
// log coefficients by no more than the stored tail bound.
std::string criterion9() {
  generator::Config cfg;
  cfg.mode = generator::Mode::Smallness;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    model::Instance inst = generator::generate_instance(seed, cfg);
    interpolate::EstimateOptions opt;
    opt.epsilon = 1e-4;
    jointprob::MemoCache cache;
    opt.cache = &cache;
    interpolate::Estimate est =
        interpolate::estimate_log_intersection(inst.space, inst.events, opt);
    if (est.guarantee != interpolate::Guarantee::CertifiedByAssumption)
      return "seed " + std::to_string(seed) + ": not certified";

    const int n = static_cast<int>(inst.events.size());
    const int K = est.K_used;
    const int K2 = 2 * K;
    model::DependencyGraph g =
        model::build_dependency_graph(inst.space, inst.events);
    jointprob::IntersectionSeries series = jointprob::sigma_series(
        inst.space, inst.events, g, std::min(K2, n), {}, &cache);
    std::vector<double> c(static_cast<std::size_t>(K2) + 1, 0.0);
    for (std::size_t k = 0; k < series.coeffs.size() && k < c.size(); ++k)
      c[k] = to_double(series.coeffs[k]);
    std::vector<double> composed =
        interpolate::compose_series(c, est.plan.phi_coeffs, K2);
    std::vector<double> b = interpolate::log_taylor(composed);
    double tail = 0.0;
    for (int k = K + 1; k <= K2; ++k) tail += b[k];
    if (!(std::abs(tail) <= est.plan.tail_bound)) {
      archive_instance("criterion9_seed" + std::to_string(seed), inst);
      std::ostringstream os;
      os << "seed " << seed << ": observed tail " << std::abs(tail)
         << " exceeds bound " << est.plan.tail_bound;
      return os.str();
    }
  }
  return "";
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    std::string (*run)();
  };
  const Criterion criteria[] = {
      {1, criterion1}, {2, criterion2}, {3, criterion3},
      {4, criterion4}, {5, criterion5}, {6, criterion6},
      {7, criterion7}, {8, criterion8}, {9, criterion9},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string reason;
    try {
      reason = c.run();
    } catch (const std::exception& e) {
      reason = std::string("unexpected exception: ") + e.what();
    }
    auto stop = std::chrono::steady_clock::now();
    double secs =
        std::chrono::duration_cast<std::chrono::duration<double>>(stop - start)
            .count();
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(1);
    if (reason.empty()) {
      line << "PASS criterion " << c.number << " (" << secs << "s)";
    } else {
      line << "FAIL criterion " << c.number << " (" << secs << "s): " << reason;
      ++failures;
    }
    std::cout << line.str() << std::endl;
  }
  if (failures == 0)
    std::cout << "acceptance: all 9 criteria passed" << std::endl;
  else
    std::cout << "acceptance: " << failures << " criteria failed" << std::endl;
  return failures;
}
