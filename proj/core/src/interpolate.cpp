#include "probint/interpolate.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace probint::interpolate {

namespace {

using F50 = boost::multiprecision::cpp_bin_float_50;

double segment_distance_real(double u) {
  if (u < 0.0) return -u;
  if (u > 1.0) return u - 1.0;
  return 0.0;
}

std::complex<double> eval_poly(const std::vector<double>& coeffs,
                               std::complex<double> z) {
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
  return acc;
}

template <typename F>
std::vector<F> mul_trunc(const std::vector<F>& a, const std::vector<F>& b,
                         int K) {
  std::vector<F> out(static_cast<std::size_t>(K) + 1, F(0));
  for (std::size_t i = 0; i < a.size() && i <= static_cast<std::size_t>(K); ++i) {
    if (a[i] == 0) continue;
    const std::size_t jmax =
        std::min(b.size(), static_cast<std::size_t>(K) + 1 - i);
    for (std::size_t j = 0; j < jmax; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

template <typename F>
std::vector<F> compose_T(const std::vector<F>& p, const std::vector<F>& phi,
                         int K) {
  if (K < 0) throw InputError("compose_series: K must be non-negative");
  if (phi.empty() || !(phi[0] == 0))
    throw InputError("compose_series: phi must have zero constant term");
  std::vector<F> result(static_cast<std::size_t>(K) + 1, F(0));
  if (!p.empty()) result[0] = p[0];
  std::vector<F> power{F(1)};
  const std::size_t jmax =
      std::min(p.size() == 0 ? std::size_t{0} : p.size() - 1,
               static_cast<std::size_t>(K));
  for (std::size_t j = 1; j <= jmax; ++j) {
    power = mul_trunc(power, phi, K);
    if (p[j] == 0) continue;
    for (int k = 0; k <= K; ++k) result[k] += p[j] * power[k];
  }
  return result;
}

template <typename F>
std::vector<F> log_T(const std::vector<F>& c) {
  if (c.empty() || !(c[0] == 1))
    throw InputError("log_taylor: series must have constant term one");
  std::vector<F> b(c.size(), F(0));
  for (std::size_t k = 1; k < c.size(); ++k) {
    F acc = 0;
    for (std::size_t j = 1; j < k; ++j) acc += F(static_cast<int>(j)) * b[j] * c[k - j];
    b[k] = c[k] - acc / F(static_cast<int>(k));
  }
  return b;
}

F50 to_f50(const Rational& r) {
  return F50(r.get_num().get_str()) / F50(r.get_den().get_str());
}

}  // namespace

std::vector<double> phi_coefficients(double alpha, int q) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InputError("phi_coefficients: alpha must lie in (0,1)");
  if (q < 1) throw InputError("phi_coefficients: q must be >= 1");
  // At q = 1 the family member is exactly the identity, independent of alpha.
  if (q == 1) return {0.0, 1.0};
  std::vector<double> coeffs(static_cast<std::size_t>(q) + 1, 0.0);
  const double den = 1.0 - std::pow(1.0 - alpha, q);
  double alpha_pow = 1.0;
  for (int k = 1; k <= q; ++k) {
    alpha_pow *= alpha;
    const double c = to_double(Rational(binomial(q, k))) * alpha_pow / den;
    coeffs[k] = (k % 2 == 1) ? c : -c;
  }
  return coeffs;
}

double tail_bound_value(int n, int q, double rho, int K) {
  if (n < 0 || q < 1 || K < 1 || !(rho > 1.0))
    throw InputError("tail_bound_value: need n >= 0, q >= 1, K >= 1, rho > 1");
  return static_cast<double>(n) * q * std::pow(rho, 1 - K) / (K * (rho - 1.0));
}

Rational certified_zero_free_radius(std::vector<Rational> marginals) {
  for (const Rational& m : marginals)
    if (m < 0 || m >= 1)
      throw InputError("certified_zero_free_radius: marginals must be in [0,1)");
  const int n = static_cast<int>(marginals.size());
  if (n == 0) return Rational(64);
  std::sort(marginals.begin(), marginals.end());

  // Majorant coefficients: every k-subset's joint is at most its smallest
  // marginal, and C(n-j, k-1) subsets have sorted-index j as their minimum.
  std::vector<Rational> mk(static_cast<std::size_t>(n) + 1, Rational(0));
  for (int k = 1; k <= n; ++k)
    for (int j = 1; j <= n; ++j)
      mk[k] += marginals[j - 1] * Rational(binomial(n - j, k - 1));

  const Rational limit(63, 64);
  auto admissible = [&](const Rational& R) {
    Rational sum = 0, power = 1;
    for (int k = 1; k <= n; ++k) {
      power *= R;
      sum += mk[k] * power;
      if (sum > limit) return false;
    }
    return sum <= limit;
  };

  // Largest radius on the 1/64 grid within (1, 64]; the majorant is
  // monotone in R, so binary search is sound.
  long lo = 65, hi = 64 * 64;
  Rational lo_r(lo, 64);
  lo_r.canonicalize();
  if (!admissible(lo_r))
    throw ConstructionError(
        "no zero-free radius above 1 is certifiable from these marginals",
        0.0, 1, 1.0);
  while (lo < hi) {
    const long mid = lo + (hi - lo + 1) / 2;
    Rational R(mid, 64);
    R.canonicalize();
    if (admissible(R))
      lo = mid;
    else
      hi = mid - 1;
  }
  Rational best(lo, 64);
  best.canonicalize();
  return best;
}

InterpolationPlan build_plan(double delta, double epsilon, int n,
                             const std::vector<Rational>& marginals) {
  if (!(delta > 0.0) || !(epsilon > 0.0))
    throw InputError("build_plan: delta and epsilon must be positive");
  if (n < 0 || static_cast<int>(marginals.size()) != n)
    throw InputError("build_plan: marginal count must equal n");

  InterpolationPlan plan;
  plan.delta = delta;
  plan.alpha = delta / 2.0;
  plan.q = 1;
  plan.phi_coeffs = phi_coefficients(plan.alpha, plan.q);

  Rational radius;
  try {
    radius = certified_zero_free_radius(marginals);
  } catch (const ConstructionError& e) {
    throw ConstructionError(e.what(), plan.alpha, plan.q, 1.0);
  }
  // Grid radii are dyadic with denominator 64, hence exact as doubles.
  plan.rho = to_double(radius);

  if (n == 0) {
    plan.K = 0;
    plan.tail_bound = 0.0;
  } else {
    int K = 1;
    while (tail_bound_value(n, plan.q, plan.rho, K) > epsilon / 2.0) {
      if (++K > 200000)
        throw ConstructionError("no truncation order up to 200000 meets the tail target",
                                plan.alpha, plan.q, plan.rho);
    }
    plan.K = K;
    plan.tail_bound = tail_bound_value(n, plan.q, plan.rho, K);
  }

  const PlanValidation v = validate_plan(plan);
  if (!v.ok)
    throw ConstructionError("constructed plan failed validation: " + v.detail,
                            plan.alpha, plan.q, plan.rho);
  plan.validation_samples = v.samples;
  return plan;
}

InterpolationPlan build_phi(double delta, double epsilon, int n) {
  if (!(delta > 0.0)) throw InputError("build_phi: delta must be positive");
  const long Delta = std::max<long>(5, std::lround(1.0 / (6.0 * delta)));
  Rational cap(1L, (3 * Delta) * (3 * Delta) * (3 * Delta));
  cap.canonicalize();
  return build_plan(delta, epsilon, n,
                    std::vector<Rational>(static_cast<std::size_t>(n), cap));
}

PlanValidation validate_plan(const InterpolationPlan& plan) {
  PlanValidation v;
  std::ostringstream detail;
  bool ok = true;

  if (plan.q < 1 ||
      plan.phi_coeffs.size() != static_cast<std::size_t>(plan.q) + 1) {
    detail << "phi coefficient count does not match q; ";
    ok = false;
  }
  if (plan.phi_coeffs.empty() || plan.phi_coeffs[0] != 0.0) {
    detail << "phi(0) != 0; ";
    ok = false;
  }
  double sum = 0.0;
  for (double c : plan.phi_coeffs) sum += c;
  if (!(std::abs(sum - 1.0) <= 1e-14)) {
    detail << "phi(1) != 1; ";
    ok = false;
  }
  if (!(plan.rho > 1.0)) {
    detail << "rho must exceed 1; ";
    ok = false;
  }
  if (plan.K < 1 && !(plan.K == 0 && plan.tail_bound == 0.0)) {
    detail << "K must be >= 1 (0 only with a zero tail); ";
    ok = false;
  }
  if (!(plan.tail_bound >= 0.0) || !std::isfinite(plan.tail_bound)) {
    detail << "tail bound must be finite and non-negative; ";
    ok = false;
  }

  if (ok) {
    // Boundary pass: |phi(z)| <= rho + 1e-12 on |z| = rho, sampled densely
    // and densified x4 until the worst excess is stable.
    const double two_pi = 6.283185307179586476925286766559;
    int samples = 4096;
    double prev = std::numeric_limits<double>::quiet_NaN();
    double worst = 0.0;
    while (true) {
      worst = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < samples; ++j) {
        const double theta = two_pi * j / samples;
        const std::complex<double> z(plan.rho * std::cos(theta),
                                     plan.rho * std::sin(theta));
        worst = std::max(worst, std::abs(eval_poly(plan.phi_coeffs, z)) -
                                    plan.rho);
      }
      if (!std::isnan(prev) &&
          std::abs(worst - prev) <= 1e-13 * std::max(1.0, std::abs(prev)))
        break;
      if (samples >= 4096 * 64) break;
      prev = worst;
      samples *= 4;
    }
    v.samples = samples;
    v.worst_disk_excess = worst;
    if (!(worst <= 1e-12)) {
      detail << "boundary image leaves the certified disk (excess "
             << worst << "); ";
      ok = false;
    }

    double worst_seg = 0.0;
    for (int j = 0; j <= 1024; ++j) {
      const double t = static_cast<double>(j) / 1024.0;
      const std::complex<double> w =
          eval_poly(plan.phi_coeffs, std::complex<double>(t, 0.0));
      worst_seg = std::max(worst_seg, segment_distance_real(w.real()));
    }
    v.worst_segment_dist = worst_seg;
    if (!(worst_seg <= plan.delta + 1e-12)) {
      detail << "real segment image strays beyond delta; ";
      ok = false;
    }
  }

  v.ok = ok;
  v.detail = ok ? "all checks passed" : detail.str();
  return v;
}

std::string InterpolationPlan::to_json_string() const {
  nlohmann::ordered_json j;
  j["delta"] = delta;
  j["alpha"] = alpha;
  j["q"] = q;
  j["rho"] = rho;
  j["K"] = K;
  j["tail_bound"] = tail_bound;
  j["validation_samples"] = validation_samples;
  return j.dump(2) + "\n";
}

InterpolationPlan InterpolationPlan::from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("plan JSON is malformed: ") + e.what());
  }
  if (!j.is_object()) throw InputError("plan JSON must be an object");
  static const char* const keys[] = {"delta", "alpha", "q", "rho",
                                     "K",     "tail_bound", "validation_samples"};
  for (const char* k : keys)
    if (!j.contains(k))
      throw InputError(std::string("plan JSON is missing key '") + k + "'");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known)
      throw InputError("plan JSON has unknown key '" + it.key() + "'");
  }
  auto number = [&](const char* k) -> double {
    if (!j[k].is_number())
      throw InputError(std::string("plan key '") + k + "' must be a number");
    return j[k].get<double>();
  };
  auto integer = [&](const char* k) -> int {
    if (!j[k].is_number_integer())
      throw InputError(std::string("plan key '") + k + "' must be an integer");
    return j[k].get<int>();
  };
  InterpolationPlan plan;
  plan.delta = number("delta");
  plan.alpha = number("alpha");
  plan.q = integer("q");
  plan.rho = number("rho");
  plan.K = integer("K");
  plan.tail_bound = number("tail_bound");
  plan.validation_samples = integer("validation_samples");
  if (plan.q < 1) throw InputError("plan key 'q' must be >= 1");
  if (!(plan.alpha > 0.0 && plan.alpha < 1.0))
    throw InputError("plan key 'alpha' must lie in (0,1)");
  plan.phi_coeffs = phi_coefficients(plan.alpha, plan.q);
  return plan;
}

InterpolationPlan load_plan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open plan file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  InterpolationPlan plan = InterpolationPlan::from_json_string(buf.str());
  const PlanValidation v = validate_plan(plan);
  if (!v.ok)
    throw InputError("plan file '" + path + "' failed validation: " + v.detail);
  return plan;
}

std::vector<double> compose_series(const std::vector<double>& p_coeffs,
                                   const std::vector<double>& phi, int K) {
  return compose_T<double>(p_coeffs, phi, K);
}

std::vector<double> log_taylor(const std::vector<double>& c) {
  return log_T<double>(c);
}

Estimate estimate_log_intersection(const model::ProductSpace& space,
                                   const std::vector<model::Event>& events,
                                   const EstimateOptions& options) {
  space.validate();
  const model::DependencyGraph graph = model::build_dependency_graph(space, events);
  const int n = static_cast<int>(events.size());

  Estimate est;
  est.epsilon = options.epsilon;
  est.smallness = model::check_smallness(space, events, graph);
  est.guarantee = est.smallness.overall ? Guarantee::CertifiedByAssumption
                                        : Guarantee::ConditionsViolated;

  std::vector<Rational> marginals(n);
  for (int i = 0; i < n; ++i) {
    marginals[i] = jointprob::event_probability(space, events[i]);
    if (marginals[i] == 1)
      throw DomainError("event '" + events[i].name +
                        "' has probability one, so ln P(no event occurs) is undefined");
  }

  const double delta = 1.0 / (6.0 * graph.max_degree);

  if (n == 0) {
    est.log_value = 0.0;
    est.value = 1.0;
    est.K_used = 0;
    est.plan = build_plan(delta, options.epsilon, 0, {});
    return est;
  }

  bool have_plan = true;
  try {
    est.plan = build_plan(delta, options.epsilon, n, marginals);
  } catch (const ConstructionError&) {
    have_plan = false;
  }

  if (!have_plan) {
    // No disk is certifiable (only possible outside the smallness regime or
    // at large n). Fall back to exact evaluation of p(1): the polynomial has
    // degree <= n, so summing all coefficients is exact and the only error
    // left is the final double conversion.
    const jointprob::IntersectionSeries series = jointprob::sigma_series(
        space, events, graph, n, options.budget, options.cache);
    Rational p1 = 0;
    for (const Rational& c : series.coeffs) p1 += c;
    if (p1 <= 0)
      throw DomainError("P(no event occurs) is zero; its logarithm is undefined");
    est.value = to_double(p1);
    est.log_value = std::log(est.value);
    est.K_used = n;
    est.extended_precision = false;
    est.plan = InterpolationPlan{delta, delta / 2.0, 1, {0.0, 1.0}, 1.0,
                                 n,     0.0,         0};
    return est;
  }

  const int K = est.plan.K;
  const int K_sigma = std::min(K, n);
  const jointprob::IntersectionSeries series = jointprob::sigma_series(
      space, events, graph, K_sigma, options.budget, options.cache);

  const bool extended =
      options.precision == Precision::Extended ||
      (options.precision == Precision::Auto && K > 64);
  est.extended_precision = extended;
  est.K_used = K;

  if (!extended) {
    std::vector<double> c(static_cast<std::size_t>(K) + 1, 0.0);
    for (int k = 0; k <= K_sigma; ++k) c[k] = to_double(series.coeffs[k]);
    const std::vector<double> h = compose_series(c, est.plan.phi_coeffs, K);
    const std::vector<double> b = log_taylor(h);
    double acc = 0.0;
    for (int k = 1; k <= K; ++k) acc += b[k];
    est.log_value = acc;
  } else {
    std::vector<F50> c(static_cast<std::size_t>(K) + 1, F50(0));
    for (int k = 0; k <= K_sigma; ++k) c[k] = to_f50(series.coeffs[k]);
    std::vector<F50> phi(est.plan.phi_coeffs.size());
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = F50(est.plan.phi_coeffs[i]);
    const std::vector<F50> h = compose_T<F50>(c, phi, K);
    const std::vector<F50> b = log_T<F50>(h);
    F50 acc = 0;
    for (int k = 1; k <= K; ++k) acc += b[k];
    est.log_value = static_cast<double>(acc);
  }
  est.value = std::exp(est.log_value);
  return est;
}

}  // namespace probint::interpolate
