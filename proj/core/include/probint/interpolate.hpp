#pragma once

#include <string>
#include <vector>

#include "probint/jointprob.hpp"
#include "probint/model.hpp"
#include "probint/rational.hpp"

namespace probint::interpolate {

// Certificate for truncating the log series of p at K terms.
//
// The map is the family phi(z) = (1 - (1 - alpha z)^q) / (1 - (1 - alpha)^q),
// which fixes 0 and 1 by construction. The validated geometric fact is that
// phi carries the closed disk |z| <= rho into a disk on which p is zero-free,
// so h = p o phi has no zeros there, its log coefficients obey
// |b_k| <= (n q)/(k rho^k), and the tail beyond K is at most tail_bound.
//
// A disk certificate admits no better map than the identity (hyperbolic
// contraction pins rho <= the zero-free radius, and phi(z) = z attains it),
// so construction emits the q = 1 member and rho equal to the certified
// radius. The radius itself comes from an exact rational majorant: with
// marginals sorted ascending, sigma_k <= m_k = sum_j p_(j) C(n-j, k-1), and
// sum_k m_k R^k <= 63/64 forces |p(z) - 1| < 1 for |z| <= R.
struct InterpolationPlan {
  double delta = 0.0;   // 1/(6 Delta), the reporting width for root checks
  double alpha = 0.0;   // in (0,1); at q = 1 the map is z for every alpha
  int q = 1;            // map degree, >= 1
  std::vector<double> phi_coeffs;  // degree q, constant term 0, sums to 1
  double rho = 0.0;     // validated disk radius, > 1 strictly
  int K = 0;            // log-series truncation order
  double tail_bound = 0.0;         // <= epsilon/2 for the chosen K
  int validation_samples = 0;      // boundary samples in the final pass

  std::string to_json_string() const;  // keys: delta, alpha, q, rho, K,
                                       // tail_bound, validation_samples
  static InterpolationPlan from_json_string(const std::string& text);
};

// Coefficients of the family map for (alpha, q); index 0 is the zero
// constant term.
std::vector<double> phi_coefficients(double alpha, int q);

// (n q) rho^(1-K) / (K (rho - 1)); strictly decreasing in K for rho > 1.
double tail_bound_value(int n, int q, double rho, int K);

// Largest R with sum_k m_k R^k <= 63/64, exact rational check; throws
// ConstructionError when no R > 1 qualifies.
Rational certified_zero_free_radius(std::vector<Rational> marginals);

struct PlanValidation {
  bool ok = false;
  int samples = 0;            // final boundary sample count (densified x4
                              // until stable, starting at 4096)
  double worst_disk_excess = 0.0;     // max over samples of |phi(z)| - rho
  double worst_segment_dist = 0.0;    // max over [0,1] samples of
                                      // dist(phi(t), [0,1])
  std::string detail;
};

// Re-validates a plan: phi(0) = 0 and phi(1) = 1 exact, rho > 1, boundary
// image inside the certified disk (tolerance 1e-12), real segment within
// delta of [0,1], K >= 1 (or 0 for the trivial n = 0 plan).
PlanValidation validate_plan(const InterpolationPlan& plan);

// Builds a plan from exact marginals. delta is recorded for reporting; the
// radius search and tail bound are as documented on InterpolationPlan.
InterpolationPlan build_plan(double delta, double epsilon, int n,
                             const std::vector<Rational>& marginals);

// Assumption-only variant: every marginal at the smallness cap
// (3 Delta)^(-3) for the Delta encoded by delta = 1/(6 Delta).
InterpolationPlan build_phi(double delta, double epsilon, int n);

// Loads and re-validates; throws InputError on malformed or invalid plans.
InterpolationPlan load_plan_file(const std::string& path);

// Taylor coefficients of p(phi(z)) through order K. Requires phi[0] == 0.
std::vector<double> compose_series(const std::vector<double>& p_coeffs,
                                   const std::vector<double>& phi,
                                   int K);

// b_1..b_K with ln(c(z)) = sum b_k z^k, via k c_k = sum_{j<=k} j b_j c_{k-j}.
// Requires c[0] == 1. Returned vector has size c.size() with [0] unused = 0.
std::vector<double> log_taylor(const std::vector<double>& c);

enum class Guarantee { CertifiedByAssumption, ConditionsViolated };
enum class Precision { Auto, Double, Extended };

struct EstimateOptions {
  double epsilon = 1e-4;
  Precision precision = Precision::Auto;  // Auto: extended when K > 64
  jointprob::Budget budget;
  jointprob::MemoCache* cache = nullptr;
};

struct Estimate {
  double log_value = 0.0;
  double value = 1.0;  // exp(log_value)
  double epsilon = 0.0;
  int K_used = 0;
  Guarantee guarantee = Guarantee::CertifiedByAssumption;
  bool extended_precision = false;
  model::SmallnessReport smallness;
  InterpolationPlan plan;
};

// Full pipeline: dependency graph, smallness check, plan, sigma series up to
// min(K, n) with zero coefficients beyond, composition, log series, sum.
// Events with probability one are refused with DomainError (ln p(1) would be
// undefined). No events: log_value = 0 exactly.
Estimate estimate_log_intersection(const model::ProductSpace& space,
                                   const std::vector<model::Event>& events,
                                   const EstimateOptions& options = {});

}  // namespace probint::interpolate
