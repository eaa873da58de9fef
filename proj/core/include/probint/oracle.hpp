#pragma once

#include <complex>
#include <string>
#include <vector>

#include "probint/jointprob.hpp"
#include "probint/model.hpp"
#include "probint/rational.hpp"

namespace probint::oracle {

// P(no event occurs), by direct enumeration over the tuples of every
// coordinate appearing in some support (the rest marginalize to 1).
// Exact; throws ResourceError when the tuple count exceeds the budget.
Rational exact_intersection_probability(const model::ProductSpace& space,
                                        const std::vector<model::Event>& events,
                                        const jointprob::Budget& budget = {});

// All coefficients a_0..a_n of p(z), a_k = (-1)^k sigma_k. Note
// sum_k a_k = p(1) = exact_intersection_probability holds exactly.
std::vector<Rational> full_p_polynomial(const model::ProductSpace& space,
                                        const std::vector<model::Event>& events,
                                        const model::DependencyGraph& graph,
                                        const jointprob::Budget& budget = {},
                                        jointprob::MemoCache* cache = nullptr);

struct RootReport {
  std::vector<std::complex<double>> roots;
  // Distance from the nearest root to the segment [0,1], already reduced by
  // a residual-based error bar; infinity when p has no roots.
  double min_dist = 0.0;
  double delta = 0.0;
  bool zero_free = false;  // min_dist > delta
  std::string to_json_string() const;
};

// Aberth simultaneous iteration with Newton polish. Preconditions:
// coeffs[0] == 1 and no trailing zero coefficients. Every root must pass the
// residual check |p(root)| <= 1e-8 (1 + max |a_k|); otherwise NumericError
// carrying the partial results in its message.
RootReport root_localize(const std::vector<double>& coeffs, double delta);

// Strips trailing zeros exactly, then localizes on double coefficients.
RootReport root_localize(const std::vector<Rational>& coeffs, double delta);

double distance_to_unit_segment(std::complex<double> z);

}  // namespace probint::oracle
