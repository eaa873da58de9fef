#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace probint {

using Integer = mpz_class;
using Rational = mpq_class;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Plan construction could not certify any usable radius.
struct ConstructionError : std::runtime_error {
  double alpha = 0.0;
  int q = 0;
  double rho = 0.0;
  ConstructionError(const std::string& msg, double a, int q_, double r)
      : std::runtime_error(msg), alpha(a), q(q_), rho(r) {}
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ln p(1) is undefined: some event has probability one.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses "p", "-p" or "p/q" with decimal integer parts, exactly.
Rational parse_rational(std::string_view text);

// Canonical "p/q" (or "p" when the denominator is one).
std::string to_fraction_string(const Rational& r);

double to_double(const Rational& r);

Integer binomial(unsigned n, unsigned k);

// r^e for integer e >= 0.
Rational pow_rational(const Rational& r, unsigned e);

}  // namespace probint
