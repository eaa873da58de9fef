#include "probint/rational.hpp"

#include <cctype>

namespace probint {

namespace {

bool is_opt_signed_integer(std::string_view s) {
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::size_t start = 0, end = text.size();
  while (start < end && std::isspace(static_cast<unsigned char>(text[start])))
    ++start;
  while (end > start && std::isspace(static_cast<unsigned char>(text[end - 1])))
    --end;
  std::string_view body = text.substr(start, end - start);
  if (body.empty()) throw InputError("empty rational literal");

  std::string num, den = "1";
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    num = std::string(body.substr(0, slash));
    den = std::string(body.substr(slash + 1));
  } else {
    num = std::string(body);
  }
  if (!is_opt_signed_integer(num) || !is_opt_signed_integer(den))
    throw InputError("malformed rational literal: '" + std::string(text) + "'");

  Integer n(num), d(den);
  if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_fraction_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

double to_double(const Rational& r) { return r.get_d(); }

Integer binomial(unsigned n, unsigned k) {
  Integer out;
  if (k > n) return 0;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

Rational pow_rational(const Rational& r, unsigned e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), r.get_num().get_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), r.get_den().get_mpz_t(), e);
  out.canonicalize();
  return out;
}

}  // namespace probint
