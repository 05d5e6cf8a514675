#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace allostery {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts "p/q", "p" and surrounding whitespace; throws ParseError otherwise.
Rational parse_rational(std::string_view text);

// "p/q" in lowest terms, "p" for integers.
std::string to_string(const Rational& q);

inline BigInt numerator_of(const Rational& q) {
  return boost::multiprecision::numerator(q);
}
inline BigInt denominator_of(const Rational& q) {
  return boost::multiprecision::denominator(q);
}

// Exponent k with n = p^k, or -1 when n is not a power of p (n >= 1).
int power_exponent(const BigInt& n, unsigned p);

BigInt ipow(unsigned base, unsigned exponent);

bool is_prime(unsigned n);

}  // namespace allostery
