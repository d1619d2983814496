#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace bizeta {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Checked 64-bit arithmetic; throws std::overflow_error.
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::uint64_t checked_pow(std::uint64_t base, unsigned exp);

bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> primes_up_to(std::uint64_t bound);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

// Modular helpers for word-sized moduli (< 2^32).
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m);
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m);

// q^e as an exact rational, for any integer e.
Rational rational_pow(const BigInt &q, std::int64_t e);

// Integral value of r; throws if r is not an integer.
BigInt to_integer(const Rational &r, const char *what);

Rational parse_rational(const std::string &text);
std::string to_string(const Rational &r);

}  // namespace bizeta
