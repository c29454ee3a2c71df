#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace formlab {

using Int = mpz_class;
using Rat = mpq_class;
using i128 = __int128;

Rat parse_rational(const std::string& text);
std::string to_string(const Rat& q);
std::string to_string(const Int& z);
std::string to_string(i128 v);

bool is_integer(const Rat& q);
long double to_long_double(const Rat& q);
long double to_long_double(const Int& z);

// Natural log of |z| for nonzero z, accurate for arbitrarily large z.
long double log_abs(const Int& z);

std::optional<i128> to_i128(const Int& z);
Int from_i128(i128 v);

Rat rat_pow(const Rat& base, unsigned long exponent);

// Integer k-th root: largest r >= 0 with r^k <= n (n >= 0).
Int iroot_floor(const Int& n, unsigned long k);
bool is_perfect_power(const Int& n, unsigned long k, Int* root);

bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> primes_up_to(std::uint64_t n);
bool is_squarefree(std::uint64_t n);
std::uint64_t euler_phi(std::uint64_t n);

// Closest fraction with denominator at most max_den (continued fractions).
Rat best_rational(long double x, const Int& max_den);

}  // namespace formlab
