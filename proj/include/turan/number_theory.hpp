#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace turan {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

// Distinct prime factors in ascending order, by trial division.
std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n);

struct PrimePower {
    std::uint64_t prime;
    unsigned exponent;
};

// q = prime^exponent with exponent >= 1, or nullopt.
std::optional<PrimePower> as_prime_power(std::uint64_t q);

// Exact integer power; throws ResourceError on 64-bit overflow.
std::uint64_t checked_pow(std::uint64_t base, unsigned exp);

// Smallest prime strictly greater than n.
std::uint64_t next_prime_after(std::uint64_t n);

} // namespace turan
