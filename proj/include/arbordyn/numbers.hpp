// Exact integer/rational arithmetic helpers shared by all modules:
// p-adic valuations, naive heights, primality, and integer factorization.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace arbordyn {

using Int = mpz_class;
using Rat = mpq_class;

struct ArbordynError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UndefinedReduction : ArbordynError {
    using ArbordynError::ArbordynError;
};
struct DegreeCapExceeded : ArbordynError {
    using ArbordynError::ArbordynError;
};
struct DegreeMismatch : ArbordynError {
    using ArbordynError::ArbordynError;
};
struct TooLarge : ArbordynError {
    using ArbordynError::ArbordynError;
};
struct NonIntegral : ArbordynError {
    using ArbordynError::ArbordynError;
};
struct BadPrime : ArbordynError {
    using ArbordynError::ArbordynError;
};
struct NoWanderingWitness : ArbordynError {
    using ArbordynError::ArbordynError;
};
struct BoundTooLarge : ArbordynError {
    using ArbordynError::ArbordynError;
};
struct NotRepresentable : ArbordynError {
    using ArbordynError::ArbordynError;
};
struct ParseError : ArbordynError {
    using ArbordynError::ArbordynError;
};

// Sentinel for the p-adic valuation of 0.
inline constexpr long kValInfinity = std::numeric_limits<long>::max();

// nu_p(n); kValInfinity for n = 0.  p must be prime.
long valuation(const Int& n, const Int& p);
// nu_p(x) = nu_p(num) - nu_p(den).
long valuation(const Rat& x, const Int& p);

// Naive multiplicative height max(|num|, den) of a canonical rational; >= 1.
Int height(const Rat& x);

bool is_prime(const Int& n);
Int next_prime_above(const Int& n);

// Complete factorization (trial division + Pollard rho + recursion).
// Deterministic.  Results sorted by prime.
std::vector<std::pair<Int, int>> factorize(const Int& n);

// Partial factorization of |n| by trial division up to trial_bound, then
// (optionally) Pollard rho on the remaining cofactor.  `complete` is true iff
// the leftover cofactor is 1.
struct PartialFactorization {
    std::vector<std::pair<Int, int>> primes;  // sorted by prime
    Int cofactor = 1;                         // unfactored part (1 if complete)
    bool complete = true;
};
PartialFactorization partial_factorize(const Int& n, long trial_bound,
                                       bool use_rho);

// All positive divisors of |n| (requires complete factorization).
std::vector<Int> divisors(const Int& n);

// Primes <= n by plain sieve (small n; the census uses a segmented sieve).
std::vector<long> small_primes_up_to(long n);

// Distinct prime factors of small n > 0, ascending.
std::vector<long> prime_factors_long(long n);

long euler_phi_long(long n);

// a^e mod m for uint64 m < 2^31.
std::uint64_t pow_mod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m);

// x with a*x = 1 mod m (m prime).
std::uint64_t inv_mod_u64(std::uint64_t a, std::uint64_t m);

// Reduce a rational mod p; throws UndefinedReduction if p divides the
// denominator.
std::uint64_t reduce_rat_mod_p(const Rat& x, std::uint64_t p);

std::string to_string(const Rat& x);

}  // namespace arbordyn
