#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "excprime/numeric.hpp"

namespace excprime::arith {

// --- primes ---------------------------------------------------------------

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime(std::uint64_t n);

std::uint64_t next_prime(std::uint64_t n);  // smallest prime > n

// All primes <= limit, ascending (sieve of Eratosthenes).
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

// --- modular helpers --------------------------------------------------------

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m);
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m);  // gcd(a, m) = 1

// Legendre symbol (a/p) for odd prime p; returns -1, 0, 1.
int legendre(std::uint64_t a, std::uint64_t p);
int legendre(const Int& a, const Int& p);

// Full Kronecker symbol (a/n), both arguments arbitrary (n may be negative,
// even, or zero).
int kronecker(std::int64_t a, std::int64_t n);

// Smallest quadratic nonresidue mod an odd prime.
std::uint64_t smallest_nonresidue(std::uint64_t p);

// Multiplicative order of a mod p (a nonzero residue, p prime).
std::uint64_t order_mod(std::uint64_t a, std::uint64_t p);

// True iff the residues generate the full unit group (Z/p)^*.
bool generates_units(const std::set<std::uint64_t>& residues, std::uint64_t p);

// --- quadratic discriminants ------------------------------------------------

// True iff D is a fundamental discriminant (D = 1 counts as the trivial one).
bool is_fundamental_discriminant(std::int64_t d);

// Fundamental discriminant attached to the squarefree kernel of n != 0:
// kernel s if s = 1 mod 4, else 4s. character_product(d1, d2) multiplies two
// quadratic characters in discriminant form.
std::int64_t fundamental_part(std::int64_t n);
std::int64_t character_product(std::int64_t d1, std::int64_t d2);

// Prime discriminant for an odd prime p: p if p = 1 mod 4, else -p.
std::int64_t prime_discriminant(std::uint64_t p);

}  // namespace excprime::arith
