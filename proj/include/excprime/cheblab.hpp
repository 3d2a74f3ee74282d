#pragma once

#include <cstdint>
#include <vector>

namespace excprime::cheblab {

// Least prime realizing a Frobenius condition in an abelian extension,
// with the ratio against the squared log-discriminant envelope.
struct LeastPrimeDatum {
    enum class Kind { Quadratic, Cyclotomic };
    Kind kind;
    std::int64_t field_id;  // fundamental discriminant D, or conductor m
    std::int64_t target;    // +-1 (split/inert), or a residue class mod m
    std::uint64_t least_prime;
    double log_disc;
    double ratio;  // least_prime / log_disc^2
};

// Least p not dividing D with Kronecker(D, p) = target (+1 split, -1 inert).
LeastPrimeDatum least_prime_quadratic(std::int64_t d, int target, std::uint64_t sieve_bound);

// Least p = r (mod m); the log-discriminant proxy is phi(m) * log m, an
// upper-bound-flavored stand-in for the cyclotomic discriminant.
LeastPrimeDatum least_prime_cyclotomic(std::uint64_t m, std::uint64_t r, std::uint64_t sieve_bound);

// Re-check that every smaller unramified prime fails the datum's condition
// and the condition holds at least_prime.
bool verify_datum(const LeastPrimeDatum& d);

struct EnvelopeReport {
    std::size_t count = 0;
    double max_ratio = 0;
    std::int64_t argmax_field = 0;
    double p50 = 0, p90 = 0, p99 = 0;
};

EnvelopeReport envelope_report(const std::vector<LeastPrimeDatum>& data);

struct SweepOptions {
    std::uint64_t quadratic_range = 10000;  // |D| <= range
    std::uint64_t sieve_bound = 100000;
    unsigned jobs = 1;
};

// Both targets for every fundamental discriminant 3 <= |D| <= range, ordered
// by (|D|, D, target); identical output for any jobs value.
std::vector<LeastPrimeDatum> quadratic_sweep(const SweepOptions& opts);

}  // namespace excprime::cheblab
