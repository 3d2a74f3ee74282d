#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "excprime/curve.hpp"
#include "excprime/numeric.hpp"

namespace excprime {

// Trace of Frobenius at a good prime: a_p = p + 1 - #E(F_p).
// |a_p| <= 2 sqrt(p) is asserted on every computed record.
struct FrobeniusRecord {
    std::uint64_t p;
    std::int64_t a_p;
};

// Quadratic x^2 - a x + q with nonpositive discriminant (a^2 <= 4q).
struct FrobPoly {
    Int trace;
    Int norm;
};

FrobPoly make_frob_poly(Int trace, Int norm);

// Twelfth Adams operation: the quadratic whose roots are the twelfth powers
// of the input's roots, computed by the Lucas-style power-sum recurrence
// s_k = a*s_{k-1} - q*s_{k-2}, s_0 = 2, s_1 = a. Result is (s_12, q^12).
FrobPoly adams12(const FrobPoly& f);

struct TraceTable {
    std::string curve_id;
    std::vector<FrobeniusRecord> records;  // ascending by p, good primes only
    std::set<std::uint64_t> bad_primes;    // bad primes below the build bound

    std::optional<std::int64_t> trace_at(std::uint64_t p) const;
};

struct EngineOptions {
    std::uint64_t prime_limit = 1ull << 20;  // point-counting cap
    unsigned jobs = 1;
    std::optional<std::string> cache_dir;  // append-only CSV cache per curve
};

// True iff the curve has good reduction at p; for p >= 5 this is decided on
// the p-minimal model, for p in {2, 3} on the given model.
bool has_good_reduction(const Curve& e, std::uint64_t p);

// Exhaustive point count over F_p via the quadratic character of the
// completed square (O(p) with a residue table).
FrobeniusRecord count_points(const Curve& e, std::uint64_t p,
                             std::uint64_t prime_limit = 1ull << 20);

// All good primes <= bound. Deterministic for any jobs value; disjoint primes
// are counted in parallel and merged in prime order.
TraceTable build_trace_table(const Curve& e, std::uint64_t bound, const EngineOptions& opts = {});

enum class CompareMode { Plain, Adams12 };

struct Distinguishing {
    std::optional<std::uint64_t> prime;  // smallest common good prime where the polys differ
    Int abs_difference;                  // |trace difference| in the selected mode
    std::uint64_t compared = 0;
};

// Scans common good primes <= bound; both tables must cover all of them.
Distinguishing compare_traces(const TraceTable& a, const TraceTable& b, CompareMode mode,
                              std::uint64_t bound);

// Congruence certificate at a single prime. Plain mode: A = a_p - a_p' with
// |A| <= 4 sqrt(p), so any ell | A with 4 sqrt(p) < ell forces A = 0.
// Adams12 mode: B = s_12 difference with |B| <= 4 p^6, so any R | B with
// 4 p^6 < R forces B = 0 (i.e. the reducible product is <= |B| when B != 0).
struct CongruenceCert {
    std::uint64_t p;
    CompareMode mode;
    Int difference;
    Int abs_bound;  // 4 p^6 (Adams12); for Plain the exact check is difference^2 <= 16 p
    bool within_bound;
    std::string clause;
};

CongruenceCert congruence_certificate(const FrobeniusRecord& a, const FrobeniusRecord& b,
                                      CompareMode mode);

const char* compare_mode_name(CompareMode m);

}  // namespace excprime
