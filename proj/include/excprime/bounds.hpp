#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "excprime/numeric.hpp"

namespace excprime::bounds {

// Number-field invariants entering the bound formulas. Over Q everything
// collapses (degree 1, rank 0, regulator 1, class number 1, |disc| 1).
struct FieldInvariants {
    unsigned degree = 1;
    unsigned unit_rank = 0;
    Real regulator = 1;
    Int class_number = 1;
    Int abs_disc = 1;
    std::set<std::uint64_t> ramified_primes;
};

FieldInvariants rationals();
void validate(const FieldInvariants& inv);

// User-chosen explicit constants, one per formula site. The source results
// only assert existence of such constants; every report carries the active
// profile so numbers are never mistaken for theorems.
struct ConstantsProfile {
    Real c_chebotarev = 1;
    Real c_avoidance = 1;
    Real c_reducible_product = 1;
    Real c_reducible_single = 1;
    Real c_v_exceptional = 1;
    Real c_bootstrap = 1;
    Real c_effective_single = 1;
    Real c_effective_product = 1;
    Real c_cm_exception = 1;
    int reducible_single_exponent = 3;  // 3 or 6
};

void validate(const ConstantsProfile& profile);

// c * (log disc_L)^2: the least-prime-norm envelope for a Galois extension
// with the given log-discriminant.
Real chebotarev_bound(const Real& log_disc_L, const ConstantsProfile& profile);

// 6d * (log |disc_K| + log(6 N |disc_K|^4) + n_K log d): upper bound for the
// log-discriminant of the auxiliary degree-6d extension used to avoid a
// prescribed set of primes of total norm N.
Real extension_disc_bound(unsigned d, const Real& avoided_norm, const FieldInvariants& inv);

// c * d^2 * (log N + log |disc_K| + n_K log d)^2: effective Chebotarev with
// avoidance of a norm-N prime set, for a degree-d extension.
Real avoidance_bound(unsigned d, const Real& avoided_norm, const FieldInvariants& inv,
                     const ConstantsProfile& profile);

// Reducible-case bounds in terms of the smallest acceptable prime p outside
// the reducible set: product <= c * p^36 * (log N_E + log p)^12 and each
// single prime <= c * p^e * (log N_E + log p), e in {3, 6}.
struct ReducibleBounds {
    Real product;
    Real single;
    int single_exponent;
};

ReducibleBounds reducible_bounds(const Real& p, const Real& conductor_norm,
                                 const ConstantsProfile& profile);

// Exact size bound 2^(a_E + 2 n_K) * h_K for the space of quadratic
// characters ramified only at additive places.
Int character_space_bound(unsigned additive_count, const FieldInvariants& inv);

// (c * 2^d * p^3 * (log N_E + log p))^(2 - 2^(1-d)): bound on the product of
// V-exceptional primes for a d-dimensional character space V.
Real v_exceptional_bound(unsigned dim, const Real& p, const Real& conductor_norm,
                         const ConstantsProfile& profile);

// Exact exponent 2 - 2^(1-d) as a rational pair (num, den).
std::pair<Int, Int> v_exceptional_exponent(unsigned dim);

// Chebyshev theta: sum of log ell over primes ell < x.
Real theta_below(std::uint64_t x);

// Bootstrap step: p is the smallest acceptable prime outside S. theta(p) is
// compared against log(prod S) when S covers all primes below p, and against
// rhs = log A + b log p; the implied bound is c * (log A + log p + 1).
struct BootstrapResult {
    std::uint64_t p;
    Real theta_p;
    Real log_product;  // log of prod of S
    Real rhs;          // log A + b log p
    bool chain_applicable;  // S contains every prime < p
    bool chain_holds;       // theta(p) <= log_product (when applicable)
    Real implied_bound;
    bool holds;  // p <= implied_bound
};

BootstrapResult bootstrap_check(const std::set<std::uint64_t>& S, const Real& A, const Real& b,
                                const ConstantsProfile& profile,
                                const FieldInvariants& inv = FieldInvariants{});

// Final bound shapes in the conductor norm: single exceptional prime
// c * log N * (log log N)^3; product c * 4^a * (log N)^14 * (a + log log N)^6
// * (log log N)^36, with the simplified form c * 4^a * (log N)^21.
// log log N is clamped at 1 for N <= e^e.
struct EffectiveBounds {
    Real single;
    Real product;
    Real product_simplified;
};

EffectiveBounds effective_bounds(const Real& conductor_norm, unsigned additive_count,
                                 const ConstantsProfile& profile);

// exp(c^n_K * (R_K n_K^r_K + h_K log |disc_K|)) and the product analogue with
// h_K^2 (log |disc_K|)^2: thresholds for the finite prime set where the
// CM-companion comparison in the reducible case can fail.
struct CmExceptionBounds {
    Real single;
    Real product;
};

CmExceptionBounds cm_exception_bounds(const FieldInvariants& inv, const Real& c_abs);

// h_K <= |disc_K|^(3/2).
Real class_number_bound(const Int& abs_disc);
bool class_number_consistent(const FieldInvariants& inv);

}  // namespace excprime::bounds
