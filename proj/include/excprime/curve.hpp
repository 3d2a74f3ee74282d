#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "excprime/numeric.hpp"

namespace excprime {

// Integral Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
// over Q, with the standard derived invariants. Construction checks
// 1728*disc = c4^3 - c6^2 and rejects singular models.
struct Curve {
    Int a1, a2, a3, a4, a6;
    Int b2, b4, b6, b8;
    Int c4, c6, disc;
    Int j_num, j_den;  // j = c4^3 / disc in lowest terms, j_den > 0

    std::string id() const;  // "a1,a2,a3,a4,a6"
};

Curve build_curve(const Int& a1, const Int& a2, const Int& a3, const Int& a4, const Int& a6);

// p-adic valuation of a nonzero integer.
unsigned valuation(const Int& n, const Int& p);

// p-minimal model for p >= 5 (val_p(disc) < 12 or val_p(c4) < 4). Returns the
// input unchanged when it is already p-minimal; otherwise returns the reduced
// integral model with invariants (c4/p^{4k}, c6/p^{6k}), which is related to
// the input by an admissible change of variables.
Curve minimal_model_at(const Curve& e, const Int& p);

enum class ReductionKind { Good, MultiplicativeSplit, MultiplicativeNonsplit, Additive };

enum class ReductionSource { Computed, UserOverride };

struct ReductionEntry {
    Int p;
    ReductionKind kind;
    unsigned conductor_exponent;
    ReductionSource source;
};

struct ReductionProfile {
    std::vector<ReductionEntry> entries;  // ascending by p
    Int conductor_norm;                   // product of p^exponent
    unsigned additive_count;

    std::vector<Int> additive_primes() const;
    std::optional<ReductionEntry> at(const Int& p) const;
};

struct OverrideEntry {
    ReductionKind kind;
    unsigned conductor_exponent;
};

// Reduction data for every prime dividing disc plus every override prime.
// For p >= 5 the type is computed on the p-minimal model (good iff p ∤ disc;
// multiplicative iff p | disc, p ∤ c4, split iff -c6 is a square mod p;
// additive otherwise). Primes 2 and 3 dividing disc require overrides,
// typically taken from published curve tables.
ReductionProfile reduction_profile(const Curve& e, const std::map<Int, OverrideEntry>& overrides);

const char* reduction_kind_name(ReductionKind k);

}  // namespace excprime
