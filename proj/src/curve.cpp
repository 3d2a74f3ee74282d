#include "excprime/curve.hpp"

#include <algorithm>

#include <boost/multiprecision/miller_rabin.hpp>

#include "excprime/arith.hpp"
#include "excprime/errors.hpp"

namespace excprime {

namespace {
constexpr const char* kModule = "curve-model";
}

std::string Curve::id() const {
    return a1.str() + "," + a2.str() + "," + a3.str() + "," + a4.str() + "," + a6.str();
}

Curve build_curve(const Int& a1, const Int& a2, const Int& a3, const Int& a4, const Int& a6) {
    Curve e;
    e.a1 = a1; e.a2 = a2; e.a3 = a3; e.a4 = a4; e.a6 = a6;
    e.b2 = a1 * a1 + 4 * a2;
    e.b4 = 2 * a4 + a1 * a3;
    e.b6 = a3 * a3 + 4 * a6;
    e.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    e.c4 = e.b2 * e.b2 - 24 * e.b4;
    e.c6 = -e.b2 * e.b2 * e.b2 + 36 * e.b2 * e.b4 - 216 * e.b6;
    e.disc = -e.b2 * e.b2 * e.b8 - 8 * e.b4 * e.b4 * e.b4 - 27 * e.b6 * e.b6 + 9 * e.b2 * e.b4 * e.b6;
    if (e.disc == 0) throw input_error(kModule, "singular curve (discriminant is zero)");
    if (1728 * e.disc != e.c4 * e.c4 * e.c4 - e.c6 * e.c6)
        throw internal_error(kModule, "1728*disc != c4^3 - c6^2");
    Int num = e.c4 * e.c4 * e.c4;
    Int den = e.disc;
    Int g = gcd(num, den);
    if (g != 0) { num /= g; den /= g; }
    if (den < 0) { num = -num; den = -den; }
    e.j_num = num;
    e.j_den = den;
    if (e.disc % e.j_den != 0) throw internal_error(kModule, "j denominator does not divide disc");
    return e;
}

unsigned valuation(const Int& n, const Int& p) {
    if (n == 0) throw internal_error(kModule, "valuation of zero");
    unsigned v = 0;
    Int m = n;
    while (m % p == 0) { m /= p; v++; }
    return v;
}

namespace {

// Rebuild the reduced integral model from (c4, c6). This is the normal form
// with a1, a3 in {0,1} and a2 in {-1,0,1}; it exists whenever (c4, c6) come
// from an integral model with powers of a prime >= 5 divided out.
Curve model_from_c4c6(const Int& c4, const Int& c6) {
    Int x = mod_floor(-c6, 12);
    Int b2 = x <= 6 ? x : x - 12;
    Int num_b4 = b2 * b2 - c4;
    if (num_b4 % 24 != 0) throw internal_error(kModule, "invariant reconstruction: b4 not integral");
    Int b4 = num_b4 / 24;
    Int num_b6 = b2 * b2 * b2 - 3 * c4 * b2 - 2 * c6;
    if (num_b6 % 432 != 0) throw internal_error(kModule, "invariant reconstruction: b6 not integral");
    Int b6 = num_b6 / 432;
    Int a1 = mod_floor(b2, 2);
    Int a2 = (b2 - a1) / 4;
    Int a3 = mod_floor(b6, 2);
    Int a6 = (b6 - a3) / 4;
    Int num_a4 = b4 - a1 * a3;
    if (num_a4 % 2 != 0) throw internal_error(kModule, "invariant reconstruction: a4 not integral");
    Int a4 = num_a4 / 2;
    Curve m = build_curve(a1, a2, a3, a4, a6);
    if (m.c4 != c4 || m.c6 != c6) throw internal_error(kModule, "invariant reconstruction mismatch");
    return m;
}

}  // namespace

Curve minimal_model_at(const Curve& e, const Int& p) {
    if (p < 5) throw input_error(kModule, "minimal_model_at requires p >= 5");
    unsigned vd = valuation(e.disc, p);
    unsigned k = vd / 12;
    if (e.c4 != 0) k = std::min(k, valuation(e.c4, p) / 4);
    if (e.c6 != 0) k = std::min(k, valuation(e.c6, p) / 6);
    if (k == 0) return e;
    Int p4 = pow(p, 4 * k), p6 = pow(p, 6 * k);
    return model_from_c4c6(e.c4 / p4, e.c6 / p6);
}

namespace {

// Factor |n| by trial division, then a primality check on the cofactor.
// Reduction profiles need the full prime support of disc; a huge composite
// cofactor we cannot split is an input we refuse rather than misclassify.
std::vector<std::pair<Int, unsigned>> factor_abs(const Int& n) {
    std::vector<std::pair<Int, unsigned>> out;
    Int m = abs(n);
    for (std::uint64_t q : arith::primes_up_to(100000)) {
        if (m % q == 0) {
            unsigned v = 0;
            while (m % q == 0) { m /= q; v++; }
            out.emplace_back(Int(q), v);
        }
        if (m == 1) break;
    }
    if (m > 1) {
        if (!boost::multiprecision::miller_rabin_test(m, 32))
            throw input_error(kModule, "cannot factor discriminant cofactor " + m.str());
        out.emplace_back(m, 1u);
    }
    return out;
}

void validate_override(const Int& p, const OverrideEntry& o) {
    bool ok = false;
    switch (o.kind) {
        case ReductionKind::Good: ok = o.conductor_exponent == 0; break;
        case ReductionKind::MultiplicativeSplit:
        case ReductionKind::MultiplicativeNonsplit: ok = o.conductor_exponent == 1; break;
        case ReductionKind::Additive:
            if (p == 2) ok = o.conductor_exponent >= 2 && o.conductor_exponent <= 8;
            else if (p == 3) ok = o.conductor_exponent >= 2 && o.conductor_exponent <= 5;
            else ok = o.conductor_exponent == 2;
            break;
    }
    if (!ok)
        throw input_error(kModule, "override at p=" + p.str() + " violates conductor-exponent rules");
}

}  // namespace

ReductionProfile reduction_profile(const Curve& e, const std::map<Int, OverrideEntry>& overrides) {
    std::map<Int, ReductionEntry> entries;
    for (const auto& [p, o] : overrides) {
        validate_override(p, o);
        entries[p] = ReductionEntry{p, o.kind, o.conductor_exponent, ReductionSource::UserOverride};
    }
    for (const auto& [p, v] : factor_abs(e.disc)) {
        (void)v;
        if (entries.count(p)) continue;
        if (p == 2 || p == 3)
            throw input_error(kModule, "missing reduction override for p=" + p.str() +
                                           " (required when 2 or 3 divides the discriminant)");
        Curve m = minimal_model_at(e, p);
        ReductionEntry entry{p, ReductionKind::Good, 0, ReductionSource::Computed};
        if (m.disc % p == 0) {
            if (m.c4 % p == 0) {
                entry.kind = ReductionKind::Additive;
                entry.conductor_exponent = 2;
            } else {
                entry.kind = arith::legendre(mod_floor(-m.c6, p), p) == 1
                                 ? ReductionKind::MultiplicativeSplit
                                 : ReductionKind::MultiplicativeNonsplit;
                entry.conductor_exponent = 1;
            }
        }
        entries[p] = entry;
    }
    ReductionProfile profile;
    profile.conductor_norm = 1;
    profile.additive_count = 0;
    for (auto& [p, entry] : entries) {
        profile.conductor_norm *= pow(p, entry.conductor_exponent);
        if (entry.kind == ReductionKind::Additive) profile.additive_count++;
        profile.entries.push_back(entry);
    }
    return profile;
}

std::vector<Int> ReductionProfile::additive_primes() const {
    std::vector<Int> out;
    for (const auto& entry : entries)
        if (entry.kind == ReductionKind::Additive) out.push_back(entry.p);
    return out;
}

std::optional<ReductionEntry> ReductionProfile::at(const Int& p) const {
    for (const auto& entry : entries)
        if (entry.p == p) return entry;
    return std::nullopt;
}

const char* reduction_kind_name(ReductionKind k) {
    switch (k) {
        case ReductionKind::Good: return "good";
        case ReductionKind::MultiplicativeSplit: return "multiplicative-split";
        case ReductionKind::MultiplicativeNonsplit: return "multiplicative-nonsplit";
        case ReductionKind::Additive: return "additive";
    }
    return "?";
}

}  // namespace excprime
