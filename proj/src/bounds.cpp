#include "excprime/bounds.hpp"

#include "excprime/arith.hpp"
#include "excprime/errors.hpp"
#include "excprime/gl2.hpp"

namespace excprime::bounds {

namespace {
constexpr const char* kModule = "bound-calculus";

Real log_r(const Real& x) { return log(x); }

Real log_int(const Int& n) { return log(Real(n)); }

}  // namespace

FieldInvariants rationals() { return FieldInvariants{}; }

void validate(const FieldInvariants& inv) {
    if (inv.degree < 1) throw input_error(kModule, "field degree must be >= 1");
    if (inv.regulator <= 0) throw input_error(kModule, "regulator must be positive");
    if (inv.class_number < 1) throw input_error(kModule, "class number must be >= 1");
    if (inv.abs_disc < 1) throw input_error(kModule, "|disc| must be >= 1");
    if (inv.degree == 1) {
        if (inv.unit_rank != 0 || inv.regulator != 1 || inv.class_number != 1 || inv.abs_disc != 1 ||
            !inv.ramified_primes.empty())
            throw input_error(kModule, "degree-1 invariants must collapse to the rational defaults");
    }
}

void validate(const ConstantsProfile& p) {
    for (const Real* c : {&p.c_chebotarev, &p.c_avoidance, &p.c_reducible_product, &p.c_reducible_single,
                          &p.c_v_exceptional, &p.c_bootstrap, &p.c_effective_single, &p.c_effective_product,
                          &p.c_cm_exception})
        if (*c <= 0) throw input_error(kModule, "profile constants must be positive");
    if (p.reducible_single_exponent != 3 && p.reducible_single_exponent != 6)
        throw input_error(kModule, "reducible_single_exponent must be 3 or 6");
}

Real chebotarev_bound(const Real& log_disc_L, const ConstantsProfile& profile) {
    if (log_disc_L <= 0) throw input_error(kModule, "chebotarev_bound needs a positive log-discriminant");
    return profile.c_chebotarev * log_disc_L * log_disc_L;
}

Real extension_disc_bound(unsigned d, const Real& avoided_norm, const FieldInvariants& inv) {
    if (d < 1) throw input_error(kModule, "degree must be >= 1");
    if (avoided_norm < 1) throw input_error(kModule, "avoided norm must be >= 1");
    Real log_dk = log_int(inv.abs_disc);
    Real disc4 = Real(inv.abs_disc);
    disc4 = disc4 * disc4 * disc4 * disc4;
    Real inner = log_dk + log_r(6 * avoided_norm * disc4) + Real(inv.degree) * log_r(Real(d));
    return 6 * Real(d) * inner;
}

Real avoidance_bound(unsigned d, const Real& avoided_norm, const FieldInvariants& inv,
                     const ConstantsProfile& profile) {
    if (d < 1) throw input_error(kModule, "degree must be >= 1");
    if (avoided_norm < 1) throw input_error(kModule, "avoided norm must be >= 1");
    Real inner = log_r(avoided_norm) + log_int(inv.abs_disc) + Real(inv.degree) * log_r(Real(d));
    return profile.c_avoidance * Real(d) * Real(d) * inner * inner;
}

ReducibleBounds reducible_bounds(const Real& p, const Real& conductor_norm,
                                 const ConstantsProfile& profile) {
    if (p < 1 || conductor_norm < 1)
        throw input_error(kModule, "reducible_bounds needs p >= 1 and conductor norm >= 1");
    Real logs = log_r(conductor_norm) + log_r(p);
    ReducibleBounds out;
    out.product = profile.c_reducible_product * pow(p, 36) * pow(logs, 12);
    out.single_exponent = profile.reducible_single_exponent;
    out.single = profile.c_reducible_single * pow(p, out.single_exponent) * logs;
    return out;
}

Int character_space_bound(unsigned additive_count, const FieldInvariants& inv) {
    return pow(Int(2), additive_count + 2 * inv.degree) * inv.class_number;
}

std::pair<Int, Int> v_exceptional_exponent(unsigned dim) {
    if (dim < 1) throw input_error(kModule, "character-space dimension must be >= 1");
    // 2 - 2^(1-d) = (2^d - 1) / 2^(d-1)
    return {pow(Int(2), dim) - 1, pow(Int(2), dim - 1)};
}

Real v_exceptional_bound(unsigned dim, const Real& p, const Real& conductor_norm,
                         const ConstantsProfile& profile) {
    if (p < 1 || conductor_norm < 1)
        throw input_error(kModule, "v_exceptional_bound needs p >= 1 and conductor norm >= 1");
    auto [num, den] = v_exceptional_exponent(dim);
    Real exponent = Real(num) / Real(den);
    Real base = profile.c_v_exceptional * pow(Real(2), static_cast<int>(dim)) * pow(p, 3) *
                (log_r(conductor_norm) + log_r(p));
    return pow(base, exponent);
}

Real theta_below(std::uint64_t x) {
    Real sum = 0;
    if (x <= 2) return sum;
    for (std::uint64_t q : arith::primes_up_to(x - 1)) sum += log_r(Real(q));
    return sum;
}

BootstrapResult bootstrap_check(const std::set<std::uint64_t>& S, const Real& A, const Real& b,
                                const ConstantsProfile& profile, const FieldInvariants& inv) {
    if (A < 1) throw input_error(kModule, "bootstrap_check needs A >= 1");
    BootstrapResult r;
    std::uint64_t p = 53;
    while (S.count(p) || !gl2::is_acceptable(p, inv.ramified_primes)) p = arith::next_prime(p);
    r.p = p;
    r.theta_p = theta_below(p);
    r.log_product = 0;
    bool covers = true;
    for (std::uint64_t q : arith::primes_up_to(p - 1))
        if (!S.count(q)) { covers = false; break; }
    for (std::uint64_t s : S) r.log_product += log_r(Real(s));
    r.chain_applicable = covers;
    r.chain_holds = !covers || r.theta_p <= r.log_product;
    r.rhs = log_r(A) + b * log_r(Real(p));
    r.implied_bound = profile.c_bootstrap * (log_r(A) + log_r(Real(p)) + 1);
    r.holds = Real(p) <= r.implied_bound;
    return r;
}

EffectiveBounds effective_bounds(const Real& conductor_norm, unsigned additive_count,
                                 const ConstantsProfile& profile) {
    if (conductor_norm < 1) throw input_error(kModule, "conductor norm must be >= 1");
    Real L = log_r(conductor_norm);
    // loglog clamped at 1 below e^e, where the asymptotic shape says nothing
    Real LL = 1;
    Real ee = exp(exp(Real(1)));
    if (conductor_norm > ee) LL = log_r(L);
    if (LL < 1) LL = 1;
    EffectiveBounds out;
    out.single = profile.c_effective_single * L * pow(LL, 3);
    Real four_a = pow(Real(4), static_cast<int>(additive_count));
    out.product = profile.c_effective_product * four_a * pow(L, 14) *
                  pow(Real(additive_count) + LL, 6) * pow(LL, 36);
    out.product_simplified = profile.c_effective_product * four_a * pow(L, 21);
    return out;
}

CmExceptionBounds cm_exception_bounds(const FieldInvariants& inv, const Real& c_abs) {
    if (c_abs <= 0) throw input_error(kModule, "cm_exception_bounds needs a positive constant");
    Real common = Real(inv.regulator) * pow(Real(inv.degree), static_cast<int>(inv.unit_rank));
    Real log_dk = log_int(inv.abs_disc);
    Real scale = pow(c_abs, static_cast<int>(inv.degree));
    CmExceptionBounds out;
    out.single = exp(scale * (common + Real(inv.class_number) * log_dk));
    out.product = exp(scale * (common + Real(inv.class_number) * Real(inv.class_number) * log_dk * log_dk));
    return out;
}

Real class_number_bound(const Int& abs_disc) {
    if (abs_disc < 1) throw input_error(kModule, "|disc| must be >= 1");
    return pow(Real(abs_disc), Real(3) / 2);
}

bool class_number_consistent(const FieldInvariants& inv) {
    return Real(inv.class_number) <= class_number_bound(inv.abs_disc);
}

}  // namespace excprime::bounds
