#include "excprime/classifier.hpp"

#include <algorithm>
#include <set>

#include "excprime/arith.hpp"
#include "excprime/errors.hpp"
#include "excprime/gl2.hpp"

namespace excprime::classifier {

namespace {
constexpr const char* kModule = "image-classifier";

bool usable_record(const FrobeniusRecord& r, std::uint64_t ell) { return r.p != ell; }

}  // namespace

WitnessSet collect_witnesses(const TraceTable& table, std::uint64_t ell) {
    if (ell < 2) throw input_error(kModule, "ell must be prime");
    WitnessSet w;
    w.ell = ell;
    std::set<std::uint64_t> dets;
    for (const auto& r : table.records) {
        if (!usable_record(r, ell)) continue;
        w.sampled++;
        std::uint64_t t = static_cast<std::uint64_t>(((r.a_p % static_cast<std::int64_t>(ell)) + static_cast<std::int64_t>(ell)) % static_cast<std::int64_t>(ell));
        std::uint64_t q = r.p % ell;
        dets.insert(q);
        if (t == 0) w.zero_trace_count++;
        if (ell == 2) continue;  // quadratic fingerprints are degenerate mod 2
        std::uint64_t delta = (t * t % ell + 4 * ell - 4 * q % ell) % ell;
        int chi = delta == 0 ? 0 : arith::legendre(delta, ell);
        if (!w.irreducible && chi == -1 && t != 0) w.irreducible = r.p;
        if (!w.split && chi == 1 && t != 0) w.split = r.p;
        if (!w.big_order &&
            gl2::projective_order_of_trace(t, q, static_cast<std::uint32_t>(ell)) ==
                gl2::TraceOrderClass::AboveFive)
            w.big_order = r.p;
    }
    if (w.sampled == 0) throw input_error(kModule, "empty trace table");
    w.det_coverage = arith::generates_units(dets, ell);
    return w;
}

bool certify_surjective(const WitnessSet& w) {
    return w.irreducible && w.split && w.big_order && w.det_coverage;
}

bool detect_reducible(const TraceTable& table, std::uint64_t ell) {
    if (ell == 2) {
        bool any = false;
        for (const auto& r : table.records) {
            if (!usable_record(r, ell)) continue;
            any = true;
            if (r.a_p % 2 != 0) return false;
        }
        if (!any) throw input_error(kModule, "empty trace table");
        return true;
    }
    bool any = false;
    for (const auto& r : table.records) {
        if (!usable_record(r, ell)) continue;
        any = true;
        std::uint64_t t = static_cast<std::uint64_t>(((r.a_p % static_cast<std::int64_t>(ell)) + static_cast<std::int64_t>(ell)) % static_cast<std::int64_t>(ell));
        std::uint64_t q = r.p % ell;
        std::uint64_t delta = (t * t % ell + 4 * ell - 4 * q % ell) % ell;
        if (delta != 0 && arith::legendre(delta, ell) == -1) return false;
    }
    if (!any) throw input_error(kModule, "empty trace table");
    return true;
}

namespace {

// Candidate discriminants: products of prime discriminants over the odd
// additive primes, with a 2-part in {-4, 8, -8} allowed only when 2 is
// additive. Characters ramified at an infinite place only do not exist over
// the rationals, so no additive primes means no candidates.
std::vector<std::int64_t> candidate_discriminants(const std::vector<Int>& additive_primes) {
    bool two_additive = false;
    std::vector<std::int64_t> odd_parts{1};
    for (const Int& p : additive_primes) {
        if (p == 2) {
            two_additive = true;
            continue;
        }
        if (p > 1000000) continue;  // character search is desk scale
        std::int64_t star = arith::prime_discriminant(static_cast<std::uint64_t>(p));
        std::size_t n = odd_parts.size();
        if (n > 4096) throw input_error(kModule, "too many additive primes for character search");
        for (std::size_t i = 0; i < n; i++) odd_parts.push_back(odd_parts[i] * star);
    }
    std::vector<std::int64_t> out;
    std::vector<std::int64_t> two_parts{1};
    if (two_additive) two_parts = {1, -4, 8, -8};
    for (std::int64_t odd : odd_parts)
        for (std::int64_t two : two_parts) {
            std::int64_t d = odd * two;
            if (d != 1) out.push_back(d);
        }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

CharacterSearch extract_normalizer_character(const TraceTable& table, std::uint64_t ell,
                                             const std::vector<Int>& additive_primes) {
    CharacterSearch result;
    std::vector<std::int64_t> candidates = candidate_discriminants(additive_primes);
    result.candidates = static_cast<unsigned>(candidates.size());
    std::optional<std::int64_t> found;
    for (std::int64_t d : candidates) {
        bool ok = true;
        for (const auto& r : table.records) {
            if (!usable_record(r, ell)) continue;
            std::int64_t p = static_cast<std::int64_t>(r.p);
            if (d % p == 0) continue;  // skip primes dividing the conductor of the character
            bool zero_trace = (r.a_p % static_cast<std::int64_t>(ell)) == 0;
            bool inert = arith::kronecker(d, p) == -1;
            if (zero_trace != inert) { ok = false; break; }
        }
        if (ok) {
            result.matches++;
            if (!found) found = d;
        }
    }
    if (result.matches == 1) result.character = QuadraticCharacter{*found};
    return result;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Surjective: return "surjective";
        case Verdict::ReducibleCandidate: return "reducible-candidate";
        case Verdict::NormalizerCandidate: return "normalizer-candidate";
        case Verdict::IrregularCandidate: return "irregular-candidate";
        case Verdict::Undetermined: return "undetermined";
    }
    return "?";
}

ClassifiedEntry classify(const TraceTable& table, std::uint64_t ell,
                         const std::vector<Int>& additive_primes) {
    ClassifiedEntry entry;
    entry.ell = ell;
    entry.witnesses = collect_witnesses(table, ell);
    if (ell == 2 || ell == 3) {
        entry.small_ell_heuristic = true;
        entry.verdict = detect_reducible(table, ell) ? Verdict::ReducibleCandidate : Verdict::Undetermined;
        return entry;
    }
    const WitnessSet& w = entry.witnesses;
    if (certify_surjective(w)) {
        entry.verdict = Verdict::Surjective;
        return entry;
    }
    if (detect_reducible(table, ell)) {
        entry.verdict = Verdict::ReducibleCandidate;
        return entry;
    }
    double zero_fraction = static_cast<double>(w.zero_trace_count) / static_cast<double>(w.sampled);
    if (zero_fraction >= 0.35 && zero_fraction <= 0.65) {
        CharacterSearch search = extract_normalizer_character(table, ell, additive_primes);
        entry.character_ambiguous = search.matches > 1;
        if (search.character) {
            entry.character = search.character->discriminant;
            entry.verdict = Verdict::NormalizerCandidate;
            return entry;
        }
    }
    if (!w.big_order) {
        entry.verdict = Verdict::IrregularCandidate;
        return entry;
    }
    entry.verdict = Verdict::Undetermined;
    return entry;
}

ImageReport classify_range(const TraceTable& table, std::uint64_t scan_bound,
                           const std::vector<Int>& additive_primes, std::uint64_t trace_bound) {
    if (scan_bound < 37) throw input_error(kModule, "scan bound must be >= 37");
    ImageReport report;
    report.scan_bound = scan_bound;
    report.trace_bound = trace_bound;
    for (std::uint64_t ell : arith::primes_up_to(scan_bound))
        report.entries.push_back(classify(table, ell, additive_primes));
    return report;
}

std::vector<std::uint64_t> ImageReport::candidate_ells() const {
    std::vector<std::uint64_t> out;
    for (const auto& e : entries)
        if (e.verdict == Verdict::ReducibleCandidate || e.verdict == Verdict::NormalizerCandidate ||
            e.verdict == Verdict::IrregularCandidate)
            out.push_back(e.ell);
    return out;
}

Int ImageReport::candidate_product() const {
    Int prod = 1;
    for (std::uint64_t ell : candidate_ells()) prod *= ell;
    return prod;
}

VBookkeeping v_exceptional_bookkeeping(const ImageReport& report, const std::vector<std::int64_t>& basis) {
    for (std::int64_t d : basis)
        if (!arith::is_fundamental_discriminant(d) || d == 1)
            throw input_error(kModule, "basis entries must be nontrivial fundamental discriminants");
    std::set<std::int64_t> span{1};
    for (std::int64_t d : basis) {
        std::set<std::int64_t> next = span;
        for (std::int64_t s : span) next.insert(arith::character_product(s, d));
        span = next;
    }
    VBookkeeping out;
    for (const auto& e : report.entries) {
        if (e.verdict != Verdict::NormalizerCandidate || !e.character) continue;
        if (span.count(*e.character))
            out.groups[*e.character].push_back(e.ell);
        else
            out.not_in_span.emplace_back(e.ell, *e.character);
    }
    return out;
}

TraceTable table_from_elements(std::uint64_t ell,
                               const std::vector<std::pair<std::uint32_t, std::uint32_t>>& trace_det,
                               std::optional<std::int64_t> planted_character) {
    TraceTable table;
    table.curve_id = "synthetic mod " + std::to_string(ell);
    // centered lifts need 2 sqrt(p) >= ell / 2
    std::uint64_t p_min = std::max<std::uint64_t>(11, ell * ell / 16 + 1);
    std::set<std::uint64_t> used;
    for (const auto& [t, q] : trace_det) {
        if (q % ell == 0) throw input_error(kModule, "synthetic element has zero determinant");
        std::int64_t lift = static_cast<std::int64_t>(t % ell);
        if (lift > static_cast<std::int64_t>(ell / 2)) lift -= static_cast<std::int64_t>(ell);
        bool zero_trace = (t % ell) == 0;
        std::uint64_t p = arith::is_prime(p_min) ? p_min : arith::next_prime(p_min);
        for (;; p = arith::next_prime(p)) {
            if (used.count(p) || p % ell != q % ell) continue;
            if (planted_character) {
                if (*planted_character % static_cast<std::int64_t>(p) == 0) continue;
                bool inert = arith::kronecker(*planted_character, static_cast<std::int64_t>(p)) == -1;
                if (inert != zero_trace) continue;
            }
            break;
        }
        used.insert(p);
        if (Int(lift) * lift > 4 * Int(p))
            throw internal_error(kModule, "synthetic lift violates the Weil bound");
        table.records.push_back(FrobeniusRecord{p, lift});
    }
    std::sort(table.records.begin(), table.records.end(),
              [](const FrobeniusRecord& a, const FrobeniusRecord& b) { return a.p < b.p; });
    return table;
}

}  // namespace excprime::classifier
