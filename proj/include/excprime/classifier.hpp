#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "excprime/frobenius.hpp"
#include "excprime/numeric.hpp"

namespace excprime::classifier {

// Fingerprint witnesses collected from a trace table at a fixed ell:
//   irreducible  - smallest good p != ell with a_p^2 - 4p a nonzero
//                  nonsquare mod ell and a_p != 0 mod ell
//   split        - same with a nonzero square discriminant
//   big_order    - smallest p whose (a_p, p) fingerprint forces projective
//                  order above 5
// plus the count of a_p = 0 mod ell and whether the observed determinants
// (p mod ell) generate the full unit group.
struct WitnessSet {
    std::uint64_t ell = 0;
    std::uint64_t sampled = 0;
    std::optional<std::uint64_t> irreducible;
    std::optional<std::uint64_t> split;
    std::optional<std::uint64_t> big_order;
    std::uint64_t zero_trace_count = 0;
    bool det_coverage = false;
};

WitnessSet collect_witnesses(const TraceTable& table, std::uint64_t ell);

// One-sided certification: all three witnesses plus determinant coverage
// pin the image to the full linear group. False certifies nothing.
bool certify_surjective(const WitnessSet& w);

// Necessary condition for a rational line: every sampled discriminant
// a_p^2 - 4p is a square (possibly zero) mod ell. A candidate flag, not a
// certificate.
bool detect_reducible(const TraceTable& table, std::uint64_t ell);

// Quadratic character as a fundamental discriminant, evaluated through the
// Kronecker symbol.
struct QuadraticCharacter {
    std::int64_t discriminant;
};

struct CharacterSearch {
    std::optional<QuadraticCharacter> character;  // unique match, if any
    unsigned candidates = 0;
    unsigned matches = 0;  // > 1 means ambiguous
};

// Searches the fundamental discriminants whose odd support lies in the
// additive primes (2-part allowed only when 2 is additive, sign free) for
// the unique D with (D/p) = -1 exactly at the zero-trace primes.
CharacterSearch extract_normalizer_character(const TraceTable& table, std::uint64_t ell,
                                             const std::vector<Int>& additive_primes);

enum class Verdict { Surjective, ReducibleCandidate, NormalizerCandidate, IrregularCandidate, Undetermined };

const char* verdict_name(Verdict v);

struct ClassifiedEntry {
    std::uint64_t ell;
    Verdict verdict;
    WitnessSet witnesses;
    std::optional<std::int64_t> character;
    bool character_ambiguous = false;
    bool small_ell_heuristic = false;  // ell in {2, 3}: parity / discriminant heuristics only
};

// Priority: certified surjective, then reducible candidate, then normalizer
// candidate (zero-trace fraction in [0.35, 0.65] and a character extracted),
// then irregular candidate (no fingerprint above order 5), else undetermined.
// ell = 2 and ell = 3 only ever report reducible-candidate or undetermined.
ClassifiedEntry classify(const TraceTable& table, std::uint64_t ell,
                         const std::vector<Int>& additive_primes);

struct ImageReport {
    std::uint64_t trace_bound = 0;
    std::uint64_t scan_bound = 0;
    std::vector<ClassifiedEntry> entries;

    std::vector<std::uint64_t> candidate_ells() const;  // non-surjective candidate verdicts
    Int candidate_product() const;
};

ImageReport classify_range(const TraceTable& table, std::uint64_t scan_bound,
                           const std::vector<Int>& additive_primes, std::uint64_t trace_bound);

// Groups normalizer-candidate primes by their character's membership in the
// span of a basis of fundamental discriminants; characters multiply by
// discriminant product reduced to fundamental form.
struct VBookkeeping {
    std::map<std::int64_t, std::vector<std::uint64_t>> groups;
    std::vector<std::pair<std::uint64_t, std::int64_t>> not_in_span;
};

VBookkeeping v_exceptional_bookkeeping(const ImageReport& report, const std::vector<std::int64_t>& basis);

// Synthetic trace table from a (trace, det) multiset mod ell: each element is
// assigned a distinct prime p = det (mod ell) large enough for a centered
// Weil-admissible lift, and when a character is planted the prime is chosen
// with (D/p) = -1 exactly for the zero-trace elements. This is the bridge
// from gl2 subgroup data to the table classifier, used by the oracle tests
// and the self-test command.
TraceTable table_from_elements(std::uint64_t ell,
                               const std::vector<std::pair<std::uint32_t, std::uint32_t>>& trace_det,
                               std::optional<std::int64_t> planted_character = std::nullopt);

}  // namespace excprime::classifier
