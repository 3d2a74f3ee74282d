#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "excprime/numeric.hpp"

namespace excprime::gl2 {

// Element of GL_2(F_ell). Entries are reduced residues; det != 0 is checked
// on construction.
struct Mat2 {
    std::uint32_t ell;
    std::uint32_t a, b, c, d;

    std::uint32_t det() const;
    std::uint32_t trace() const;
    bool is_scalar() const;
    bool operator==(const Mat2&) const = default;
};

Mat2 mat(std::uint32_t ell, std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d);
Mat2 mul(const Mat2& x, const Mat2& y);
Mat2 identity(std::uint32_t ell);

// Acceptable prime: p >= 53 and unramified in K (here: not in the given
// ramified set).
bool is_acceptable(std::uint64_t p, const std::set<std::uint64_t>& ramified_primes);

enum class FamilyKind {
    Borel,
    CartanSplit,
    CartanNonsplit,
    NormalizerSplit,
    NormalizerNonsplit,
    SpecialLinear,
    FullLinear,
    IrregularA4,
    IrregularS4,
    IrregularA5,
};

const char* family_name(FamilyKind k);

// A reference subgroup family: generators plus exact order, a parametric
// membership test, and a uniform sampler (used at ell where full closure is
// not wanted). The irregular lifts carry generators only; sample/contains
// fall back to the cached closure.
struct SubgroupFamily {
    FamilyKind kind;
    std::uint32_t ell;
    std::uint32_t eps = 0;  // nonresidue for the nonsplit constructions
    std::vector<Mat2> generators;
    Int order;

    bool contains(const Mat2& m) const;
    Mat2 sample(std::mt19937_64& rng) const;

  private:
    mutable std::vector<Mat2> closure_cache_;
};

// Split/nonsplit Cartan subgroup or its normalizer. eps defaults to the
// smallest nonresidue; the normalizer adjoins the line-swapping involution
// ([[0,1],[1,0]] split, [[1,0],[0,-1]] nonsplit).
SubgroupFamily cartan(std::uint32_t ell, bool split, bool normalizer,
                      std::optional<std::uint32_t> eps = std::nullopt);

SubgroupFamily make_family(FamilyKind kind, std::uint32_t ell);

// True iff the irregular family embeds with proper projective image at ell
// (A4, S4: ell >= 5; A5: ell = +-1 mod 5, excluding ell = 5 where the lift
// already generates SL_2).
bool irregular_embeds(FamilyKind kind, std::uint32_t ell);

// Multiplicative closure by breadth-first products; throws once the set
// exceeds cap.
std::vector<Mat2> closure(const std::vector<Mat2>& generators, std::size_t cap = 30000);

enum class SubgroupTag { Reducible, NormalizerNotCartan, ContainsSL2, Irregular, CartanOnly, Other };

enum class IrregularPattern { None, A4, S4, A5 };

struct SubgroupClass {
    SubgroupTag tag;
    IrregularPattern pattern = IrregularPattern::None;
    std::string evidence;
};

const char* subgroup_tag_name(SubgroupTag t);
const char* irregular_pattern_name(IrregularPattern p);

// Classification of an explicitly closed subgroup, in priority order:
// a common eigenline over F_{ell^2} (reducible), a preserved unordered
// line-pair (normalizer / cartan-only), SL_2 containment, then projective
// A4/S4/A5 order statistics.
SubgroupClass classify_subgroup(const std::vector<Mat2>& elements, std::uint32_t ell);

// Largest order of an element image in PGL_2(F_ell).
unsigned max_projective_order(const std::vector<Mat2>& elements, std::uint32_t ell);

unsigned projective_order(const Mat2& m);

// Projective-order fingerprint from (trace, det) alone, via u = t^2/q:
// u=4 -> order 1 or ell, u=0 -> 2, u=1 -> 3, u=2 -> 4, u^2-3u+1=0 -> 5,
// anything else -> order above 5.
enum class TraceOrderClass { OneOrEll, Two, Three, Four, Five, AboveFive };

const char* trace_order_class_name(TraceOrderClass c);

TraceOrderClass projective_order_of_trace(std::uint64_t t, std::uint64_t q, std::uint32_t ell);

// Expected image-classifier verdict name for a full (tr, det) multiset of the
// family, used by the oracle tests and the self-test command.
std::string expected_stream_verdict(FamilyKind kind, std::uint32_t ell);

}  // namespace excprime::gl2
