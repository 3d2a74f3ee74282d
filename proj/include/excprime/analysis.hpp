#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "excprime/bounds.hpp"
#include "excprime/cheblab.hpp"
#include "excprime/classifier.hpp"
#include "excprime/curve.hpp"
#include "excprime/frobenius.hpp"

namespace excprime::analysis {

using json = nlohmann::ordered_json;

struct CurveSpec {
    std::array<Int, 5> ainvs;  // a1, a2, a3, a4, a6
    std::map<Int, OverrideEntry> overrides;
    std::optional<std::string> label;
};

// Accepts the JSON object form {"ainvs": [...], "overrides": {...}, "label": ...}
// or the CSV shorthand "a1,a2,a3,a4,a6".
CurveSpec parse_curve_spec(const std::string& text);
CurveSpec parse_curve_json(const json& j);

bounds::FieldInvariants parse_field_invariants(const json& j);
bounds::ConstantsProfile parse_constants_profile(const json& j);
json field_invariants_json(const bounds::FieldInvariants& inv);
json constants_profile_json(const bounds::ConstantsProfile& profile);

struct AnalysisConfig {
    CurveSpec curve;
    std::uint64_t trace_bound = 10000;           // >= 100
    std::optional<std::uint64_t> scan_bound;     // default max(100, ceil(effective single bound))
    bounds::ConstantsProfile profile;
    bounds::FieldInvariants field;
    unsigned jobs = 1;
    std::optional<std::string> cache_dir;
};

// Full pipeline: curve invariants, reduction profile, trace table,
// per-ell image report, candidate set, bound ladder, and the candidate-vs-
// bound comparisons. Deterministic: byte-identical JSON for repeated runs,
// any jobs value, warm or cold cache.
json run_analysis(const AnalysisConfig& config);

json run_compare(const CurveSpec& a, const CurveSpec& b, std::optional<CompareMode> mode,
                 std::uint64_t bound, unsigned jobs, const std::optional<std::string>& cache_dir);

struct BoundsRequest {
    bounds::FieldInvariants field;
    bounds::ConstantsProfile profile;
    bool profile_supplied = false;
    Real conductor_norm = 37;
    unsigned additive_count = 0;
    std::uint64_t unexceptional_prime = 53;
};

json run_bounds(const BoundsRequest& req);

json run_cheblab(const cheblab::SweepOptions& opts);
std::string cheblab_csv(const std::vector<cheblab::LeastPrimeDatum>& data);

json run_gl2_selftest(const std::vector<std::uint32_t>& ells);

std::string render_text(const json& report);  // aligned text rendering of any run_* report

}  // namespace excprime::analysis
