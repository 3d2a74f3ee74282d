#include "excprime/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "excprime/arith.hpp"
#include "excprime/errors.hpp"
#include "excprime/gl2.hpp"

namespace excprime::analysis {

namespace {

constexpr const char* kModule = "cli-reporting";
constexpr const char* kToolName = "excprime";
constexpr const char* kToolVersion = "0.1.0";
constexpr const char* kDisclaimer =
    "bound values are relative to the active constants profile; the underlying results only "
    "assert existence of such constants, so none of these numbers is a theorem";

json tool_header(const char* report) {
    json j;
    j["name"] = kToolName;
    j["version"] = kToolVersion;
    j["report"] = report;
    return j;
}

Int parse_int(const json& v, const char* what) {
    try {
        if (v.is_string()) return Int(v.get<std::string>());
        if (v.is_number_integer()) return Int(v.get<long long>());
    } catch (const std::exception&) {
    }
    throw input_error(kModule, std::string("expected an integer for ") + what);
}

Real parse_real(const json& v, const char* what) {
    try {
        if (v.is_string()) return Real(v.get<std::string>());
        if (v.is_number()) return Real(v.dump());
    } catch (const std::exception&) {
    }
    throw input_error(kModule, std::string("expected a number for ") + what);
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

CurveSpec parse_curve_json(const json& j) {
    if (!j.is_object() || !j.contains("ainvs"))
        throw input_error(kModule, "curve JSON must be an object with an \"ainvs\" field");
    const json& a = j.at("ainvs");
    if (!a.is_array() || a.size() != 5)
        throw input_error(kModule, "\"ainvs\" must list the five coefficients [a1,a2,a3,a4,a6]");
    CurveSpec spec;
    for (std::size_t i = 0; i < 5; i++) spec.ainvs[i] = parse_int(a[i], "ainvs");
    if (j.contains("overrides")) {
        const json& o = j.at("overrides");
        if (!o.is_object()) throw input_error(kModule, "\"overrides\" must be an object keyed by prime");
        for (auto it = o.begin(); it != o.end(); ++it) {
            Int p;
            try {
                p = Int(it.key());
            } catch (const std::exception&) {
                throw input_error(kModule, "override key is not a prime: " + it.key());
            }
            const json& entry = it.value();
            std::string kind = entry.value("kind", "");
            OverrideEntry oe{};
            if (kind == "good") oe.kind = ReductionKind::Good;
            else if (kind == "split" || kind == "multiplicative-split") oe.kind = ReductionKind::MultiplicativeSplit;
            else if (kind == "nonsplit" || kind == "multiplicative-nonsplit") oe.kind = ReductionKind::MultiplicativeNonsplit;
            else if (kind == "additive") oe.kind = ReductionKind::Additive;
            else throw input_error(kModule, "override kind must be good/split/nonsplit/additive");
            unsigned default_exp = oe.kind == ReductionKind::Good ? 0
                                   : oe.kind == ReductionKind::Additive ? 2
                                                                        : 1;
            oe.conductor_exponent = entry.value("exp", default_exp);
            spec.overrides[p] = oe;
        }
    }
    if (j.contains("label")) spec.label = j.at("label").get<std::string>();
    return spec;
}

CurveSpec parse_curve_spec(const std::string& text) {
    std::string trimmed = text;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n"));
    if (!trimmed.empty() && (trimmed[0] == '{' || trimmed[0] == '[')) {
        json j;
        try {
            j = json::parse(trimmed);
        } catch (const json::parse_error& err) {
            throw input_error(kModule, std::string("curve JSON parse error: ") + err.what());
        }
        if (j.is_array()) {
            json wrapped;
            wrapped["ainvs"] = j;
            return parse_curve_json(wrapped);
        }
        return parse_curve_json(j);
    }
    // CSV shorthand "a1,a2,a3,a4,a6"
    CurveSpec spec;
    std::stringstream ss(trimmed);
    std::string item;
    std::size_t i = 0;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (i >= 5) throw input_error(kModule, "curve CSV must have exactly five coefficients");
        try {
            spec.ainvs[i++] = Int(item);
        } catch (const std::exception&) {
            throw input_error(kModule, "curve CSV: bad integer \"" + item + "\"");
        }
    }
    if (i != 5) throw input_error(kModule, "curve CSV must have exactly five coefficients");
    return spec;
}

bounds::FieldInvariants parse_field_invariants(const json& j) {
    bounds::FieldInvariants inv;
    if (!j.is_object()) throw input_error(kModule, "field invariants must be a JSON object");
    if (j.contains("degree")) inv.degree = j.at("degree").get<unsigned>();
    if (j.contains("unit_rank")) inv.unit_rank = j.at("unit_rank").get<unsigned>();
    if (j.contains("regulator")) inv.regulator = parse_real(j.at("regulator"), "regulator");
    if (j.contains("class_number")) inv.class_number = parse_int(j.at("class_number"), "class_number");
    if (j.contains("abs_disc")) inv.abs_disc = parse_int(j.at("abs_disc"), "abs_disc");
    if (j.contains("ramified_primes"))
        for (const auto& p : j.at("ramified_primes")) inv.ramified_primes.insert(p.get<std::uint64_t>());
    bounds::validate(inv);
    return inv;
}

bounds::ConstantsProfile parse_constants_profile(const json& j) {
    bounds::ConstantsProfile p;
    if (!j.is_object()) throw input_error(kModule, "constants profile must be a JSON object");
    auto grab = [&](const char* key, Real& slot) {
        if (j.contains(key)) slot = parse_real(j.at(key), key);
    };
    grab("c_chebotarev", p.c_chebotarev);
    grab("c_avoidance", p.c_avoidance);
    grab("c_reducible_product", p.c_reducible_product);
    grab("c_reducible_single", p.c_reducible_single);
    grab("c_v_exceptional", p.c_v_exceptional);
    grab("c_bootstrap", p.c_bootstrap);
    grab("c_effective_single", p.c_effective_single);
    grab("c_effective_product", p.c_effective_product);
    grab("c_cm_exception", p.c_cm_exception);
    if (j.contains("reducible_single_exponent"))
        p.reducible_single_exponent = j.at("reducible_single_exponent").get<int>();
    bounds::validate(p);
    return p;
}

json field_invariants_json(const bounds::FieldInvariants& inv) {
    json j;
    j["degree"] = inv.degree;
    j["unit_rank"] = inv.unit_rank;
    j["regulator"] = real_str(inv.regulator);
    j["class_number"] = inv.class_number.str();
    j["abs_disc"] = inv.abs_disc.str();
    j["ramified_primes"] = inv.ramified_primes;
    return j;
}

json constants_profile_json(const bounds::ConstantsProfile& p) {
    json j;
    j["c_chebotarev"] = real_str(p.c_chebotarev);
    j["c_avoidance"] = real_str(p.c_avoidance);
    j["c_reducible_product"] = real_str(p.c_reducible_product);
    j["c_reducible_single"] = real_str(p.c_reducible_single);
    j["c_v_exceptional"] = real_str(p.c_v_exceptional);
    j["c_bootstrap"] = real_str(p.c_bootstrap);
    j["c_effective_single"] = real_str(p.c_effective_single);
    j["c_effective_product"] = real_str(p.c_effective_product);
    j["c_cm_exception"] = real_str(p.c_cm_exception);
    j["reducible_single_exponent"] = p.reducible_single_exponent;
    return j;
}

namespace {

json curve_json(const Curve& e, const std::optional<std::string>& label) {
    json j;
    json ainvs = json::array();
    for (const Int* a : {&e.a1, &e.a2, &e.a3, &e.a4, &e.a6}) ainvs.push_back(a->str());
    j["ainvs"] = ainvs;
    if (label) j["label"] = *label;
    j["c4"] = e.c4.str();
    j["c6"] = e.c6.str();
    j["disc"] = e.disc.str();
    j["j_num"] = e.j_num.str();
    j["j_den"] = e.j_den.str();
    return j;
}

json reduction_json(const ReductionProfile& profile) {
    json j;
    json entries = json::array();
    for (const auto& entry : profile.entries) {
        json ej;
        ej["p"] = entry.p.str();
        ej["kind"] = reduction_kind_name(entry.kind);
        ej["conductor_exponent"] = entry.conductor_exponent;
        ej["source"] = entry.source == ReductionSource::Computed ? "computed" : "override";
        entries.push_back(ej);
    }
    j["entries"] = entries;
    j["conductor_norm"] = profile.conductor_norm.str();
    j["additive_count"] = profile.additive_count;
    return j;
}

json witnesses_json(const classifier::WitnessSet& w) {
    json j;
    j["sampled"] = w.sampled;
    j["irreducible"] = w.irreducible ? json(*w.irreducible) : json(nullptr);
    j["split"] = w.split ? json(*w.split) : json(nullptr);
    j["big_order"] = w.big_order ? json(*w.big_order) : json(nullptr);
    j["zero_trace_count"] = w.zero_trace_count;
    j["det_coverage"] = w.det_coverage;
    return j;
}

json image_json(const classifier::ImageReport& report) {
    json j;
    j["scan_bound"] = report.scan_bound;
    j["trace_bound"] = report.trace_bound;
    json entries = json::array();
    for (const auto& e : report.entries) {
        json ej;
        ej["ell"] = e.ell;
        ej["verdict"] = classifier::verdict_name(e.verdict);
        ej["witnesses"] = witnesses_json(e.witnesses);
        ej["character"] = e.character ? json(*e.character) : json(nullptr);
        ej["character_ambiguous"] = e.character_ambiguous;
        ej["small_ell_heuristic"] = e.small_ell_heuristic;
        entries.push_back(ej);
    }
    j["entries"] = entries;
    j["candidates"] = report.candidate_ells();
    j["candidate_product"] = report.candidate_product().str();
    return j;
}

struct LadderInputs {
    Real conductor_norm;
    unsigned additive_count = 0;
    std::uint64_t p_reducible = 53;
    std::uint64_t p_normalizer = 53;
    std::set<std::uint64_t> boot_set;
    Real boot_A = 1;
    Real boot_b = 0;
};

json ladder_entry(const char* id, const char* formula, json inputs, const std::string& value) {
    json j;
    j["id"] = id;
    j["formula"] = formula;
    j["inputs"] = std::move(inputs);
    j["value"] = value;
    return j;
}

unsigned ceil_log2(const Int& n) {
    unsigned bits = 0;
    Int v = n - 1;
    while (v > 0) { v >>= 1; bits++; }
    return bits;
}

json build_ladder(const bounds::FieldInvariants& field, const bounds::ConstantsProfile& profile,
                  const LadderInputs& in, json& warnings) {
    json entries = json::array();
    const Real nE = in.conductor_norm;
    const unsigned aE = in.additive_count;

    Real lenstra = bounds::class_number_bound(field.abs_disc);
    entries.push_back(ladder_entry("class-number-bound", "|disc_K|^(3/2)",
                                   json{{"abs_disc", field.abs_disc.str()}}, real_str(lenstra)));
    if (!bounds::class_number_consistent(field))
        warnings.push_back("field invariants violate the class-number bound h_K <= |disc_K|^(3/2)");

    Real chain = bounds::extension_disc_bound(2, nE, field);
    entries.push_back(ladder_entry("extension-disc-chain",
                                   "6d*(log|disc_K| + log(6*N*|disc_K|^4) + n_K*log d)",
                                   json{{"d", 2}, {"N", real_str(nE)}}, real_str(chain)));
    entries.push_back(ladder_entry("effective-chebotarev", "c*(log disc_L)^2",
                                   json{{"log_disc_L", real_str(chain)}},
                                   real_str(bounds::chebotarev_bound(chain, profile))));
    entries.push_back(ladder_entry("chebotarev-avoidance", "c*d^2*(log N + log|disc_K| + n_K*log d)^2",
                                   json{{"d", 2}, {"N", real_str(nE)}},
                                   real_str(bounds::avoidance_bound(2, nE, field, profile))));

    bounds::ReducibleBounds red = bounds::reducible_bounds(Real(in.p_reducible), nE, profile);
    entries.push_back(ladder_entry("reducible-product", "c*p^36*(log N_E + log p)^12",
                                   json{{"p", in.p_reducible}, {"N_E", real_str(nE)}},
                                   real_str(red.product)));
    for (int e : {3, 6}) {
        bounds::ConstantsProfile variant = profile;
        variant.reducible_single_exponent = e;
        bounds::ReducibleBounds rb = bounds::reducible_bounds(Real(in.p_reducible), nE, variant);
        std::string id = e == 3 ? "reducible-single-e3" : "reducible-single-e6";
        entries.push_back(ladder_entry(id.c_str(), "c*p^e*(log N_E + log p)",
                                       json{{"p", in.p_reducible}, {"N_E", real_str(nE)}, {"e", e}},
                                       real_str(rb.single)));
    }

    Int vspace = bounds::character_space_bound(aE, field);
    entries.push_back(ladder_entry("quadratic-character-space", "2^(a_E + 2 n_K) * h_K",
                                   json{{"a_E", aE}}, vspace.str()));

    unsigned dmax = aE + 2 * field.degree + ceil_log2(field.class_number);
    for (unsigned d = 1; d <= dmax; d++) {
        entries.push_back(ladder_entry(
            "v-exceptional-product", "(c*2^d*p^3*(log N_E + log p))^(2 - 2^(1-d))",
            json{{"d", d}, {"p", in.p_normalizer}, {"N_E", real_str(nE)}},
            real_str(bounds::v_exceptional_bound(d, Real(in.p_normalizer), nE, profile))));
    }

    bounds::BootstrapResult boot = bounds::bootstrap_check(in.boot_set, in.boot_A, in.boot_b, profile, field);
    {
        json inputs;
        inputs["set_size"] = in.boot_set.size();
        inputs["A"] = real_str(in.boot_A);
        inputs["b"] = real_str(in.boot_b);
        json j;
        j["id"] = "bootstrap";
        j["formula"] = "p <= c*(log A + log p + 1) for the smallest acceptable prime outside S";
        j["inputs"] = inputs;
        j["p"] = boot.p;
        j["theta_p"] = real_str(boot.theta_p);
        j["log_product"] = real_str(boot.log_product);
        j["rhs"] = real_str(boot.rhs);
        j["chain_applicable"] = boot.chain_applicable;
        j["chain_holds"] = boot.chain_holds;
        j["implied_bound"] = real_str(boot.implied_bound);
        j["holds"] = boot.holds;
        entries.push_back(j);
    }

    bounds::EffectiveBounds eff = bounds::effective_bounds(nE, aE, profile);
    entries.push_back(ladder_entry("effective-single", "c*log N_E*(log log N_E)^3",
                                   json{{"N_E", real_str(nE)}}, real_str(eff.single)));
    entries.push_back(ladder_entry("effective-product",
                                   "c*4^a_E*(log N_E)^14*(a_E + log log N_E)^6*(log log N_E)^36",
                                   json{{"N_E", real_str(nE)}, {"a_E", aE}}, real_str(eff.product)));
    entries.push_back(ladder_entry("effective-product-simplified", "c*4^a_E*(log N_E)^21",
                                   json{{"N_E", real_str(nE)}, {"a_E", aE}},
                                   real_str(eff.product_simplified)));

    bounds::CmExceptionBounds cm = bounds::cm_exception_bounds(field, profile.c_cm_exception);
    entries.push_back(ladder_entry("cm-exception-single", "exp(c^n_K*(R_K*n_K^r_K + h_K*log|disc_K|))",
                                   json::object(), real_str(cm.single)));
    entries.push_back(ladder_entry("cm-exception-product",
                                   "exp(c^n_K*(R_K*n_K^r_K + h_K^2*(log|disc_K|)^2))", json::object(),
                                   real_str(cm.product)));
    return entries;
}

std::uint64_t smallest_acceptable_outside(const std::vector<std::uint64_t>& excluded,
                                          const std::set<std::uint64_t>& ramified) {
    std::uint64_t p = 53;
    while (std::find(excluded.begin(), excluded.end(), p) != excluded.end() ||
           !gl2::is_acceptable(p, ramified))
        p = arith::next_prime(p);
    return p;
}

}  // namespace

json run_analysis(const AnalysisConfig& config) {
    if (config.trace_bound < 100) throw input_error(kModule, "trace bound must be >= 100");
    bounds::validate(config.field);
    bounds::validate(config.profile);

    Curve curve = build_curve(config.curve.ainvs[0], config.curve.ainvs[1], config.curve.ainvs[2],
                              config.curve.ainvs[3], config.curve.ainvs[4]);
    ReductionProfile reduction = reduction_profile(curve, config.curve.overrides);
    Real nE(reduction.conductor_norm);

    bounds::EffectiveBounds eff = bounds::effective_bounds(nE, reduction.additive_count, config.profile);
    std::uint64_t scan_bound;
    if (config.scan_bound) {
        scan_bound = *config.scan_bound;
        if (scan_bound < 37) throw input_error(kModule, "scan bound must be >= 37");
    } else {
        Real ceiling = ceil(eff.single);
        scan_bound = 100;
        if (ceiling > 100 && ceiling < Real(1000000))
            scan_bound = static_cast<std::uint64_t>(ceiling.convert_to<double>());
    }

    EngineOptions engine;
    engine.jobs = config.jobs;
    engine.cache_dir = config.cache_dir;
    TraceTable table = build_trace_table(curve, config.trace_bound, engine);

    classifier::ImageReport image =
        classifier::classify_range(table, scan_bound, reduction.additive_primes(), config.trace_bound);

    std::vector<std::uint64_t> candidates = image.candidate_ells();
    std::vector<std::uint64_t> reducible_candidates, normalizer_candidates;
    for (const auto& e : image.entries) {
        if (e.verdict == classifier::Verdict::ReducibleCandidate) reducible_candidates.push_back(e.ell);
        if (e.verdict == classifier::Verdict::NormalizerCandidate) normalizer_candidates.push_back(e.ell);
    }

    LadderInputs in;
    in.conductor_norm = nE;
    in.additive_count = reduction.additive_count;
    in.p_reducible = smallest_acceptable_outside(reducible_candidates, config.field.ramified_primes);
    in.p_normalizer = smallest_acceptable_outside(normalizer_candidates, config.field.ramified_primes);
    for (std::uint64_t q : arith::primes_up_to(52)) in.boot_set.insert(q);
    for (std::uint64_t ell : candidates) in.boot_set.insert(ell);
    in.boot_A = bounds::reducible_bounds(Real(in.p_reducible), nE, config.profile).product;
    in.boot_b = 36;

    json warnings = json::array();
    json ladder = build_ladder(config.field, config.profile, in, warnings);

    json report;
    report["tool"] = tool_header("analyze");
    report["curve"] = curve_json(curve, config.curve.label);
    report["reduction"] = reduction_json(reduction);
    {
        json t;
        t["bound"] = config.trace_bound;
        t["records"] = table.records.size();
        t["bad_primes"] = table.bad_primes;
        report["trace"] = t;
    }
    report["image"] = image_json(image);
    {
        json b;
        b["field"] = field_invariants_json(config.field);
        b["profile"] = constants_profile_json(config.profile);
        b["conductor_norm"] = reduction.conductor_norm.str();
        b["additive_count"] = reduction.additive_count;
        b["p_reducible"] = in.p_reducible;
        b["p_normalizer"] = in.p_normalizer;
        b["entries"] = ladder;
        b["warnings"] = warnings;
        b["disclaimer"] = kDisclaimer;
        report["bounds"] = b;
    }
    {
        json c;
        c["single_bound"] = real_str(eff.single);
        json per = json::array();
        for (std::uint64_t ell : candidates) {
            json e;
            e["ell"] = ell;
            e["within_single"] = Real(ell) <= eff.single;
            per.push_back(e);
        }
        c["per_candidate"] = per;
        c["candidate_product"] = image.candidate_product().str();
        c["product_bound"] = real_str(eff.product);
        c["within_product"] = Real(image.candidate_product()) <= eff.product;
        c["product_bound_simplified"] = real_str(eff.product_simplified);
        c["within_product_simplified"] = Real(image.candidate_product()) <= eff.product_simplified;
        report["comparisons"] = c;
    }
    return report;
}

namespace {

json certificate_json(const CongruenceCert& cert) {
    json j;
    j["p"] = cert.p;
    j["mode"] = compare_mode_name(cert.mode);
    j["difference"] = cert.difference.str();
    j["abs_bound"] = cert.abs_bound.str();
    j["within_bound"] = cert.within_bound;
    j["clause"] = cert.clause;
    return j;
}

json compare_one(const TraceTable& ta, const TraceTable& tb, CompareMode mode, std::uint64_t bound) {
    Distinguishing d = compare_traces(ta, tb, mode, bound);
    json j;
    j["found"] = d.prime.has_value();
    j["compared"] = d.compared;
    if (d.prime) {
        j["prime"] = *d.prime;
        j["abs_difference"] = d.abs_difference.str();
        FrobeniusRecord ra{*d.prime, *ta.trace_at(*d.prime)};
        FrobeniusRecord rb{*d.prime, *tb.trace_at(*d.prime)};
        j["certificate"] = certificate_json(congruence_certificate(ra, rb, mode));
    }
    return j;
}

}  // namespace

json run_compare(const CurveSpec& a, const CurveSpec& b, std::optional<CompareMode> mode,
                 std::uint64_t bound, unsigned jobs, const std::optional<std::string>& cache_dir) {
    Curve ca = build_curve(a.ainvs[0], a.ainvs[1], a.ainvs[2], a.ainvs[3], a.ainvs[4]);
    Curve cb = build_curve(b.ainvs[0], b.ainvs[1], b.ainvs[2], b.ainvs[3], b.ainvs[4]);
    EngineOptions engine;
    engine.jobs = jobs;
    engine.cache_dir = cache_dir;
    TraceTable ta = build_trace_table(ca, bound, engine);
    TraceTable tb = build_trace_table(cb, bound, engine);

    json report;
    report["tool"] = tool_header("compare");
    report["curve_a"] = curve_json(ca, a.label);
    report["curve_b"] = curve_json(cb, b.label);
    report["bound"] = bound;
    json results;
    if (!mode || *mode == CompareMode::Plain)
        results["plain"] = compare_one(ta, tb, CompareMode::Plain, bound);
    if (!mode || *mode == CompareMode::Adams12)
        results["adams12"] = compare_one(ta, tb, CompareMode::Adams12, bound);
    report["results"] = results;
    return report;
}

json run_bounds(const BoundsRequest& req) {
    bounds::validate(req.field);
    bounds::validate(req.profile);
    if (req.conductor_norm < 1) throw input_error(kModule, "conductor norm must be >= 1");
    LadderInputs in;
    in.conductor_norm = req.conductor_norm;
    in.additive_count = req.additive_count;
    in.p_reducible = req.unexceptional_prime;
    in.p_normalizer = req.unexceptional_prime;
    for (std::uint64_t q : arith::primes_up_to(req.unexceptional_prime - 1)) in.boot_set.insert(q);
    in.boot_A = 1;
    for (std::uint64_t q : in.boot_set) in.boot_A *= Real(q);
    in.boot_b = 0;

    json warnings = json::array();
    json ladder = build_ladder(req.field, req.profile, in, warnings);
    json report;
    report["tool"] = tool_header("bounds");
    report["field"] = field_invariants_json(req.field);
    report["profile"] = constants_profile_json(req.profile);
    if (!req.profile_supplied)
        warnings.push_back("no constants profile supplied; every constant defaults to 1");
    report["conductor_norm"] = real_str(req.conductor_norm);
    report["additive_count"] = req.additive_count;
    report["unexceptional_prime"] = req.unexceptional_prime;
    report["entries"] = ladder;
    report["warnings"] = warnings;
    report["disclaimer"] = kDisclaimer;
    return report;
}

json run_cheblab(const cheblab::SweepOptions& opts) {
    std::vector<cheblab::LeastPrimeDatum> data = cheblab::quadratic_sweep(opts);
    json report;
    report["tool"] = tool_header("cheb-lab");
    report["quadratic_range"] = opts.quadratic_range;
    report["sieve_bound"] = opts.sieve_bound;
    json rows = json::array();
    for (const auto& d : data) {
        json r;
        r["D"] = d.field_id;
        r["target"] = d.target;
        r["least_prime"] = d.least_prime;
        r["ratio"] = fmt_double(d.ratio);
        rows.push_back(r);
    }
    report["data"] = rows;
    cheblab::EnvelopeReport env = cheblab::envelope_report(data);
    json summary;
    summary["count"] = env.count;
    summary["max_ratio"] = fmt_double(env.max_ratio);
    summary["argmax_D"] = env.argmax_field;
    summary["p50"] = fmt_double(env.p50);
    summary["p90"] = fmt_double(env.p90);
    summary["p99"] = fmt_double(env.p99);
    summary["note"] = "empirical ratios against the squared-log-discriminant envelope; not a proof";
    report["summary"] = summary;
    return report;
}

std::string cheblab_csv(const std::vector<cheblab::LeastPrimeDatum>& data) {
    std::string out = "D,target,least_prime,ratio\n";
    for (const auto& d : data) {
        out += std::to_string(d.field_id) + "," + std::to_string(d.target) + "," +
               std::to_string(d.least_prime) + "," + fmt_double(d.ratio) + "\n";
    }
    return out;
}

json run_gl2_selftest(const std::vector<std::uint32_t>& ells) {
    json checks = json::array();
    bool all_pass = true;
    auto record = [&](const std::string& name, std::uint32_t ell, bool pass, const std::string& detail) {
        json c;
        c["name"] = name;
        c["ell"] = ell;
        c["pass"] = pass;
        if (!detail.empty()) c["detail"] = detail;
        checks.push_back(c);
        all_pass = all_pass && pass;
    };

    using gl2::FamilyKind;
    const std::vector<std::pair<FamilyKind, gl2::SubgroupTag>> set_expect = {
        {FamilyKind::Borel, gl2::SubgroupTag::Reducible},
        {FamilyKind::CartanSplit, gl2::SubgroupTag::Reducible},
        {FamilyKind::CartanNonsplit, gl2::SubgroupTag::Reducible},
        {FamilyKind::NormalizerSplit, gl2::SubgroupTag::NormalizerNotCartan},
        {FamilyKind::NormalizerNonsplit, gl2::SubgroupTag::NormalizerNotCartan},
        {FamilyKind::SpecialLinear, gl2::SubgroupTag::ContainsSL2},
        {FamilyKind::FullLinear, gl2::SubgroupTag::ContainsSL2},
        {FamilyKind::IrregularA4, gl2::SubgroupTag::Irregular},
        {FamilyKind::IrregularS4, gl2::SubgroupTag::Irregular},
        {FamilyKind::IrregularA5, gl2::SubgroupTag::Irregular},
    };

    for (std::uint32_t ell : ells) {
        for (const auto& [kind, expected] : set_expect) {
            if ((kind == FamilyKind::IrregularA4 || kind == FamilyKind::IrregularS4 ||
                 kind == FamilyKind::IrregularA5) &&
                !gl2::irregular_embeds(kind, ell))
                continue;
            gl2::SubgroupFamily fam = gl2::make_family(kind, ell);
            std::vector<gl2::Mat2> elements = gl2::closure(fam.generators);
            bool size_ok = Int(static_cast<std::uint64_t>(elements.size())) == fam.order;
            gl2::SubgroupClass cls = gl2::classify_subgroup(elements, ell);
            bool tag_ok = cls.tag == expected;
            record(std::string("set-classify-") + gl2::family_name(kind), ell, size_ok && tag_ok,
                   std::string(gl2::subgroup_tag_name(cls.tag)) + " (" + cls.evidence + ")");

            // stream verdict against the family's expected classifier outcome
            std::vector<std::pair<std::uint32_t, std::uint32_t>> stream;
            stream.reserve(elements.size());
            for (const auto& m : elements) stream.emplace_back(m.trace(), m.det());
            bool normalizer_family =
                kind == FamilyKind::NormalizerSplit || kind == FamilyKind::NormalizerNonsplit;
            TraceTable table = classifier::table_from_elements(
                ell, stream, normalizer_family ? std::optional<std::int64_t>(-4) : std::nullopt);
            std::vector<Int> additive;
            if (normalizer_family) additive.push_back(2);
            classifier::ClassifiedEntry entry = classifier::classify(table, ell, additive);
            std::string got = classifier::verdict_name(entry.verdict);
            std::string want = gl2::expected_stream_verdict(kind, ell);
            record(std::string("stream-classify-") + gl2::family_name(kind), ell, got == want,
                   "got " + got + ", want " + want);
        }
    }

    json report;
    report["tool"] = tool_header("gl2-selftest");
    report["checks"] = checks;
    report["all_pass"] = all_pass;
    return report;
}

namespace {

void render_analyze(const json& r, std::ostringstream& os) {
    os << "curve " << r["curve"]["ainvs"].dump();
    if (r["curve"].contains("label")) os << "  label=" << r["curve"]["label"].get<std::string>();
    os << "\n  disc=" << r["curve"]["disc"].get<std::string>()
       << "  c4=" << r["curve"]["c4"].get<std::string>() << "  c6=" << r["curve"]["c6"].get<std::string>()
       << "\n  conductor_norm=" << r["reduction"]["conductor_norm"].get<std::string>()
       << "  additive_count=" << r["reduction"]["additive_count"] << "\n\nreduction:\n";
    for (const auto& e : r["reduction"]["entries"])
        os << "  p=" << e["p"].get<std::string>() << "  " << e["kind"].get<std::string>() << "  f="
           << e["conductor_exponent"] << "  (" << e["source"].get<std::string>() << ")\n";
    os << "\nimage report (trace bound " << r["image"]["trace_bound"] << ", scan bound "
       << r["image"]["scan_bound"] << "):\n";
    for (const auto& e : r["image"]["entries"]) {
        os << "  ell=" << e["ell"] << "  " << e["verdict"].get<std::string>();
        if (!e["character"].is_null()) os << "  character D=" << e["character"];
        if (e["small_ell_heuristic"].get<bool>()) os << "  [small-ell heuristic]";
        os << "\n";
    }
    os << "candidates: " << r["image"]["candidates"].dump() << "  product "
       << r["image"]["candidate_product"].get<std::string>() << "\n\nactive profile: "
       << r["bounds"]["profile"].dump() << "\n\nbound ladder:\n";
    for (const auto& e : r["bounds"]["entries"]) {
        os << "  " << e["id"].get<std::string>();
        if (e.contains("value")) os << " = " << e["value"].get<std::string>();
        if (e.contains("holds")) os << "  holds=" << (e["holds"].get<bool>() ? "yes" : "no");
        os << "\n";
    }
    for (const auto& w : r["bounds"]["warnings"]) os << "  warning: " << w.get<std::string>() << "\n";
    const json& c = r["comparisons"];
    os << "\ncomparisons (profile-dependent):\n  single bound " << c["single_bound"].get<std::string>()
       << "\n";
    for (const auto& e : c["per_candidate"])
        os << "    ell=" << e["ell"] << " within=" << (e["within_single"].get<bool>() ? "yes" : "no")
           << "\n";
    os << "  product " << c["candidate_product"].get<std::string>() << " vs "
       << c["product_bound"].get<std::string>()
       << " within=" << (c["within_product"].get<bool>() ? "yes" : "no") << "\n  disclaimer: "
       << r["bounds"]["disclaimer"].get<std::string>() << "\n";
}

void render_bounds(const json& r, std::ostringstream& os) {
    os << "field: " << r["field"].dump() << "\nprofile: " << r["profile"].dump()
       << "\nconductor_norm=" << r["conductor_norm"].get<std::string>()
       << " additive_count=" << r["additive_count"] << " p=" << r["unexceptional_prime"] << "\n\n";
    for (const auto& e : r["entries"]) {
        os << e["id"].get<std::string>() << "  [" << e["formula"].get<std::string>() << "]";
        if (e.contains("value")) os << "\n  = " << e["value"].get<std::string>();
        if (e.contains("implied_bound"))
            os << "\n  p=" << e["p"] << " theta_p=" << e["theta_p"].get<std::string>()
               << " implied=" << e["implied_bound"].get<std::string>()
               << " holds=" << (e["holds"].get<bool>() ? "yes" : "no");
        os << "\n";
    }
    for (const auto& w : r["warnings"]) os << "warning: " << w.get<std::string>() << "\n";
    os << "disclaimer: " << r["disclaimer"].get<std::string>() << "\n";
}

void render_compare(const json& r, std::ostringstream& os) {
    os << "curve A " << r["curve_a"]["ainvs"].dump() << "\ncurve B " << r["curve_b"]["ainvs"].dump()
       << "\nbound " << r["bound"] << "\n";
    for (const auto& [mode, res] : r["results"].items()) {
        os << mode << ": ";
        if (res["found"].get<bool>()) {
            os << "distinguishing prime " << res["prime"] << " |diff|="
               << res["abs_difference"].get<std::string>() << "\n  certificate: "
               << res["certificate"]["clause"].get<std::string>() << "\n";
        } else {
            os << "not found (" << res["compared"] << " primes compared)\n";
        }
    }
}

void render_cheblab(const json& r, std::ostringstream& os) {
    const json& s = r["summary"];
    os << "quadratic sweep |D| <= " << r["quadratic_range"] << ", sieve bound " << r["sieve_bound"]
       << ", " << s["count"] << " data points\n"
       << "max ratio " << s["max_ratio"].get<std::string>() << " at D=" << s["argmax_D"]
       << "; p50 " << s["p50"].get<std::string>() << ", p90 " << s["p90"].get<std::string>() << ", p99 "
       << s["p99"].get<std::string>() << "\n" << s["note"].get<std::string>() << "\n";
}

void render_selftest(const json& r, std::ostringstream& os) {
    for (const auto& c : r["checks"]) {
        os << (c["pass"].get<bool>() ? "PASS" : "FAIL") << "  " << c["name"].get<std::string>()
           << " ell=" << c["ell"];
        if (c.contains("detail")) os << "  " << c["detail"].get<std::string>();
        os << "\n";
    }
    os << (r["all_pass"].get<bool>() ? "all checks passed" : "SELF-TEST FAILURES PRESENT") << "\n";
}

}  // namespace

std::string render_text(const json& report) {
    std::ostringstream os;
    std::string kind = report.at("tool").at("report").get<std::string>();
    if (kind == "analyze") render_analyze(report, os);
    else if (kind == "bounds") render_bounds(report, os);
    else if (kind == "compare") render_compare(report, os);
    else if (kind == "cheb-lab") render_cheblab(report, os);
    else if (kind == "gl2-selftest") render_selftest(report, os);
    else os << report.dump(2) << "\n";
    return os.str();
}

}  // namespace excprime::analysis
