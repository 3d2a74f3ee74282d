#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "excprime/analysis.hpp"
#include "excprime/errors.hpp"

namespace {

using excprime::analysis::json;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw excprime::input_error("cli", "cannot read file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json_file(const std::string& path) {
    try {
        return json::parse(slurp(path));
    } catch (const nlohmann::json::parse_error& err) {
        throw excprime::input_error("cli", "JSON parse error in " + path + ": " + err.what());
    }
}

std::optional<std::string> cache_dir_from(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("EXC_CACHE_DIR"); env && *env) return std::string(env);
    return std::nullopt;
}

excprime::analysis::CurveSpec load_curve(const std::string& inline_spec, const std::string& file) {
    using namespace excprime::analysis;
    if (!inline_spec.empty() && !file.empty())
        throw excprime::input_error("cli", "give the curve inline or as a file, not both");
    if (!inline_spec.empty()) return parse_curve_spec(inline_spec);
    if (!file.empty()) {
        std::string text = slurp(file);
        return parse_curve_spec(text);
    }
    throw excprime::input_error("cli", "no curve given");
}

void emit(const json& report, const std::string& format) {
    if (format == "json")
        std::cout << report.dump(2) << "\n";
    else
        std::cout << excprime::analysis::render_text(report);
}

}  // namespace

int main(int argc, char** argv) {
    using namespace excprime;
    using namespace excprime::analysis;

    CLI::App app{"exceptional-prime scanner and bound calculator for elliptic curves over Q"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "full exceptional-prime analysis of one curve");
    std::string an_curve, an_curve_file, an_profile, an_invariants, an_format = "json", an_cache;
    std::uint64_t an_trace_bound = 10000;
    std::uint64_t an_scan_bound = 0;
    unsigned an_jobs = 1;
    analyze->add_option("--curve", an_curve, "curve as JSON or CSV \"a1,a2,a3,a4,a6\"");
    analyze->add_option("--curve-file", an_curve_file, "file with the curve JSON/CSV");
    analyze->add_option("--trace-bound", an_trace_bound, "prime bound for the trace table (>= 100)");
    analyze->add_option("--scan-bound", an_scan_bound, "largest ell to classify (>= 37)");
    analyze->add_option("--profile", an_profile, "constants-profile JSON file");
    analyze->add_option("--invariants", an_invariants, "field-invariants JSON file");
    analyze->add_option("--format", an_format, "json or text")->check(CLI::IsMember({"json", "text"}));
    analyze->add_option("--jobs", an_jobs, "parallel point-counting workers");
    analyze->add_option("--cache-dir", an_cache, "trace cache directory (default $EXC_CACHE_DIR)");

    // compare
    auto* compare = app.add_subcommand("compare", "distinguishing-prime certificate for two curves");
    std::string cm_a, cm_b, cm_mode = "both", cm_format = "json", cm_cache;
    std::uint64_t cm_bound = 1000;
    unsigned cm_jobs = 1;
    compare->add_option("--curve-a", cm_a, "first curve (JSON or CSV)")->required();
    compare->add_option("--curve-b", cm_b, "second curve (JSON or CSV)")->required();
    compare->add_option("--mode", cm_mode, "plain, adams12 or both")
        ->check(CLI::IsMember({"plain", "adams12", "both"}));
    compare->add_option("--bound", cm_bound, "prime bound for the comparison");
    compare->add_option("--format", cm_format, "json or text")->check(CLI::IsMember({"json", "text"}));
    compare->add_option("--jobs", cm_jobs, "parallel point-counting workers");
    compare->add_option("--cache-dir", cm_cache, "trace cache directory (default $EXC_CACHE_DIR)");

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "evaluate the bound ladder for given invariants");
    std::string bd_invariants, bd_profile, bd_format = "json", bd_norm = "37";
    unsigned bd_additive = 0;
    std::uint64_t bd_prime = 53;
    bounds_cmd->add_option("--invariants", bd_invariants, "field-invariants JSON file");
    bounds_cmd->add_option("--profile", bd_profile, "constants-profile JSON file");
    bounds_cmd->add_option("--conductor-norm", bd_norm, "conductor norm N_E");
    bounds_cmd->add_option("--additive-count", bd_additive, "number of additive primes a_E");
    bounds_cmd->add_option("--prime", bd_prime, "acceptable unexceptional prime p");
    bounds_cmd->add_option("--format", bd_format, "json or text")->check(CLI::IsMember({"json", "text"}));

    // cheb-lab
    auto* lab = app.add_subcommand("cheb-lab", "least-prime sweep over quadratic fields");
    std::uint64_t lab_range = 10000, lab_sieve = 100000;
    unsigned lab_jobs = 1;
    std::string lab_format = "csv";
    lab->add_option("--quadratic-range", lab_range, "sweep fundamental discriminants |D| <= range");
    lab->add_option("--sieve-bound", lab_sieve, "give up past this prime");
    lab->add_option("--jobs", lab_jobs, "parallel sweep workers");
    lab->add_option("--format", lab_format, "csv, json or text")
        ->check(CLI::IsMember({"csv", "json", "text"}));

    // gl2-selftest
    auto* selftest = app.add_subcommand("gl2-selftest", "subgroup-classification self checks");
    std::vector<std::uint32_t> st_ells{5, 7, 11, 13};
    std::string st_format = "text";
    selftest->add_option("--ell", st_ells, "moduli to test");
    selftest->add_option("--format", st_format, "json or text")->check(CLI::IsMember({"json", "text"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*analyze) {
            AnalysisConfig config;
            config.curve = load_curve(an_curve, an_curve_file);
            config.trace_bound = an_trace_bound;
            if (an_scan_bound != 0) config.scan_bound = an_scan_bound;
            if (!an_profile.empty()) config.profile = parse_constants_profile(parse_json_file(an_profile));
            if (!an_invariants.empty()) config.field = parse_field_invariants(parse_json_file(an_invariants));
            config.jobs = an_jobs;
            config.cache_dir = cache_dir_from(an_cache);
            emit(run_analysis(config), an_format);
        } else if (*compare) {
            std::optional<CompareMode> mode;
            if (cm_mode == "plain") mode = CompareMode::Plain;
            if (cm_mode == "adams12") mode = CompareMode::Adams12;
            emit(run_compare(parse_curve_spec(cm_a), parse_curve_spec(cm_b), mode, cm_bound, cm_jobs,
                             cache_dir_from(cm_cache)),
                 cm_format);
        } else if (*bounds_cmd) {
            BoundsRequest req;
            if (!bd_invariants.empty()) req.field = parse_field_invariants(parse_json_file(bd_invariants));
            if (!bd_profile.empty()) {
                req.profile = parse_constants_profile(parse_json_file(bd_profile));
                req.profile_supplied = true;
            }
            try {
                req.conductor_norm = Real(bd_norm);
            } catch (const std::exception&) {
                throw input_error("cli", "bad --conductor-norm value");
            }
            req.additive_count = bd_additive;
            req.unexceptional_prime = bd_prime;
            emit(run_bounds(req), bd_format);
        } else if (*lab) {
            cheblab::SweepOptions opts;
            opts.quadratic_range = lab_range;
            opts.sieve_bound = lab_sieve;
            opts.jobs = lab_jobs;
            if (lab_format == "csv") {
                std::cout << cheblab_csv(cheblab::quadratic_sweep(opts));
            } else {
                emit(run_cheblab(opts), lab_format);
            }
        } else if (*selftest) {
            json report = run_gl2_selftest(st_ells);
            emit(report, st_format);
            if (!report["all_pass"].get<bool>()) return 3;
        }
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const internal_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
