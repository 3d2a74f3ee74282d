#include "excprime/frobenius.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include "excprime/arith.hpp"
#include "excprime/errors.hpp"

namespace excprime {

namespace {
constexpr const char* kModule = "frobenius-engine";
}

FrobPoly make_frob_poly(Int trace, Int norm) {
    if (norm <= 0) throw input_error(kModule, "Frobenius polynomial needs a positive norm");
    if (trace * trace > 4 * norm)
        throw input_error(kModule, "Frobenius polynomial has positive discriminant (a^2 > 4q)");
    return FrobPoly{std::move(trace), std::move(norm)};
}

FrobPoly adams12(const FrobPoly& f) {
    const Int& a = f.trace;
    const Int& q = f.norm;
    Int s_prev = 2, s = a;
    for (int k = 2; k <= 12; k++) {
        Int next = a * s - q * s_prev;
        s_prev = std::move(s);
        s = std::move(next);
    }
    Int q12 = pow(q, 12);
    if (s * s > 4 * q12) throw internal_error(kModule, "Adams-12 trace exceeds 2 q^6");
    return FrobPoly{std::move(s), std::move(q12)};
}

std::optional<std::int64_t> TraceTable::trace_at(std::uint64_t p) const {
    auto it = std::lower_bound(records.begin(), records.end(), p,
                               [](const FrobeniusRecord& r, std::uint64_t v) { return r.p < v; });
    if (it == records.end() || it->p != p) return std::nullopt;
    return it->a_p;
}

bool has_good_reduction(const Curve& e, std::uint64_t p) {
    if (e.disc % Int(p) != 0) return true;
    if (p < 5) return false;
    Curve m = minimal_model_at(e, Int(p));
    return m.disc % Int(p) != 0;
}

namespace {

std::uint64_t reduce_mod(const Int& a, std::uint64_t p) {
    return static_cast<std::uint64_t>(mod_floor(a, Int(p)));
}

std::int64_t count_points_mod2(const Curve& e) {
    std::uint64_t a1 = reduce_mod(e.a1, 2), a2 = reduce_mod(e.a2, 2), a3 = reduce_mod(e.a3, 2),
                  a4 = reduce_mod(e.a4, 2), a6 = reduce_mod(e.a6, 2);
    unsigned count = 1;  // point at infinity
    for (std::uint64_t x = 0; x < 2; x++)
        for (std::uint64_t y = 0; y < 2; y++) {
            std::uint64_t lhs = (y * y + a1 * x * y + a3 * y) % 2;
            std::uint64_t rhs = (x * x * x + a2 * x * x + a4 * x + a6) % 2;
            if (lhs == rhs) count++;
        }
    return 3 - static_cast<std::int64_t>(count);
}

}  // namespace

FrobeniusRecord count_points(const Curve& e, std::uint64_t p, std::uint64_t prime_limit) {
    if (!arith::is_prime(p)) throw input_error(kModule, "count_points: " + std::to_string(p) + " is not prime");
    if (p > prime_limit)
        throw input_error(kModule, "prime " + std::to_string(p) + " exceeds the point-counting limit " +
                                       std::to_string(prime_limit));
    if (!has_good_reduction(e, p))
        throw input_error(kModule, "bad reduction at p=" + std::to_string(p));
    if (p == 2) return FrobeniusRecord{2, count_points_mod2(e)};

    const Curve model = (p >= 5 && e.disc % Int(p) == 0) ? minimal_model_at(e, Int(p)) : e;
    const std::uint64_t a1 = reduce_mod(model.a1, p), a2 = reduce_mod(model.a2, p),
                        a3 = reduce_mod(model.a3, p), a4 = reduce_mod(model.a4, p),
                        a6 = reduce_mod(model.a6, p);

    // chi[v] = quadratic character of v; number of y with
    // y^2 + (a1 x + a3) y = f(x) equals 1 + chi((a1 x + a3)^2 + 4 f(x)).
    std::vector<std::int8_t> chi(p, -1);
    chi[0] = 0;
    for (std::uint64_t s = 1; s <= (p - 1) / 2; s++) chi[(s * s) % p] = 1;

    std::int64_t sum = 0;
    for (std::uint64_t x = 0; x < p; x++) {
        std::uint64_t f = ((((x + a2) % p) * x + a4) % p * x + a6) % p;
        std::uint64_t h = (a1 * x + a3) % p;
        std::uint64_t g = (h * h + 4 * f) % p;
        sum += chi[g];
    }
    std::int64_t a_p = -sum;
    if (a_p * a_p > 4 * static_cast<std::int64_t>(p))
        throw internal_error(kModule, "Weil bound violated at p=" + std::to_string(p));
    return FrobeniusRecord{p, a_p};
}

namespace {

std::filesystem::path cache_path(const std::string& dir, const Curve& e) {
    std::string name = e.id();
    std::replace(name.begin(), name.end(), ',', '_');
    return std::filesystem::path(dir) / (name + ".csv");
}

// Append-only CSV "p,a_p" under a "# curve:..." header. Any malformed line
// invalidates the whole file.
std::vector<FrobeniusRecord> load_cache(const std::filesystem::path& path, const Curve& e) {
    std::vector<FrobeniusRecord> out;
    std::ifstream in(path);
    if (!in) return out;
    std::string line;
    if (!std::getline(in, line) || line != "# curve:" + e.id())
        throw input_error(kModule, "corrupt trace cache (bad header): " + path.string());
    std::uint64_t last_p = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t comma = line.find(',');
        std::uint64_t p = 0;
        std::int64_t a = 0;
        try {
            if (comma == std::string::npos) throw std::invalid_argument("no comma");
            std::size_t used = 0;
            p = std::stoull(line.substr(0, comma), &used);
            if (used != comma) throw std::invalid_argument("junk");
            std::string rest = line.substr(comma + 1);
            a = std::stoll(rest, &used);
            if (used != rest.size()) throw std::invalid_argument("junk");
        } catch (const std::exception&) {
            throw input_error(kModule, "corrupt trace cache line \"" + line + "\" in " + path.string());
        }
        if (p <= last_p || !arith::is_prime(p) || Int(a) * a > 4 * Int(p))
            throw input_error(kModule, "corrupt trace cache (bad record p=" + std::to_string(p) +
                                           ") in " + path.string());
        out.push_back({p, a});
        last_p = p;
    }
    return out;
}

void append_cache(const std::filesystem::path& path, const Curve& e,
                  const std::vector<FrobeniusRecord>& fresh, bool file_is_new) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::app);
    if (!out) throw input_error(kModule, "cannot open trace cache " + path.string());
    if (file_is_new) out << "# curve:" << e.id() << "\n";
    for (const auto& r : fresh) out << r.p << "," << r.a_p << "\n";
}

}  // namespace

TraceTable build_trace_table(const Curve& e, std::uint64_t bound, const EngineOptions& opts) {
    TraceTable table;
    table.curve_id = e.id();

    std::vector<FrobeniusRecord> cached;
    std::filesystem::path path;
    if (opts.cache_dir) {
        path = cache_path(*opts.cache_dir, e);
        cached = load_cache(path, e);
    }
    std::uint64_t cached_up_to = cached.empty() ? 1 : cached.back().p;

    std::vector<std::uint64_t> todo;
    for (std::uint64_t p : arith::primes_up_to(bound)) {
        if (!has_good_reduction(e, p)) {
            table.bad_primes.insert(p);
            continue;
        }
        if (p <= cached_up_to) continue;
        todo.push_back(p);
    }

    std::vector<FrobeniusRecord> fresh(todo.size());
    unsigned jobs = std::max(1u, opts.jobs);
    if (jobs == 1 || todo.size() < 2) {
        for (std::size_t i = 0; i < todo.size(); i++) fresh[i] = count_points(e, todo[i], opts.prime_limit);
    } else {
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> errors(jobs);
        for (unsigned w = 0; w < jobs; w++) {
            workers.emplace_back([&, w]() {
                try {
                    for (std::size_t i = w; i < todo.size(); i += jobs)
                        fresh[i] = count_points(e, todo[i], opts.prime_limit);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : workers) t.join();
        for (auto& err : errors)
            if (err) std::rethrow_exception(err);
    }

    for (const auto& r : cached)
        if (r.p <= bound) table.records.push_back(r);
    table.records.insert(table.records.end(), fresh.begin(), fresh.end());

    if (opts.cache_dir && !fresh.empty()) append_cache(path, e, fresh, cached.empty());
    return table;
}

Distinguishing compare_traces(const TraceTable& a, const TraceTable& b, CompareMode mode,
                              std::uint64_t bound) {
    Distinguishing result;
    result.abs_difference = 0;
    for (std::uint64_t p : arith::primes_up_to(bound)) {
        if (a.bad_primes.count(p) || b.bad_primes.count(p)) continue;
        auto ta = a.trace_at(p), tb = b.trace_at(p);
        if (!ta || !tb)
            throw input_error(kModule, "trace tables do not cover common good prime " + std::to_string(p));
        result.compared++;
        Int diff;
        if (mode == CompareMode::Plain) {
            diff = Int(*ta) - Int(*tb);
        } else {
            diff = adams12(make_frob_poly(Int(*ta), Int(p))).trace -
                   adams12(make_frob_poly(Int(*tb), Int(p))).trace;
        }
        if (diff != 0) {
            result.prime = p;
            result.abs_difference = abs(diff);
            return result;
        }
    }
    return result;
}

CongruenceCert congruence_certificate(const FrobeniusRecord& a, const FrobeniusRecord& b,
                                      CompareMode mode) {
    if (a.p != b.p)
        throw input_error(kModule, "congruence certificate needs records at the same prime");
    CongruenceCert cert;
    cert.p = a.p;
    cert.mode = mode;
    Int p(a.p);
    if (mode == CompareMode::Plain) {
        cert.difference = Int(a.a_p) - Int(b.a_p);
        cert.abs_bound = 0;  // exact form: difference^2 <= 16 p
        cert.within_bound = cert.difference * cert.difference <= 16 * p;
        cert.clause = "any prime l dividing the trace difference with 16*p < l^2 forces the "
                      "difference to 0; hence l <= |A| <= 4*sqrt(p) whenever A != 0";
    } else {
        Int sa = adams12(make_frob_poly(Int(a.a_p), p)).trace;
        Int sb = adams12(make_frob_poly(Int(b.a_p), p)).trace;
        cert.difference = sa - sb;
        cert.abs_bound = 4 * pow(p, 6);
        cert.within_bound = abs(cert.difference) <= cert.abs_bound;
        cert.clause = "any R dividing the Adams-12 trace difference with 4*p^6 < R forces the "
                      "difference to 0; hence the reducible product is <= |B| whenever B != 0";
    }
    return cert;
}

const char* compare_mode_name(CompareMode m) {
    return m == CompareMode::Plain ? "plain" : "adams12";
}

}  // namespace excprime
