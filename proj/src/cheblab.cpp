#include "excprime/cheblab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "excprime/arith.hpp"
#include "excprime/errors.hpp"

namespace excprime::cheblab {

namespace {
constexpr const char* kModule = "chebotarev-lab";

double ratio_of(std::uint64_t p, double log_disc) { return static_cast<double>(p) / (log_disc * log_disc); }

// Shared ascending prime feed; the sweep hits this from several threads.
struct PrimeFeed {
    const std::vector<std::uint64_t>& table;
    std::size_t i = 0;
    std::uint64_t last = 0;

    static const std::vector<std::uint64_t>& small_table() {
        static const std::vector<std::uint64_t> t = arith::primes_up_to(100000);
        return t;
    }

    PrimeFeed() : table(small_table()) {}

    std::uint64_t next() {
        if (i < table.size()) return last = table[i++];
        return last = arith::next_prime(last);
    }
};

}  // namespace

LeastPrimeDatum least_prime_quadratic(std::int64_t d, int target, std::uint64_t sieve_bound) {
    if (!arith::is_fundamental_discriminant(d) || d == 1)
        throw input_error(kModule, "D must be a nontrivial fundamental discriminant");
    if (target != 1 && target != -1) throw input_error(kModule, "target must be +1 or -1");
    std::uint64_t abs_d = static_cast<std::uint64_t>(d < 0 ? -d : d);
    PrimeFeed feed;
    for (std::uint64_t p = feed.next(); p <= sieve_bound; p = feed.next()) {
        if (abs_d % p == 0) continue;
        if (arith::kronecker(d, static_cast<std::int64_t>(p)) == target) {
            LeastPrimeDatum out;
            out.kind = LeastPrimeDatum::Kind::Quadratic;
            out.field_id = d;
            out.target = target;
            out.least_prime = p;
            out.log_disc = std::log(static_cast<double>(abs_d));
            out.ratio = ratio_of(p, out.log_disc);
            return out;
        }
    }
    throw input_error(kModule, "no prime with the required symbol below the sieve bound");
}

LeastPrimeDatum least_prime_cyclotomic(std::uint64_t m, std::uint64_t r, std::uint64_t sieve_bound) {
    if (m < 3) throw input_error(kModule, "conductor must be >= 3");
    if (std::gcd(m, r % m) != 1) throw input_error(kModule, "residue must be coprime to the conductor");
    std::uint64_t phi = 0;
    for (std::uint64_t k = 1; k <= m; k++)
        if (std::gcd(m, k) == 1) phi++;
    PrimeFeed feed;
    for (std::uint64_t p = feed.next(); p <= sieve_bound; p = feed.next()) {
        if (p % m == r % m) {
            LeastPrimeDatum out;
            out.kind = LeastPrimeDatum::Kind::Cyclotomic;
            out.field_id = static_cast<std::int64_t>(m);
            out.target = static_cast<std::int64_t>(r % m);
            out.least_prime = p;
            out.log_disc = static_cast<double>(phi) * std::log(static_cast<double>(m));
            out.ratio = ratio_of(p, out.log_disc);
            return out;
        }
    }
    throw input_error(kModule, "no prime in the residue class below the sieve bound");
}

bool verify_datum(const LeastPrimeDatum& d) {
    if (d.kind == LeastPrimeDatum::Kind::Quadratic) {
        std::uint64_t abs_d = static_cast<std::uint64_t>(d.field_id < 0 ? -d.field_id : d.field_id);
        PrimeFeed feed;
        for (std::uint64_t p = feed.next(); p <= d.least_prime; p = feed.next()) {
            if (abs_d % p == 0) continue;
            bool hit = arith::kronecker(d.field_id, static_cast<std::int64_t>(p)) == d.target;
            if (p < d.least_prime && hit) return false;
            if (p == d.least_prime && !hit) return false;
        }
        return true;
    }
    std::uint64_t m = static_cast<std::uint64_t>(d.field_id);
    PrimeFeed feed;
    for (std::uint64_t p = feed.next(); p <= d.least_prime; p = feed.next()) {
        bool hit = p % m == static_cast<std::uint64_t>(d.target);
        if (p < d.least_prime && hit) return false;
        if (p == d.least_prime && !hit) return false;
    }
    return true;
}

EnvelopeReport envelope_report(const std::vector<LeastPrimeDatum>& data) {
    if (data.empty()) throw input_error(kModule, "no data to summarize");
    EnvelopeReport rep;
    rep.count = data.size();
    std::vector<double> ratios;
    ratios.reserve(data.size());
    for (const auto& d : data) {
        ratios.push_back(d.ratio);
        if (d.ratio > rep.max_ratio) {
            rep.max_ratio = d.ratio;
            rep.argmax_field = d.field_id;
        }
    }
    std::sort(ratios.begin(), ratios.end());
    auto percentile = [&](double q) {
        std::size_t idx = static_cast<std::size_t>(q * static_cast<double>(ratios.size() - 1));
        return ratios[idx];
    };
    rep.p50 = percentile(0.50);
    rep.p90 = percentile(0.90);
    rep.p99 = percentile(0.99);
    return rep;
}

std::vector<LeastPrimeDatum> quadratic_sweep(const SweepOptions& opts) {
    std::vector<std::int64_t> discs;
    for (std::uint64_t n = 3; n <= opts.quadratic_range; n++) {
        std::int64_t v = static_cast<std::int64_t>(n);
        if (arith::is_fundamental_discriminant(v)) discs.push_back(v);
        if (arith::is_fundamental_discriminant(-v)) discs.push_back(-v);
    }
    std::sort(discs.begin(), discs.end(), [](std::int64_t a, std::int64_t b) {
        std::int64_t aa = a < 0 ? -a : a, ab = b < 0 ? -b : b;
        return aa != ab ? aa < ab : a < b;
    });

    std::vector<LeastPrimeDatum> out(discs.size() * 2);
    auto work = [&](std::size_t i) {
        out[2 * i] = least_prime_quadratic(discs[i], -1, opts.sieve_bound);
        out[2 * i + 1] = least_prime_quadratic(discs[i], +1, opts.sieve_bound);
    };
    unsigned jobs = std::max(1u, opts.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < discs.size(); i++) work(i);
    } else {
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> errors(jobs);
        for (unsigned w = 0; w < jobs; w++) {
            workers.emplace_back([&, w]() {
                try {
                    for (std::size_t i = w; i < discs.size(); i += jobs) work(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : workers) t.join();
        for (auto& err : errors)
            if (err) std::rethrow_exception(err);
    }
    return out;
}

}  // namespace excprime::cheblab
