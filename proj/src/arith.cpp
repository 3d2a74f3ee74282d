#include "excprime/arith.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/integer.hpp>

#include "excprime/errors.hpp"

namespace excprime {

std::string real_str(const Real& v) {
    std::ostringstream os;
    os.precision(30);
    os << v;
    return os.str();
}

}  // namespace excprime

namespace excprime::arith {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = m > 1 ? 1 : 0;
    a %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        std::swap(t -= q * new_t, new_t);
        std::swap(r -= q * new_r, new_r);
    }
    if (r != 1) throw internal_error("arith", "inv_mod: arguments not coprime");
    if (t < 0) t += static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(t);
}

namespace {

bool miller_rabin_witness(std::uint64_t n, std::uint64_t a, std::uint64_t d, int s) {
    std::uint64_t x = pow_mod(a % n, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < s; i++) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return false;
    }
    return true;  // composite witness
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; s++; }
    // This base set is deterministic for all n < 3.3e24.
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull})
        if (miller_rabin_witness(n, a, d, s)) return false;
    return true;
}

std::uint64_t next_prime(std::uint64_t n) {
    std::uint64_t c = n + 1;
    if (c <= 2) return 2;
    if (c % 2 == 0) c++;
    while (!is_prime(c)) c += 2;
    return c;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    if (limit < 2) return out;
    std::vector<bool> sieve(limit + 1, true);
    sieve[0] = sieve[1] = false;
    for (std::uint64_t i = 2; i * i <= limit; i++)
        if (sieve[i])
            for (std::uint64_t j = i * i; j <= limit; j += i) sieve[j] = false;
    for (std::uint64_t i = 2; i <= limit; i++)
        if (sieve[i]) out.push_back(i);
    return out;
}

int legendre(std::uint64_t a, std::uint64_t p) {
    a %= p;
    if (a == 0) return 0;
    std::uint64_t r = pow_mod(a, (p - 1) / 2, p);
    return r == 1 ? 1 : -1;
}

int legendre(const Int& a, const Int& p) {
    Int r = mod_floor(a, p);
    if (r == 0) return 0;
    Int e = boost::multiprecision::powm(r, (p - 1) / 2, p);
    return e == 1 ? 1 : -1;
}

int kronecker(std::int64_t a, std::int64_t n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if (a % 2 == 0 && n % 2 == 0) return 0;
    int k = 1;
    // strip factors of 2 from n; each contributes (a/2) = (2/a) for odd a
    int v = 0;
    while (n % 2 == 0) { n /= 2; v++; }
    if (v % 2 == 1) {
        std::int64_t r = ((a % 8) + 8) % 8;
        if (r == 3 || r == 5) k = -k;
    }
    if (n < 0) {
        n = -n;
        if (a < 0) k = -k;
    }
    // now n odd, n > 0; standard quadratic-reciprocity loop
    a %= n;
    if (a < 0) a += n;
    while (a != 0) {
        v = 0;
        while (a % 2 == 0) { a /= 2; v++; }
        if (v % 2 == 1) {
            std::int64_t r = n % 8;
            if (r == 3 || r == 5) k = -k;
        }
        if (a % 4 == 3 && n % 4 == 3) k = -k;
        std::int64_t t = n % a;
        n = a;
        a = t;
    }
    return n == 1 ? k : 0;
}

std::uint64_t smallest_nonresidue(std::uint64_t p) {
    for (std::uint64_t a = 2; a < p; a++)
        if (legendre(a, p) == -1) return a;
    throw internal_error("arith", "no quadratic nonresidue found (p must be an odd prime)");
}

std::uint64_t order_mod(std::uint64_t a, std::uint64_t p) {
    a %= p;
    if (a == 0) throw input_error("arith", "order_mod: zero residue");
    std::uint64_t ord = 1, x = a;
    while (x != 1) {
        x = mul_mod(x, a, p);
        ord++;
        if (ord > p) throw internal_error("arith", "order_mod diverged (p not prime?)");
    }
    return ord;
}

bool generates_units(const std::set<std::uint64_t>& residues, std::uint64_t p) {
    if (p == 2) return true;
    // order of the generated subgroup = (p-1) / gcd over discrete logs;
    // p is small here, so a brute-force log table is fine.
    std::uint64_t g = 0;
    for (std::uint64_t c = 2; c < p; c++) {
        if (order_mod(c, p) == p - 1) { g = c; break; }
    }
    if (g == 0) throw internal_error("arith", "no primitive root (p not prime?)");
    std::vector<std::uint64_t> dlog(p, 0);
    std::uint64_t x = 1;
    for (std::uint64_t e = 0; e < p - 1; e++) {
        dlog[x] = e;
        x = mul_mod(x, g, p);
    }
    std::uint64_t d = p - 1;
    for (std::uint64_t r : residues) {
        r %= p;
        if (r == 0) continue;
        d = std::gcd(d, dlog[r]);
        if (d == 1) return true;
    }
    return d == 1;
}

namespace {

// Signed squarefree kernel via trial division; inputs are desk scale.
std::int64_t squarefree_kernel(std::int64_t n) {
    std::int64_t s = n < 0 ? -1 : 1;
    std::uint64_t m = static_cast<std::uint64_t>(n < 0 ? -n : n);
    for (std::uint64_t q = 2; q * q <= m; q++) {
        while (m % (q * q) == 0) m /= q * q;
    }
    return s * static_cast<std::int64_t>(m);
}

}  // namespace

bool is_fundamental_discriminant(std::int64_t d) {
    if (d == 0) return false;
    std::int64_t r = ((d % 4) + 4) % 4;
    if (r == 1) return squarefree_kernel(d) == d;
    if (r != 0) return false;
    std::int64_t m = d / 4;
    std::int64_t rm = ((m % 4) + 4) % 4;
    return (rm == 2 || rm == 3) && squarefree_kernel(m) == m;
}

std::int64_t fundamental_part(std::int64_t n) {
    if (n == 0) throw input_error("arith", "fundamental_part of zero");
    std::int64_t s = squarefree_kernel(n);
    std::int64_t r = ((s % 4) + 4) % 4;
    return r == 1 ? s : 4 * s;
}

std::int64_t character_product(std::int64_t d1, std::int64_t d2) {
    return fundamental_part(d1 * d2);
}

std::int64_t prime_discriminant(std::uint64_t p) {
    if (p == 2 || p % 2 == 0) throw input_error("arith", "prime_discriminant needs an odd prime");
    return p % 4 == 1 ? static_cast<std::int64_t>(p) : -static_cast<std::int64_t>(p);
}

}  // namespace excprime::arith
