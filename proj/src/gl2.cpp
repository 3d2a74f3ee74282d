#include "excprime/gl2.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_set>

#include "excprime/arith.hpp"
#include "excprime/errors.hpp"

namespace excprime::gl2 {

namespace {

constexpr const char* kModule = "gl2-lab";

std::uint64_t pack(const Mat2& m) {
    return static_cast<std::uint64_t>(m.a) | (static_cast<std::uint64_t>(m.b) << 16) |
           (static_cast<std::uint64_t>(m.c) << 32) | (static_cast<std::uint64_t>(m.d) << 48);
}

using ElementSet = std::unordered_set<std::uint64_t>;

ElementSet index_elements(const std::vector<Mat2>& elements) {
    ElementSet set;
    set.reserve(elements.size() * 2);
    for (const auto& m : elements) set.insert(pack(m));
    return set;
}

std::uint32_t neg(std::uint32_t v, std::uint32_t ell) { return v == 0 ? 0 : ell - v; }

}  // namespace

std::uint32_t Mat2::det() const {
    std::uint64_t pos = static_cast<std::uint64_t>(a) * d % ell;
    std::uint64_t negv = static_cast<std::uint64_t>(b) * c % ell;
    return static_cast<std::uint32_t>((pos + ell - negv) % ell);
}

std::uint32_t Mat2::trace() const { return (a + d) % ell; }

bool Mat2::is_scalar() const { return b == 0 && c == 0 && a == d; }

Mat2 mat(std::uint32_t ell, std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
    if (ell < 2) throw input_error(kModule, "modulus must be a prime >= 2");
    Mat2 m{ell, static_cast<std::uint32_t>(a % ell), static_cast<std::uint32_t>(b % ell),
           static_cast<std::uint32_t>(c % ell), static_cast<std::uint32_t>(d % ell)};
    if (m.det() == 0) throw input_error(kModule, "matrix is singular mod " + std::to_string(ell));
    return m;
}

Mat2 mul(const Mat2& x, const Mat2& y) {
    const std::uint64_t ell = x.ell;
    return Mat2{x.ell,
                static_cast<std::uint32_t>((static_cast<std::uint64_t>(x.a) * y.a + static_cast<std::uint64_t>(x.b) * y.c) % ell),
                static_cast<std::uint32_t>((static_cast<std::uint64_t>(x.a) * y.b + static_cast<std::uint64_t>(x.b) * y.d) % ell),
                static_cast<std::uint32_t>((static_cast<std::uint64_t>(x.c) * y.a + static_cast<std::uint64_t>(x.d) * y.c) % ell),
                static_cast<std::uint32_t>((static_cast<std::uint64_t>(x.c) * y.b + static_cast<std::uint64_t>(x.d) * y.d) % ell)};
}

Mat2 identity(std::uint32_t ell) { return Mat2{ell, 1, 0, 0, 1}; }

namespace {

Mat2 inverse(const Mat2& m) {
    std::uint64_t inv_det = arith::inv_mod(m.det(), m.ell);
    auto r = [&](std::uint64_t v) { return static_cast<std::uint32_t>(v % m.ell); };
    return Mat2{m.ell, r(m.d * inv_det), r(static_cast<std::uint64_t>(neg(m.b, m.ell)) * inv_det),
                r(static_cast<std::uint64_t>(neg(m.c, m.ell)) * inv_det), r(m.a * inv_det)};
}

}  // namespace

bool is_acceptable(std::uint64_t p, const std::set<std::uint64_t>& ramified_primes) {
    return p >= 53 && ramified_primes.count(p) == 0;
}

const char* family_name(FamilyKind k) {
    switch (k) {
        case FamilyKind::Borel: return "borel";
        case FamilyKind::CartanSplit: return "cartan-split";
        case FamilyKind::CartanNonsplit: return "cartan-nonsplit";
        case FamilyKind::NormalizerSplit: return "normalizer-split";
        case FamilyKind::NormalizerNonsplit: return "normalizer-nonsplit";
        case FamilyKind::SpecialLinear: return "special-linear";
        case FamilyKind::FullLinear: return "full-linear";
        case FamilyKind::IrregularA4: return "irregular-a4";
        case FamilyKind::IrregularS4: return "irregular-s4";
        case FamilyKind::IrregularA5: return "irregular-a5";
    }
    return "?";
}

std::vector<Mat2> closure(const std::vector<Mat2>& generators, std::size_t cap) {
    if (generators.empty()) throw input_error(kModule, "closure of an empty generating set");
    const std::uint32_t ell = generators.front().ell;
    for (const auto& g : generators)
        if (g.ell != ell) throw input_error(kModule, "mixed moduli in generating set");

    std::vector<Mat2> elements{identity(ell)};
    ElementSet seen{pack(identity(ell))};
    std::deque<Mat2> queue{identity(ell)};
    while (!queue.empty()) {
        Mat2 m = queue.front();
        queue.pop_front();
        for (const auto& g : generators) {
            Mat2 next = mul(m, g);
            if (seen.insert(pack(next)).second) {
                if (elements.size() + 1 > cap)
                    throw input_error(kModule, "closure exceeds the size cap " + std::to_string(cap));
                elements.push_back(next);
                queue.push_back(next);
            }
        }
    }
    return elements;
}

// --- subgroup families -------------------------------------------------------

namespace {

std::uint32_t pick_eps(std::uint32_t ell) {
    return static_cast<std::uint32_t>(arith::smallest_nonresidue(ell));
}

// Quaternion basis i, j with i^2 = j^2 = -1, ij = -ji, from a point on
// x^2 + y^2 = -1. Seeds the lifted A4/S4/A5 families.
std::pair<Mat2, Mat2> quaternion_basis(std::uint32_t ell) {
    for (std::uint32_t x = 0; x < ell; x++) {
        std::uint64_t target = (ell - 1 + static_cast<std::uint64_t>(ell) * ell -
                                static_cast<std::uint64_t>(x) * x % ell) % ell;
        for (std::uint32_t y = 0; y < ell; y++) {
            if (static_cast<std::uint64_t>(y) * y % ell == target) {
                Mat2 qi = mat(ell, x, y, y, neg(x, ell));
                Mat2 qj = mat(ell, 0, 1, ell - 1, 0);
                return {qi, qj};
            }
        }
    }
    throw internal_error(kModule, "no solution of x^2 + y^2 = -1 mod " + std::to_string(ell));
}

Mat2 add_scaled(std::uint32_t ell, std::initializer_list<std::pair<std::uint64_t, const Mat2*>> terms,
                std::uint64_t scale) {
    std::uint64_t a = 0, b = 0, c = 0, d = 0;
    for (const auto& [coef, m] : terms) {
        a += coef % ell * m->a;
        b += coef % ell * m->b;
        c += coef % ell * m->c;
        d += coef % ell * m->d;
    }
    return mat(ell, a % ell * scale, b % ell * scale, c % ell * scale, d % ell * scale);
}

std::optional<std::uint32_t> sqrt_mod(std::uint32_t n, std::uint32_t ell) {
    n %= ell;
    for (std::uint32_t s = 0; s <= ell / 2; s++)
        if (static_cast<std::uint64_t>(s) * s % ell == n) return s;
    return std::nullopt;
}

}  // namespace

bool irregular_embeds(FamilyKind kind, std::uint32_t ell) {
    switch (kind) {
        case FamilyKind::IrregularA4:
        case FamilyKind::IrregularS4: return ell >= 5;
        case FamilyKind::IrregularA5: return ell != 5 && (ell % 5 == 1 || ell % 5 == 4);
        default: return false;
    }
}

SubgroupFamily cartan(std::uint32_t ell, bool split, bool normalizer, std::optional<std::uint32_t> eps) {
    if (ell < 3) throw input_error(kModule, "Cartan constructions need an odd prime");
    SubgroupFamily f;
    f.ell = ell;
    if (split) {
        f.kind = normalizer ? FamilyKind::NormalizerSplit : FamilyKind::CartanSplit;
        std::uint32_t g = 0;
        for (std::uint32_t c = 2; c < ell; c++)
            if (arith::order_mod(c, ell) == ell - 1) { g = c; break; }
        f.generators = {mat(ell, g, 0, 0, 1), mat(ell, 1, 0, 0, g)};
        f.order = Int(ell - 1) * (ell - 1);
        if (normalizer) {
            f.generators.push_back(mat(ell, 0, 1, 1, 0));
            f.order *= 2;
        }
    } else {
        f.kind = normalizer ? FamilyKind::NormalizerNonsplit : FamilyKind::CartanNonsplit;
        f.eps = eps.value_or(pick_eps(ell));
        if (arith::legendre(f.eps, ell) != -1)
            throw input_error(kModule, "eps must be a quadratic nonresidue mod " + std::to_string(ell));
        // [[x, eps y], [y, x]] for (x, y) != (0, 0) is cyclic of order
        // ell^2 - 1; find a generator by brute force.
        Mat2 gen = identity(ell);
        bool found = false;
        for (std::uint32_t x = 1; x < ell && !found; x++)
            for (std::uint32_t y = 1; y < ell && !found; y++) {
                Mat2 m = mat(ell, x, static_cast<std::uint64_t>(f.eps) * y, y, x);
                Mat2 t = m;
                std::uint32_t ord = 1;
                while (!(t.a == 1 && t.b == 0 && t.c == 0 && t.d == 1)) {
                    t = mul(t, m);
                    ord++;
                    if (ord > static_cast<std::uint32_t>(ell) * ell) break;
                }
                if (ord == static_cast<std::uint32_t>(ell) * ell - 1) {
                    gen = m;
                    found = true;
                }
            }
        if (!found) throw internal_error(kModule, "no nonsplit Cartan generator found");
        f.generators = {gen};
        f.order = Int(ell) * ell - 1;
        if (normalizer) {
            f.generators.push_back(mat(ell, 1, 0, 0, ell - 1));
            f.order *= 2;
        }
    }
    return f;
}

SubgroupFamily make_family(FamilyKind kind, std::uint32_t ell) {
    switch (kind) {
        case FamilyKind::CartanSplit: return cartan(ell, true, false);
        case FamilyKind::CartanNonsplit: return cartan(ell, false, false);
        case FamilyKind::NormalizerSplit: return cartan(ell, true, true);
        case FamilyKind::NormalizerNonsplit: return cartan(ell, false, true);
        default: break;
    }
    SubgroupFamily f;
    f.kind = kind;
    f.ell = ell;
    switch (kind) {
        case FamilyKind::Borel: {
            std::uint32_t g = 0;
            for (std::uint32_t c = 2; c < ell; c++)
                if (arith::order_mod(c, ell) == ell - 1) { g = c; break; }
            f.generators = {mat(ell, g, 0, 0, 1), mat(ell, 1, 0, 0, g), mat(ell, 1, 1, 0, 1)};
            f.order = Int(ell - 1) * (ell - 1) * ell;
            break;
        }
        case FamilyKind::SpecialLinear:
            f.generators = {mat(ell, 1, 1, 0, 1), mat(ell, 1, 0, 1, 1)};
            f.order = Int(ell) * (Int(ell) * ell - 1);
            break;
        case FamilyKind::FullLinear: {
            std::uint32_t g = 0;
            for (std::uint32_t c = 2; c < ell; c++)
                if (arith::order_mod(c, ell) == ell - 1) { g = c; break; }
            f.generators = {mat(ell, 1, 1, 0, 1), mat(ell, 1, 0, 1, 1), mat(ell, g, 0, 0, 1)};
            f.order = (Int(ell) * ell - 1) * (Int(ell) * ell - ell);
            break;
        }
        case FamilyKind::IrregularA4:
        case FamilyKind::IrregularS4:
        case FamilyKind::IrregularA5: {
            if (!irregular_embeds(kind, ell))
                throw input_error(kModule, std::string(family_name(kind)) +
                                               " does not embed properly at ell=" + std::to_string(ell));
            auto [qi, qj] = quaternion_basis(ell);
            Mat2 qk = mul(qi, qj);
            Mat2 minus_one = mat(ell, ell - 1, 0, 0, ell - 1);
            std::uint64_t inv2 = arith::inv_mod(2, ell);
            Mat2 omega = add_scaled(ell, {{1, &minus_one}, {1, &qi}, {1, &qj}, {1, &qk}}, inv2);
            f.generators = {qi, qj, omega};
            if (kind == FamilyKind::IrregularS4) {
                Mat2 one = identity(ell);
                f.generators.push_back(add_scaled(ell, {{1, &one}, {1, &qi}}, 1));
            } else if (kind == FamilyKind::IrregularA5) {
                auto root5 = sqrt_mod(5 % ell, ell);
                if (!root5) throw internal_error(kModule, "sqrt(5) must exist when A5 embeds");
                std::uint64_t phi = (1 + *root5) % ell * inv2 % ell;
                std::uint64_t phi_inv = (phi + ell - 1) % ell;  // phi - 1 = 1/phi
                f.generators.push_back(add_scaled(ell, {{1, &qi}, {phi_inv, &qj}, {phi, &qk}}, inv2));
            }
            f.order = Int(static_cast<std::uint64_t>(closure(f.generators).size()));
            break;
        }
        default: throw internal_error(kModule, "unhandled family kind");
    }
    return f;
}

bool SubgroupFamily::contains(const Mat2& m) const {
    if (m.ell != ell) return false;
    auto eq = [&](std::uint32_t x, std::uint32_t y) { return x % ell == y % ell; };
    switch (kind) {
        case FamilyKind::Borel: return m.c == 0;
        case FamilyKind::CartanSplit: return m.b == 0 && m.c == 0;
        case FamilyKind::NormalizerSplit:
            return (m.b == 0 && m.c == 0) || (m.a == 0 && m.d == 0);
        case FamilyKind::CartanNonsplit:
            return eq(m.a, m.d) && eq(m.b, static_cast<std::uint32_t>(static_cast<std::uint64_t>(eps) * m.c % ell));
        case FamilyKind::NormalizerNonsplit:
            return (eq(m.a, m.d) && eq(m.b, static_cast<std::uint32_t>(static_cast<std::uint64_t>(eps) * m.c % ell))) ||
                   (eq(m.a, neg(m.d, ell)) &&
                    eq(m.b, neg(static_cast<std::uint32_t>(static_cast<std::uint64_t>(eps) * m.c % ell), ell)));
        case FamilyKind::SpecialLinear: return m.det() == 1;
        case FamilyKind::FullLinear: return true;
        default: {
            if (closure_cache_.empty()) closure_cache_ = closure(generators);
            return index_elements(closure_cache_).count(pack(m)) > 0;
        }
    }
}

Mat2 SubgroupFamily::sample(std::mt19937_64& rng) const {
    auto unit = [&]() { return 1 + rng() % (ell - 1); };
    auto any = [&]() { return rng() % ell; };
    switch (kind) {
        case FamilyKind::Borel: return mat(ell, unit(), any(), 0, unit());
        case FamilyKind::CartanSplit: return mat(ell, unit(), 0, 0, unit());
        case FamilyKind::NormalizerSplit: {
            Mat2 c = mat(ell, unit(), 0, 0, unit());
            if (rng() & 1) return mul(mat(ell, 0, 1, 1, 0), c);
            return c;
        }
        case FamilyKind::CartanNonsplit:
        case FamilyKind::NormalizerNonsplit: {
            std::uint64_t x = 0, y = 0;
            while (x == 0 && y == 0) { x = any(); y = any(); }
            Mat2 c = mat(ell, x, static_cast<std::uint64_t>(eps) * y, y, x);
            if (kind == FamilyKind::NormalizerNonsplit && (rng() & 1))
                return mul(mat(ell, 1, 0, 0, ell - 1), c);
            return c;
        }
        case FamilyKind::SpecialLinear: {
            // uniform: nonzero first column, then the determinant-1 line
            std::uint64_t a = 0, c = 0;
            while (a == 0 && c == 0) { a = any(); c = any(); }
            std::uint64_t b0, d0;
            if (a != 0) {
                b0 = 0;
                d0 = arith::inv_mod(a, ell);
            } else {
                d0 = 0;
                b0 = ell - arith::inv_mod(c, ell);
            }
            std::uint64_t t = any();
            return mat(ell, a, (b0 + t * a) % ell, c, (d0 + t * c) % ell);
        }
        case FamilyKind::FullLinear: {
            while (true) {
                std::uint64_t a = any(), b = any(), c = any(), d = any();
                if ((a * d) % ell != (b * c) % ell) return mat(ell, a, b, c, d);
            }
        }
        default: {
            if (closure_cache_.empty()) closure_cache_ = closure(generators);
            return closure_cache_[rng() % closure_cache_.size()];
        }
    }
}

// --- classification ----------------------------------------------------------

namespace {

// Arithmetic in F_{ell^2} = F_ell[s]/(s^2 - eps).
struct Fq2Ctx {
    std::uint32_t ell;
    std::uint32_t eps;
};

struct Fq2 {
    std::uint32_t x, y;
    bool operator==(const Fq2&) const = default;
};

Fq2 fq2_mul(const Fq2Ctx& k, const Fq2& u, const Fq2& v) {
    std::uint64_t ell = k.ell;
    std::uint64_t x = (static_cast<std::uint64_t>(u.x) * v.x + static_cast<std::uint64_t>(k.eps) * u.y % ell * v.y) % ell;
    std::uint64_t y = (static_cast<std::uint64_t>(u.x) * v.y + static_cast<std::uint64_t>(u.y) * v.x) % ell;
    return Fq2{static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)};
}

bool fq2_zero(const Fq2& u) { return u.x == 0 && u.y == 0; }

Fq2 fq2_inv(const Fq2Ctx& k, const Fq2& u) {
    // (x + y s)^-1 = (x - y s) / (x^2 - eps y^2)
    std::uint64_t ell = k.ell;
    std::uint64_t n = (static_cast<std::uint64_t>(u.x) * u.x % ell + ell -
                       static_cast<std::uint64_t>(k.eps) * u.y % ell * u.y % ell) %
                      ell;
    std::uint64_t inv_n = arith::inv_mod(n, ell);
    return Fq2{static_cast<std::uint32_t>(static_cast<std::uint64_t>(u.x) * inv_n % ell),
               static_cast<std::uint32_t>(static_cast<std::uint64_t>(neg(u.y, k.ell)) * inv_n % ell)};
}

// Square root of a base-field element inside F_{ell^2}.
Fq2 fq2_sqrt_of_base(const Fq2Ctx& k, std::uint32_t n) {
    n %= k.ell;
    if (auto s = sqrt_mod(n, k.ell)) return Fq2{*s, 0};
    std::uint64_t scaled = static_cast<std::uint64_t>(n) * arith::inv_mod(k.eps, k.ell) % k.ell;
    auto s = sqrt_mod(static_cast<std::uint32_t>(scaled), k.ell);
    if (!s) throw internal_error(kModule, "element has no square root in F_{ell^2}");
    return Fq2{0, *s};
}

// Projective line over F_{ell^2}, normalized to (1 : t) or (0 : 1).
struct Line {
    Fq2 v1, v2;
    bool operator==(const Line&) const = default;
};

Line normalize_line(const Fq2Ctx& k, Fq2 v1, Fq2 v2) {
    if (!fq2_zero(v1)) {
        Fq2 inv = fq2_inv(k, v1);
        return Line{Fq2{1, 0}, fq2_mul(k, v2, inv)};
    }
    if (fq2_zero(v2)) throw internal_error(kModule, "zero vector is not a line");
    return Line{Fq2{0, 0}, Fq2{1, 0}};
}

Line apply(const Fq2Ctx& k, const Mat2& m, const Line& l) {
    Fq2 ma{m.a, 0}, mb{m.b, 0}, mc{m.c, 0}, md{m.d, 0};
    Fq2 w1, w2;
    Fq2 t1 = fq2_mul(k, ma, l.v1), t2 = fq2_mul(k, mb, l.v2);
    w1 = Fq2{static_cast<std::uint32_t>((t1.x + t2.x) % k.ell), static_cast<std::uint32_t>((t1.y + t2.y) % k.ell)};
    t1 = fq2_mul(k, mc, l.v1);
    t2 = fq2_mul(k, md, l.v2);
    w2 = Fq2{static_cast<std::uint32_t>((t1.x + t2.x) % k.ell), static_cast<std::uint32_t>((t1.y + t2.y) % k.ell)};
    return normalize_line(k, w1, w2);
}

// Eigenlines of a matrix over F_{ell^2}: one line when the characteristic
// polynomial has a double root, two otherwise.
std::vector<Line> eigenlines(const Fq2Ctx& k, const Mat2& m) {
    std::uint64_t ell = k.ell;
    std::uint32_t t = m.trace(), q = m.det();
    std::uint32_t delta = static_cast<std::uint32_t>(
        ((static_cast<std::uint64_t>(t) * t % ell) + 4 * ell - 4 * static_cast<std::uint64_t>(q) % ell) % ell);
    Fq2 sq = fq2_sqrt_of_base(k, delta);
    std::uint64_t inv2 = arith::inv_mod(2, ell);
    std::vector<Line> lines;
    for (int sign : {+1, -1}) {
        Fq2 root{static_cast<std::uint32_t>((t + (sign > 0 ? sq.x : neg(sq.x, k.ell))) % ell),
                 sign > 0 ? sq.y : neg(sq.y, k.ell)};
        root = fq2_mul(k, root, Fq2{static_cast<std::uint32_t>(inv2), 0});
        // eigenvector of [[a,b],[c,d]] for eigenvalue r: (b, r - a) or (r - d, c)
        Fq2 v1{m.b, 0};
        Fq2 v2{static_cast<std::uint32_t>((root.x + k.ell - m.a % k.ell) % k.ell), root.y};
        if (fq2_zero(v1) && fq2_zero(v2)) {
            v1 = Fq2{static_cast<std::uint32_t>((root.x + k.ell - m.d % k.ell) % k.ell), root.y};
            v2 = Fq2{m.c, 0};
        }
        if (fq2_zero(v1) && fq2_zero(v2)) continue;  // scalar matrix: every line works
        Line l = normalize_line(k, v1, v2);
        if (std::find(lines.begin(), lines.end(), l) == lines.end()) lines.push_back(l);
        if (fq2_zero(sq)) break;  // double root: single eigenline
    }
    return lines;
}

bool semisimple_nonscalar(const Mat2& m) {
    if (m.is_scalar()) return false;
    std::uint64_t ell = m.ell;
    std::uint64_t t = m.trace(), q = m.det();
    return (t * t % ell) != (4 * q % ell);
}

std::string line_str(const Line& l) {
    auto f = [](const Fq2& v) {
        return "(" + std::to_string(v.x) + "+" + std::to_string(v.y) + "s)";
    };
    return "[" + f(l.v1) + ":" + f(l.v2) + "]";
}

void check_partially_closed(const std::vector<Mat2>& elements, const ElementSet& set, std::uint32_t ell) {
    if (elements.empty()) throw input_error(kModule, "cannot classify an empty set");
    if (!set.count(pack(identity(ell)))) throw input_error(kModule, "set is not closed (missing identity)");
    for (const auto& m : elements)
        if (!set.count(pack(inverse(m)))) throw input_error(kModule, "set is not closed (missing an inverse)");
    std::size_t stride = std::max<std::size_t>(1, elements.size() / 64);
    for (std::size_t i = 0; i < elements.size(); i += stride)
        for (std::size_t j = 0; j < elements.size(); j += stride)
            if (!set.count(pack(mul(elements[i], elements[j]))))
                throw input_error(kModule, "set is not closed under multiplication");
}

}  // namespace

unsigned projective_order(const Mat2& m) {
    Mat2 x = m;
    unsigned k = 1;
    while (!x.is_scalar()) {
        x = mul(x, m);
        k++;
        if (k > static_cast<unsigned>(m.ell) * (m.ell + 1))
            throw internal_error(kModule, "projective order diverged");
    }
    return k;
}

unsigned max_projective_order(const std::vector<Mat2>& elements, std::uint32_t ell) {
    ElementSet set = index_elements(elements);
    check_partially_closed(elements, set, ell);
    unsigned best = 0;
    for (const auto& m : elements) best = std::max(best, projective_order(m));
    return best;
}

SubgroupClass classify_subgroup(const std::vector<Mat2>& elements, std::uint32_t ell) {
    ElementSet set = index_elements(elements);
    check_partially_closed(elements, set, ell);
    Fq2Ctx k{ell, pick_eps(ell)};

    const Mat2* first_nonscalar = nullptr;
    for (const auto& m : elements)
        if (!m.is_scalar()) { first_nonscalar = &m; break; }
    if (!first_nonscalar)
        return SubgroupClass{SubgroupTag::Reducible, IrregularPattern::None, "scalar group; every line is fixed"};

    // Common eigenline over F_{ell^2}: candidates are the eigenlines of the
    // first non-scalar element.
    for (const Line& cand : eigenlines(k, *first_nonscalar)) {
        bool fixed_by_all = true;
        for (const auto& m : elements)
            if (apply(k, m, cand) != cand) { fixed_by_all = false; break; }
        if (fixed_by_all)
            return SubgroupClass{SubgroupTag::Reducible, IrregularPattern::None,
                                 "common eigenline " + line_str(cand)};
    }

    // Preserved unordered line-pair. If the group lies in a Cartan
    // normalizer, the pair shows up as the eigenpair of a Cartan-part
    // element, of the square of a swap element, or of (first * g); such an
    // element sits near the front of any closure enumeration, so candidate
    // generation is capped.
    auto line_key = [](const Line& l) {
        return static_cast<std::uint64_t>(l.v1.x) | (static_cast<std::uint64_t>(l.v1.y) << 16) |
               (static_cast<std::uint64_t>(l.v2.x) << 32) | (static_cast<std::uint64_t>(l.v2.y) << 48);
    };
    std::set<std::pair<std::uint64_t, std::uint64_t>> tried;
    auto try_pair = [&](const Mat2& src) -> std::optional<SubgroupClass> {
        if (!semisimple_nonscalar(src)) return std::nullopt;
        auto lines = eigenlines(k, src);
        if (lines.size() != 2) return std::nullopt;
        std::pair<Line, Line> cand{lines[0], lines[1]};
        auto key = std::minmax(line_key(cand.first), line_key(cand.second));
        if (!tried.insert({key.first, key.second}).second) return std::nullopt;
        bool swapped = false;
        for (const auto& m : elements) {
            Line i1 = apply(k, m, cand.first);
            Line i2 = apply(k, m, cand.second);
            if (i1 == cand.first && i2 == cand.second) continue;
            if (i1 == cand.second && i2 == cand.first) { swapped = true; continue; }
            return std::nullopt;
        }
        return SubgroupClass{swapped ? SubgroupTag::NormalizerNotCartan : SubgroupTag::CartanOnly,
                             IrregularPattern::None,
                             "preserved line pair " + line_str(cand.first) + "," + line_str(cand.second) +
                                 (swapped ? " with a swapping element" : "")};
    };
    std::size_t scan = std::min<std::size_t>(elements.size(), 200);
    for (std::size_t i = 0; i < scan; i++) {
        const Mat2& m = elements[i];
        if (auto r = try_pair(m)) return *r;
        if (auto r = try_pair(mul(m, m))) return *r;
        if (auto r = try_pair(mul(*first_nonscalar, m))) return *r;
    }

    if (set.count(pack(mat(ell, 1, 1, 0, 1))) && set.count(pack(mat(ell, 1, 0, 1, 1))))
        return SubgroupClass{SubgroupTag::ContainsSL2, IrregularPattern::None,
                             "contains the standard SL2 generators"};

    // Projective image size and order statistics.
    std::size_t scalars = 0;
    for (const auto& m : elements)
        if (m.is_scalar()) scalars++;
    std::size_t proj_size = elements.size() / scalars;
    std::set<unsigned> orders;
    for (const auto& m : elements) orders.insert(projective_order(m));
    std::string stats = "projective size " + std::to_string(proj_size) + ", orders {";
    for (unsigned o : orders) stats += std::to_string(o) + ",";
    stats += "}";
    auto within = [&](std::initializer_list<unsigned> allowed) {
        return std::all_of(orders.begin(), orders.end(), [&](unsigned o) {
            return std::find(allowed.begin(), allowed.end(), o) != allowed.end();
        });
    };
    if (proj_size == 12 && within({1, 2, 3}))
        return SubgroupClass{SubgroupTag::Irregular, IrregularPattern::A4, stats};
    if (proj_size == 24 && within({1, 2, 3, 4}) && orders.count(4))
        return SubgroupClass{SubgroupTag::Irregular, IrregularPattern::S4, stats};
    if (proj_size == 60 && within({1, 2, 3, 5}) && orders.count(5))
        return SubgroupClass{SubgroupTag::Irregular, IrregularPattern::A5, stats};

    if (ell >= 5)
        throw internal_error(kModule, "closed subgroup escaped every classification case (" + stats + ")");
    return SubgroupClass{SubgroupTag::Other, IrregularPattern::None, stats};
}

TraceOrderClass projective_order_of_trace(std::uint64_t t, std::uint64_t q, std::uint32_t ell) {
    t %= ell;
    q %= ell;
    if (q == 0) throw input_error(kModule, "projective_order_of_trace: determinant is zero mod ell");
    std::uint64_t u = t * t % ell * arith::inv_mod(q, ell) % ell;
    if (u == 4) return TraceOrderClass::OneOrEll;
    if (u == 0) return TraceOrderClass::Two;
    if (u == 1) return TraceOrderClass::Three;
    if (u == 2) return TraceOrderClass::Four;
    if ((u * u % ell + 3 * ell - 3 * u % ell + 1) % ell == 0) return TraceOrderClass::Five;
    return TraceOrderClass::AboveFive;
}

const char* subgroup_tag_name(SubgroupTag t) {
    switch (t) {
        case SubgroupTag::Reducible: return "reducible";
        case SubgroupTag::NormalizerNotCartan: return "normalizer-not-cartan";
        case SubgroupTag::ContainsSL2: return "contains-sl2";
        case SubgroupTag::Irregular: return "irregular";
        case SubgroupTag::CartanOnly: return "cartan-only";
        case SubgroupTag::Other: return "other";
    }
    return "?";
}

const char* irregular_pattern_name(IrregularPattern p) {
    switch (p) {
        case IrregularPattern::None: return "none";
        case IrregularPattern::A4: return "a4";
        case IrregularPattern::S4: return "s4";
        case IrregularPattern::A5: return "a5";
    }
    return "?";
}

const char* trace_order_class_name(TraceOrderClass c) {
    switch (c) {
        case TraceOrderClass::OneOrEll: return "1-or-ell";
        case TraceOrderClass::Two: return "2";
        case TraceOrderClass::Three: return "3";
        case TraceOrderClass::Four: return "4";
        case TraceOrderClass::Five: return "5";
        case TraceOrderClass::AboveFive: return ">5-or-ell";
    }
    return "?";
}

std::string expected_stream_verdict(FamilyKind kind, std::uint32_t ell) {
    auto sq = [&](std::int64_t n) { return arith::kronecker(n, ell) == 1; };
    switch (kind) {
        case FamilyKind::Borel:
        case FamilyKind::CartanSplit:
            return "reducible-candidate";
        case FamilyKind::CartanNonsplit:
            // nonsplit Cartan traces carry inert-or-zero discriminants plus
            // large projective orders: no candidate rule fires
            return "undetermined";
        case FamilyKind::NormalizerSplit:
        case FamilyKind::NormalizerNonsplit:
            return "normalizer-candidate";
        case FamilyKind::FullLinear:
            return "surjective";
        case FamilyKind::SpecialLinear:
            // PSL2(F_ell) has all projective orders <= 5 exactly for ell <= 7
            return ell <= 7 ? "irregular-candidate" : "undetermined";
        case FamilyKind::IrregularA4:
            // every char poly splits mod ell iff -4 and -3 are both squares
            return (sq(-4) && sq(-3)) ? "reducible-candidate" : "irregular-candidate";
        case FamilyKind::IrregularS4:
            return (sq(-4) && sq(-3) && sq(-8)) ? "reducible-candidate" : "irregular-candidate";
        case FamilyKind::IrregularA5: {
            if (!(sq(-4) && sq(-3))) return "irregular-candidate";
            // order-5 classes have delta = q*(u - 4) for the two golden roots u
            auto r5 = sqrt_mod(5 % ell, ell);
            if (!r5) throw internal_error(kModule, "A5 family requires sqrt(5)");
            std::uint64_t inv2 = arith::inv_mod(2, ell);
            for (std::int64_t sign : {+1, -1}) {
                std::uint64_t u = (3 + ell + sign * static_cast<std::int64_t>(*r5)) % ell * inv2 % ell;
                std::uint64_t delta = (u + 4 * ell - 4) % ell;
                if (!sq(static_cast<std::int64_t>(delta))) return "irregular-candidate";
            }
            return "reducible-candidate";
        }
    }
    return "?";
}

}  // namespace excprime::gl2
