#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace excprime {

// Exact integer arithmetic everywhere a formula is integral; no silent
// overflow anywhere in the curve/trace layer.
using Int = boost::multiprecision::cpp_int;

// High-precision reals for the bound calculus (50 significant digits, so
// bound comparisons never flip due to rounding).
using Real = boost::multiprecision::cpp_bin_float_50;

// Floor residue in [0, m) for m > 0.
inline Int mod_floor(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

inline std::string to_string(const Int& v) { return v.str(); }

// Fixed 30-significant-digit decimal rendering; used for all report output
// so repeated runs are byte-identical.
std::string real_str(const Real& v);

}  // namespace excprime
