#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <string>

namespace l2inv {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

/// Natural log of an arbitrarily large positive integer, without
/// overflowing double range.
inline double log_int(const Int& x) {
    if (x <= 0) throw std::domain_error("log_int: nonpositive argument");
    const unsigned bits = boost::multiprecision::msb(x);
    if (bits <= 52) return std::log(x.convert_to<double>());
    const unsigned shift = bits - 52;
    const double top = Int(x >> shift).convert_to<double>();
    return std::log(top) + static_cast<double>(shift) * std::log(2.0);
}

inline double log_rat(const Rat& r) {
    return log_int(boost::multiprecision::numerator(r)) -
           log_int(boost::multiprecision::denominator(r));
}

/// Exact integer n-th root; returns the root and whether it was exact.
inline std::pair<Int, bool> exact_nth_root(const Int& x, unsigned n) {
    if (x < 0) throw std::domain_error("exact_nth_root: negative argument");
    if (n == 0) throw std::domain_error("exact_nth_root: zeroth root");
    if (x == 0 || x == 1 || n == 1) return {x, true};
    // Newton iteration on integers, seeded from the bit length.
    const unsigned bits = boost::multiprecision::msb(x) + 1;
    Int r = Int(1) << (bits / n + 1);
    while (true) {
        Int rn1 = boost::multiprecision::pow(r, n - 1);
        Int next = ((n - 1) * r + x / rn1) / n;
        if (next >= r) break;
        r = next;
    }
    bool exact = boost::multiprecision::pow(r, n) == x;
    return {r, exact};
}

}  // namespace l2inv
