#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace obtuse {

/// Arbitrary-precision nonnegative count (C(n,3) leaves 64 bits near n = 3e6).
using BigCount = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigCount binomial3(const BigCount& n) {
    if (n < 3) return 0;
    return n * (n - 1) * (n - 2) / 6;
}

inline BigCount binomial3(std::uint64_t n) { return binomial3(BigCount(n)); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const BigCount& v) { return v.str(); }

}  // namespace obtuse
