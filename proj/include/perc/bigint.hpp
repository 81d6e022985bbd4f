#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace perc {

using BigInt = boost::multiprecision::cpp_int;

/// Natural log of a nonnegative big integer, -inf for zero.
/// Splits n = m * 2^e with m holding the top 64 bits so huge counts never
/// pass through a double overflow.
inline double log_bigint(const BigInt& n) {
    if (n <= 0) return -std::numeric_limits<double>::infinity();
    const std::size_t bits = boost::multiprecision::msb(n) + 1;
    if (bits <= 64) return std::log(static_cast<double>(n.convert_to<std::uint64_t>()));
    const std::size_t shift = bits - 64;
    const BigInt top = n >> shift;
    return std::log(static_cast<double>(top.convert_to<std::uint64_t>())) +
           static_cast<double>(shift) * std::log(2.0);
}

inline BigInt pow_int(std::int64_t base, unsigned exponent) {
    return boost::multiprecision::pow(BigInt(base), exponent);
}

inline std::string to_decimal(const BigInt& n) { return n.str(); }

} // namespace perc
