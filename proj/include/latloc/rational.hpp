#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace latloc {

using Rational = boost::rational<std::int64_t>;

// "a/b" with b omitted when it is 1.
std::string to_string(const Rational& r);

// Accepts "3", "3/4", "0.9", "1.25". Throws latloc::Error on malformed input.
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);

// Smallest integer n with n >= r.
std::int64_t ceil(const Rational& r);

}  // namespace latloc
