// Exact rational arithmetic used throughout the dominance and scoring logic.
// boost::multiprecision keeps everything exact; floating point only appears at
// the statistics/rendering boundary.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

namespace revpref {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Canonical text form: "3/4" for proper fractions, "12" when the denominator
// is 1. This is the form stored in JSON reports.
std::string rat_to_string(const Rat& r);

// Accepts "p/q", plain integers, and decimal literals such as "0.25" or
// "22.143" (parsed exactly as a fraction over a power of ten).
// Throws ValidationError on malformed input.
Rat rat_from_string(std::string_view text);

double rat_to_double(const Rat& r);

} // namespace revpref
