#pragma once

#include <gmpxx.h>

#include <string>

namespace kappa {

// All arithmetic is exact over Q. GMP canonicalizes on construction from
// integers; string input goes through parse_rat which validates and reduces.
using Rat = mpq_class;

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }

Rat parse_rat(const std::string& s);

// "p" when the denominator is 1, otherwise "p/q" in lowest terms.
std::string show_rat(const Rat& r);

// n! as an exact rational, for the 1/k! factors in curvature sums.
Rat factorial(int n);

}  // namespace kappa
